import random
import numpy as np
import pytest
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.csg.tessellation import cube


@pytest.fixture(params=['expansion', 'mpfloat'])
def kernel_name(request) -> str:
    return request.param


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20261018)


def make_cube(size=1.0, offset=(0.0, 0.0, 0.0)) -> TriMesh:
    mesh = cube(size)
    return mesh.transformed(translation(offset))


def translation(offset) -> np.ndarray:
    matrix = np.eye(4)
    matrix[:3, 3] = offset
    return matrix


@pytest.fixture
def unit_cube() -> TriMesh:
    return make_cube()


@pytest.fixture
def offset_cubes() -> list[TriMesh]:
    """ Unit cube and a copy shifted by 0.5 along every axis. """
    return [make_cube(), make_cube(offset=(0.5, 0.5, 0.5))]
