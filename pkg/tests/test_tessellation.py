import math
import numpy as np
import pytest
from meshcsg.errors import InvalidInput
from meshcsg.csg.parser import parse_csg
from meshcsg.csg.tessellation import get_fragments, cube, sphere, cylinder, polyhedron, tessellate
from meshcsg.csg.validation import is_watertight


def test_get_fragments():
    assert get_fragments(1.0, fn=8) == 8
    assert get_fragments(1.0, fn=2) == 3
    assert get_fragments(1.0) == 5                   # 2 pi / 2 rounds up to 4, at least 5
    assert get_fragments(10.0) == 30                 # 360 / 12
    assert get_fragments(10.0, fa=5, fs=1) == 63     # ceil(20 pi)
    assert get_fragments(1e-9) == 3


def test_cube():
    mesh = cube(1)
    assert mesh.nb_facets == 12
    assert mesh.exact_signed_volume() == 1
    assert mesh.euler_characteristic() == 2
    assert is_watertight(mesh)
    centered = cube([2, 4, 6], center=True)
    assert np.allclose(centered.vertices.min(axis=0), [-1, -2, -3])
    assert centered.exact_signed_volume() == 48


def test_cylinder_prism():
    mesh = cylinder(h=1, r1=1, r2=1, fn=8)
    assert mesh.nb_facets == 2 * 8 + 2 * (8 - 2)
    assert is_watertight(mesh)
    assert mesh.euler_characteristic() == 2
    # Regular octagon of circumradius 1 has area 2 sqrt(2).
    assert mesh.signed_volume() == pytest.approx(2 * math.sqrt(2))


def test_cones():
    for r1, r2 in ((1.0, 0.0), (0.0, 1.0)):
        mesh = cylinder(h=3, r1=r1, r2=r2, fn=6, center=True)
        assert mesh.nb_facets == 6 + 4
        assert is_watertight(mesh)
        assert mesh.signed_volume() == pytest.approx(1.5 * math.sqrt(3) * 1.0)
        assert mesh.vertices[:, 2].min() == -1.5


def test_sphere():
    mesh = sphere(r=1, fn=32)
    assert is_watertight(mesh)
    assert mesh.euler_characteristic() == 2
    assert abs(mesh.signed_volume() - 4 * math.pi / 3) < 0.05 * 4 * math.pi / 3
    assert len(mesh.connected_components()) == 1


def test_polyhedron_faces_are_clockwise():
    points = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    faces = [[0, 1, 2], [0, 3, 1], [1, 3, 2], [0, 2, 3]]
    mesh = polyhedron(points, faces)
    assert mesh.nb_facets == 4
    assert mesh.exact_signed_volume() * 6 == 1
    square_pyramid = polyhedron([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0], [0.5, 0.5, 1]],
                                [[0, 1, 2, 3], [0, 4, 1], [1, 4, 2], [2, 4, 3], [3, 4, 0]])
    assert square_pyramid.nb_facets == 6
    assert square_pyramid.signed_volume() == pytest.approx(1 / 3)


@pytest.mark.parametrize('build', [lambda: cube(0), lambda: cube([1, -1, 1]), lambda: sphere(0),
                                   lambda: cylinder(h=0), lambda: cylinder(r1=0, r2=0),
                                   lambda: polyhedron([[0, 0, 0]], [[0, 0]]),
                                   lambda: polyhedron([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 5]])])
def test_non_positive_dimensions_raise(build):
    with pytest.raises(InvalidInput):
        build()


def test_tessellate_nodes():
    assert tessellate(parse_csg('cylinder(h=1, r=1, $fn=8);')).nb_facets == 28
    assert tessellate(parse_csg('cube([1, 2, 3], true);')).exact_signed_volume() == 6
    with pytest.raises(InvalidInput):
        tessellate(parse_csg('union() { cube(); }'))
