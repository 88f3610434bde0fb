import numpy as np
import pytest
from meshcsg.errors import MeshFormatError
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.csg.mesh_io import mesh_format, read_obj, write_obj, read_stl, write_stl, read_mesh, write_mesh
from meshcsg.csg.tessellation import sphere


def test_mesh_format():
    assert mesh_format('a/b/model.OBJ') == 'obj'
    assert mesh_format('part.stl') == 'stl'
    with pytest.raises(MeshFormatError):
        mesh_format('scene.ply')


def test_obj_keeps_doubles_bit_exact(tmp_path):
    mesh = sphere(r=1.0 / 3.0, fn=10)
    mesh.vertices[0] = [0.1, 1e-300, -2.0 ** 60 + 1.5]
    path = str(tmp_path / 'sphere.obj')
    write_obj(mesh, path)
    back = read_obj(path)
    assert np.array_equal(back.vertices, mesh.vertices)
    assert np.array_equal(back.facets, mesh.facets)


def test_obj_polygons_and_relative_indices(tmp_path):
    path = tmp_path / 'quad.obj'
    path.write_text('# a quad\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1/1/1 2/2/1 3/3/1 4/4/1\nf -4 -2 -1\n')
    mesh = read_obj(str(path))
    assert mesh.facets.tolist() == [[0, 1, 2], [0, 2, 3], [0, 2, 3]]


@pytest.mark.parametrize('text', ['v 0 0\n', 'v 0 0 0\nf 1 2\n', 'v 0 0 0\nf 1 2 3\n', 'v a b c\n'])
def test_obj_errors(tmp_path, text):
    path = tmp_path / 'bad.obj'
    path.write_text(text)
    with pytest.raises(MeshFormatError):
        read_obj(str(path))


def test_binary_stl_keeps_float32(tmp_path, unit_cube):
    mesh = unit_cube.transformed(np.diag([0.5, 0.25, 3.0, 1.0]))
    path = str(tmp_path / 'cube.stl')
    write_stl(mesh, path)
    back = read_stl(path)
    assert back.nb_vertices == 8 and back.nb_facets == 12
    assert back.exact_signed_volume() == mesh.exact_signed_volume()
    # Values that are not float32 get rounded.
    write_stl(TriMesh([[0.1, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]]), path)
    assert float(np.float32(0.1)) in read_stl(path).vertices[:, 0]


def test_ascii_stl(tmp_path, unit_cube):
    path = str(tmp_path / 'cube.stl')
    write_stl(unit_cube, path, binary=False)
    with open(path) as f:
        assert f.readline().startswith('solid')
    back = read_stl(path)
    assert back.nb_vertices == 8
    assert back.exact_signed_volume() == 1


def test_stl_errors(tmp_path):
    path = tmp_path / 'bad.stl'
    path.write_bytes(b'\xff' * 90)
    with pytest.raises(MeshFormatError):
        read_stl(str(path))
    path.write_text('solid x\n  facet normal 0 0 1\n    outer loop\n      vertex 0 0 0\n      vertex 1 0 0\n')
    with pytest.raises(MeshFormatError):
        read_stl(str(path))


def test_dispatch(tmp_path, unit_cube):
    for name in ('cube.obj', 'cube.stl'):
        path = str(tmp_path / name)
        write_mesh(unit_cube, path)
        assert read_mesh(path).exact_signed_volume() == 1
