"""
OBJ and STL readers and writers.

OBJ coordinates are written with repr, the shortest decimal that reads back
to the same double. Binary STL stores float32, so only float32 values
survive it unchanged.
"""

import os
import numpy as np
from meshcsg.errors import MeshFormatError
from meshcsg.boolean.trimesh import TriMesh

STL_RECORD = np.dtype([('normal', '<f4', (3,)), ('vertices', '<f4', (3, 3)), ('attribute', '<u2')])
FORMATS = {'.obj': 'obj', '.stl': 'stl'}


def mesh_format(path: str) -> str:
    suffix = os.path.splitext(path)[1].lower()
    try:
        return FORMATS[suffix]
    except KeyError:
        raise MeshFormatError(f'MeshIO: Unknown mesh format "{suffix}" of {path}.')


##################################################
# OBJ

def read_obj(path: str) -> TriMesh:
    """ Vertices and faces only. Polygons are fan-triangulated, negative indices are relative. """
    vertices, facets = [], []
    with open(path, 'r') as f:
        for number, line in enumerate(f, start=1):
            fields = line.split()
            if not fields or fields[0].startswith('#'): continue
            try:
                if fields[0] == 'v':
                    vertices.append([float(x) for x in fields[1:4]])
                    if len(vertices[-1]) != 3: raise ValueError('vertex needs 3 coordinates')
                elif fields[0] == 'f':
                    ids = []
                    for field in fields[1:]:
                        i = int(field.split('/')[0])
                        ids.append(i - 1 if i > 0 else len(vertices) + i)
                    if len(ids) < 3: raise ValueError('face needs 3 vertices')
                    if min(ids) < 0 or max(ids) >= len(vertices): raise ValueError('face refers to a missing vertex')
                    facets.extend((ids[0], ids[j], ids[j + 1]) for j in range(1, len(ids) - 1))
            except ValueError as error:
                raise MeshFormatError(f'MeshIO: {path}, line {number}: {error}.') from error
    return TriMesh(vertices if vertices else None, facets if facets else None)


def write_obj(mesh: TriMesh, path: str):
    with open(path, 'w') as f:
        for x, y, z in mesh.vertices:
            f.write(f'v {float(x)!r} {float(y)!r} {float(z)!r}\n')
        for a, b, c in mesh.facets + 1:
            f.write(f'f {a} {b} {c}\n')


##################################################
# STL

def _from_triangles(triangles: np.ndarray) -> TriMesh:
    """ Mesh of a (m, 3, 3) triangle array, merging bitwise equal vertices. """
    triangles = np.asarray(triangles, dtype=float).reshape(-1, 3, 3)
    if len(triangles) == 0: return TriMesh()
    vertices, inverse = np.unique(triangles.reshape(-1, 3), axis=0, return_inverse=True)
    return TriMesh(vertices, inverse.reshape(-1, 3))


def _is_binary_stl(data: bytes) -> bool:
    if len(data) < 84: return False
    count = int(np.frombuffer(data[80:84], dtype='<u4')[0])
    return len(data) == 84 + count * STL_RECORD.itemsize


def read_stl(path: str) -> TriMesh:
    with open(path, 'rb') as f:
        data = f.read()
    if _is_binary_stl(data):
        records = np.frombuffer(data, dtype=STL_RECORD, offset=84)
        return _from_triangles(records['vertices'].astype(float))

    try:
        text = data.decode('ascii')
    except UnicodeDecodeError as error:
        raise MeshFormatError(f'MeshIO: {path} is neither binary nor ASCII STL.') from error
    if not text.lstrip().startswith('solid'):
        raise MeshFormatError(f'MeshIO: {path} is neither binary nor ASCII STL.')

    points = []
    for number, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if fields and fields[0] == 'vertex':
            try:
                points.append([float(x) for x in fields[1:4]])
            except ValueError as error:
                raise MeshFormatError(f'MeshIO: {path}, line {number}: {error}.') from error
    if len(points) % 3:
        raise MeshFormatError(f'MeshIO: {path} has {len(points)} vertices, not a multiple of 3.')
    return _from_triangles(points)


def _facet_normals(mesh: TriMesh) -> np.ndarray:
    if mesh.nb_facets == 0: return np.zeros((0, 3))
    a, b, c = (mesh.vertices[mesh.facets[:, k]] for k in range(3))
    normals = np.cross(b - a, c - a)
    lengths = np.linalg.norm(normals, axis=1, keepdims=True)
    return np.divide(normals, lengths, out=np.zeros_like(normals), where=lengths > 0)


def write_stl(mesh: TriMesh, path: str, binary: bool = True, name: str = 'meshcsg'):
    normals = _facet_normals(mesh)
    if binary:
        records = np.zeros(mesh.nb_facets, dtype=STL_RECORD)
        records['normal'] = normals
        records['vertices'] = mesh.vertices[mesh.facets]
        with open(path, 'wb') as f:
            f.write(name.encode('ascii').ljust(80, b' ')[:80])
            f.write(np.array([mesh.nb_facets], dtype='<u4').tobytes())
            f.write(records.tobytes())
        return

    with open(path, 'w') as f:
        f.write(f'solid {name}\n')
        for normal, facet in zip(normals, mesh.facets):
            f.write('  facet normal {!r} {!r} {!r}\n    outer loop\n'.format(*(float(x) for x in normal)))
            for v in facet:
                f.write('      vertex {!r} {!r} {!r}\n'.format(*(float(x) for x in mesh.vertices[v])))
            f.write('    endloop\n  endfacet\n')
        f.write(f'endsolid {name}\n')


##################################################
# Dispatch

def read_mesh(path: str) -> TriMesh:
    return read_obj(path) if mesh_format(path) == 'obj' else read_stl(path)


def write_mesh(mesh: TriMesh, path: str, binary_stl: bool = True):
    if mesh_format(path) == 'obj': write_obj(mesh, path)
    else: write_stl(mesh, path, binary_stl)
