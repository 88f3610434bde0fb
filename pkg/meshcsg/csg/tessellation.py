import math
import numpy as np
from meshcsg.errors import InvalidInput
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.csg.parser import CsgNode

GRID_FINE = 1e-6

# Outward, counterclockwise seen from outside. Corner i is (i & 1, i >> 1 & 1, i >> 2 & 1).
CUBE_FACETS = np.array([
    [0, 2, 3], [0, 3, 1],  # z = 0
    [4, 5, 7], [4, 7, 6],  # z = 1
    [0, 1, 5], [0, 5, 4],  # y = 0
    [3, 2, 6], [3, 6, 7],  # y = 1
    [2, 0, 4], [2, 4, 6],  # x = 0
    [1, 3, 7], [1, 7, 5],  # x = 1
])


def get_fragments(r: float, fn: float = 0, fa: float = 12, fs: float = 2) -> int:
    """
    Number of segments of a circle of radius r. $fn wins when set, otherwise
    the angle and size limits decide, with at least 5 segments.
    """
    if r < GRID_FINE: return 3
    if fn > 0: return max(int(fn), 3)
    return int(math.ceil(max(min(360.0 / fa, 2 * math.pi * r / fs), 5)))


def _circle(n: int, r: float, z: float) -> np.ndarray:
    theta = 2 * np.pi * np.arange(n) / n
    return np.stack([r * np.cos(theta), r * np.sin(theta), np.full(n, z)], axis=1)


def _fan(ids, reverse: bool = False) -> list[tuple[int, int, int]]:
    ids = list(ids)
    if reverse: return [(ids[0], ids[j + 1], ids[j]) for j in range(1, len(ids) - 1)]
    return [(ids[0], ids[j], ids[j + 1]) for j in range(1, len(ids) - 1)]


def _band(upper, lower) -> list[tuple[int, int, int]]:
    """ Two triangles per quad between an upper and a lower ring of the same size. """
    n = len(upper)
    facets = []
    for j in range(n):
        k = (j + 1) % n
        facets.append((upper[j], lower[j], lower[k]))
        facets.append((upper[j], lower[k], upper[k]))
    return facets


def cube(size=1.0, center: bool = False) -> TriMesh:
    size = np.broadcast_to(np.array(size, dtype=float), (3,))
    if np.any(size <= 0): raise InvalidInput(f'Tessellation: Cube size must be positive, got {size.tolist()}.')
    corners = np.array([[i & 1, i >> 1 & 1, i >> 2 & 1] for i in range(8)], dtype=float) * size
    if center: corners -= size / 2
    return TriMesh(corners, CUBE_FACETS)


def sphere(r: float = 1.0, fn: float = 0, fa: float = 12, fs: float = 2) -> TriMesh:
    """
    Stacked rings: (n + 1) // 2 rings at polar angles 180 (i + 0.5) / rings,
    closed by an n-gon at each pole.
    """
    if r <= 0: raise InvalidInput(f'Tessellation: Sphere radius must be positive, got {r}.')
    n = get_fragments(r, fn, fa, fs)
    rings = (n + 1) // 2
    vertices = []
    for i in range(rings):
        phi = np.pi * (i + 0.5) / rings
        vertices.append(_circle(n, r * np.sin(phi), r * np.cos(phi)))

    ring = [list(range(i * n, (i + 1) * n)) for i in range(rings)]
    facets = _fan(ring[0])
    for i in range(rings - 1):
        facets.extend(_band(ring[i], ring[i + 1]))
    facets.extend(_fan(ring[-1], reverse=True))
    return TriMesh(np.concatenate(vertices), facets)


def cylinder(h: float = 1.0, r1: float = 1.0, r2: float = 1.0, center: bool = False,
             fn: float = 0, fa: float = 12, fs: float = 2) -> TriMesh:
    """
    Prism or cone between z = 0 and z = h. A zero radius gives an apex.
    """
    if h <= 0: raise InvalidInput(f'Tessellation: Cylinder height must be positive, got {h}.')
    if r1 < 0 or r2 < 0 or max(r1, r2) <= 0:
        raise InvalidInput(f'Tessellation: Cylinder radii must be non negative and not both zero, got {r1}, {r2}.')
    n = get_fragments(max(r1, r2), fn, fa, fs)
    z0, z1 = (-h / 2, h / 2) if center else (0.0, h)

    vertices, facets = [], []
    if r1 > 0:
        vertices.append(_circle(n, r1, z0))
        bottom = list(range(n))
    else:
        vertices.append(np.array([[0.0, 0.0, z0]]))
        bottom = None
    offset = sum(len(v) for v in vertices)
    if r2 > 0:
        vertices.append(_circle(n, r2, z1))
        top = list(range(offset, offset + n))
    else:
        vertices.append(np.array([[0.0, 0.0, z1]]))
        top = None

    if bottom is not None and top is not None:
        facets.extend(_band(top, bottom))
    elif top is None:
        facets.extend((offset, bottom[j], bottom[(j + 1) % n]) for j in range(n))
    else:
        facets.extend((top[j], 0, top[(j + 1) % n]) for j in range(n))
    if bottom is not None: facets.extend(_fan(bottom, reverse=True))
    if top is not None: facets.extend(_fan(top))
    return TriMesh(np.concatenate(vertices), facets)


def polyhedron(points: list, faces: list) -> TriMesh:
    """ Faces are listed clockwise seen from outside; they are flipped and fan-triangulated. """
    points = np.array(points, dtype=float).reshape(-1, 3)
    facets = []
    for face in faces:
        if len(face) < 3: raise InvalidInput(f'Tessellation: Polyhedron face {face} has less than 3 points.')
        if min(face) < 0 or max(face) >= len(points):
            raise InvalidInput(f'Tessellation: Polyhedron face {face} refers to a missing point.')
        facets.extend(_fan(face[::-1]))
    if not facets: raise InvalidInput('Tessellation: Polyhedron has no face.')
    return TriMesh(points, facets)


def tessellate(node: CsgNode) -> TriMesh:
    """ Closed outward-oriented mesh of a primitive node. """
    p = node.params
    fragments = {'fn': p.get('$fn', 0), 'fa': p.get('$fa', 12), 'fs': p.get('$fs', 2)}
    if node.kind == 'cube': return cube(p['size'], p['center'])
    if node.kind == 'sphere': return sphere(p['r'], **fragments)
    if node.kind == 'cylinder': return cylinder(p['h'], p['r1'], p['r2'], p['center'], **fragments)
    if node.kind == 'polyhedron': return polyhedron(p['points'], p['faces'])
    raise InvalidInput(f'Tessellation: {node.kind} is not a primitive.')
