import numpy as np
from fractions import Fraction
from meshcsg.errors import InvalidInput
from meshcsg.kernel import ArithmeticKernel, get_kernel
from meshcsg.geometry.exact_geom import HPoint3, point_from_double


class TriMesh:
    """
    Triangle mesh shared by every stage of the boolean pipeline.

    Original vertices are doubles. Vertices constructed by the co-refinement
    also carry their exact point; their double coordinates are the nearest
    double approximation, used for boxes and output only.

    Attributes:
        vertices: ndarray (n, 3) float64.
        facets: ndarray (m, 3) int64. Vertex ids, counterclockwise seen from outside.
        operands: ndarray (m,) object. Python int bitvector per facet, bit k set
                  iff the facet lies on the boundary of operand k.
        sources: ndarray (m,) int64. Facet id in the input this facet comes from.
        exact: list. Per vertex its exact HPoint3 if it was constructed, None for input vertices.
    """
    def __init__(self, vertices=None, facets=None, operands=None, sources=None, exact=None):
        self.vertices = np.zeros((0, 3)) if vertices is None else np.array(vertices, dtype=float).reshape(-1, 3)
        self.facets = np.zeros((0, 3), dtype=np.int64) if facets is None \
            else np.array(facets, dtype=np.int64).reshape(-1, 3)
        m = len(self.facets)
        self.operands = np.array([1] * m if operands is None else [int(b) for b in operands], dtype=object)
        self.sources = np.arange(m, dtype=np.int64) if sources is None else np.array(sources, dtype=np.int64)
        self.exact = [None] * len(self.vertices) if exact is None else list(exact)
        self._points = {}

        assert len(self.operands) == m and len(self.sources) == m, \
            'TriMesh: operands and sources must have one entry per facet.'
        assert len(self.exact) == len(self.vertices), 'TriMesh: exact must have one entry per vertex.'
        if m and (self.facets.min() < 0 or self.facets.max() >= len(self.vertices)):
            raise InvalidInput('TriMesh: Facet refers to a vertex that does not exist.')


    @classmethod
    def from_operands(cls, meshes: list['TriMesh']) -> 'TriMesh':
        """
        Concatenate meshes, tagging the facets of the k-th mesh with operand bit k.
        """
        vertices, facets, operands, exact = [], [], [], []
        offset = 0
        for k, mesh in enumerate(meshes):
            vertices.append(mesh.vertices)
            facets.append(mesh.facets + offset)
            operands.extend([1 << k] * mesh.nb_facets)
            exact.extend(mesh.exact)
            offset += mesh.nb_vertices
        return cls(np.concatenate(vertices) if vertices else None,
                   np.concatenate(facets) if facets else None, operands, None, exact)


    @property
    def nb_vertices(self) -> int:
        return len(self.vertices)


    @property
    def nb_facets(self) -> int:
        return len(self.facets)


    def copy(self) -> 'TriMesh':
        return TriMesh(self.vertices.copy(), self.facets.copy(), list(self.operands),
                       self.sources.copy(), list(self.exact))


    def point(self, v: int, kernel: ArithmeticKernel | str) -> HPoint3:
        """ Exact point of vertex v in the given kernel, cached. """
        kernel = get_kernel(kernel)
        key = (kernel.name, v)
        if key not in self._points:
            exact = self.exact[v]
            if exact is not None and exact.kernel is kernel: self._points[key] = exact
            else: self._points[key] = point_from_double(self.vertices[v], kernel)
        return self._points[key]


    def facet_points(self, f: int, kernel: ArithmeticKernel | str) -> tuple[HPoint3, HPoint3, HPoint3]:
        return tuple(self.point(int(v), kernel) for v in self.facets[f])


    def facet_boxes(self) -> np.ndarray:
        """ (m, 2, 3) min and max corners, widened to contain the exact vertices. """
        lo = self.vertices.copy()
        hi = self.vertices.copy()
        constructed = [v for v, p in enumerate(self.exact) if p is not None]
        if constructed:
            lo[constructed] = np.nextafter(lo[constructed], -np.inf)
            hi[constructed] = np.nextafter(hi[constructed], np.inf)
        boxes = np.empty((self.nb_facets, 2, 3))
        boxes[:, 0] = lo[self.facets].min(axis=1)
        boxes[:, 1] = hi[self.facets].max(axis=1)
        return boxes


    def inexact_vertices(self) -> list[int]:
        """ Constructed vertices whose double coordinates are not their exact value. """
        return [v for v, p in enumerate(self.exact) if p is not None and not p.is_exact_double()]


    def approximate(self) -> 'TriMesh':
        """ Same mesh with every vertex replaced by its double approximation. """
        return TriMesh(self.vertices.copy(), self.facets.copy(), list(self.operands), self.sources.copy())


    def compact(self) -> 'TriMesh':
        """ Drop vertices no facet uses. """
        used = np.unique(self.facets)
        remap = np.full(self.nb_vertices, -1, dtype=np.int64)
        remap[used] = np.arange(len(used))
        return TriMesh(self.vertices[used], remap[self.facets], list(self.operands), self.sources.copy(),
                       [self.exact[v] for v in used])


    def flipped(self) -> 'TriMesh':
        return TriMesh(self.vertices.copy(), self.facets[:, ::-1].copy(), list(self.operands),
                       self.sources.copy(), list(self.exact))


    def transformed(self, matrix: np.ndarray) -> 'TriMesh':
        """ Apply a 4x4 affine matrix. A negative determinant flips the facets. """
        matrix = np.array(matrix, dtype=float)
        vertices = self.vertices @ matrix[:3, :3].T + matrix[:3, 3]
        facets = self.facets[:, ::-1].copy() if np.linalg.det(matrix[:3, :3]) < 0 else self.facets.copy()
        return TriMesh(vertices, facets, list(self.operands), self.sources.copy())


    ##################################################
    # Measures, in doubles unless said otherwise.

    def signed_volume(self) -> float:
        if self.nb_facets == 0: return 0.0
        a, b, c = (self.vertices[self.facets[:, k]] for k in range(3))
        return float(np.einsum('ij,ij->i', a, np.cross(b, c)).sum() / 6.0)


    def exact_signed_volume(self, facets=None) -> Fraction:
        """ Signed volume as a Fraction, from the exact vertex values. """
        facets = self.facets if facets is None else facets
        cache = {}

        def value(v):
            if v not in cache:
                p = self.exact[v]
                cache[v] = p.to_fractions() if p is not None else tuple(Fraction(c) for c in self.vertices[v])
            return cache[v]

        total = Fraction(0)
        for f in facets:
            (ax, ay, az), (bx, by, bz), (cx, cy, cz) = (value(int(v)) for v in f)
            total += ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx)
        return total / 6


    def area(self) -> float:
        if self.nb_facets == 0: return 0.0
        a, b, c = (self.vertices[self.facets[:, k]] for k in range(3))
        return float(0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1).sum())


    def edges(self) -> np.ndarray:
        """ (3m, 2) directed edges, facet f owning rows 3f, 3f+1, 3f+2. """
        return np.stack([self.facets, np.roll(self.facets, -1, axis=1)], axis=2).reshape(-1, 2)


    def euler_characteristic(self) -> int:
        """ V - E + F over the vertices used by facets. """
        if self.nb_facets == 0: return 0
        undirected = np.sort(self.edges(), axis=1)
        nb_edges = len(np.unique(undirected, axis=0))
        return len(np.unique(self.facets)) - nb_edges + self.nb_facets


    def connected_components(self) -> list[np.ndarray]:
        """ Facet ids grouped by edge connectivity. """
        parent = list(range(self.nb_facets))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        owners = {}
        for row, (a, b) in enumerate(self.edges()):
            key = (min(a, b), max(a, b))
            f = row // 3
            if key in owners: parent[find(f)] = find(owners[key])
            else: owners[key] = f
        groups = {}
        for f in range(self.nb_facets):
            groups.setdefault(find(f), []).append(f)
        return [np.array(g, dtype=np.int64) for g in groups.values()]


    def submesh(self, facets) -> 'TriMesh':
        facets = np.array(facets, dtype=np.int64)
        return TriMesh(self.vertices, self.facets[facets], [self.operands[f] for f in facets],
                       self.sources[facets], self.exact).compact()


    def __repr__(self):
        return f'TriMesh({self.nb_vertices} vertices, {self.nb_facets} facets)'
