# =============================================================================
# Co-refinement: turn a triangle soup into a mesh without improper
# intersections.
#
# Pipeline:
#   preprocess  merge equal vertices, drop repeated-index facets, merge
#               duplicated facets by OR-ing their operand bitvectors.
#   detection   AABB candidate pairs, then symbolic triangle-triangle tests.
#   CDT         every intersected facet is remeshed by a constrained
#               triangulation of its projection, one per facet, in parallel.
#   merge       constructed points go through a GlobalVertexTable in facet id
#               order, then the input vertices are looked up in the table.
#
# Example:
#   mesh = TriMesh.from_operands([cube_a, cube_b])
#   corefiner = Corefiner(kernel='mpfloat', threads=4)
#   result = corefiner.run(preprocess(mesh))
#   print(corefiner.stats)
# =============================================================================

import time
import numpy as np
from concurrent.futures import ThreadPoolExecutor
from meshcsg.errors import InvalidInput, KernelRangeError, DegenerateConstruction
from meshcsg.kernel import Sign, get_kernel, ArithmeticKernel
from meshcsg.geometry import aabb
from meshcsg.geometry.cdt2d import CDT
from meshcsg.geometry.exact_geom import HPoint2, HPoint3, GlobalVertexTable, point_from_double, \
    intersect_edge_triangle_3d, intersect_edge_edge_2d, intersect_three_planes, intersect_lines_2d, lift_to_plane
from meshcsg.geometry.predicates import orient3d, dominant_axis, PredicateCache
from meshcsg.geometry.tritri import EDGE_VERTICES, triangle_triangle
from meshcsg.boolean.trimesh import TriMesh


def merge_duplicate_facets(facets: np.ndarray, operands, sources) -> tuple[np.ndarray, list, np.ndarray]:
    """
    Keep the first facet of every vertex set, OR-ing the operand bitvectors of
    the others into it. Facet order is that of first occurrence.
    """
    facets = np.array(facets, dtype=np.int64).reshape(-1, 3)
    if len(facets) == 0: return facets, [], np.zeros(0, dtype=np.int64)
    keys = np.sort(facets, axis=1)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)

    merged = [0] * len(first)
    for f, u in enumerate(inverse):
        merged[u] |= int(operands[f])
    order = np.argsort(first, kind='stable')
    keep = first[order]
    return facets[keep], [merged[u] for u in order], np.array(sources)[keep]


def preprocess(mesh: TriMesh, verbose: bool = False) -> TriMesh:
    """
    Clean a raw triangle soup. Vertices with bitwise equal doubles are merged,
    facets using a vertex twice are dropped and duplicated facets are merged.
    Constructed vertices are replaced by their double approximation first.
    """
    if mesh.nb_facets == 0:
        raise InvalidInput('Corefine: Input mesh has no facets.')
    if not np.all(np.isfinite(mesh.vertices)):
        raise InvalidInput('Corefine: Input mesh has non-finite vertex coordinates.')
    inexact = mesh.inexact_vertices()
    if inexact and verbose: print(f'Corefine: Rounding {len(inexact)} constructed vertices to doubles.')
    vertices, inverse = np.unique(mesh.vertices, axis=0, return_inverse=True)
    facets = inverse.reshape(-1)[mesh.facets]

    valid = (facets[:, 0] != facets[:, 1]) & (facets[:, 1] != facets[:, 2]) & (facets[:, 2] != facets[:, 0])
    facets, operands, sources = merge_duplicate_facets(facets[valid],
                                                       [b for b, ok in zip(mesh.operands, valid) if ok],
                                                       mesh.sources[valid])
    if verbose:
        print(f'Corefine: Preprocess {mesh.nb_vertices} -> {len(vertices)} vertices, '
              f'{mesh.nb_facets} -> {len(facets)} facets.')
    if len(facets) == 0:
        raise InvalidInput('Corefine: Every facet of the input mesh is degenerate.')
    return TriMesh(vertices, facets, operands, sources).compact()



class FacetWork:
    """
    What has to be embedded in one facet.

    Attributes:
        facet: int. Facet id.
        points: dict. Symbolic key (cell in facet, other facet, cell in other) -> None,
                in insertion order.
        segments: list of (key1, key2, other facet).
    """
    def __init__(self, facet: int):
        self.facet = facet
        self.points = {}
        self.segments = []


    def add_point(self, key: tuple):
        self.points.setdefault(key, None)


    def add_segment(self, key1: tuple, key2: tuple, other: int):
        self.add_point(key1)
        self.add_point(key2)
        self.segments.append((key1, key2, other))


    def needs_remeshing(self) -> bool:
        """ False when every point is one of the facet's own corners. """
        return any(not key[0].is_vertex() for key in self.points)



class FacetCDT(CDT):
    """
    Constrained triangulation of one facet in the projection on its dominant
    axes. Vertices 0, 1, 2 are the facet corners. Every vertex keeps its 3D
    exact point and, when it is an input vertex, its global id. Constraint ids
    are the ids of the facets that cut this one.

    Attributes:
        facet: int.
        axes: tuple[int, int]. Kept coordinates.
        triangle_of: callable. Facet id -> its three HPoint3.
        points3d: list[HPoint3]. Parallel to points.
        origins: list[int | None]. Global input vertex id, or None for constructions.
    """
    def __init__(self, facet: int, triangle_of, kernel: ArithmeticKernel, **kwargs):
        super().__init__(kernel, **kwargs)
        self.facet = facet
        self.triangle_of = triangle_of
        self.corners = triangle_of(facet)
        self.axes = dominant_axis(self.corners)
        self.points3d = []
        self.origins = []


    def project(self, p: HPoint3) -> HPoint2:
        u, v = self.axes
        return HPoint2(p[u], p[v], p.w, self.kernel)


    def init_facet(self, corner_ids: tuple[int, int, int]):
        self.init(*(self.project(p) for p in self.corners))
        self.points3d = list(self.corners)
        self.origins = list(corner_ids)
        return self


    def insert_point3d(self, p: HPoint3, origin: int = None) -> int:
        v = self.insert_vertex(self.project(p))
        if v == len(self.points3d):
            self.points3d.append(p)
            self.origins.append(origin)
        return v


    def insert_intersection(self, i: int, j: int, cid: int, k: int, l: int) -> int:
        """
        Crossing of constraint cid with the constrained edge (k, l): the common
        point of this facet's plane and of the planes of the two cutting
        facets. Falls back to a 2D line crossing lifted on the facet plane
        when those planes are not independent.
        """
        for other in self.edge_constraints(k, l):
            if other == cid: continue
            try:
                p = intersect_three_planes(self.corners, self.triangle_of(cid), self.triangle_of(other))
                return self.insert_point3d(p)
            except DegenerateConstruction:
                continue

        p2 = intersect_lines_2d(self.points[i], self.points[j], self.points[k], self.points[l])
        return self.insert_point3d(lift_to_plane(p2, self.axes, self.corners))


    def facet_triangles(self) -> list[tuple[int, int, int]]:
        """ Triangles in local ids, oriented like the facet. """
        if self.flipped: return [(a, c, b) for a, b, c in self.triangles()]
        return self.triangles()



class Corefiner:
    """
    Co-refinement of a preprocessed mesh.

    Attributes:
        kernel: ArithmeticKernel.
        threads: int | None. Worker count of the CDT phase, None for the machine default.
        cdt_kwargs: dict. Passed to every FacetCDT (walk_budget, flip_budget_factor, delaunay).
        stats: dict. Counters and timings of the last run.
    """
    def __init__(self, kernel: ArithmeticKernel | str = 'mpfloat', threads: int = None,
                 verbose: bool = False, **cdt_kwargs):
        self.kernel = get_kernel(kernel)
        self.threads = threads
        self.verbose = verbose
        self.cdt_kwargs = cdt_kwargs
        self.stats = {}


    def run(self, mesh: TriMesh) -> TriMesh:
        if mesh.nb_facets == 0:
            raise InvalidInput('Corefine: Input mesh has no facets.')
        if mesh.inexact_vertices():
            if self.verbose: print('Corefine: Input has constructed vertices, using their double approximation.')
            mesh = mesh.approximate()

        self.mesh = mesh
        self.points = [point_from_double(v, self.kernel) for v in mesh.vertices]
        self.stats = {'nb_vertices_in': mesh.nb_vertices, 'nb_facets_in': mesh.nb_facets}

        tic = time.perf_counter()
        works = self.detect()
        toc = time.perf_counter()
        results = self.remesh(works)
        tac = time.perf_counter()
        result = self.merge(results)
        self.stats['time'] = {'detection': toc - tic, 'cdt': tac - toc, 'merge': time.perf_counter() - tac}
        self.stats.update({'nb_vertices_out': result.nb_vertices, 'nb_facets_out': result.nb_facets})

        if self.verbose:
            print(f'Corefine: {self.stats["candidate_pairs"]} candidate pairs, '
                  f'{self.stats["intersecting_pairs"]} intersecting, {self.stats["cdt_count"]} facets remeshed.')
        return result


    def find_improper(self, mesh: TriMesh) -> list[int]:
        """
        Facets of mesh that meet another facet elsewhere than on shared
        vertices and edges. Exact points are used, so a co-refined mesh
        gives an empty list.
        """
        self.mesh = mesh
        self.points = [mesh.point(v, self.kernel) for v in range(mesh.nb_vertices)]
        return list(self.detect())


    def triangle_of(self, f: int) -> tuple[HPoint3, HPoint3, HPoint3]:
        return tuple(self.points[v] for v in self.mesh.facets[f])


    ##################################################
    # Detection.

    def detect(self) -> dict[int, FacetWork]:
        """
        Symbolic intersections of every candidate pair, grouped per facet.
        """
        tree = aabb.build(self.mesh)
        pairs = tree.self_intersect()
        cache = PredicateCache()
        works = {}
        intersecting = 0

        for f, g in pairs:
            ids_f = tuple(int(v) for v in self.mesh.facets[f])
            ids_g = tuple(int(v) for v in self.mesh.facets[g])
            try:
                result = triangle_triangle(self.triangle_of(f), self.triangle_of(g), cache, ids_f, ids_g)
            except KernelRangeError as error:
                raise KernelRangeError(f'Corefine: Intersecting facets {f} and {g}: {error}') from error
            if not result.points: continue
            intersecting += 1

            work_f = works.setdefault(f, FacetWork(f))
            work_g = works.setdefault(g, FacetWork(g))
            keys_f = [(cf, g, cg) for cf, cg in result.points]
            keys_g = [(cg, f, cf) for cf, cg in result.points]
            for key_f, key_g in zip(keys_f, keys_g):
                work_f.add_point(key_f)
                work_g.add_point(key_g)
            for i, j in result.edges:
                work_f.add_segment(keys_f[i], keys_f[j], g)
                work_g.add_segment(keys_g[i], keys_g[j], f)

        works = {f: w for f, w in sorted(works.items()) if w.needs_remeshing()}
        self.stats.update({'candidate_pairs': len(pairs), 'intersecting_pairs': intersecting,
                           'cache_hits': cache.hits, 'cache_misses': cache.misses, 'cdt_count': len(works)})
        return works


    ##################################################
    # Construction and per-facet CDT.

    def construct(self, f: int, key: tuple) -> tuple[HPoint3, int | None]:
        """
        Exact point of a symbolic intersection seen from facet f, with the
        global id of the input vertex it is, if any.
        """
        cf, g, cg = key
        facet_f, facet_g = self.mesh.facets[f], self.mesh.facets[g]
        if cf.is_vertex():
            v = int(facet_f[cf])
            return self.points[v], v
        if cg.is_vertex():
            v = int(facet_g[cg])
            return self.points[v], v

        tf, tg = self.triangle_of(f), self.triangle_of(g)
        if cf.is_edge() and cg.is_edge():
            ef = tuple(tf[k] for k in EDGE_VERTICES[cf])
            eg = tuple(tg[k] for k in EDGE_VERTICES[cg])
            if not self._in_plane(eg, tf): return intersect_edge_triangle_3d(*eg, *tf), None
            if not self._in_plane(ef, tg): return intersect_edge_triangle_3d(*ef, *tg), None
            return intersect_edge_edge_2d(*ef, *eg, dominant_axis(tf)), None

        if cf.is_edge():
            return intersect_edge_triangle_3d(*(tf[k] for k in EDGE_VERTICES[cf]), *tg), None
        return intersect_edge_triangle_3d(*(tg[k] for k in EDGE_VERTICES[cg]), *tf), None


    @staticmethod
    def _in_plane(edge: tuple, triangle: tuple) -> bool:
        return all(orient3d(*triangle, q) == Sign.ZERO for q in edge)


    def remesh_facet(self, work: FacetWork) -> tuple[list, list]:
        """
        Returns (vertices, triangles, cdt stats): per local vertex a
        (HPoint3, origin) pair, and the local triangles oriented like the facet.
        """
        f = work.facet
        stage = 'setting up the facet triangulation'
        try:
            cdt = FacetCDT(f, self.triangle_of, self.kernel, **self.cdt_kwargs)
            cdt.init_facet(tuple(int(v) for v in self.mesh.facets[f]))
            local = {}
            for key in work.points:
                stage = f'constructing the intersection of its {key[0].name} with {key[2].name} of facet {key[1]}'
                p, origin = self.construct(f, key)
                stage = f'inserting the intersection point with facet {key[1]}'
                local[key] = cdt.insert_point3d(p, origin)
            for key1, key2, other in work.segments:
                stage = f'inserting the intersection segment with facet {other}'
                i, j = local[key1], local[key2]
                if i != j: cdt.insert_constraint(i, j, other)
        except KernelRangeError as error:
            raise KernelRangeError(f'Corefine: Facet {f} (input facet {self.mesh.sources[f]}), '
                                   f'while {stage}: {error}') from error

        vertices = list(zip(cdt.points3d, cdt.origins))
        return vertices, cdt.facet_triangles(), cdt.stats


    def remesh(self, works: dict[int, FacetWork]) -> dict[int, tuple]:
        facets = list(works)
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            outputs = list(executor.map(lambda f: self.remesh_facet(works[f]), facets))

        flips = sum(stats['flips'] + stats['constraint_flips'] for _, _, stats in outputs)
        self.stats['cdt_flips'] = flips
        return {f: output[:2] for f, output in zip(facets, outputs)}


    ##################################################
    # Global merge.

    def merge(self, results: dict[int, tuple]) -> TriMesh:
        """
        Sequential merge in facet id order. Constructed points get global ids
        through the vertex table, then input vertices found in the table take
        over the table entry.
        """
        mesh = self.mesh
        n = mesh.nb_vertices
        table = GlobalVertexTable(self.kernel)
        facets, operands, sources = [], [], []

        for f in range(mesh.nb_facets):
            if f not in results:
                facets.append(tuple(int(v) for v in mesh.facets[f]))
                operands.append(mesh.operands[f])
                sources.append(mesh.sources[f])
                continue
            vertices, triangles = results[f]
            ids = [origin if origin is not None else n + table.insert(p) for p, origin in vertices]
            for a, b, c in triangles:
                facets.append((ids[a], ids[b], ids[c]))
                operands.append(mesh.operands[f])
                sources.append(mesh.sources[f])

        remap = np.arange(n + len(table), dtype=np.int64)
        approx = np.array([p.approx() for p in table.points]).reshape(-1, 3)
        if len(table):
            for v in near_points(mesh.vertices, approx):
                t = table.find(HPoint3(*self.points[v].coordinates, self.kernel))
                if t is not None: remap[n + t] = v
        self.stats['constructed_vertices'] = int(np.count_nonzero(remap[n:] >= n))

        facets = remap[np.array(facets, dtype=np.int64).reshape(-1, 3)]
        facets, operands, sources = merge_duplicate_facets(facets, operands, sources)
        vertices = np.concatenate([mesh.vertices, approx])
        exact = [None] * n + list(table.points)
        return TriMesh(vertices, facets, operands, sources, exact).compact()


def near_points(vertices: np.ndarray, approx: np.ndarray) -> list[int]:
    """
    Rows of vertices equal to some row of approx. A double vertex can only
    be equal to an exact point whose nearest double it is.
    """
    rounded = set(map(tuple, approx.tolist()))
    return [v for v, row in enumerate(vertices.tolist()) if tuple(row) in rounded]


def corefine(mesh: TriMesh, kernel: ArithmeticKernel | str = 'mpfloat', threads: int = None,
             verbose: bool = False, **cdt_kwargs) -> TriMesh:
    """
    Co-refine a preprocessed mesh. See Corefiner for the statistics.
    """
    return Corefiner(kernel, threads, verbose, **cdt_kwargs).run(mesh)
