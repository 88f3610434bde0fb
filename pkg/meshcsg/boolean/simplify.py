# =============================================================================
# Merge coplanar facets of a boundary mesh and retriangulate them.
#
# A region is grown across edges shared by exactly two facets with exactly
# parallel, same-direction normals. A border vertex is removed when every
# region using it has it once on its border, exactly aligned with its two
# border neighbours: then no facet outside those borders needs it. Regions
# are rebuilt by a CDT of their simplified loops, keeping the triangles
# reached through an odd number of constraints from the outside.
# =============================================================================

from concurrent.futures import ThreadPoolExecutor
import numpy as np
from meshcsg.errors import TopologyError
from meshcsg.kernel import Sign, get_kernel, ArithmeticKernel
from meshcsg.geometry.cdt2d import CDT
from meshcsg.geometry.exact_geom import HPoint2, point2_from_double
from meshcsg.geometry.predicates import orient2d, dominant_axis, normals_colinear
from meshcsg.boolean.trimesh import TriMesh


class RegionCDT(CDT):
    """ CDT of region borders. Borders of a valid boundary never cross. """
    def insert_intersection(self, i: int, j: int, cid: int, k: int, l: int) -> int:
        raise TopologyError(f'Simplify: Region border ({i}, {j}) crosses border ({k}, {l}).')



class Region:
    """
    Attributes:
        facets: list[int]. Facet ids of the region.
        axes: tuple[int, int]. Projection of the region plane.
        loops: list[list[int]]. Border loops as vertex id cycles, oriented like the facets.
        pinned: list[int]. Vertices inside the region that other regions use.
        pinched: bool. A border vertex appears twice in the loops.
    """
    def __init__(self, facets: list[int], axes: tuple[int, int] = (0, 1)):
        self.facets = facets
        self.axes = axes
        self.loops = []
        self.pinned = []
        self.pinched = False


    def border_vertices(self) -> list[int]:
        return [v for loop in self.loops for v in loop]



def detect_coplanar_regions(mesh: TriMesh, kernel: ArithmeticKernel | str = 'mpfloat') -> list[list[int]]:
    """
    Partition of the facets by flood fill across two-facet edges whose
    facets have the same normal direction. Regions are listed by smallest facet.
    """
    kernel = get_kernel(kernel)
    owners = {}
    for row, (a, b) in enumerate(mesh.edges()):
        owners.setdefault((min(a, b), max(a, b)), []).append(row // 3)
    neighbours = [[] for _ in range(mesh.nb_facets)]
    for facets in owners.values():
        if len(facets) == 2 and facets[0] != facets[1]:
            f, g = facets
            neighbours[f].append(g)
            neighbours[g].append(f)

    region_of = np.full(mesh.nb_facets, -1, dtype=np.int64)
    regions = []
    for seed in range(mesh.nb_facets):
        if region_of[seed] >= 0: continue
        region_of[seed] = len(regions)
        region, todo = [seed], [seed]
        while todo:
            f = todo.pop()
            for g in neighbours[f]:
                if region_of[g] >= 0: continue
                if normals_colinear(mesh.facet_points(f, kernel), mesh.facet_points(g, kernel)):
                    region_of[g] = len(regions)
                    region.append(g)
                    todo.append(g)
        regions.append(sorted(region))
    return regions


def extract_borders(mesh: TriMesh, region: Region) -> Region:
    """ Border loops of a region: directed edges whose reverse is not in the region. """
    directed = set()
    for f in region.facets:
        a, b, c = (int(v) for v in mesh.facets[f])
        directed.update(((a, b), (b, c), (c, a)))
    border = sorted(e for e in directed if (e[1], e[0]) not in directed)

    outgoing = {}
    for a, b in border:
        outgoing.setdefault(a, []).append(b)
    region.pinched = any(len(targets) > 1 for targets in outgoing.values())

    region.loops = []
    while outgoing:
        start = min(outgoing)
        loop = [start]
        v = start
        while True:
            targets = outgoing[v]
            w = targets.pop(0)
            if not targets: del outgoing[v]
            if w == start: break
            loop.append(w)
            v = w
            if v not in outgoing:
                raise TopologyError(f'Simplify: Border of the region of facet {region.facets[0]} is not closed.')
        region.loops.append(loop)
    return region


def _projected(mesh: TriMesh, v: int, axes: tuple[int, int], kernel: ArithmeticKernel) -> HPoint2:
    p = mesh.point(v, kernel)
    return HPoint2(p[axes[0]], p[axes[1]], p.w, kernel)


def simplify_borders(mesh: TriMesh, regions: list[Region], kernel: ArithmeticKernel) -> int:
    """
    Remove, from all loops at once, the vertices aligned in every region
    using them. Interior vertices used by other regions are pinned.
    Returns the number of removed vertices.
    """
    users = {}
    for r, region in enumerate(regions):
        for f in region.facets:
            for v in mesh.facets[f]: users.setdefault(int(v), set()).add(r)

    for r, region in enumerate(regions):
        border = set(region.border_vertices())
        interior = set(int(v) for f in region.facets for v in mesh.facets[f]) - border
        region.pinned = sorted(v for v in interior if len(users[v]) > 1)

    def position(region, v):
        found = [(loop, i) for loop in region.loops for i, u in enumerate(loop) if u == v]
        return found[0] if len(found) == 1 else None

    def removable(v) -> bool:
        for r in users[v]:
            found = position(regions[r], v)
            if found is None: return False
            loop, i = found
            if len(loop) <= 3: return False
            u, w = loop[i - 1], loop[(i + 1) % len(loop)]
            axes = regions[r].axes
            if orient2d(*(_projected(mesh, x, axes, kernel) for x in (u, v, w))) != Sign.ZERO: return False
        return True

    candidates = sorted(set(v for region in regions if len(region.facets) > 1 for v in region.border_vertices()))
    removed = 0
    changed = True
    while changed:
        changed = False
        for v in candidates:
            if v not in users or not removable(v): continue
            for r in users[v]:
                loop, i = position(regions[r], v)
                del loop[i]
            del users[v]
            removed += 1
            changed = True
    return removed


def _enclosing_triangle(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    xy = np.array(points, dtype=float)
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    center = np.floor(0.5 * (lo + hi))
    radius = 2.0 ** np.ceil(np.log2(float(np.max(hi - lo)) + 2.0))
    cx, cy = center
    return [(cx - 4 * radius, cy - 2 * radius), (cx + 4 * radius, cy - 2 * radius), (cx, cy + 4 * radius)]


def retriangulate_region(mesh: TriMesh, region: Region, kernel: ArithmeticKernel,
                         **cdt_kwargs) -> list[tuple[int, int, int]]:
    """
    Triangles of the region rebuilt from its simplified borders, in mesh
    vertex ids, oriented like the region facets.
    """
    vertices = sorted(set(region.border_vertices()) | set(region.pinned))
    points = {v: _projected(mesh, v, region.axes, kernel) for v in vertices}
    cdt = RegionCDT(kernel, **cdt_kwargs)
    cdt.init(*(point2_from_double(p, kernel) for p in _enclosing_triangle([p.approx() for p in points.values()])))

    local = {v: cdt.insert_vertex(points[v]) for v in vertices}
    for loop in region.loops:
        for i, v in enumerate(loop):
            cdt.insert_constraint(local[v], local[loop[(i + 1) % len(loop)]], 1)

    to_mesh = {l: v for v, l in local.items()}
    triangles = [tuple(to_mesh[v] for v in cdt.T[3 * t:3 * t + 3]) for t in sorted(_odd_triangles(cdt))]

    corners = (_projected(mesh, int(v), region.axes, kernel) for v in mesh.facets[region.facets[0]])
    if orient2d(*corners) == Sign.NEGATIVE: triangles = [(a, c, b) for a, b, c in triangles]
    return triangles


def _odd_triangles(cdt: CDT) -> set[int]:
    """ Triangles separated from the enclosing triangle's corners by an odd number of constraints. """
    start = next(t for t in range(cdt.nT) if 0 in cdt.T[3 * t:3 * t + 3])
    parity = {start: 0}
    todo = [start]
    while todo:
        t = todo.pop()
        for le in range(3):
            s = cdt.Tadj[3 * t + le]
            if s < 0 or s in parity: continue
            a, b = cdt.T[3 * t + (le + 1) % 3], cdt.T[3 * t + (le + 2) % 3]
            parity[s] = parity[t] ^ (1 if cdt.edge_constraints(a, b) else 0)
            todo.append(s)
    return {t for t, p in parity.items() if p == 1}


def simplify(mesh: TriMesh, kernel: ArithmeticKernel | str = 'mpfloat', threads: int = None,
             verbose: bool = False, stats: dict = None, **cdt_kwargs) -> TriMesh:
    """
    Merge and retriangulate every coplanar region of more than one facet.
    """
    kernel = get_kernel(kernel)
    if mesh.nb_facets == 0: return mesh
    regions = [Region(facets, dominant_axis(mesh.facet_points(facets[0], kernel)))
               for facets in detect_coplanar_regions(mesh, kernel)]
    for region in regions: extract_borders(mesh, region)
    removed = simplify_borders(mesh, regions, kernel)

    merged = [region for region in regions if len(region.facets) > 1]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        rebuilt = list(executor.map(lambda region: retriangulate_region(mesh, region, kernel, **cdt_kwargs),
                                    merged))

    facets, operands, sources = [], [], []
    for region in regions:
        if len(region.facets) > 1: continue
        f = region.facets[0]
        facets.append(tuple(int(v) for v in mesh.facets[f]))
        operands.append(mesh.operands[f])
        sources.append(mesh.sources[f])
    for region, triangles in zip(merged, rebuilt):
        bits = 0
        for f in region.facets: bits |= int(mesh.operands[f])
        facets.extend(triangles)
        operands.extend([bits] * len(triangles))
        sources.extend([int(mesh.sources[region.facets[0]])] * len(triangles))

    pinched = sum(1 for region in merged if region.pinched)
    if stats is not None:
        stats.update({'regions': len(merged), 'removed_vertices': removed, 'pinched_regions': pinched,
                      'nb_facets_in': mesh.nb_facets, 'nb_facets_out': len(facets)})
    if verbose:
        print(f'Simplify: {len(merged)} coplanar regions, {removed} border vertices removed, '
              f'{mesh.nb_facets} -> {len(facets)} facets.')
        if pinched: print(f'Simplify: {pinched} regions have a border touching itself.')
    return TriMesh(mesh.vertices, facets, operands, sources, mesh.exact).compact()
