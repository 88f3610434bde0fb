# =============================================================================
# Exact triangle-triangle intersection with symbolic output.
#
# A triangle (P1, P2, P3) is split in 7 open cells: 3 vertices, 3 open edges
# and the open interior. Every intersection point is reported as the pair of
# cells (one per triangle) that contain it, without constructing anything.
# The construction happens later, in corefine, from that encoding.
#
# Edge naming: E1 = (P2, P3), E2 = (P3, P1), E3 = (P1, P2), so that Ek is
# the edge opposite Vk.
# =============================================================================

from enum import IntEnum
from typing import NamedTuple
from meshcsg.kernel import Sign
from meshcsg.geometry.exact_geom import HPoint3, as_hpoint3
from meshcsg.geometry.predicates import orient2d, orient3d, dominant_axis, point_lexico_compare, \
    PredicateCache


class TriSimplex(IntEnum):
    V1 = 0
    V2 = 1
    V3 = 2
    E1 = 3
    E2 = 4
    E3 = 5
    T = 6

    def is_vertex(self) -> bool:
        return self <= TriSimplex.V3

    def is_edge(self) -> bool:
        return TriSimplex.E1 <= self <= TriSimplex.E3

    def vertices(self) -> tuple[int, ...]:
        """ Local indices (0, 1, 2) of the triangle vertices bounding this cell. """
        if self.is_vertex(): return (int(self),)
        if self.is_edge(): return EDGE_VERTICES[self]
        return (0, 1, 2)


EDGE_VERTICES = {TriSimplex.E1: (1, 2), TriSimplex.E2: (2, 0), TriSimplex.E3: (0, 1)}


def edge_of(i: int, j: int) -> TriSimplex:
    """ Edge through local vertices i and j. """
    return TriSimplex(3 + (3 - i - j))


def region(o1: Sign, o2: Sign, o3: Sign) -> TriSimplex:
    """
    Cell of a triangle from the three signs of its edges E3, E1, E2
    (in that order), none of them strictly outside.
    """
    zeros = (o1 == Sign.ZERO, o2 == Sign.ZERO, o3 == Sign.ZERO)
    return _REGION_TABLE[zeros]


_REGION_TABLE = {
    (False, False, False): TriSimplex.T,
    (True, False, False): TriSimplex.E3,
    (False, True, False): TriSimplex.E1,
    (False, False, True): TriSimplex.E2,
    (True, True, False): TriSimplex.V2,
    (False, True, True): TriSimplex.V3,
    (True, False, True): TriSimplex.V1,
}


def same_edge(s1: TriSimplex, s2: TriSimplex) -> bool:
    """
    True iff both cells lie on one edge: the same edge twice, an edge and
    one of its endpoints, or two distinct vertices.
    """
    if s1.is_vertex() and s2.is_vertex(): return s1 != s2
    if s1.is_edge() and s2.is_edge(): return s1 == s2
    if s1.is_edge() and s2.is_vertex(): return int(s2) in EDGE_VERTICES[s1]
    if s2.is_edge() and s1.is_vertex(): return int(s1) in EDGE_VERTICES[s2]
    return False


class TriTriResult(NamedTuple):
    """
    points: sorted list of (cell in t, cell in t2) pairs.
    edges: pairs of indices into points, the boundary segments of the intersection.
    """
    points: list[tuple[TriSimplex, TriSimplex]]
    edges: list[tuple[int, int]]


class _Orienter:
    """ orient3d on local vertex ids, memoized by global ids when a cache is given. """
    def __init__(self, points: dict, cache: PredicateCache = None):
        self.points = points
        self.cache = cache


    def __call__(self, a, b, c, d) -> Sign:
        if self.cache is None:
            return orient3d(*(self.points[k] for k in (a, b, c, d)))
        return self.cache.get((a, b, c, d), lambda key: orient3d(*(self.points[k] for k in key)))


def triangle_triangle(t, t2, cache: PredicateCache = None,
                      ids: tuple = None, ids2: tuple = None) -> TriTriResult:
    """
    Intersection of two triangles, each given as three points (HPoint3 or
    double triples). With a cache, ids and ids2 are the global vertex ids
    used to key it; two triangles sharing a vertex must give it the same id.
    """
    t = tuple(as_hpoint3(p) for p in t)
    t2 = tuple(as_hpoint3(p) for p in t2)
    if cache is None or ids is None or ids2 is None:
        cache = None
        ids, ids2 = ('p0', 'p1', 'p2'), ('q0', 'q1', 'q2')
    points = dict(zip(ids, t))
    points.update(zip(ids2, t2))
    orient = _Orienter(points, cache)

    # Early exit: one triangle strictly on one side of the other's plane.
    signs = [orient(*ids2, v) for v in ids]
    if all(s == Sign.POSITIVE for s in signs) or all(s == Sign.NEGATIVE for s in signs):
        return TriTriResult([], [])
    signs2 = [orient(*ids, v) for v in ids2]
    if all(s == Sign.POSITIVE for s in signs2) or all(s == Sign.NEGATIVE for s in signs2):
        return TriTriResult([], [])
    coplanar = all(s == Sign.ZERO for s in signs)

    found = set()
    for edge in (TriSimplex.E1, TriSimplex.E2, TriSimplex.E3):
        a, b = EDGE_VERTICES[edge]
        for in_edge, in_triangle in _edge_triangle(ids[a], ids[b], ids2, orient, points, (a, b, edge)):
            found.add((in_edge, in_triangle))
    for edge in (TriSimplex.E1, TriSimplex.E2, TriSimplex.E3):
        a, b = EDGE_VERTICES[edge]
        for in_edge, in_triangle in _edge_triangle(ids2[a], ids2[b], ids, orient, points, (a, b, edge)):
            found.add((in_triangle, in_edge))

    result = sorted(found)
    if len(result) < 2: return TriTriResult(result, [])
    if len(result) == 2 or not coplanar: return TriTriResult(result, [(0, 1)])

    edges = []
    for i in range(len(result)):
        for j in range(i + 1, len(result)):
            if same_edge(result[i][0], result[j][0]) or same_edge(result[i][1], result[j][1]):
                edges.append((i, j))
    return TriTriResult(result, edges)


def _edge_cell(code: str, edge_info: tuple) -> TriSimplex:
    a, b, edge = edge_info
    if code == 'a': return TriSimplex(a)
    if code == 'b': return TriSimplex(b)
    return edge


def _edge_triangle(qa, qb, triangle_ids: tuple, orient: _Orienter, points: dict, edge_info: tuple) -> list:
    """
    Cells of the intersection points of the segment (qa, qb) with a triangle,
    as (cell in the segment's triangle, cell in the other triangle).
    """
    p1, p2, p3 = triangle_ids
    s1 = orient(p1, p2, p3, qa)
    s2 = orient(p1, p2, p3, qb)
    if s1 * s2 == Sign.POSITIVE: return []
    if s1 == Sign.ZERO and s2 == Sign.ZERO:
        return [(_edge_cell(code, edge_info), cell)
                for code, cell in edge_triangle_2d(points[qa], points[qb], tuple(points[k] for k in triangle_ids))]

    o1 = orient(qa, qb, p1, p2)
    o2 = orient(qa, qb, p2, p3)
    o3 = orient(qa, qb, p3, p1)
    nonzero = {o for o in (o1, o2, o3) if o != Sign.ZERO}
    if len(nonzero) > 1: return []

    code = 'a' if s1 == Sign.ZERO else 'b' if s2 == Sign.ZERO else 'E'
    return [(_edge_cell(code, edge_info), region(o1, o2, o3))]


def edge_triangle(q1, q2, triangle, cache: PredicateCache = None) -> list[tuple[str, TriSimplex]]:
    """
    Cells of the intersection of segment (q1, q2) with a triangle. The
    segment cell is 'a' for q1, 'b' for q2 and 'E' for its interior.
    """
    q1, q2 = as_hpoint3(q1), as_hpoint3(q2)
    triangle = tuple(as_hpoint3(p) for p in triangle)
    points = {'q0': q1, 'q1': q2, 'p0': triangle[0], 'p1': triangle[1], 'p2': triangle[2]}
    orient = _Orienter(points, None)
    codes = {TriSimplex.V1: 'a', TriSimplex.V2: 'b', TriSimplex.E3: 'E'}
    found = _edge_triangle('q0', 'q1', ('p0', 'p1', 'p2'), orient, points, (0, 1, TriSimplex.E3))
    return sorted({(codes[e], cell) for e, cell in found})


##################################################
# Coplanar case.

def _edge_sign(a, b, q, orientation: Sign) -> Sign:
    return orient2d(a, b, q) * orientation


def _point_in_triangle(q, p: tuple, orientation: Sign) -> TriSimplex | None:
    o1 = _edge_sign(p[0], p[1], q, orientation)  # E3
    o2 = _edge_sign(p[1], p[2], q, orientation)  # E1
    o3 = _edge_sign(p[2], p[0], q, orientation)  # E2
    if Sign.NEGATIVE in (o1, o2, o3): return None
    return region(o1, o2, o3)


def edge_triangle_2d(q1: HPoint3, q2: HPoint3, triangle: tuple, axes: tuple[int, int] = None) \
        -> list[tuple[str, TriSimplex]]:
    """
    Segment (q1, q2) against a coplanar triangle, in the projection that
    drops the dominant normal axis of the triangle.
    """
    if axes is None: axes = dominant_axis(triangle)
    p = tuple(v.project(axes) for v in triangle)
    a, b = q1.project(axes), q2.project(axes)
    orientation = orient2d(*p)

    found = set()
    for code, q in (('a', a), ('b', b)):
        cell = _point_in_triangle(q, p, orientation)
        if cell is not None: found.add((code, cell))

    for edge in (TriSimplex.E1, TriSimplex.E2, TriSimplex.E3):
        i, j = EDGE_VERTICES[edge]
        pa, pb = p[i], p[j]
        oa, ob = orient2d(a, b, pa), orient2d(a, b, pb)
        if oa == Sign.ZERO and ob == Sign.ZERO:
            found.update(_collinear_overlap((q1, q2), (triangle[i], triangle[j]), (i, j, edge)))
            continue
        d1, d2 = orient2d(pa, pb, a), orient2d(pa, pb, b)
        if oa * ob == Sign.POSITIVE or d1 * d2 == Sign.POSITIVE: continue

        code = 'a' if d1 == Sign.ZERO else 'b' if d2 == Sign.ZERO else 'E'
        cell = TriSimplex(i) if oa == Sign.ZERO else TriSimplex(j) if ob == Sign.ZERO else edge
        found.add((code, cell))
    return sorted(found)


def _collinear_overlap(segment: tuple, edge_points: tuple, edge_info: tuple) -> list[tuple[str, TriSimplex]]:
    """
    Overlap of two collinear segments by comparing their endpoints along the
    line. The lexicographic point order is monotone along any line.
    """
    i, j, edge = edge_info
    q1, q2 = segment
    pa, pb = edge_points
    lo_e, hi_e = (q1, q2) if point_lexico_compare(q1, q2) < 0 else (q2, q1)
    lo_t, hi_t = (pa, pb) if point_lexico_compare(pa, pb) < 0 else (pb, pa)
    lo = lo_e if point_lexico_compare(lo_e, lo_t) >= 0 else lo_t
    hi = hi_e if point_lexico_compare(hi_e, hi_t) <= 0 else hi_t
    order = point_lexico_compare(lo, hi)
    if order > 0: return []

    def cells(x):
        code = 'a' if point_lexico_compare(x, q1) == 0 else 'b' if point_lexico_compare(x, q2) == 0 else 'E'
        cell = TriSimplex(i) if point_lexico_compare(x, pa) == 0 else \
            TriSimplex(j) if point_lexico_compare(x, pb) == 0 else edge
        return code, cell

    if order == 0: return [cells(lo)]
    return [cells(lo), cells(hi)]
