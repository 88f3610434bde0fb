# =============================================================================
# Exact geometric predicates on homogeneous points.
#
# Every determinant is written once, on numbers supporting +, - and *. It is
# first evaluated on the cached coordinate intervals of the points and only
# when the interval straddles zero again on the exact kernel numbers.
#
# Conventions:
#   orient2d  POSITIVE = counterclockwise.
#   orient3d  POSITIVE = det[p1 - p0, p2 - p0, p3 - p0] > 0.
#   in_circle POSITIVE = query inside the circle of a counterclockwise triangle.
#
# Points given as plain double tuples are converted with the expansion kernel.
# =============================================================================

from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Sequence
from meshcsg.errors import DegenerateInput
from meshcsg.kernel import Sign
from meshcsg.geometry.exact_geom import HPoint3, HPoint2, as_hpoint3, point2_from_double, cross, dot

_FILTER_ENABLED = True


def set_filter_enabled(flag: bool):
    """ Switch the interval filter on or off. Off forces every predicate down the exact path. """
    global _FILTER_ENABLED
    _FILTER_ENABLED = bool(flag)


def filter_enabled() -> bool:
    return _FILTER_ENABLED


def _filtered(formula: Callable, interval_args: Callable, exact_args: Callable) -> Sign:
    """
    Evaluate formula(*args) -> Sign | None on intervals, then on exact numbers.
    """
    if _FILTER_ENABLED:
        sign = formula(*interval_args())
        if sign is not None: return sign
    sign = formula(*exact_args())
    assert sign is not None, 'Predicates: Exact evaluation returned an uncertain sign.'
    return sign


def _product_sign(*signs) -> Sign | None:
    result = Sign.POSITIVE
    for sign in signs:
        if sign is None: return None
        result = result * sign
    return result


def _as_hpoint2(p) -> HPoint2:
    return p if isinstance(p, HPoint2) else point2_from_double(p)


##################################################
# Homogeneous differences. With q - p in cartesian = (X, Y[, Z]) / W.

def _difference2(p: tuple, q: tuple, same_w: bool) -> tuple:
    px, py, pw = p
    qx, qy, qw = q
    if same_w: return qx - px, qy - py, qw
    return pw * qx - qw * px, pw * qy - qw * py, pw * qw


def _difference3(p: tuple, q: tuple, same_w: bool) -> tuple:
    px, py, pz, pw = p
    qx, qy, qz, qw = q
    if same_w: return qx - px, qy - py, qz - pz, qw
    return pw * qx - qw * px, pw * qy - qw * py, pw * qz - qw * pz, pw * qw


##################################################
# Orientation.

def _orient2d_formula(p0, p1, p2, same1, same2) -> Sign | None:
    ux, uy, uw = _difference2(p0, p1, same1)
    vx, vy, vw = _difference2(p0, p2, same2)
    return _product_sign(uw.sign(), vw.sign(), (ux * vy - uy * vx).sign())


def orient2d(p0: HPoint2, p1: HPoint2, p2: HPoint2) -> Sign:
    p0, p1, p2 = _as_hpoint2(p0), _as_hpoint2(p1), _as_hpoint2(p2)
    same = p0.kernel.same
    same1, same2 = same(p0.w, p1.w), same(p0.w, p2.w)
    return _filtered(_orient2d_formula,
                     lambda: (p0.intervals(), p1.intervals(), p2.intervals(), same1, same2),
                     lambda: (p0.coordinates, p1.coordinates, p2.coordinates, same1, same2))


def _orient3d_formula(p0, p1, p2, p3, same1, same2, same3) -> Sign | None:
    ux, uy, uz, uw = _difference3(p0, p1, same1)
    vx, vy, vz, vw = _difference3(p0, p2, same2)
    tx, ty, tz, tw = _difference3(p0, p3, same3)
    det = ux * (vy * tz - vz * ty) - uy * (vx * tz - vz * tx) + uz * (vx * ty - vy * tx)
    return _product_sign(uw.sign(), vw.sign(), tw.sign(), det.sign())


def orient3d(p0, p1, p2, p3) -> Sign:
    p0, p1, p2, p3 = (as_hpoint3(p) for p in (p0, p1, p2, p3))
    same = p0.kernel.same
    flags = (same(p0.w, p1.w), same(p0.w, p2.w), same(p0.w, p3.w))
    return _filtered(_orient3d_formula,
                     lambda: (p0.intervals(), p1.intervals(), p2.intervals(), p3.intervals(), *flags),
                     lambda: (p0.coordinates, p1.coordinates, p2.coordinates, p3.coordinates, *flags))


##################################################
# Point order.

def _ratio_formula(x1, w1, x2, w2, same_w) -> Sign | None:
    if same_w: return _product_sign((x1 - x2).sign(), w1.sign())
    return _product_sign(w1.sign(), w2.sign(), (w2 * x1 - w1 * x2).sign())


def ratio_compare(x1, w1, x2, w2) -> Sign:
    """
    Sign of x1/w1 - x2/w2 for exact kernel numbers.
    """
    x1_sign, x2_sign = x1.sign(), x2.sign()
    if x1_sign == Sign.ZERO and x2_sign == Sign.ZERO: return Sign.ZERO
    value1, value2 = x1_sign * w1.sign(), x2_sign * w2.sign()
    if value1 != value2: return Sign.of(int(value1) - int(value2))
    if value1 == Sign.ZERO: return Sign.ZERO

    same_w = w1.same_as(w2)
    return _filtered(_ratio_formula,
                     lambda: (x1.interval(), w1.interval(), x2.interval(), w2.interval(), same_w),
                     lambda: (x1, w1, x2, w2, same_w))


def point_lexico_compare(p, q) -> Sign:
    """
    Total order on points, lexicographic on cartesian coordinates and thus
    monotone along any line. Under a kernel with unique points, two equal
    positive weights let the raw coordinates be compared directly.
    Works on HPoint3 and HPoint2.
    """
    kernel = p.kernel
    pc, qc = p.coordinates, q.coordinates
    if kernel.unique_points and kernel.same(pc[-1], qc[-1]) and pc[-1].sign() == Sign.POSITIVE:
        for a, b in zip(pc[:-1], qc[:-1]):
            order = kernel.compare(a, b)
            if order != Sign.ZERO: return order
        return Sign.ZERO

    for axis in range(len(pc) - 1):
        order = ratio_compare(pc[axis], pc[-1], qc[axis], qc[-1])
        if order != Sign.ZERO: return order
    return Sign.ZERO


point_order_key = cmp_to_key(point_lexico_compare)


##################################################
# In-circle with symbolic perturbation.

def lifted_value(p: HPoint2) -> float:
    """ Nearest double of x^2 + y^2 in cartesian coordinates. """
    x, y = p.to_fractions()
    return float(x * x + y * y)


def _in_circle_lifted_formula(p0, p1, p2, p3, l0, l1, l2, l3, same) -> Sign | None:
    # Differences to the query point p3. Row k: (X, Y, W) of p_k - p3 and L_k = l_k - l3.
    rows = [_difference2(p3, p, s) for p, s in zip((p0, p1, p2), same)]
    lifts = [l - l3 for l in (l0, l1, l2)]
    (x0, y0, w0), (x1, y1, w1), (x2, y2, w2) = rows
    det = lifts[0] * w0 * (x1 * y2 - y1 * x2) \
        - lifts[1] * w1 * (x0 * y2 - y0 * x2) \
        + lifts[2] * w2 * (x0 * y1 - y0 * x1)
    return _product_sign(w0.sign(), w1.sign(), w2.sign(), det.sign())


def _in_circle_exact_formula(p0, p1, p2, p3, same) -> Sign | None:
    # Differences to p3, lifted coordinate L = X^2 + Y^2 over W^2. All W factors
    # come squared once the denominators are cleared, so they drop out of the sign.
    rows = [_difference2(p3, p, s) for p, s in zip((p0, p1, p2), same)]
    (x0, y0, w0), (x1, y1, w1), (x2, y2, w2) = rows
    l0, l1, l2 = (x * x + y * y for x, y, _ in rows)
    det = l0 * w1 * w2 * (x1 * y2 - y1 * x2) \
        - l1 * w0 * w2 * (x0 * y2 - y0 * x2) \
        + l2 * w0 * w1 * (x0 * y1 - y0 * x1)
    return det.sign()


def _sos_in_circle(points: Sequence[HPoint2]) -> Sign:
    """
    Resolve an exactly zero in-circle determinant with Simulation of
    Simplicity. Each point's lifted coordinate is perturbed by eps^(2^rank),
    rank given by the point order. The first nonzero cofactor wins.
    """
    ranked = sorted(range(4), key=lambda i: point_order_key(points[i]))
    for position in ranked:
        others = [points[i] for i in range(4) if i != position]
        cofactor = orient2d(*others)
        if cofactor != Sign.ZERO:
            return cofactor if position % 2 == 0 else -cofactor
    raise AssertionError('Predicates: Simulation of Simplicity met four identical or collinear points.')


def in_circle_l(p0, p1, p2, p3, l0: float, l1: float, l2: float, l3: float) -> Sign:
    """
    In-circle on lifted coordinates l_i given as doubles (nearest double of
    x_i^2 + y_i^2, always the same double for the same point). Never ZERO.
    """
    points = [_as_hpoint2(p) for p in (p0, p1, p2, p3)]
    kernel = points[0].kernel
    same = tuple(kernel.same(points[3].w, p.w) for p in points[:3])
    lifts = [kernel.number(float(l)) for l in (l0, l1, l2, l3)]
    sign = _filtered(_in_circle_lifted_formula,
                     lambda: (*(p.intervals() for p in points), *(l.interval() for l in lifts), same),
                     lambda: (*(p.coordinates for p in points), *lifts, same))
    if sign != Sign.ZERO: return sign
    return _sos_in_circle(points)


def in_circle(p0, p1, p2, p3) -> Sign:
    """
    In-circle with exact lifted coordinates. Never ZERO.
    """
    points = [_as_hpoint2(p) for p in (p0, p1, p2, p3)]
    kernel = points[0].kernel
    same = tuple(kernel.same(points[3].w, p.w) for p in points[:3])
    sign = _filtered(_in_circle_exact_formula,
                     lambda: (*(p.intervals() for p in points), same),
                     lambda: (*(p.coordinates for p in points), same))
    if sign != Sign.ZERO: return sign
    return _sos_in_circle(points)


##################################################
# Normals and radial predicates.

def _homogeneous_normal(a: HPoint3, b: HPoint3, c: HPoint3) -> tuple[tuple, Sign]:
    """
    Normal of (a, b, c) as (n, s): the true normal is n scaled by a positive
    number times s.
    """
    same = a.kernel.same
    u = _difference3(a.coordinates, b.coordinates, same(a.w, b.w))
    v = _difference3(a.coordinates, c.coordinates, same(a.w, c.w))
    return cross(u[:3], v[:3]), u[3].sign() * v[3].sign()


class TriangleNormal:
    """
    Exact normal of a triangle with its sign factor, cached once per dart
    during radial sorts.

    Attributes:
        vector: tuple of 3 kernel numbers.
        factor: Sign. True normal = vector * factor * positive scalar.
    """
    __slots__ = ('vector', 'factor', '_intervals')

    def __init__(self, a: HPoint3, b: HPoint3, c: HPoint3):
        self.vector, self.factor = _homogeneous_normal(a, b, c)
        self._intervals = None


    def intervals(self) -> tuple:
        if self._intervals is None:
            self._intervals = tuple(c.interval() for c in self.vector)
        return self._intervals


def _dot_formula(n1, n2) -> Sign | None:
    return dot(n1, n2).sign()


def normals_dot_sign(n1: TriangleNormal, n2: TriangleNormal) -> Sign:
    sign = _filtered(_dot_formula, lambda: (n1.intervals(), n2.intervals()),
                     lambda: (n1.vector, n2.vector))
    return sign * n1.factor * n2.factor


def radial_orient(p1, p2, p3, p4) -> Sign:
    """ Side of p4 with respect to the plane (p1, p2, p3) around the bundle edge (p1, p2). """
    return orient3d(p1, p2, p3, p4)


def radial_Norient(p1, p2, p3, p4) -> Sign:
    """ Sign of the dot product of the normals of (p1, p2, p3) and (p1, p2, p4). """
    return normals_dot_sign(TriangleNormal(as_hpoint3(p1), as_hpoint3(p2), as_hpoint3(p3)),
                            TriangleNormal(as_hpoint3(p1), as_hpoint3(p2), as_hpoint3(p4)))


def _abs_compare(a, b) -> Sign:
    abs_a = a if a.sign() >= 0 else -a
    abs_b = b if b.sign() >= 0 else -b
    return (abs_a - abs_b).sign()


def dominant_axis(triangle) -> tuple[int, int]:
    """
    The two axes to keep when projecting a triangle: the dropped axis is the
    largest normal component in magnitude, the lower axis on ties. Kept axes
    come in cyclic order, so the projected orientation is the sign of the
    dropped normal component.
    """
    a, b, c = (as_hpoint3(p) for p in triangle)
    normal, _ = _homogeneous_normal(a, b, c)
    if all(n.is_zero() for n in normal):
        raise DegenerateInput(f'Predicates: Triangle {[p.approx() for p in (a, b, c)]} is degenerate.')

    dropped = 0
    for axis in (1, 2):
        if _abs_compare(normal[axis], normal[dropped]) > 0: dropped = axis
    return (dropped + 1) % 3, (dropped + 2) % 3


def normals_colinear(t1, t2) -> bool:
    """ True iff the two triangles have parallel normals pointing the same way. """
    n1 = TriangleNormal(*(as_hpoint3(p) for p in t1))
    n2 = TriangleNormal(*(as_hpoint3(p) for p in t2))
    if not all(c.is_zero() for c in cross(n1.vector, n2.vector)): return False
    return normals_dot_sign(n1, n2) == Sign.POSITIVE


##################################################
# Cache.

class PredicateCache:
    """
    Memoizes determinant predicates on vertex ids. The key is the sorted id
    tuple; the sign of the requested order follows from the parity of the
    sorting permutation.

    Attributes:
        table: dict. Sorted id tuple -> Sign for that order.
        hits: int.
        misses: int.
    """
    def __init__(self):
        self.table = {}
        self.hits = 0
        self.misses = 0


    def get(self, ids: tuple, compute: Callable[[tuple], Sign]) -> Sign:
        """
        compute(sorted_ids) evaluates the predicate on the sorted argument order.
        """
        order = sorted(range(len(ids)), key=ids.__getitem__)
        key = tuple(ids[i] for i in order)
        for i in range(len(key) - 1):
            if key[i] == key[i + 1]: return Sign.ZERO

        if key in self.table:
            self.hits += 1
            sign = self.table[key]
        else:
            self.misses += 1
            sign = compute(key)
            self.table[key] = sign
        return -sign if permutation_parity(order) else sign


    def clear(self):
        self.table.clear()
        self.hits = self.misses = 0


def permutation_parity(order: Sequence[int]) -> int:
    """ 0 for even permutations, 1 for odd ones. """
    parity = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]: parity ^= 1
    return parity


def exact_lifts(points: Sequence[HPoint2]) -> list[Fraction]:
    """ Exact x^2 + y^2 of every point as a Fraction. Used by tests and debug output. """
    return [x * x + y * y for x, y in (p.to_fractions() for p in points)]
