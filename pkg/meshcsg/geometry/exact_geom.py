# =============================================================================
# Exact homogeneous points and the constructions of intersection points.
#
# A point is (x, y, z, w) in the number type of its kernel, with cartesian
# value (x/w, y/w, z/w). Constructions never divide: the shared denominator
# goes to w. Input vertices have w = 1, and the construction formulas below
# rely on that for their inputs.
# =============================================================================

import math
from fractions import Fraction
from meshcsg.errors import InvalidInput, DegenerateConstruction
from meshcsg.kernel import ArithmeticKernel, Interval, get_kernel


class HPoint3:
    """
    Exact point in homogeneous coordinates.

    Attributes:
        x, y, z, w: kernel numbers, w != 0.
        kernel: ArithmeticKernel that owns the numbers.
    """
    __slots__ = ('x', 'y', 'z', 'w', 'kernel', '_intervals')

    def __init__(self, x, y, z, w, kernel: ArithmeticKernel, normalize: bool = True):
        assert not w.is_zero(), 'HPoint3: Homogeneous coordinate w must not be zero.'
        if normalize: x, y, z, w = kernel.normalize((x, y, z, w))
        self.x, self.y, self.z, self.w = x, y, z, w
        self.kernel = kernel
        self._intervals = None


    @property
    def coordinates(self) -> tuple:
        return self.x, self.y, self.z, self.w


    def __getitem__(self, axis: int):
        return self.coordinates[axis]


    def intervals(self) -> tuple[Interval, ...]:
        """ One interval per coordinate, computed on first use. """
        if self._intervals is None:
            self._intervals = tuple(c.interval() for c in self.coordinates)
        return self._intervals


    def to_fractions(self) -> tuple[Fraction, Fraction, Fraction]:
        w = self.w.to_fraction()
        return tuple(c.to_fraction() / w for c in (self.x, self.y, self.z))


    def approx(self) -> tuple[float, float, float]:
        """ Nearest double of each cartesian coordinate. """
        return tuple(float(c) for c in self.to_fractions())


    def is_exact_double(self) -> bool:
        return all(Fraction(a) == f for a, f in zip(self.approx(), self.to_fractions()))


    def project(self, axes: tuple[int, int]) -> 'HPoint2':
        return HPoint2(self[axes[0]], self[axes[1]], self.w, self.kernel, normalize=False)


    def __repr__(self):
        return f'HPoint3({self.approx()})'



class HPoint2:
    """
    Exact 2D point in homogeneous coordinates, usually a projection of an HPoint3.

    Attributes:
        x, y, w: kernel numbers, w != 0.
        kernel: ArithmeticKernel that owns the numbers.
    """
    __slots__ = ('x', 'y', 'w', 'kernel', '_intervals')

    def __init__(self, x, y, w, kernel: ArithmeticKernel, normalize: bool = True):
        assert not w.is_zero(), 'HPoint2: Homogeneous coordinate w must not be zero.'
        if normalize: x, y, w = kernel.normalize((x, y, w))
        self.x, self.y, self.w = x, y, w
        self.kernel = kernel
        self._intervals = None


    @property
    def coordinates(self) -> tuple:
        return self.x, self.y, self.w


    def intervals(self) -> tuple[Interval, ...]:
        if self._intervals is None:
            self._intervals = tuple(c.interval() for c in self.coordinates)
        return self._intervals


    def to_fractions(self) -> tuple[Fraction, Fraction]:
        w = self.w.to_fraction()
        return self.x.to_fraction() / w, self.y.to_fraction() / w


    def approx(self) -> tuple[float, float]:
        return tuple(float(c) for c in self.to_fractions())


    def __repr__(self):
        return f'HPoint2({self.approx()})'



class Rational:
    """ Exact ratio num/den of two kernel numbers. """
    __slots__ = ('num', 'den')

    def __init__(self, num, den):
        self.num = num
        self.den = den


    def to_fraction(self) -> Fraction:
        return self.num.to_fraction() / self.den.to_fraction()



def point_from_double(p, kernel: ArithmeticKernel | str = 'expansion') -> HPoint3:
    kernel = get_kernel(kernel)
    if len(p) != 3 or not all(math.isfinite(c) for c in p):
        raise InvalidInput(f'ExactGeom: Input point {tuple(p)} is not a finite 3D point.')
    x, y, z = (kernel.number(float(c)) for c in p)
    return HPoint3(x, y, z, kernel.number(1.0), kernel, normalize=False)


def point2_from_double(p, kernel: ArithmeticKernel | str = 'expansion') -> HPoint2:
    kernel = get_kernel(kernel)
    if len(p) != 2 or not all(math.isfinite(c) for c in p):
        raise InvalidInput(f'ExactGeom: Input point {tuple(p)} is not a finite 2D point.')
    x, y = (kernel.number(float(c)) for c in p)
    return HPoint2(x, y, kernel.number(1.0), kernel, normalize=False)


def as_hpoint3(p, kernel: ArithmeticKernel | str = 'expansion') -> HPoint3:
    return p if isinstance(p, HPoint3) else point_from_double(p, kernel)


##################################################
# Vector helpers on points with w = 1. They return tuples of kernel numbers.

def difference(a: HPoint3, b: HPoint3) -> tuple:
    return a.x - b.x, a.y - b.y, a.z - b.z


def cross(u: tuple, v: tuple) -> tuple:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def dot(u: tuple, v: tuple):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def det3(r0: tuple, r1: tuple, r2: tuple):
    return dot(r0, cross(r1, r2))


def plane_normal(p1: HPoint3, p2: HPoint3, p3: HPoint3) -> tuple:
    return cross(difference(p2, p1), difference(p3, p1))


##################################################
# Constructions.

def mix(t: Rational, q1: HPoint3, q2: HPoint3) -> HPoint3:
    """
    q1 + t (q2 - q1) as [a q2 + (b - a) q1 ; b] for t = a/b.
    """
    a, b = t.num, t.den
    if b.is_zero():
        raise DegenerateConstruction('ExactGeom: mix() got a zero denominator.')
    kernel = q1.kernel
    b_minus_a = b - a
    return HPoint3(a * q2.x + b_minus_a * q1.x,
                   a * q2.y + b_minus_a * q1.y,
                   a * q2.z + b_minus_a * q1.z,
                   b, kernel)


def intersect_edge_triangle_3d(q1: HPoint3, q2: HPoint3, p1: HPoint3, p2: HPoint3, p3: HPoint3) -> HPoint3:
    """
    Intersection of the line (q1, q2) with the support plane of (p1, p2, p3).
    """
    normal = plane_normal(p1, p2, p3)
    numerator = dot(difference(p1, q1), normal)
    denominator = dot(difference(q2, q1), normal)
    if denominator.is_zero():
        raise DegenerateConstruction('ExactGeom: Edge is parallel to the triangle plane, '
                                     'the coplanar case must use intersect_edge_edge_2d().')
    return mix(Rational(numerator, denominator), q1, q2)


def intersect_edge_edge_2d(p1: HPoint3, p2: HPoint3, q1: HPoint3, q2: HPoint3,
                           axes: tuple[int, int]) -> HPoint3:
    """
    Intersection of two coplanar segments, with the parameter along (p1, p2)
    solved by Cramer's rule in the projection that keeps `axes`.
    """
    u, v = axes
    d = (p2[u] - p1[u], p2[v] - p1[v])
    e = (q2[u] - q1[u], q2[v] - q1[v])
    f = (q1[u] - p1[u], q1[v] - p1[v])
    denominator = d[0] * e[1] - d[1] * e[0]
    if denominator.is_zero():
        raise DegenerateConstruction('ExactGeom: Segments are parallel in projection.')
    numerator = f[0] * e[1] - f[1] * e[0]
    return mix(Rational(numerator, denominator), p1, p2)


def intersect_three_planes(t1: tuple, t2: tuple, t3: tuple) -> HPoint3:
    """
    Common point of the support planes of three triangles, each given as a
    triple of HPoint3 with w = 1.
    """
    kernel = t1[0].kernel
    normals = [plane_normal(*t) for t in (t1, t2, t3)]
    offsets = [dot(n, (t[0].x, t[0].y, t[0].z)) for n, t in zip(normals, (t1, t2, t3))]

    w = det3(*normals)
    if w.is_zero():
        raise DegenerateConstruction('ExactGeom: The three planes do not meet in a single point.')

    columns = []
    for axis in range(3):
        rows = [tuple(offsets[i] if k == axis else normals[i][k] for k in range(3)) for i in range(3)]
        columns.append(det3(*rows))
    return HPoint3(columns[0], columns[1], columns[2], w, kernel)


def intersect_lines_2d(p1: HPoint2, p2: HPoint2, q1: HPoint2, q2: HPoint2) -> HPoint2:
    """
    Intersection of the lines (p1, p2) and (q1, q2) with the homogeneous
    cross-product formula. Works on any w.
    """
    line_p = _line_through(p1, p2)
    line_q = _line_through(q1, q2)
    x, y, w = cross(line_p, line_q)
    if w.is_zero():
        raise DegenerateConstruction('ExactGeom: Lines are parallel.')
    return HPoint2(x, y, w, p1.kernel)


def _line_through(a: HPoint2, b: HPoint2) -> tuple:
    return cross(a.coordinates, b.coordinates)


def lift_to_plane(p: HPoint2, axes: tuple[int, int], triangle: tuple) -> HPoint3:
    """
    The 3D point of the support plane of `triangle` whose projection on
    `axes` is p. The dropped axis must have a nonzero normal component.
    """
    kernel = p.kernel
    normal = plane_normal(*triangle)
    u, v = axes
    k = 3 - u - v
    if normal[k].is_zero():
        raise DegenerateConstruction('ExactGeom: Plane is parallel to the dropped axis.')
    offset = dot(normal, (triangle[0].x, triangle[0].y, triangle[0].z))

    coordinates = [None, None, None]
    coordinates[u] = p.x * normal[k]
    coordinates[v] = p.y * normal[k]
    coordinates[k] = offset * p.w - normal[u] * p.x - normal[v] * p.y
    return HPoint3(*coordinates, p.w * normal[k], kernel)


##################################################
# Global vertex table.

class GlobalVertexTable:
    """
    Set of exact points keyed by geometric identity. Points are kept in
    insertion order; a sorted index on top of them answers lookups by binary
    search with the kernel's point order, so two representations of the same
    point always land on the same index.

    Attributes:
        points: list[HPoint3]. Insertion order, index is the vertex id.
    """
    def __init__(self, kernel: ArithmeticKernel):
        self.kernel = kernel
        self.points = []
        self._sorted = []  # ids sorted by point order
        from meshcsg.geometry.predicates import point_lexico_compare
        self._compare = point_lexico_compare


    def __len__(self):
        return len(self.points)


    def _search(self, p: HPoint3) -> tuple[int, bool]:
        lo, hi = 0, len(self._sorted)
        while lo < hi:
            mid = (lo + hi) // 2
            order = self._compare(self.points[self._sorted[mid]], p)
            if order == 0: return mid, True
            if order < 0: lo = mid + 1
            else: hi = mid
        return lo, False


    def find(self, p: HPoint3) -> int | None:
        position, found = self._search(p)
        return self._sorted[position] if found else None


    def insert(self, p: HPoint3) -> int:
        position, found = self._search(p)
        if found: return self._sorted[position]
        self.points.append(p)
        self._sorted.insert(position, len(self.points) - 1)
        return len(self.points) - 1


def vertex_table_insert(table: GlobalVertexTable, p: HPoint3) -> int:
    return table.insert(p)
