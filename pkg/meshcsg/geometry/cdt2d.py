# =============================================================================
# Exact 2D constrained Delaunay triangulation with intersecting constraints.
#
# Storage is a set of flat lists indexed by triangle: T holds 3 vertex ids
# per triangle and Tadj the 3 neighbours, neighbour k being across the edge
# opposite vertex k (edge 0 = (v1, v2)). Lists are only overwritten or grown,
# so a CDT object can be re-initialized and reused without reallocation.
#
# Constraints are recorded per edge, keyed by the sorted vertex pair, as
# chained lists in cnstr_id / cnstr_next. Several collinear overlapping
# constraints can share an edge.
#
# The Delaunay condition uses in_circle with symbolic perturbation, so the
# result does not depend on insertion order. Under the expansion kernel the
# lifted coordinates are rounded doubles, which makes the result a regular
# triangulation; flips therefore always check that the quad is convex.
# =============================================================================

import random
from meshcsg.errors import InvalidInput, DegenerateInput, OutOfDomain
from meshcsg.kernel import Sign, get_kernel, ArithmeticKernel
from meshcsg.geometry.exact_geom import HPoint2, point2_from_double, intersect_lines_2d
from meshcsg.geometry.predicates import orient2d, in_circle, in_circle_l, lifted_value, \
    point_lexico_compare, PredicateCache


class TriangleList:
    """
    Doubly linked list of triangle ids with a per-triangle membership mark.
    Used as the flip stack S of vertex insertion and as the queue Q of
    triangles crossed by a constraint.
    """
    def __init__(self):
        self.next = []
        self.prev = []
        self.marked = []
        self.head = -1
        self.tail = -1


    def _reserve(self, t: int):
        while len(self.marked) <= t:
            self.next.append(-1)
            self.prev.append(-1)
            self.marked.append(False)


    def __contains__(self, t: int) -> bool:
        return t < len(self.marked) and self.marked[t]


    def empty(self) -> bool:
        return self.head < 0


    def push_front(self, t: int):
        self._reserve(t)
        if self.marked[t]: return
        self.marked[t] = True
        self.prev[t] = -1
        self.next[t] = self.head
        if self.head >= 0: self.prev[self.head] = t
        else: self.tail = t
        self.head = t


    def push_back(self, t: int):
        self._reserve(t)
        if self.marked[t]: return
        self.marked[t] = True
        self.next[t] = -1
        self.prev[t] = self.tail
        if self.tail >= 0: self.next[self.tail] = t
        else: self.head = t
        self.tail = t


    def remove(self, t: int):
        if t not in self: return
        p, n = self.prev[t], self.next[t]
        if p >= 0: self.next[p] = n
        else: self.head = n
        if n >= 0: self.prev[n] = p
        else: self.tail = p
        self.marked[t] = False


    def pop_front(self) -> int:
        t = self.head
        assert t >= 0, 'CDT: Pop from an empty triangle list.'
        self.head = self.next[t]
        if self.head >= 0: self.prev[self.head] = -1
        else: self.tail = -1
        self.marked[t] = False
        return t


    def clear(self):
        while not self.empty(): self.pop_front()



class CDT:
    """
    Constrained Delaunay triangulation of exact 2D points inside an enclosing
    triangle t0 given to init().

    Attributes:
        kernel: ArithmeticKernel of the points.
        delaunay: bool. If False, vertex and constraint insertion skip the Delaunay flips.
        points: list[HPoint2]. Vertex id -> point.
        T, Tadj: list[int]. Flat triangle storage, 3 entries per triangle.
        v2T: list[int]. One incident triangle per vertex.
        nT, nV: int. Number of live triangles and vertices.
        constraints: list[tuple[int, int, int]]. Every (i, j, id) given to insert_constraint.
        flipped: bool. True if t0 was given clockwise and stored reversed.
        stats: dict. Counters of flips, walk steps and fallbacks.
    """
    def __init__(self, kernel: ArithmeticKernel | str = 'expansion', delaunay: bool = True,
                 walk_budget: int = 10000, flip_budget_factor: int = 64, seed: int = 0, verbose: bool = False):
        self.kernel = get_kernel(kernel)
        self.delaunay = delaunay
        self.walk_budget = walk_budget
        self.flip_budget_factor = flip_budget_factor
        self.seed = seed
        self.verbose = verbose

        self.points = []
        self.lifts = []
        self.T = []
        self.Tadj = []
        self.v2T = []
        self.cnstr_id = []
        self.cnstr_next = []
        self.S = TriangleList()
        self.Q = TriangleList()
        self.reset()


    def reset(self):
        """ Forget everything but keep the storage. """
        self.nT = 0
        self.nV = 0
        self.cnstr_head = {}
        self.n_cnstr = 0
        self.constraints = []
        self.flipped = False
        self.S.clear()
        self.Q.clear()
        self.orient_cache = PredicateCache()
        self.incircle_cache = PredicateCache()
        self.rng = random.Random(self.seed)
        self.stats = {'flips': 0, 'walk_steps': 0, 'walk_fallbacks': 0, 'constraint_flips': 0}


    ##################################################
    # Storage.

    def _store(self, lst: list, index: int, value):
        if index < len(lst): lst[index] = value
        else: lst.append(value)


    def _add_point(self, p: HPoint2) -> int:
        v = self.nV
        self._store(self.points, v, p)
        self._store(self.lifts, v, None)
        self._store(self.v2T, v, -1)
        self.nV += 1
        return v


    def _new_triangle(self) -> int:
        t = self.nT
        for k in range(3):
            self._store(self.T, 3 * t + k, -1)
            self._store(self.Tadj, 3 * t + k, -1)
        self.nT += 1
        return t


    def _set_triangle(self, t: int, v0: int, v1: int, v2: int, a0: int, a1: int, a2: int):
        self.T[3 * t:3 * t + 3] = [v0, v1, v2]
        self.Tadj[3 * t:3 * t + 3] = [a0, a1, a2]
        self.v2T[v0] = self.v2T[v1] = self.v2T[v2] = t


    def _replace_adjacent(self, t: int, old: int, new: int):
        if t < 0: return
        for k in range(3):
            if self.Tadj[3 * t + k] == old:
                self.Tadj[3 * t + k] = new
                return
        raise AssertionError(f'CDT: Triangle {t} is not adjacent to {old}.')


    def _vertex(self, t: int, k: int) -> int:
        return self.T[3 * t + k]


    def _adjacent(self, t: int, k: int) -> int:
        return self.Tadj[3 * t + k]


    def _local(self, t: int, v: int) -> int:
        for k in range(3):
            if self.T[3 * t + k] == v: return k
        return -1


    def _rotate(self, t: int, k: int):
        """ Rotate t in place so that its local vertex k becomes vertex 0. """
        if k == 0: return
        v = [self.T[3 * t + (k + i) % 3] for i in range(3)]
        a = [self.Tadj[3 * t + (k + i) % 3] for i in range(3)]
        self.T[3 * t:3 * t + 3] = v
        self.Tadj[3 * t:3 * t + 3] = a


    def _fan(self, v: int) -> list[int]:
        """ Triangles incident to vertex v. """
        start = self.v2T[v]
        fan = [start]
        t = start
        while True:
            t = self._adjacent(t, (self._local(t, v) + 1) % 3)
            if t == start: return fan
            if t < 0: break
            fan.append(t)
        t = start
        while True:
            t = self._adjacent(t, (self._local(t, v) + 2) % 3)
            if t < 0: return fan
            fan.append(t)


    def _edge_triangles(self, a: int, b: int) -> tuple[int, int]:
        """
        Triangles on both sides of edge (a, b), rotated so that the edge is
        edge 0 of both. The second is -1 on the border of t0.
        """
        t1 = -1
        for t in self._fan(a):
            if self._local(t, b) >= 0:
                t1 = t
                break
        assert t1 >= 0, f'CDT: There is no edge ({a}, {b}).'
        self._rotate(t1, 3 - self._local(t1, a) - self._local(t1, b))
        t2 = self._adjacent(t1, 0)
        if t2 >= 0: self._rotate(t2, self._opposite_index(t2, t1))
        return t1, t2


    def _opposite_index(self, t: int, neighbour: int) -> int:
        for k in range(3):
            if self.Tadj[3 * t + k] == neighbour: return k
        raise AssertionError(f'CDT: Triangle {t} is not adjacent to {neighbour}.')


    ##################################################
    # Predicates on vertex ids.

    def _orient(self, a: int, b: int, c: int) -> Sign:
        return self.orient_cache.get((a, b, c), lambda key: orient2d(*(self.points[k] for k in key)))


    def _lift(self, v: int) -> float:
        if self.lifts[v] is None: self.lifts[v] = lifted_value(self.points[v])
        return self.lifts[v]


    def _in_circle(self, a: int, b: int, c: int, d: int) -> Sign:
        def compute(key):
            if self.kernel.unique_points:
                return in_circle(*(self.points[k] for k in key))
            return in_circle_l(*(self.points[k] for k in key), *(self._lift(k) for k in key))
        return self.incircle_cache.get((a, b, c, d), compute)


    def _between(self, i: int, j: int, v: int) -> bool:
        """ v strictly between i and j, knowing the three are collinear. """
        first = point_lexico_compare(self.points[i], self.points[v])
        return first != Sign.ZERO and first == point_lexico_compare(self.points[v], self.points[j])


    ##################################################
    # Constraint bookkeeping.

    def _is_constrained(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.cnstr_head


    def edge_constraints(self, a: int, b: int) -> list[int]:
        """ Ids of the constraints covering edge (a, b). """
        ids = []
        c = self.cnstr_head.get((min(a, b), max(a, b)), -1)
        while c >= 0:
            ids.append(self.cnstr_id[c])
            c = self.cnstr_next[c]
        return ids


    def _add_constraint_to_edge(self, a: int, b: int, cid: int):
        key = (min(a, b), max(a, b))
        if cid in self.edge_constraints(a, b): return
        c = self.n_cnstr
        self._store(self.cnstr_id, c, cid)
        self._store(self.cnstr_next, c, self.cnstr_head.get(key, -1))
        self.cnstr_head[key] = c
        self.n_cnstr += 1


    def _split_constraint_edge(self, a: int, b: int, p: int):
        ids = self.edge_constraints(a, b)
        if not ids: return
        del self.cnstr_head[(min(a, b), max(a, b))]
        for cid in reversed(ids):
            self._add_constraint_to_edge(a, p, cid)
            self._add_constraint_to_edge(p, b, cid)


    ##################################################
    # Public interface.

    def _as_point(self, p) -> HPoint2:
        return p if isinstance(p, HPoint2) else point2_from_double(p, self.kernel)


    def init(self, p0, p1, p2):
        """
        Start from the single enclosing triangle (p0, p1, p2) whose vertices get
        ids 0, 1, 2. A clockwise triangle is stored reversed.
        """
        self.reset()
        p0, p1, p2 = (self._as_point(p) for p in (p0, p1, p2))
        orientation = orient2d(p0, p1, p2)
        if orientation == Sign.ZERO:
            raise DegenerateInput('CDT: Enclosing triangle is degenerate.')
        for p in (p0, p1, p2): self._add_point(p)

        t = self._new_triangle()
        if orientation == Sign.POSITIVE:
            self._set_triangle(t, 0, 1, 2, -1, -1, -1)
        else:
            self.flipped = True
            self._set_triangle(t, 0, 2, 1, -1, -1, -1)
        return self


    @property
    def nb_vertices(self) -> int:
        return self.nV


    @property
    def nb_triangles(self) -> int:
        return self.nT


    def triangles(self) -> list[tuple[int, int, int]]:
        """ All triangles as counterclockwise vertex id triples. """
        return [tuple(self.T[3 * t:3 * t + 3]) for t in range(self.nT)]


    def locate(self, p: HPoint2) -> int:
        """
        Triangle containing p, closed. Stochastic walk from the last created
        triangle, then a linear scan if the walk runs out of steps. A point on
        an edge between two triangles is reported in the lower-index one.
        """
        t = self.nT - 1
        steps = 0
        found = False
        while steps < self.walk_budget:
            steps += 1
            start = self.rng.randrange(3)
            moved = False
            for k in range(3):
                le = (start + k) % 3
                a, b = self._vertex(t, (le + 1) % 3), self._vertex(t, (le + 2) % 3)
                if orient2d(self.points[a], self.points[b], p) == Sign.NEGATIVE:
                    neighbour = self._adjacent(t, le)
                    if neighbour < 0:
                        raise OutOfDomain(f'CDT: Point {p.approx()} is outside the enclosing triangle.')
                    t = neighbour
                    moved = True
                    break
            if not moved:
                found = True
                break
        self.stats['walk_steps'] += steps

        if not found:
            self.stats['walk_fallbacks'] += 1
            t = next((s for s in range(self.nT) if self._contains(s, p)), -1)
            if t < 0:
                raise OutOfDomain(f'CDT: Point {p.approx()} is outside the enclosing triangle.')

        for le in range(3):
            neighbour = self._adjacent(t, le)
            if 0 <= neighbour < t and self._edge_sign(t, le, p) == Sign.ZERO and self._contains(neighbour, p):
                return neighbour
        return t


    def _edge_sign(self, t: int, le: int, p: HPoint2) -> Sign:
        a, b = self._vertex(t, (le + 1) % 3), self._vertex(t, (le + 2) % 3)
        return orient2d(self.points[a], self.points[b], p)


    def _contains(self, t: int, p: HPoint2) -> bool:
        return all(self._edge_sign(t, le, p) != Sign.NEGATIVE for le in range(3))


    def insert_vertex(self, p) -> int:
        """
        Insert p and return its id, or the id of the existing vertex at the
        same position.
        """
        p = self._as_point(p)
        t = self.locate(p)
        for k in range(3):
            v = self._vertex(t, k)
            if point_lexico_compare(self.points[v], p) == Sign.ZERO: return v

        zeros = [le for le in range(3) if self._edge_sign(t, le, p) == Sign.ZERO]
        assert len(zeros) <= 1, 'CDT: Point on two edges must be a vertex.'
        v = self._add_point(p)
        if zeros: self._split_2_4(t, zeros[0], v)
        else: self._split_1_3(t, v)
        self._delaunayize_vertex_neighbours(v)
        return v


    def _split_1_3(self, t: int, p: int):
        v0, v1, v2 = self.T[3 * t:3 * t + 3]
        a0, a1, a2 = self.Tadj[3 * t:3 * t + 3]
        b = self._new_triangle()
        c = self._new_triangle()
        self._set_triangle(t, p, v1, v2, a0, b, c)
        self._set_triangle(b, p, v2, v0, a1, c, t)
        self._set_triangle(c, p, v0, v1, a2, t, b)
        self._replace_adjacent(a1, t, b)
        self._replace_adjacent(a2, t, c)
        for s in (t, b, c): self.S.push_front(s)


    def _split_2_4(self, t: int, le: int, p: int):
        self._rotate(t, le)
        v0, v1, v2 = self.T[3 * t:3 * t + 3]
        t2, a1, a2 = self.Tadj[3 * t:3 * t + 3]
        self._split_constraint_edge(v1, v2, p)

        b = self._new_triangle()
        if t2 < 0:
            self._set_triangle(t, p, v2, v0, a1, b, -1)
            self._set_triangle(b, p, v0, v1, a2, -1, t)
            self._replace_adjacent(a2, t, b)
            for s in (t, b): self.S.push_front(s)
            return

        self._rotate(t2, self._opposite_index(t2, t))
        v3 = self._vertex(t2, 0)
        _, b1, b2 = self.Tadj[3 * t2:3 * t2 + 3]
        d = self._new_triangle()
        self._set_triangle(t, p, v2, v0, a1, b, d)
        self._set_triangle(b, p, v0, v1, a2, t2, t)
        self._set_triangle(t2, p, v1, v3, b1, d, b)
        self._set_triangle(d, p, v3, v2, b2, t, t2)
        self._replace_adjacent(a2, t, b)
        self._replace_adjacent(b2, t2, d)
        for s in (t, b, t2, d): self.S.push_front(s)


    def _swap(self, t1: int, t2: int):
        """
        Flip the common edge 0 of t1 = (v0, v1, v2) and t2 = (v3, v2, v1),
        giving t1 = (v0, v1, v3) and t2 = (v0, v3, v2).
        """
        v0, v1, v2 = self.T[3 * t1:3 * t1 + 3]
        _, a1, a2 = self.Tadj[3 * t1:3 * t1 + 3]
        v3 = self._vertex(t2, 0)
        _, b1, b2 = self.Tadj[3 * t2:3 * t2 + 3]
        assert self._vertex(t2, 1) == v2 and self._vertex(t2, 2) == v1, 'CDT: Swap on a badly rotated pair.'
        self._set_triangle(t1, v0, v1, v3, b1, t2, a2)
        self._set_triangle(t2, v0, v3, v2, b2, a1, t1)
        self._replace_adjacent(b1, t2, t1)
        self._replace_adjacent(a1, t1, t2)


    def _is_convex(self, v0: int, v1: int, v3: int, v2: int) -> bool:
        """ True iff the diagonal (v0, v3) lies strictly inside quad (v0, v1, v3, v2). """
        return self._orient(v0, v1, v3) == Sign.POSITIVE and self._orient(v0, v3, v2) == Sign.POSITIVE


    def _violates(self, v0: int, v1: int, v2: int, v3: int) -> bool:
        """ v0 in the circle of the counterclockwise triangle (v3, v2, v1). """
        return self._in_circle(v3, v2, v1, v0) == Sign.POSITIVE


    def _delaunayize_vertex_neighbours(self, v: int):
        if not self.delaunay:
            self.S.clear()
            return
        while not self.S.empty():
            t = self.S.pop_front()
            self._rotate(t, self._local(t, v))
            t2 = self._adjacent(t, 0)
            v1, v2 = self._vertex(t, 1), self._vertex(t, 2)
            if t2 < 0 or self._is_constrained(v1, v2): continue

            self._rotate(t2, self._opposite_index(t2, t))
            v3 = self._vertex(t2, 0)
            if self._violates(v, v1, v2, v3) and self._is_convex(v, v1, v3, v2):
                self._swap(t, t2)
                self.stats['flips'] += 1
                self.S.push_front(t)
                self.S.push_front(t2)


    ##################################################
    # Constraints.

    def insert_intersection(self, i: int, j: int, cid: int, k: int, l: int) -> int:
        """
        Insert the crossing point of the segment (i, j) of constraint cid with
        the constrained edge (k, l). Subclasses that know where the points come
        from override this with a better construction.
        """
        p = intersect_lines_2d(self.points[i], self.points[j], self.points[k], self.points[l])
        return self.insert_vertex(p)


    def insert_constraint(self, i: int, j: int, cid: int = 0):
        """
        Make the segment (i, j) a union of triangulation edges, all carrying cid.
        """
        if i == j:
            raise InvalidInput(f'CDT: Constraint endpoints are the same vertex {i}.')
        self.constraints.append((i, j, cid))

        stack = [(i, j)]
        while stack:
            a, b = stack.pop()
            kind, payload, crossed = self._walk(a, b)
            if kind == 'constraint':
                k = self.insert_intersection(a, b, cid, *payload)
                if self.verbose: print(f'CDT: Constraint {cid} crosses edge {payload}, new vertex {k}.')
                stack.append((k, b))
                stack.append((a, k))
                continue

            target = payload if kind == 'vertex' else b
            if crossed: self._constrain_edges(a, target, cid, crossed)
            else: self._add_constraint_to_edge(a, target, cid)
            if kind == 'vertex': stack.append((target, b))


    def _walk(self, i: int, j: int) -> tuple[str, object, list]:
        """
        Walk from vertex i toward vertex j. Returns one of
          ('reached', None, crossed): j reached,
          ('vertex', k, crossed): vertex k lies on the segment before j,
          ('constraint', (k, l), crossed): constrained edge (k, l) crossed first.
        `crossed` lists the triangles left through a crossed edge, in walk
        order, each rotated so that the crossed edge is its edge 0.
        """
        side = lambda v: self._orient(i, j, v)
        crossed = []
        t = -1
        a = b = -1
        for s in self._fan(i):
            li = self._local(s, i)
            v1, v2 = self._vertex(s, (li + 1) % 3), self._vertex(s, (li + 2) % 3)
            if v1 == j or v2 == j: return 'reached', None, crossed
            o1, o2 = side(v1), side(v2)
            if o1 == Sign.ZERO and self._between(i, j, v1): return 'vertex', v1, crossed
            if o2 == Sign.ZERO and self._between(i, j, v2): return 'vertex', v2, crossed
            if o1 == Sign.NEGATIVE and o2 == Sign.POSITIVE:
                t, a, b = s, v1, v2
                break
        assert t >= 0, f'CDT: No triangle around vertex {i} faces vertex {j}.'

        while True:
            if self._is_constrained(a, b): return 'constraint', (a, b), crossed
            self._rotate(t, 3 - self._local(t, a) - self._local(t, b))
            crossed.append(t)
            t2 = self._adjacent(t, 0)
            assert t2 >= 0, 'CDT: Constraint walk left the enclosing triangle.'
            v3 = next(v for v in self.T[3 * t2:3 * t2 + 3] if v != a and v != b)
            if v3 == j: return 'reached', None, crossed
            o3 = side(v3)
            if o3 == Sign.ZERO: return 'vertex', v3, crossed
            if o3 == Sign.NEGATIVE: a = v3
            else: b = v3
            t = t2


    def _constrain_edges(self, i: int, j: int, cid: int, crossed: list[int]):
        """
        Flip the edges crossed by segment (i, j) until none is left, mark
        (i, j) with cid, then restore the Delaunay condition around the new
        edges.

        Q holds the triangles of the strip cut by (i, j) but the last one,
        each rotated so that edge 0 is where the segment leaves it. For
        t1 = (v0, v1, v2) in Q, v1 is right of (i, j) and v2 left, and the
        side of the opposite vertex v3 of t2 is known from t2's rotation:
        t2.v0 == v1 puts v3 on the right, t2.v0 == v2 on the left, and t2
        outside Q means v3 == j. One orient2d on v0 then tells whether the
        flipped diagonal (v0, v3) still crosses the segment.
        """
        Q = self.Q
        for t in crossed: Q.push_back(t)
        new_edges = []
        budget = self.flip_budget_factor * (len(crossed) + 1) ** 2 + 100
        iterations = 0
        while not Q.empty():
            iterations += 1
            assert iterations <= budget, f'CDT: Constraint ({i}, {j}) needs more than {budget} steps.'
            t1 = Q.pop_front()
            t2 = self._adjacent(t1, 0)
            v0, v1, v2 = self.T[3 * t1:3 * t1 + 3]
            k3 = self._opposite_index(t2, t1)
            v3 = self._vertex(t2, k3)
            if not self._is_convex(v0, v1, v3, v2):
                Q.push_back(t1)
                continue

            last = t2 not in Q
            if not last:
                o3 = Sign.NEGATIVE if self._vertex(t2, 0) == v1 else Sign.POSITIVE
                Q.remove(t2)
            o0 = self._orient(i, j, v0)
            self._rotate(t2, k3)
            self._swap(t1, t2)
            self.stats['constraint_flips'] += 1
            # Now t1 = (v0, v1, v3) and t2 = (v0, v3, v2).
            if last:
                new_edges.append((v0, v3))
            elif o0 * o3 == Sign.NEGATIVE:
                # Both cut: the segment leaves one of them through (v0, v3).
                if o0 == Sign.POSITIVE: self._rotate(t1, 1)
                else: self._rotate(t2, 2)
                Q.push_back(t1)
                Q.push_back(t2)
            else:
                new_edges.append((v0, v3))
                Q.push_back(t2 if o3 == Sign.NEGATIVE else t1)

        self._add_constraint_to_edge(i, j, cid)
        if self.delaunay: self._delaunayize_edges(new_edges)


    def _delaunayize_edges(self, edges: list[tuple[int, int]]):
        """ Lawson flips starting from `edges`, never flipping a constrained edge. """
        work = list(edges)
        while work:
            v1, v2 = work.pop()
            if self._is_constrained(v1, v2): continue
            t1 = next((t for t in self._fan(v1) if self._local(t, v2) >= 0), -1)
            if t1 < 0: continue
            t1, t2 = self._edge_triangles(v1, v2)
            if t2 < 0: continue
            v0, x, y = self.T[3 * t1:3 * t1 + 3]
            v3 = self._vertex(t2, 0)
            if self._violates(v0, x, y, v3) and self._is_convex(v0, x, v3, y):
                self._swap(t1, t2)
                self.stats['flips'] += 1
                work.extend(((v0, x), (x, v3), (v3, y), (y, v0)))


    ##################################################
    # Self-check.

    def check(self) -> tuple[bool, str]:
        """
        Verify adjacency, orientation, constraint coverage and the Delaunay
        condition. Returns (True, 'ok') or (False, first problem found).
        """
        for t in range(self.nT):
            v = self.T[3 * t:3 * t + 3]
            if self._orient(*v) != Sign.POSITIVE:
                return False, f'CDT: Triangle {t} {tuple(v)} is not counterclockwise.'
            for le in range(3):
                t2 = self._adjacent(t, le)
                if t2 < 0: continue
                if not 0 <= t2 < self.nT:
                    return False, f'CDT: Triangle {t} has invalid neighbour {t2}.'
                a, b = v[(le + 1) % 3], v[(le + 2) % 3]
                if t not in self.Tadj[3 * t2:3 * t2 + 3]:
                    return False, f'CDT: Adjacency {t} -> {t2} is not mutual.'
                if self._local(t2, a) < 0 or self._local(t2, b) < 0:
                    return False, f'CDT: Triangles {t} and {t2} do not share edge ({a}, {b}).'

        for i, j, cid in self.constraints:
            if not self._covered(i, j, cid):
                return False, f'CDT: Constraint {cid} ({i}, {j}) is not covered by edges.'

        if self.delaunay:
            for t in range(self.nT):
                for le in range(3):
                    t2 = self._adjacent(t, le)
                    v0, v1, v2 = (self._vertex(t, (le + k) % 3) for k in range(3))
                    if t2 < t or self._is_constrained(v1, v2): continue
                    v3 = next(v for v in self.T[3 * t2:3 * t2 + 3] if v != v1 and v != v2)
                    if self._violates(v0, v1, v2, v3) and self._is_convex(v0, v1, v3, v2):
                        return False, f'CDT: Edge ({v1}, {v2}) is not locally Delaunay.'
        return True, 'ok'


    def _covered(self, i: int, j: int, cid: int) -> bool:
        """ j reachable from i along collinear edges carrying cid. """
        seen = {i}
        todo = [i]
        while todo:
            a = todo.pop()
            if a == j: return True
            for t in self._fan(a):
                for b in self.T[3 * t:3 * t + 3]:
                    if b in seen or b == a: continue
                    if cid not in self.edge_constraints(a, b): continue
                    if self._orient(i, j, b) != Sign.ZERO: continue
                    seen.add(b)
                    todo.append(b)
        return False
