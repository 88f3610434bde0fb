# =============================================================================
# Weiler classification: which operands contain the region each dart sees.
#
# I(d) is the set of operands whose interior contains the region on the side
# the triangle of d faces. Crossing a facet t through alpha3 toggles exactly
# the operands t bounds, so I(alpha3(d)) = I(d) XOR B(t). One ray per
# connected component gives I for a seed dart; propagation gives the rest.
# A dart is on the boundary of E's solid iff not E(I(d)) and E(I(alpha3(d))).
#
# Expression grammar, loosest first:
#   expr   := term (('+' | '-') term)*        + is or, a - b is a and not b
#   term   := factor ('*' factor)*            * is and
#   factor := '!' factor | '(' expr ')' | operand
#   operand:= 'A'..'Z' | '%' digits           %0 is A
# or one of the words union, intersection, difference.
# =============================================================================

import re
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from math import ceil, log2
import numpy as np
from meshcsg.errors import ExpressionSyntaxError, InvalidInput, TopologyError
from meshcsg.kernel import Sign
from meshcsg.geometry.exact_geom import HPoint3
from meshcsg.geometry.predicates import orient3d
from meshcsg.geometry.tritri import TriSimplex, edge_triangle
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.weiler import Map3, orbits

RAY_DIRECTIONS = [(3, 5, 7), (7, -3, 5), (-5, 7, 3), (2, -7, -5), (11, 3, -7), (-3, -11, 5), (5, 2, 11),
                  (-7, 5, -11), (13, -5, 3), (1, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1)]


class OperandSet:
    """
    Set of operand indices 0..width-1 stored as the bits of an int.

    Attributes:
        bits: int.
        width: int. Number of operands.
    """
    __slots__ = ('bits', 'width')

    def __init__(self, bits: int = 0, width: int = 1):
        assert width >= 1, 'OperandSet: Width must be positive.'
        assert 0 <= bits < (1 << width), f'OperandSet: Bits {bits:b} do not fit in width {width}.'
        self.bits = int(bits)
        self.width = int(width)


    @classmethod
    def of(cls, indices, width: int) -> 'OperandSet':
        bits = 0
        for k in indices: bits |= 1 << k
        return cls(bits, width)


    def _check(self, other: 'OperandSet'):
        assert self.width == other.width, 'OperandSet: Widths differ.'


    def __or__(self, other):
        self._check(other)
        return OperandSet(self.bits | other.bits, self.width)


    def __and__(self, other):
        self._check(other)
        return OperandSet(self.bits & other.bits, self.width)


    def __xor__(self, other):
        self._check(other)
        return OperandSet(self.bits ^ other.bits, self.width)


    def __invert__(self):
        return OperandSet(~self.bits & ((1 << self.width) - 1), self.width)


    def __contains__(self, k: int) -> bool:
        return bool(self.bits >> k & 1)


    def __iter__(self):
        return (k for k in range(self.width) if k in self)


    def __len__(self):
        return bin(self.bits).count('1')


    def __eq__(self, other):
        return isinstance(other, OperandSet) and self.bits == other.bits and self.width == other.width


    def __hash__(self):
        return hash((self.bits, self.width))


    def __repr__(self):
        return f'OperandSet({{{", ".join(str(k) for k in self)}}}, width={self.width})'


##################################################
# Boolean expressions.

class BoolExpr:
    """ Node of a boolean expression over operands. evaluate() takes the operand bits. """
    def evaluate(self, bits: int, n: int) -> bool:
        raise NotImplementedError


    def max_operand(self) -> int:
        return -1


    def __call__(self, bits: int, n: int) -> bool:
        return self.evaluate(bits, n)



class Operand(BoolExpr):
    def __init__(self, index: int):
        self.index = index


    def evaluate(self, bits: int, n: int) -> bool:
        if self.index >= n:
            raise InvalidInput(f'Classify: Operand %{self.index} used but there are only {n} operands.')
        return bool(bits >> self.index & 1)


    def max_operand(self) -> int:
        return self.index


    def __repr__(self):
        return chr(ord('A') + self.index) if self.index < 26 else f'%{self.index}'



class Not(BoolExpr):
    def __init__(self, child: BoolExpr):
        self.child = child


    def evaluate(self, bits, n):
        return not self.child.evaluate(bits, n)


    def max_operand(self):
        return self.child.max_operand()


    def __repr__(self):
        return f'!{self.child!r}'



class And(BoolExpr):
    def __init__(self, left: BoolExpr, right: BoolExpr):
        self.left, self.right = left, right


    def evaluate(self, bits, n):
        return self.left.evaluate(bits, n) and self.right.evaluate(bits, n)


    def max_operand(self):
        return max(self.left.max_operand(), self.right.max_operand())


    def __repr__(self):
        return f'({self.left!r}*{self.right!r})'



class Or(BoolExpr):
    def __init__(self, left: BoolExpr, right: BoolExpr):
        self.left, self.right = left, right


    def evaluate(self, bits, n):
        return self.left.evaluate(bits, n) or self.right.evaluate(bits, n)


    def max_operand(self):
        return max(self.left.max_operand(), self.right.max_operand())


    def __repr__(self):
        return f'({self.left!r}+{self.right!r})'



class NaryForm(BoolExpr):
    """ union, intersection or difference of all the operands, whatever their number. """
    def __init__(self, kind: str):
        assert kind in ('union', 'intersection', 'difference'), f'Classify: Unknown form {kind}.'
        self.kind = kind


    def evaluate(self, bits, n):
        everything = (1 << n) - 1
        bits &= everything
        if self.kind == 'union': return bits != 0
        if self.kind == 'intersection': return bits == everything
        return bits == 1


    def __repr__(self):
        return self.kind


_TOKEN = re.compile(r'\s*(?:(?P<operand>[A-Z]|%\d+)|(?P<op>[-+*!()]))')


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == '': break
        match = _TOKEN.match(text, position)
        if match is None:
            start = len(text) - len(text[position:].lstrip())
            raise ExpressionSyntaxError(f'Classify: Unexpected character {text[start]!r}.', start)
        kind = 'operand' if match.group('operand') else 'op'
        tokens.append((kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(('end', '', len(text)))
    return tokens



class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0


    def peek(self):
        return self.tokens[self.i]


    def take(self):
        token = self.tokens[self.i]
        self.i += 1
        return token


    def expr(self) -> BoolExpr:
        node = self.term()
        while self.peek()[1] in ('+', '-') and self.peek()[0] == 'op':
            op = self.take()[1]
            right = self.term()
            node = Or(node, right) if op == '+' else And(node, Not(right))
        return node


    def term(self) -> BoolExpr:
        node = self.factor()
        while self.peek()[:2] == ('op', '*'):
            self.take()
            node = And(node, self.factor())
        return node


    def factor(self) -> BoolExpr:
        kind, value, position = self.take()
        if kind == 'operand':
            return Operand(ord(value) - ord('A') if value[0] != '%' else int(value[1:]))
        if (kind, value) == ('op', '!'):
            return Not(self.factor())
        if (kind, value) == ('op', '('):
            node = self.expr()
            closing = self.take()
            if closing[:2] != ('op', ')'):
                raise ExpressionSyntaxError("Classify: Expected ')'.", closing[2])
            return node
        if kind == 'end':
            raise ExpressionSyntaxError('Classify: Unexpected end of expression.', position)
        raise ExpressionSyntaxError(f'Classify: Unexpected {value!r}.', position)


def parse_expr(text: str, n: int = None) -> BoolExpr:
    """
    Parse a boolean expression. With n given, operands beyond n are rejected
    right away, otherwise at evaluation.
    """
    word = text.strip().lower()
    if word in ('union', 'intersection', 'difference'):
        return NaryForm(word)

    parser = _Parser(text)
    node = parser.expr()
    kind, value, position = parser.peek()
    if kind != 'end':
        raise ExpressionSyntaxError(f'Classify: Unexpected {value!r} after the expression.', position)
    if n is not None and node.max_operand() >= n:
        raise InvalidInput(f'Classify: Expression uses operand %{node.max_operand()} '
                           f'but there are only {n} operands.')
    return node


##################################################
# Ray seeding.

def _centroid(a: HPoint3, b: HPoint3, c: HPoint3) -> HPoint3:
    kernel = a.kernel
    w = a.w * b.w * c.w
    coordinates = [a[k] * b.w * c.w + b[k] * a.w * c.w + c[k] * a.w * b.w for k in range(3)]
    return HPoint3(*coordinates, w * kernel.number(3), kernel)


def _far_point(origin: HPoint3, direction: tuple, reach: float) -> HPoint3:
    kernel = origin.kernel
    return HPoint3(*(origin[k] + origin.w * kernel.number(float(reach * direction[k])) for k in range(3)),
                   origin.w, kernel)


class RayCaster:
    """
    Parity of ray crossings from the centroid of a triangle side, with exact
    rejection of directions that hit a vertex or an edge.

    Attributes:
        map3: Map3.
        directions: list of integer direction vectors tried in order.
        reach: float. Power of two taking any ray out of the mesh bounding box.
        boxes: ndarray (m, 2, 3). Facet boxes, the coarse test before the exact one.
    """
    def __init__(self, map3: Map3, directions: list = None):
        self.map3 = map3
        self.directions = RAY_DIRECTIONS if directions is None else directions
        extent = float(np.abs(map3.mesh.vertices).max()) if map3.mesh.nb_vertices else 1.0
        self.reach = 2.0 ** ceil(log2(4 * extent + 4))
        self.margin = 1e-9 * (extent + 1.0)
        self.boxes = map3.mesh.facet_boxes() if map3.m else np.empty((0, 2, 3))
        self.stats = {'rays': 0, 'rejected_directions': 0}


    def triangle(self, t: int) -> tuple:
        return tuple(self.map3.point(v) for v in self.map3.facets[t])


    def cast(self, d: int, facets) -> tuple[int, int, Sign]:
        """
        Ray from the centroid of dart d's triangle against the facets in
        `facets`. Returns the XOR of the operand bits of the crossed facets,
        the number of crossings, and the side of the triangle the ray leaves
        to (POSITIVE: the region d sees).
        """
        t0 = d // 3
        triangle0 = self.triangle(t0)
        origin = _centroid(*triangle0)
        source = self.map3.facet(d)
        start = self.map3.mesh.vertices[self.map3.facets[t0]].mean(axis=0)
        facets = np.asarray(facets, dtype=np.int64)

        for direction in self.directions:
            self.stats['rays'] += 1
            far = _far_point(origin, direction, self.reach)
            side = orient3d(*triangle0, far)
            if side == Sign.ZERO: crossed = None
            else:
                step = self.reach * np.asarray(direction, dtype=float)
                near = facets[self.slab_hits(start, step, facets)].tolist()
                crossed = self._crossed(origin, far, near, source)
            if crossed is not None:
                bits = 0
                for t in crossed: bits ^= int(self.map3.mesh.operands[t])
                return bits, len(crossed), side
            self.stats['rejected_directions'] += 1
        raise TopologyError(f'Classify: Every ray direction from facet {source} hits a vertex or an edge.')


    def slab_hits(self, start: np.ndarray, step: np.ndarray, facets: np.ndarray) -> np.ndarray:
        """
        Mask over `facets` of the boxes, widened by the margin, met by the
        segment start + s * step with 0 <= s <= 1. Never misses a facet the
        exact segment crosses.
        """
        lo = self.boxes[facets, 0] - self.margin
        hi = self.boxes[facets, 1] + self.margin
        enter, leave = np.zeros(len(facets)), np.ones(len(facets))
        for k in range(3):
            if step[k] == 0.0:
                inside = (lo[:, k] <= start[k]) & (start[k] <= hi[:, k])
                leave = np.where(inside, leave, -1.0)
                continue
            s1 = (lo[:, k] - start[k]) / step[k]
            s2 = (hi[:, k] - start[k]) / step[k]
            enter = np.maximum(enter, np.minimum(s1, s2))
            leave = np.minimum(leave, np.maximum(s1, s2))
        return enter <= leave


    def _crossed(self, origin: HPoint3, far: HPoint3, facets, source: int) -> list[int] | None:
        """ Facets crossed in their interior, or None if the ray touches a vertex or an edge. """
        crossed = []
        for t in facets:
            if t == source: continue
            hits = edge_triangle(origin, far, self.triangle(t))
            if not hits: continue
            if hits != [('E', TriSimplex.T)]: return None
            crossed.append(t)
        return crossed


    def seed(self, d: int) -> int:
        """ I(d) from a ray against every facet of the mesh. """
        bits, _, side = self.cast(d, range(self.map3.m))
        if side == Sign.NEGATIVE: bits ^= int(self.map3.mesh.operands[self.map3.facet(d)])
        return bits


##################################################
# Classification.

def shells_of(map3: Map3, darts) -> list[list[int]]:
    """ Split a dart set into <sigma1, alpha2> orbits, each sorted. """
    remaining = set(int(d) for d in darts)
    shells = []
    for d in sorted(remaining):
        if d not in remaining: continue
        shell = orbits(map3, 'shell', d)
        remaining -= shell
        shells.append(sorted(shell))
    return shells


def shell_triangles(shell) -> np.ndarray:
    return np.unique(np.array(shell, dtype=np.int64) // 3)


def exterior_shell(map3: Map3, shells: list[list[int]]) -> list[int]:
    """
    The shell enclosing the largest volume. Volumes are computed in doubles;
    the top two are recomputed exactly when they are too close to tell apart.
    """
    if len(shells) == 1: return shells[0]
    mesh = map3.mesh
    volumes = []
    for shell in shells:
        facets = map3.facets[shell_triangles(shell)]
        a, b, c = (mesh.vertices[facets[:, k]] for k in range(3))
        volumes.append(float(np.einsum('ij,ij->i', a, np.cross(b, c)).sum() / 6.0))

    order = np.argsort(volumes)[::-1]
    first, second = int(order[0]), int(order[1])
    scale = max(abs(volumes[first]), abs(volumes[second]), 1e-300)
    if abs(volumes[first] - volumes[second]) <= 1e-9 * scale:
        exact = {s: mesh.exact_signed_volume(map3.facets[shell_triangles(shells[s])]) for s in (first, second)}
        if exact[second] > exact[first]: first = second
    return shells[first]


def classify_component(map3: Map3, d: int, bits: int, labels: list = None) -> list:
    """
    Propagate I from the seed dart d over its connected component. sigma1 and
    alpha2 keep I, alpha3 toggles the operands of the facet. Returns the label
    list, None for darts of other components.
    """
    labels = [None] * map3.nb_darts if labels is None else labels
    operands = map3.mesh.operands
    labels[d] = int(bits)
    queue = deque([int(d)])
    while queue:
        e = queue.popleft()
        value = labels[e]
        for step, next_value in ((map3.sigma1(e), value),
                                 (int(map3.alpha2[e]), value),
                                 (int(map3.alpha3[e]), value ^ int(operands[map3.facet(e)]))):
            if labels[step] is None:
                labels[step] = next_value
                queue.append(step)
            else:
                assert labels[step] == next_value, f'Classify: Inconsistent labels at dart {step}.'
    return labels


def components_of(map3: Map3) -> list[list[int]]:
    remaining = np.ones(map3.nb_darts, dtype=bool)
    components = []
    for d in range(map3.nb_darts):
        if not remaining[d]: continue
        component = sorted(orbits(map3, 'component', d))
        remaining[component] = False
        components.append(component)
    return components


def _mesh_from_sides(map3: Map3, sides) -> TriMesh:
    mesh = map3.mesh
    sides = np.array(sorted(sides), dtype=np.int64)
    if len(sides) == 0: return TriMesh(exact=[])
    original = sides % map3.m
    return TriMesh(mesh.vertices, map3.facets[sides], [mesh.operands[t] for t in original],
                   mesh.sources[original], mesh.exact).compact()


def classify(map3: Map3, expr: BoolExpr | str, n: int = None, threads: int = None,
             directions: list = None, verbose: bool = False) -> TriMesh:
    """
    Boundary of the solid described by expr over the operands of the model.
    n defaults to the highest operand bit present in the mesh.
    """
    mesh = map3.mesh
    if n is None: n = max((int(b).bit_length() for b in mesh.operands), default=1)
    if isinstance(expr, str): expr = parse_expr(expr, n)
    caster = RayCaster(map3, directions)
    components = components_of(map3)

    def seed_component(component):
        outer = exterior_shell(map3, shells_of(map3, component))
        return outer[0], caster.seed(outer[0])

    with ThreadPoolExecutor(max_workers=threads) as executor:
        seeds = list(executor.map(seed_component, components))

    labels = [None] * map3.nb_darts
    for d, bits in seeds:
        classify_component(map3, d, bits, labels)

    sides = set()
    for t in range(len(map3.facets)):
        d = 3 * t
        if not expr.evaluate(labels[d], n) and expr.evaluate(labels[int(map3.alpha3[d])], n):
            sides.add(t)
    if verbose:
        print(f'Classify: {len(components)} components, {len(sides)} boundary facets for {expr!r}.')
    map3.stats.update({'components': len(components), 'boundary_facets': len(sides), **caster.stats})
    return _mesh_from_sides(map3, sides)


def keep_outer_skin(map3: Map3, verbose: bool = False) -> TriMesh:
    """
    Outer shell of every connected component that is not inside another one.
    Removes the inner garbage of a self-intersecting surface.
    """
    caster = RayCaster(map3)
    components = components_of(map3)
    component_facets = [sorted(set(map3.facet(d) for d in component)) for component in components]
    sides = set()
    kept = 0
    for i, component in enumerate(components):
        outer = exterior_shell(map3, shells_of(map3, component))
        inside = False
        for j, facets in enumerate(component_facets):
            if j == i: continue
            _, crossings, _ = caster.cast(outer[0], facets)
            if crossings % 2 == 1:
                inside = True
                break
        if not inside:
            sides.update(int(d) // 3 for d in outer)
            kept += 1
    if verbose: print(f'Classify: Outer skin keeps {kept} of {len(components)} components.')
    return _mesh_from_sides(map3, sides)
