# =============================================================================
# Weiler model of a co-refined mesh as a 3-map.
#
# Every facet t of the mesh exists twice: t itself and its twin t + m with
# reversed orientation (v0, v2, v1). Facet t owns darts 3t, 3t+1, 3t+2, dart
# 3t+k going from vertex k to vertex k+1 of the facet. So
#   sigma1(d) = d - d % 3 + (d + 1) % 3
#   alpha3(3t + k) = 3(t +/- m) + 2 - k
# alpha2 glues the two facet sides bounding the same volumetric region along
# an edge. Around a non-manifold edge the facets are sorted radially with
# exact predicates; the order is then copied along the intersection curve
# as long as its vertices join exactly two non-manifold edges.
#
# A shell <sigma1, alpha2> bounds one region. The darts of a shell see the
# region on the side their triangle normal points to.
# =============================================================================

from collections import deque
from functools import cmp_to_key
import numpy as np
from meshcsg.errors import TopologyError
from meshcsg.kernel import Sign, get_kernel, ArithmeticKernel
from meshcsg.geometry.predicates import orient3d, TriangleNormal, normals_dot_sign
from meshcsg.boolean.trimesh import TriMesh

ORBIT_GENERATORS = {
    'triangle': ('sigma1',),
    'shell': ('sigma1', 'alpha2'),
    'bundle': ('alpha2', 'alpha3'),
    'component': ('sigma1', 'alpha2', 'alpha3'),
    'patch': ('sigma1', 'alpha2_bar'),
}


class Map3:
    """
    Attributes:
        mesh: TriMesh. The co-refined mesh.
        kernel: ArithmeticKernel used by the radial predicates.
        facets: ndarray (2m, 3). Facets followed by their twins.
        alpha2, alpha3: ndarray (6m,) int64. -1 where not wired yet.
        bundles: list[ndarray]. Darts of every edge, in dart order.
        dart_bundle: ndarray (6m,). Bundle id of every dart.
        stats: dict. Bundle counts, geometric sorts and propagated bundles.
    """
    def __init__(self, mesh: TriMesh, kernel: ArithmeticKernel | str = 'mpfloat'):
        self.mesh = mesh
        self.kernel = get_kernel(kernel)
        self.m = mesh.nb_facets
        self.facets = np.concatenate([mesh.facets, mesh.facets[:, [0, 2, 1]]])
        self.nb_darts = 3 * len(self.facets)

        self.origin = self.facets.reshape(-1)
        self.target = np.roll(self.facets, -1, axis=1).reshape(-1)
        self.alpha2 = np.full(self.nb_darts, -1, dtype=np.int64)
        darts = np.arange(self.nb_darts)
        t, k = darts // 3, darts % 3
        self.alpha3 = 3 * np.where(t < self.m, t + self.m, t - self.m) + 2 - k
        self.bundles = []
        self.dart_bundle = np.full(self.nb_darts, -1, dtype=np.int64)
        self.stats = {}


    ##################################################
    # Dart operations.

    @staticmethod
    def sigma1(d: int) -> int:
        return d - d % 3 + (d + 1) % 3


    @staticmethod
    def sigma1_inv(d: int) -> int:
        return d - d % 3 + (d + 2) % 3


    def alpha2_bar(self, d: int) -> int:
        """ alpha2 on manifold edges, identity on the others. """
        return int(self.alpha2[d]) if self.is_manifold(d) else d


    def facet(self, d: int) -> int:
        """ Facet of the mesh (not of the twin set) carrying dart d. """
        return (d // 3) % self.m


    def is_twin(self, d: int) -> bool:
        return d // 3 >= self.m


    def edge(self, d: int) -> tuple[int, int]:
        return int(self.origin[d]), int(self.target[d])


    def is_manifold(self, d: int) -> bool:
        return len(self.bundles[self.dart_bundle[d]]) == 4


    def triangle_vertices(self, d: int) -> tuple[int, int, int]:
        return tuple(int(v) for v in self.facets[d // 3])


    def point(self, v: int):
        return self.mesh.point(int(v), self.kernel)


    ##################################################
    # Construction.

    def identify_bundles(self):
        """ Group darts by their unordered endpoint pair. """
        lo = np.minimum(self.origin, self.target)
        hi = np.maximum(self.origin, self.target)
        order = np.lexsort((np.arange(self.nb_darts), hi, lo))
        keys = np.stack([lo[order], hi[order]], axis=1)
        starts = np.flatnonzero(np.r_[True, np.any(keys[1:] != keys[:-1], axis=1)])
        self.bundles = np.split(order, starts[1:])

        for b, darts in enumerate(self.bundles):
            self.dart_bundle[darts] = b
            if len(darts) < 4:
                a, c = self.edge(int(darts[0]))
                raise TopologyError(f'Weiler: Edge ({min(a, c)}, {max(a, c)}) belongs to a single facet, '
                                    'the surface is not closed.')


    def oriented_darts(self, b: int) -> list[int]:
        """ One dart per facet of bundle b, the one going from the lower to the higher vertex. """
        return [int(d) for d in self.bundles[b] if self.origin[d] < self.target[d]]


    def wire(self, ordered: list[int]):
        """ alpha2(h_i) = alpha3(h_{i+1}) around a radially ordered bundle. """
        k = len(ordered)
        for i, h in enumerate(ordered):
            other = int(self.alpha3[ordered[(i + 1) % k]])
            self.alpha2[h] = other
            self.alpha2[other] = h


    def radial_sort(self, darts: list[int], origin: int = 0) -> list[int]:
        """
        Order the oriented darts of a bundle around their edge (p, q), turning
        counterclockwise seen from q. Darts are placed in quadrants relative to
        darts[origin], then sorted inside each quadrant by orientation.
        """
        assert len(darts) >= 2, 'Weiler: Radial sort needs at least two darts.'
        p, q = (self.point(v) for v in self.edge(darts[0]))
        third = {d: self.point(self.target[self.sigma1(d)]) for d in darts}
        h0 = darts[origin]
        r0 = third[h0]
        normal0 = TriangleNormal(p, q, r0)

        def quadrant(d) -> int:
            if d == h0: return -1
            o = orient3d(p, q, r0, third[d])
            n = normals_dot_sign(normal0, TriangleNormal(p, q, third[d]))
            if o == Sign.POSITIVE: return 0 if n != Sign.NEGATIVE else 1
            if o == Sign.ZERO:
                assert n == Sign.NEGATIVE, f'Weiler: Darts {h0} and {d} lie on the same half-plane.'
                return 1
            return 2 if n != Sign.POSITIVE else 3

        def compare(d1, d2) -> int:
            if d1 == d2: return 0
            return -int(orient3d(p, q, third[d1], third[d2]))

        groups = {}
        for d in darts:
            groups.setdefault(quadrant(d), []).append(d)
        ordered = []
        for key in sorted(groups):
            ordered.extend(sorted(groups[key], key=cmp_to_key(compare)))
        return ordered


    ##################################################
    # Propagation along intersection curves.

    def _walk_to(self, d: int, w: int, target_bundle: int) -> int | None:
        """
        Turn around vertex w on the side of dart d, through manifold edges,
        until reaching a dart of target_bundle. None if another non-manifold
        edge comes first.
        """
        ends_at_w = self.target[d] == w
        for _ in range(self.nb_darts):
            step = self.sigma1(d) if ends_at_w else self.sigma1_inv(d)
            b = self.dart_bundle[step]
            if b == target_bundle: return step
            if not self.is_manifold(step): return None
            d = int(self.alpha2[step])
        return None


    def propagate(self, source: int, target: int, w: int) -> bool:
        """
        Wire bundle `target` from the wired bundle `source`, both incident to
        vertex w. Returns False when the facet sides do not correspond one to one.
        """
        if len(self.bundles[source]) != len(self.bundles[target]): return False
        mapping = {}
        for d in self.bundles[source]:
            image = self._walk_to(int(d), w, target)
            if image is None: return False
            mapping[int(d)] = image
        if set(mapping.values()) != set(int(d) for d in self.bundles[target]): return False

        for d, image in mapping.items():
            self.alpha2[image] = mapping[int(self.alpha2[d])]
        return True


    def sort_and_wire(self, b: int):
        darts = self.oriented_darts(b)
        self.wire(self.radial_sort(darts) if len(darts) > 2 else darts)


    def wire_nonmanifold(self, propagate: bool = True, verbose: bool = False):
        """
        Sort one bundle per intersection curve and copy its order along the
        curve through vertices joining exactly two non-manifold edges.
        """
        nonmanifold = [b for b, darts in enumerate(self.bundles) if len(darts) > 4]
        incident = {}
        for b in nonmanifold:
            for v in self.edge(int(self.bundles[b][0])):
                incident.setdefault(v, []).append(b)

        done = set()
        sorts = propagated = 0
        for start in nonmanifold:
            if start in done: continue
            self.sort_and_wire(start)
            done.add(start)
            sorts += 1
            if not propagate: continue

            for w in self.edge(int(self.bundles[start][0])):
                current, vertex = start, w
                while len(incident[vertex]) == 2:
                    following = next(b for b in incident[vertex] if b != current)
                    if following in done: break
                    if self.propagate(current, following, vertex):
                        propagated += 1
                    else:
                        self.sort_and_wire(following)
                        sorts += 1
                    done.add(following)
                    a, c = self.edge(int(self.bundles[following][0]))
                    current, vertex = following, (c if a == vertex else a)

        self.stats.update({'nonmanifold_bundles': len(nonmanifold), 'radial_sorts': sorts,
                           'propagated_bundles': propagated})
        if verbose:
            print(f'Weiler: {len(nonmanifold)} non-manifold edges, {sorts} sorted, {propagated} propagated.')


    ##################################################
    # Checks.

    def check(self) -> tuple[bool, str]:
        """ Involutions without fixed points joining darts of opposite orientation. """
        darts = np.arange(self.nb_darts)
        for name, alpha in (('alpha2', self.alpha2), ('alpha3', self.alpha3)):
            if np.any(alpha < 0): return False, f'Weiler: {name} is not wired everywhere.'
            if np.any(alpha[alpha] != darts): return False, f'Weiler: {name} is not an involution.'
            if np.any(alpha == darts): return False, f'Weiler: {name} has a fixed point.'
            if np.any(self.origin[alpha] != self.target): return False, f'Weiler: {name} joins same-orientation darts.'
        return True, 'ok'



def build(mesh: TriMesh, kernel: ArithmeticKernel | str = 'mpfloat', propagate: bool = True,
          verbose: bool = False) -> Map3:
    """
    Weiler model of an intersection-free closed mesh.
    """
    map3 = Map3(mesh, kernel)
    map3.identify_bundles()
    for b, darts in enumerate(map3.bundles):
        if len(darts) == 4: map3.wire(map3.oriented_darts(b))
    map3.wire_nonmanifold(propagate, verbose)
    map3.stats['bundles'] = len(map3.bundles)
    ok, message = map3.check()
    assert ok, message
    return map3


def radial_sort(map3: Map3, darts: list[int], origin: int = 0) -> list[int]:
    return map3.radial_sort(darts, origin)


def propagate_along_polylines(map3: Map3, verbose: bool = False):
    """ Wire every non-manifold bundle still free, propagating sorted orders. """
    map3.wire_nonmanifold(True, verbose)


def orbits(map3: Map3, generators, seed: int) -> set[int]:
    """
    Closure of the seed dart under the generators, given as names among
    sigma1, alpha2, alpha3, alpha2_bar, or as one of the keys of ORBIT_GENERATORS.
    """
    if isinstance(generators, str): generators = ORBIT_GENERATORS[generators]
    steps = {'sigma1': map3.sigma1,
             'alpha2': lambda d: int(map3.alpha2[d]),
             'alpha3': lambda d: int(map3.alpha3[d]),
             'alpha2_bar': map3.alpha2_bar}
    functions = [steps[g] for g in generators]

    seen = {int(seed)}
    queue = deque([int(seed)])
    while queue:
        d = queue.popleft()
        for step in functions:
            e = step(d)
            if e not in seen:
                seen.add(e)
                queue.append(e)
    return seen
