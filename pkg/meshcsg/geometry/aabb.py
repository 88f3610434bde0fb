import numpy as np
from typing import Callable
from meshcsg.errors import InvalidInput


class FacetAABB:
    """
    Balanced axis-aligned bounding box tree over facets, stored implicitly:
    node n covers the facet range [b, e) of `order`, its children 2n and 2n+1
    cover [b, m) and [m, e) with m = b + (e - b) // 2. The root is node 1.

    The facets are sorted by recursive median partitioning along x, y, z in
    turn, which groups spatially close facets in contiguous ranges.

    Attributes:
        facet_boxes: ndarray (n_facets, 2, 3). Per facet (min corner, max corner).
        order: ndarray (n_facets,). Tree position -> facet id.
        boxes: ndarray (n_nodes, 2, 3). Per node box, index 0 unused.
    """
    def __init__(self, facet_boxes: np.ndarray):
        facet_boxes = np.array(facet_boxes, dtype=float)
        if facet_boxes.ndim != 3 or len(facet_boxes) == 0:
            raise InvalidInput('AABB: Cannot build a tree over an empty facet set.')

        self.facet_boxes = facet_boxes
        self.n_facets = len(facet_boxes)
        self.order = np.arange(self.n_facets)
        self.boxes = np.zeros((4 * self.n_facets, 2, 3))
        centers = 0.5 * (facet_boxes[:, 0] + facet_boxes[:, 1])
        self._build(1, 0, self.n_facets, centers, 0)


    def _build(self, node: int, b: int, e: int, centers: np.ndarray, axis: int):
        if e - b == 1:
            self.boxes[node] = self.facet_boxes[self.order[b]]
            return

        m = b + (e - b) // 2
        sub = self.order[b:e]
        self.order[b:e] = sub[np.argpartition(centers[sub, axis], m - b, kind='introselect')]

        next_axis = (axis + 1) % 3
        self._build(2 * node, b, m, centers, next_axis)
        self._build(2 * node + 1, m, e, centers, next_axis)
        self.boxes[node, 0] = np.minimum(self.boxes[2 * node, 0], self.boxes[2 * node + 1, 0])
        self.boxes[node, 1] = np.maximum(self.boxes[2 * node, 1], self.boxes[2 * node + 1, 1])


    def _overlap(self, n1: int, n2: int) -> bool:
        box1, box2 = self.boxes[n1], self.boxes[n2]
        return bool(np.all(box1[0] <= box2[1]) and np.all(box2[0] <= box1[1]))


    def _intersect(self, n1: int, b1: int, e1: int, n2: int, b2: int, e2: int, callback: Callable):
        if e2 <= b1: return
        if not self._overlap(n1, n2): return

        if e1 - b1 == 1 and e2 - b2 == 1:
            if b1 < b2:
                f1, f2 = int(self.order[b1]), int(self.order[b2])
                callback(min(f1, f2), max(f1, f2))
            return

        if e2 - b2 > e1 - b1:
            m2 = b2 + (e2 - b2) // 2
            self._intersect(n1, b1, e1, 2 * n2, b2, m2, callback)
            self._intersect(n1, b1, e1, 2 * n2 + 1, m2, e2, callback)
        else:
            m1 = b1 + (e1 - b1) // 2
            self._intersect(2 * n1, b1, m1, n2, b2, e2, callback)
            self._intersect(2 * n1 + 1, m1, e1, n2, b2, e2, callback)


    def self_intersect(self, callback: Callable[[int, int], None] = None) -> list[tuple[int, int]] | None:
        """
        Report every unordered pair of facets whose boxes overlap (closed test),
        once, as (f1, f2) with f1 < f2. Without a callback the pairs are returned.
        """
        pairs = None
        if callback is None:
            pairs = []
            callback = lambda f1, f2: pairs.append((f1, f2))
        self._intersect(1, 0, self.n_facets, 1, 0, self.n_facets, callback)
        return pairs


    def depth(self) -> int:
        return int(np.ceil(np.log2(self.n_facets))) if self.n_facets > 1 else 0


def build(mesh) -> FacetAABB:
    """ Tree over the facets of a TriMesh. """
    return FacetAABB(mesh.facet_boxes())


def self_intersect(tree: FacetAABB, callback: Callable[[int, int], None] = None):
    return tree.self_intersect(callback)
