import itertools
import pytest
from meshcsg.errors import DegenerateInput, OutOfDomain, InvalidInput
from meshcsg.geometry.cdt2d import CDT, TriangleList

ENCLOSING = ((-10.0, -10.0), (10.0, -10.0), (0.0, 10.0))
SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def make_cdt(kernel_name, points=(), **kwargs) -> tuple[CDT, list[int]]:
    cdt = CDT(kernel_name, **kwargs).init(*ENCLOSING)
    return cdt, [cdt.insert_vertex(p) for p in points]


def geometric_triangles(cdt: CDT) -> set:
    return {frozenset(cdt.points[v].approx() for v in t) for t in cdt.triangles()}


def test_init_and_degenerate_enclosing_triangle(kernel_name):
    cdt, _ = make_cdt(kernel_name)
    assert cdt.nb_vertices == 3 and cdt.nb_triangles == 1
    assert not cdt.flipped
    clockwise = CDT(kernel_name).init(ENCLOSING[0], ENCLOSING[2], ENCLOSING[1])
    assert clockwise.flipped
    assert clockwise.check() == (True, 'ok')
    with pytest.raises(DegenerateInput):
        CDT(kernel_name).init((0, 0), (1, 1), (2, 2))


def test_insert_vertices(kernel_name):
    cdt, ids = make_cdt(kernel_name, SQUARE + [(0.5, 0.25)])
    assert ids == [3, 4, 5, 6, 7]
    assert cdt.nb_triangles == 1 + 2 * 5
    assert cdt.check() == (True, 'ok')


def test_insert_existing_vertex_returns_its_id(kernel_name):
    cdt, ids = make_cdt(kernel_name, SQUARE)
    assert cdt.insert_vertex((1.0, 1.0)) == ids[2]
    assert cdt.nb_vertices == 7


def test_insert_on_edge_splits_two_triangles(kernel_name):
    cdt, ids = make_cdt(kernel_name, [(0.0, 0.0), (2.0, 0.0)], delaunay=False)
    before = cdt.nb_triangles
    cdt.insert_constraint(ids[0], ids[1])
    cdt.insert_vertex((1.0, 0.0))
    assert cdt.nb_triangles == before + 2
    assert cdt.check() == (True, 'ok')


def test_point_outside_raises(kernel_name):
    cdt, _ = make_cdt(kernel_name)
    with pytest.raises(OutOfDomain):
        cdt.insert_vertex((50.0, 50.0))


def test_result_does_not_depend_on_insertion_order(kernel_name):
    """ Four cocyclic points have two Delaunay triangulations; the perturbation picks one. """
    reference = None
    for order in ([0, 1, 2, 3], [2, 0, 3, 1], [3, 2, 1, 0], [1, 3, 0, 2]):
        cdt, _ = make_cdt(kernel_name, [SQUARE[i] for i in order])
        assert cdt.check() == (True, 'ok')
        triangles = geometric_triangles(cdt)
        if reference is None: reference = triangles
        assert triangles == reference


def test_crossing_constraints_create_a_vertex(kernel_name):
    cdt, ids = make_cdt(kernel_name, SQUARE)
    cdt.insert_constraint(ids[0], ids[2], cid=1)
    cdt.insert_constraint(ids[1], ids[3], cid=2)
    assert cdt.nb_vertices == 8
    center = 7
    assert cdt.points[center].to_fractions() == (0.5, 0.5)
    assert cdt.edge_constraints(ids[0], center) == [1]
    assert cdt.edge_constraints(center, ids[3]) == [2]
    assert cdt.check() == (True, 'ok')


def test_constraint_through_a_vertex_and_overlap(kernel_name):
    cdt, ids = make_cdt(kernel_name, [(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 3.0)])
    a, c, m, top = ids
    cdt.insert_constraint(a, c, cid=1)
    cdt.insert_constraint(a, m, cid=2)
    assert cdt.edge_constraints(a, c) == []
    assert sorted(cdt.edge_constraints(a, m)) == [1, 2]
    assert cdt.edge_constraints(m, c) == [1]
    cdt.insert_constraint(m, top, cid=3)
    assert cdt.check() == (True, 'ok')


def test_constraint_flips_keep_delaunay_outside_constraints(kernel_name):
    points = [(0.0, 0.0), (4.0, 0.0), (2.0, 0.5), (2.0, -0.5), (1.0, 0.2), (3.0, -0.2)]
    cdt, ids = make_cdt(kernel_name, points)
    cdt.insert_constraint(ids[0], ids[1], cid=7)
    assert cdt.edge_constraints(ids[0], ids[1]) == [7]
    assert cdt.stats['constraint_flips'] > 0
    assert cdt.check() == (True, 'ok')


def test_degenerate_constraint_raises(kernel_name):
    cdt, ids = make_cdt(kernel_name, SQUARE)
    with pytest.raises(InvalidInput):
        cdt.insert_constraint(ids[0], ids[0])


def test_reset_reuses_storage(kernel_name):
    cdt, _ = make_cdt(kernel_name, SQUARE)
    capacity = len(cdt.T)
    cdt.init(*ENCLOSING)
    assert cdt.nb_triangles == 1 and cdt.nb_vertices == 3
    assert len(cdt.T) == capacity


CROSSING = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (1.0, -0.5), (1.0, 2.5)]


def test_recovered_constraint_stays_an_edge(kernel_name):
    cdt, ids = make_cdt(kernel_name, CROSSING)
    cdt.insert_constraint(ids[0], ids[2], cid=0)
    assert cdt.check() == (True, 'ok')
    assert any({ids[0], ids[2]} <= set(t) for t in cdt.triangles())
    assert cdt.Q.empty()


@pytest.mark.parametrize('constraints, step', [
    ([(0, 2), (4, 5)], 1),
    ([(0, 2), (1, 3)], 1),
    ([(0, 2), (1, 3), (4, 5)], 7),
])
def test_crossing_constraints_in_every_order(kernel_name, constraints, step):
    """ Same triangulation for every vertex order and constraint order; all constraints meet at (1, 1). """
    found = set()
    vertex_orders = itertools.islice(itertools.permutations(range(len(CROSSING))), 0, None, step)
    for vertex_order in vertex_orders:
        for constraint_order in itertools.permutations(range(len(constraints))):
            cdt, _ = make_cdt(kernel_name)
            ids = {k: cdt.insert_vertex(CROSSING[k]) for k in vertex_order}
            for c in constraint_order:
                a, b = constraints[c]
                cdt.insert_constraint(ids[a], ids[b], cid=c)
            assert cdt.check() == (True, 'ok')
            assert cdt.nb_vertices == 3 + len(CROSSING) + 1
            found.add(frozenset(geometric_triangles(cdt)))
    assert len(found) == 1


def test_constraint_queue_is_a_marked_list():
    queue = TriangleList()
    for t in (4, 1, 7): queue.push_back(t)
    queue.push_back(1)
    assert 7 in queue and 3 not in queue
    queue.remove(1)
    assert 1 not in queue
    assert [queue.pop_front(), queue.pop_front()] == [4, 7]
    assert queue.empty()
