import numpy as np
import pytest
from meshcsg.errors import TopologyError
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.corefine import preprocess, corefine
from meshcsg.boolean import weiler
from meshcsg.boolean.weiler import Map3, orbits
from meshcsg.boolean.classify import shells_of, components_of


def tetrahedron(points) -> TriMesh:
    """ Outward oriented tetrahedron on four points. """
    p = np.array(points, dtype=float)
    if np.linalg.det(p[1:] - p[0]) < 0: p[[1, 2]] = p[[2, 1]]
    return TriMesh(p, [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]])


def hinged_tetrahedra() -> TriMesh:
    """ Two tetrahedra sharing the edge (0, 0, 0) - (0, 0, 1) and nothing else. """
    p, q = (0, 0, 0), (0, 0, 1)
    first = tetrahedron([p, q, (1, 0, 0), (0, 1, 0)])
    second = tetrahedron([p, q, (-1, 0, 0), (0, -1, 0)])
    return preprocess(TriMesh.from_operands([first, second]))


def test_dart_conventions(unit_cube):
    map3 = weiler.build(unit_cube)
    assert map3.nb_darts == 6 * 12
    assert map3.sigma1(3) == 4 and map3.sigma1(5) == 3
    assert map3.sigma1_inv(map3.sigma1(7)) == 7
    # Twin of facet t is t + m with its second and third vertex swapped.
    t = 5
    assert map3.triangle_vertices(3 * (t + 12)) == tuple(int(v) for v in unit_cube.facets[t][[0, 2, 1]])
    for d in range(map3.nb_darts):
        assert map3.alpha3[map3.alpha3[d]] == d
        assert map3.edge(int(map3.alpha3[d])) == map3.edge(d)[::-1]
        assert map3.facet(d) == (d // 3) % 12
    assert map3.is_twin(3 * 12) and not map3.is_twin(3 * 11)


def test_cube_model(unit_cube):
    map3 = weiler.build(unit_cube)
    assert map3.check() == (True, 'ok')
    assert map3.stats['nonmanifold_bundles'] == 0
    assert map3.stats['bundles'] == 18
    assert all(map3.is_manifold(d) for d in range(map3.nb_darts))
    shells = shells_of(map3, range(map3.nb_darts))
    assert len(shells) == 2
    assert all(len(shell) == 36 for shell in shells)
    assert len(components_of(map3)) == 1


def test_orbit_sizes(unit_cube):
    map3 = weiler.build(unit_cube)
    assert len(orbits(map3, 'triangle', 0)) == 3
    assert len(orbits(map3, 'bundle', 0)) == 4
    assert len(orbits(map3, 'component', 0)) == map3.nb_darts
    assert len(orbits(map3, 'patch', 0)) == 36
    assert orbits(map3, ('sigma1', 'alpha3'), 0) == {0, 1, 2} | {int(map3.alpha3[d]) for d in (0, 1, 2)}


def test_hinged_tetrahedra_sort_radially():
    mesh = hinged_tetrahedra()
    map3 = weiler.build(mesh)
    assert map3.check() == (True, 'ok')
    assert map3.stats['nonmanifold_bundles'] == 1
    assert map3.stats['radial_sorts'] == 1
    # Outside of both, inside the first, inside the second.
    assert len(shells_of(map3, range(map3.nb_darts))) == 3


def test_radial_sort_is_a_rotation_of_the_same_cycle():
    mesh = hinged_tetrahedra()
    map3 = weiler.build(mesh)
    b = next(b for b, darts in enumerate(map3.bundles) if len(darts) > 4)
    darts = map3.oriented_darts(b)
    reference = weiler.radial_sort(map3, darts)
    for origin in range(len(darts)):
        ordered = weiler.radial_sort(map3, darts, origin)
        start = ordered.index(reference[0])
        assert ordered[start:] + ordered[:start] == reference


def test_propagation_matches_sorting(offset_cubes):
    mesh = corefine(preprocess(TriMesh.from_operands(offset_cubes)))
    sorted_everywhere = weiler.build(mesh, propagate=False)
    propagated = weiler.build(mesh, propagate=True)
    assert sorted_everywhere.stats['nonmanifold_bundles'] > 0
    assert sorted_everywhere.stats['radial_sorts'] == sorted_everywhere.stats['nonmanifold_bundles']
    assert propagated.stats['propagated_bundles'] > 0
    assert propagated.stats['radial_sorts'] < sorted_everywhere.stats['radial_sorts']
    assert np.array_equal(propagated.alpha2, sorted_everywhere.alpha2)


def test_open_surface_raises():
    open_mesh = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    with pytest.raises(TopologyError):
        weiler.build(open_mesh)


def test_unwired_map_fails_check(unit_cube):
    map3 = Map3(unit_cube)
    map3.identify_bundles()
    ok, message = map3.check()
    assert not ok
    assert 'alpha2' in message
