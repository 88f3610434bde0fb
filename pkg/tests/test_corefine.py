from fractions import Fraction
import numpy as np
import pytest
from meshcsg.errors import InvalidInput
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.corefine import Corefiner, preprocess, corefine, merge_duplicate_facets
from conftest import make_cube


def test_merge_duplicate_facets_ors_operands():
    facets = [[0, 1, 2], [2, 0, 1], [1, 2, 3], [0, 2, 1]]
    merged, operands, sources = merge_duplicate_facets(facets, [1, 2, 1, 4], [10, 11, 12, 13])
    assert merged.tolist() == [[0, 1, 2], [1, 2, 3]]
    assert operands == [1 | 2 | 4, 1]
    assert sources.tolist() == [10, 12]


def test_preprocess_merges_identical_operands():
    mesh = preprocess(TriMesh.from_operands([make_cube(), make_cube()]))
    assert mesh.nb_vertices == 8
    assert mesh.nb_facets == 12
    assert set(mesh.operands) == {0b11}


def test_preprocess_drops_degenerate_facets():
    vertices = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 0]]
    mesh = preprocess(TriMesh(vertices, [[0, 1, 2], [0, 3, 1], [1, 1, 2]]))
    assert mesh.nb_facets == 1
    assert mesh.nb_vertices == 3


def test_preprocess_rejects_bad_input():
    with pytest.raises(InvalidInput):
        preprocess(TriMesh())
    with pytest.raises(InvalidInput):
        preprocess(TriMesh([[0, 0, 0], [1, 0, 0], [0, float('inf'), 0]], [[0, 1, 2]]))
    with pytest.raises(InvalidInput):
        preprocess(TriMesh([[0, 0, 0], [1, 0, 0]], [[0, 1, 1]]))


def test_clean_mesh_has_no_improper_facets(kernel_name, unit_cube):
    assert Corefiner(kernel_name).find_improper(unit_cube) == []
    result = corefine(preprocess(unit_cube), kernel_name)
    assert result.nb_facets == 12


def test_offset_cubes_are_corefined(kernel_name, offset_cubes):
    soup = preprocess(TriMesh.from_operands(offset_cubes))
    corefiner = Corefiner(kernel_name)
    assert corefiner.find_improper(soup) != []

    result = corefiner.run(soup)
    assert result.nb_facets > soup.nb_facets
    assert corefiner.stats['cdt_count'] > 0
    assert Corefiner(kernel_name).find_improper(result) == []
    # Refinement keeps every facet's plane and orientation, so volumes add up.
    assert result.exact_signed_volume() == 2
    assert set(result.operands) == {1, 2}
    # Offsets of one half: every constructed point is a double.
    assert result.inexact_vertices() == []


def test_corefine_is_idempotent(offset_cubes):
    once = corefine(preprocess(TriMesh.from_operands(offset_cubes)))
    corefiner = Corefiner()
    twice = corefiner.run(once)
    assert corefiner.stats['cdt_count'] == 0
    assert twice.nb_facets == once.nb_facets
    assert twice.nb_vertices == once.nb_vertices


def test_kernels_and_thread_counts_agree(offset_cubes):
    soup = preprocess(TriMesh.from_operands(offset_cubes))
    results = [corefine(soup, kernel, threads) for kernel in ('expansion', 'mpfloat') for threads in (1, 4)]
    for result in results[1:]:
        assert result.nb_facets == results[0].nb_facets
        assert np.array_equal(result.facets, results[0].facets)
        assert np.array_equal(result.vertices, results[0].vertices)


def test_inexact_intersection_points():
    """ A blade crossing a triangle at thirds: constructed vertices are exact, not doubles. """
    flat = TriMesh([[0, 0, 0], [3, 0, 0], [0, 3, 0]], [[0, 1, 2]])
    blade = TriMesh([[0.2, 1, -1], [1.2, 1, 2], [0.7, 2, 2]], [[0, 1, 2]])
    result = corefine(preprocess(TriMesh.from_operands([flat, blade])))
    assert result.inexact_vertices() != []
    assert Corefiner().find_improper(result) == []
    area = Fraction(0)
    for f in np.flatnonzero(result.operands == 1):
        a, b, c = (result.point(int(v), 'mpfloat').to_fractions() for v in result.facets[f])
        area += (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    assert area / 2 == Fraction(9, 2)
