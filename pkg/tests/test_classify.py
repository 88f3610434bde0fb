from fractions import Fraction
import numpy as np
import pytest
from meshcsg.errors import ExpressionSyntaxError, InvalidInput
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.corefine import preprocess, corefine
from meshcsg.boolean import weiler
from meshcsg.boolean.classify import OperandSet, NaryForm, parse_expr, classify, keep_outer_skin, RayCaster, \
    RAY_DIRECTIONS, _centroid, _far_point
from meshcsg.geometry.tritri import edge_triangle
from conftest import make_cube


def weiler_model(meshes, kernel='mpfloat'):
    return weiler.build(corefine(preprocess(TriMesh.from_operands(meshes)), kernel), kernel)


##################################################
# Operand sets and expressions.

def test_operand_set():
    s = OperandSet.of([0, 2], 3)
    assert s.bits == 0b101 and len(s) == 2
    assert list(s) == [0, 2]
    assert 1 not in s and 2 in s
    assert ~s == OperandSet.of([1], 3)
    assert s | OperandSet.of([1], 3) == OperandSet(0b111, 3)
    assert s & OperandSet.of([2], 3) == OperandSet.of([2], 3)
    assert s ^ s == OperandSet(0, 3)


def test_parse_expr_precedence():
    expr = parse_expr('(A+B+C)-D')
    assert expr(0b0001, 4)
    assert expr(0b0110, 4)
    assert not expr(0b1001, 4)
    assert not expr(0b0000, 4)
    # * binds tighter than +.
    expr = parse_expr('A+B*C')
    assert expr(0b001, 3) and not expr(0b010, 3) and expr(0b110, 3)


def test_parse_expr_operands_and_negation():
    for bits in range(4):
        assert parse_expr('%0+%1')(bits, 2) == parse_expr('A+B')(bits, 2)
        assert not parse_expr('A*!A')(bits, 2)
    assert parse_expr('!!A')(1, 1)
    assert repr(parse_expr('A - B')) == '(A*!B)'


def test_nary_forms():
    assert isinstance(parse_expr(' Union '), NaryForm)
    union, intersection, difference = (NaryForm(k) for k in ('union', 'intersection', 'difference'))
    assert union(0b100, 3) and not union(0, 3)
    assert intersection(0b111, 3) and not intersection(0b011, 3)
    assert difference(0b001, 3) and not difference(0b011, 3) and not difference(0b010, 3)


@pytest.mark.parametrize('text, position', [('A+*B', 2), ('(A+B', 4), ('A$', 1), ('A B', 2), ('', 0)])
def test_syntax_errors_carry_a_position(text, position):
    with pytest.raises(ExpressionSyntaxError) as error:
        parse_expr(text)
    assert error.value.position == position


def test_operand_beyond_count():
    with pytest.raises(InvalidInput):
        parse_expr('A+C', 2)
    with pytest.raises(InvalidInput):
        parse_expr('A+C')(0b00, 2)


##################################################
# Classification.

@pytest.mark.parametrize('expr, volume', [('union', Fraction(15, 8)), ('A+B', Fraction(15, 8)),
                                          ('intersection', Fraction(1, 8)), ('A*B', Fraction(1, 8)),
                                          ('A-B', Fraction(7, 8)), ('B-A', Fraction(7, 8))])
def test_offset_cubes(offset_cubes, kernel_name, expr, volume):
    map3 = weiler_model(offset_cubes, kernel_name)
    result = classify(map3, expr)
    assert result.exact_signed_volume() == volume
    assert result.signed_volume() == pytest.approx(float(volume), abs=1e-9)
    assert result.euler_characteristic() == 2
    assert map3.stats['components'] == 1


def test_inclusion_exclusion(offset_cubes):
    map3 = weiler_model(offset_cubes)
    union, intersection = classify(map3, 'A+B'), classify(map3, 'A*B')
    a_only, b_only = classify(map3, 'A-B'), classify(map3, 'B-A')
    assert abs(union.signed_volume() + intersection.signed_volume() - 2.0) < 1e-9
    assert union.exact_signed_volume() == a_only.exact_signed_volume() + b_only.exact_signed_volume() \
        + intersection.exact_signed_volume()


def test_contradiction_is_empty(offset_cubes):
    map3 = weiler_model(offset_cubes)
    assert classify(map3, 'A*!A').nb_facets == 0
    # The complement of the union is bounded by the same surface, facing inwards.
    assert classify(map3, '!A*!B').exact_signed_volume() == -Fraction(15, 8)


def test_disjoint_and_nested_operands():
    outer = make_cube(size=3.0, offset=(-1.0, -1.0, -1.0))
    inner = make_cube()
    far = make_cube(offset=(10.0, 0.0, 0.0))
    map3 = weiler_model([outer, inner, far])
    assert classify(map3, 'A-B').exact_signed_volume() == 26
    assert classify(map3, 'A*B').exact_signed_volume() == 1
    assert classify(map3, 'A+C').exact_signed_volume() == 28
    assert classify(map3, 'B+C').exact_signed_volume() == 2
    assert map3.stats['components'] == 3


def test_identical_operands_share_facets():
    map3 = weiler_model([make_cube(), make_cube()])
    assert classify(map3, 'A*B').exact_signed_volume() == 1
    assert classify(map3, 'A-B').nb_facets == 0
    assert classify(map3, 'A+B').nb_facets == 12


def test_keep_outer_skin_drops_nested_components():
    outer = make_cube(size=3.0, offset=(-1.0, -1.0, -1.0))
    far = make_cube(offset=(10.0, 0.0, 0.0))
    map3 = weiler_model([outer, make_cube(), far])
    skin = keep_outer_skin(map3)
    assert skin.nb_facets == 24
    assert skin.exact_signed_volume() == 28


def test_keep_outer_skin_of_overlapping_cubes(offset_cubes):
    map3 = weiler_model(offset_cubes)
    assert keep_outer_skin(map3).exact_signed_volume() == Fraction(15, 8)


def test_ray_seed_of_a_single_cube(unit_cube):
    map3 = weiler.build(unit_cube)
    caster = RayCaster(map3)
    # Facet sides see the outside, twin sides the inside.
    assert caster.seed(0) == 0
    assert caster.seed(3 * 12) == 1
    assert caster.stats['rays'] >= 2


def test_slab_hits_keep_every_crossed_facet(offset_cubes):
    map3 = weiler_model(offset_cubes)
    caster = RayCaster(map3)
    facets = np.arange(map3.m)
    nb_kept = nb_rays = 0
    for t in range(0, map3.m, 5):
        origin = _centroid(*caster.triangle(t))
        start = map3.mesh.vertices[map3.facets[t]].mean(axis=0)
        for direction in RAY_DIRECTIONS:
            far = _far_point(origin, direction, caster.reach)
            kept = caster.slab_hits(start, caster.reach * np.asarray(direction, dtype=float), facets)
            crossed = [u for u in range(map3.m) if edge_triangle(origin, far, caster.triangle(u))]
            assert all(kept[u] for u in crossed)
            nb_kept += int(kept.sum())
            nb_rays += 1
    assert nb_kept < nb_rays * map3.m // 2
