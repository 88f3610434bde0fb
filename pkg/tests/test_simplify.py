from fractions import Fraction
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.corefine import preprocess, corefine
from meshcsg.boolean import weiler
from meshcsg.boolean.classify import classify
from meshcsg.boolean.simplify import Region, detect_coplanar_regions, extract_borders, simplify
from meshcsg.csg.validation import is_watertight
from conftest import make_cube


def boolean(meshes, expr) -> TriMesh:
    return classify(weiler.build(corefine(preprocess(TriMesh.from_operands(meshes)))), expr)


def test_cube_faces_are_six_regions(unit_cube):
    regions = detect_coplanar_regions(unit_cube)
    assert len(regions) == 6
    assert all(len(r) == 2 for r in regions)
    assert regions == sorted(regions)


def test_tetrahedron_regions_are_singletons():
    mesh = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]])
    assert detect_coplanar_regions(mesh) == [[0], [1], [2], [3]]
    assert simplify(mesh).nb_facets == 4


def test_extract_borders_of_a_square(unit_cube):
    region = extract_borders(unit_cube, Region([0, 1]))
    assert len(region.loops) == 1
    assert sorted(region.loops[0]) == [0, 1, 2, 3]
    assert not region.pinched


def test_simplified_union_keeps_shape(offset_cubes):
    result = boolean(offset_cubes, 'A+B')
    stats = {}
    simplified = simplify(result, stats=stats)
    assert simplified.nb_facets < result.nb_facets
    assert simplified.exact_signed_volume() == Fraction(15, 8)
    assert simplified.euler_characteristic() == result.euler_characteristic() == 2
    assert is_watertight(simplified)
    # Seven corners of each cube and six points where edges pierce faces.
    assert simplified.nb_vertices == 20
    assert simplified.nb_facets == 2 * (20 - 2)
    assert stats['nb_facets_in'] == result.nb_facets and stats['nb_facets_out'] == simplified.nb_facets


def test_region_with_a_hole_stays_open():
    """ A tower on top of a block: the top face of the block is an annulus. """
    block = make_cube(size=2.0)
    tower = make_cube(size=(1.0, 1.0, 1.5), offset=(0.5, 0.5, 1.5))
    result = boolean([block, tower], 'A+B')
    simplified = simplify(result)
    assert simplified.exact_signed_volume() == 9
    assert is_watertight(simplified)
    assert simplified.euler_characteristic() == 2
    # Block corners, tower top corners and the four corners where the tower meets the block.
    assert simplified.nb_vertices == 16
    assert simplified.inexact_vertices() == []


def test_simplify_is_stable(offset_cubes):
    once = simplify(boolean(offset_cubes, 'A*B'))
    twice = simplify(once)
    assert once.exact_signed_volume() == Fraction(1, 8)
    assert twice.nb_facets == once.nb_facets == 12
