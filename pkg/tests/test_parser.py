import pytest
from meshcsg.errors import CsgSyntaxError
from meshcsg.csg.parser import CsgNode, CsgParser, parse_csg, format_csg

SCENE = '''
// Two levels of booleans.
group() {
    difference() {
        union() {
            cube(size = [2, 2, 1], center = true);
            multmatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0.5], [0, 0, 0, 1]]) {
                cylinder($fn = 16, h = 1, r1 = 0.8, r2 = 0.4, center = false);
            }
        }
        sphere(d = 1.5, $fn = 12);
    }
    polyhedron(points = [[0, 0, 3], [1, 0, 3], [0, 1, 3], [0, 0, 4]], faces = [[0, 1, 2], [0, 3, 1], [1, 3, 2], [0, 2, 3]]);
}
'''


def test_difference_of_cube_and_sphere():
    tree = parse_csg('difference(){cube(2);sphere(r=1.2);}')
    assert tree.kind == 'difference'
    assert [child.kind for child in tree.children] == ['cube', 'sphere']
    cube, sphere = tree.children
    assert cube.params == {'size': [2.0, 2.0, 2.0], 'center': False}
    assert sphere.params == {'r': 1.2, '$fn': 0.0, '$fa': 12.0, '$fs': 2.0}


def test_multmatrix_translate():
    tree = parse_csg('multmatrix([[1,0,0,5],[0,1,0,0],[0,0,1,0],[0,0,0,1]]){cube();}')
    assert tree.kind == 'multmatrix'
    assert tree.params['matrix'][0] == [1.0, 0.0, 0.0, 5.0]
    assert tree.children == [CsgNode('cube', {'size': [1.0, 1.0, 1.0], 'center': False})]


def test_defaults():
    cylinder = parse_csg('cylinder();')
    assert cylinder.params == {'h': 1.0, 'r1': 1.0, 'r2': 1.0, 'center': False, '$fn': 0.0, '$fa': 12.0, '$fs': 2.0}
    sphere = parse_csg('sphere();', defaults={'sphere': {'r': 3}, 'fn': 24})
    assert sphere.params['r'] == 3.0 and sphere.params['$fn'] == 24
    assert parse_csg('cylinder(h=2, d=3);').params['r1'] == 1.5
    # A three row matrix gets its last row.
    assert parse_csg('multmatrix([[1,0,0,0],[0,1,0,0],[0,0,1,0]]) cube();').params['matrix'][3] == [0.0, 0.0, 0.0, 1.0]


def test_scene_tree():
    tree = parse_csg(SCENE)
    assert [node.kind for node in tree.walk()] == ['group', 'difference', 'union', 'cube', 'multmatrix',
                                                   'cylinder', 'sphere', 'polyhedron']
    difference = tree.children[0]
    assert (difference.line, difference.column) == (4, 5)
    assert difference.children[1].params['r'] == 0.75
    assert tree.children[1].params['faces'][1] == [0, 3, 1]


def test_format_then_parse_gives_the_same_tree():
    tree = parse_csg(SCENE)
    assert parse_csg(format_csg(tree)) == tree
    negative = parse_csg('multmatrix([[-1,0,0,-0.1],[0,1,0,1e-7],[0,0,1,0],[0,0,0,1]]) { sphere(0.3); }')
    assert parse_csg(format_csg(negative)) == negative


def test_several_top_level_statements_are_grouped():
    tree = parse_csg('cube(); ; sphere();')
    assert tree.kind == 'group' and len(tree.children) == 2


def test_render_and_color_are_groups():
    tree = parse_csg('color([1, 0, 0, 1]) { render(convexity = 2) { cube(); } }')
    assert tree.kind == 'group' and tree.params == {}
    assert tree.children[0].kind == 'group'


def test_unknown_kind_warns_or_raises():
    parser = CsgParser(verbose=False)
    tree = parser.parse('union() { cube(); linear_extrude(height = 2) square(1); }')
    assert [child.kind for child in tree.children] == ['cube']
    assert len(parser.warnings) == 2
    assert 'linear_extrude' in parser.warnings[1] or 'linear_extrude' in parser.warnings[0]
    with pytest.raises(CsgSyntaxError):
        parse_csg('hull() { cube(); }', strict=True)


@pytest.mark.parametrize('text, line, column', [
    ('cube(size = 1', 1, 14),
    ('union() {\n  cube();\n  sphere(r = @);\n}', 3, 14),
    ('union() {\n  cube();\n', 1, 1),
    ('cube(1) { sphere(); }', 1, 1),
    ('cube(size = [1, 2, 3, 4]);', 1, 1),
    ('sphere(r = true);', 1, 1),
    ('cube(center = true, 2);', 1, 21),
])
def test_syntax_errors_carry_line_and_column(text, line, column):
    with pytest.raises(CsgSyntaxError) as error:
        parse_csg(text)
    assert (error.value.line, error.value.column) == (line, column)
