# =============================================================================
# Parser of flat .csg scene files, as exported by OpenSCAD.
#
# A file is a list of statements
#   kind(arguments) ;
#   kind(arguments) { statements }
#   kind(arguments) statement
# Arguments are positional or name = value, values being numbers, booleans,
# undef, strings or nested vectors. Defaults are resolved at parse time so
# that printing a tree and parsing it again gives the same tree.
# =============================================================================

import re
from copy import deepcopy
from meshcsg.errors import CsgSyntaxError

PRIMITIVES = ('cube', 'sphere', 'cylinder', 'polyhedron')
OPERATIONS = ('union', 'difference', 'intersection', 'group', 'multmatrix')
GROUP_ALIASES = ('render', 'color')
FRAGMENT_DEFAULTS = {'$fn': 0, '$fa': 12, '$fs': 2}
PRIMITIVE_DEFAULTS = {'cube': {'size': 1}, 'sphere': {'r': 1}, 'cylinder': {'h': 1, 'r': 1}}
IDENTITY = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]

_TOKEN = re.compile(r'''
    (?P<space>[ \t\r]+|\n)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>\$?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<punct>[(){}\[\],;=+-])
''', re.VERBOSE | re.DOTALL)



class CsgNode:
    """
    Attributes:
        kind: str. One of PRIMITIVES or OPERATIONS.
        params: dict. Resolved parameters. cube has size (3 floats) and center,
                sphere has r, cylinder has h, r1, r2 and center, polyhedron has
                points and faces, multmatrix has matrix (4x4 floats). Primitives
                also carry $fn, $fa and $fs.
        children: list[CsgNode].
        line, column: int. Position of the node in its file, 0 when built by hand.
    """
    def __init__(self, kind: str, params: dict = None, children: list = None, line: int = 0, column: int = 0):
        self.kind = kind
        self.params = params if params is not None else {}
        self.children = children if children is not None else []
        self.line = line
        self.column = column


    def is_primitive(self) -> bool:
        return self.kind in PRIMITIVES


    def __eq__(self, other):
        if not isinstance(other, CsgNode): return NotImplemented
        return self.kind == other.kind and self.params == other.params and self.children == other.children


    def __repr__(self):
        inside = ', '.join(repr(child) for child in self.children)
        return f'{self.kind}({inside})' if self.children else f'{self.kind}()'


    def walk(self):
        """ Depth first, parents before children. """
        yield self
        for child in self.children:
            yield from child.walk()



def _tokenize(text: str) -> list[tuple[str, object, int, int]]:
    tokens = []
    pos, line, start_of_line = 0, 1, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise CsgSyntaxError(f'CsgParser: Unexpected character {text[pos]!r}', line, pos - start_of_line + 1)
        kind, value = match.lastgroup, match.group()
        column = pos - start_of_line + 1
        if kind == 'number': tokens.append(('number', float(value), line, column))
        elif kind == 'string': tokens.append(('string', value[1:-1].replace('\\"', '"'), line, column))
        elif kind in ('name', 'punct'): tokens.append((kind, value, line, column))
        newlines = value.count('\n')
        if newlines:
            line += newlines
            start_of_line = pos + value.rfind('\n') + 1
        pos = match.end()
    tokens.append(('end', None, line, pos - start_of_line + 1))
    return tokens



class CsgParser:
    """
    Recursive descent parser.

    Attributes:
        strict: bool. Unknown node kinds raise CsgSyntaxError when True, and
                are dropped with a warning otherwise.
        defaults: dict. Primitive defaults (cube/size, sphere/r, cylinder/h,
                  cylinder/r) and fragment defaults (fn, fa, fs).
        warnings: list[str]. Warnings of the last parse.
    """
    def __init__(self, strict: bool = False, defaults: dict = None, verbose: bool = True):
        self.strict = strict
        self.verbose = verbose
        self.primitive_defaults = deepcopy(PRIMITIVE_DEFAULTS)
        self.fragment_defaults = dict(FRAGMENT_DEFAULTS)
        for kind, values in (defaults or {}).items():
            if kind in ('fn', 'fa', 'fs'): self.fragment_defaults['$' + kind] = values
            elif kind in self.primitive_defaults: self.primitive_defaults[kind].update(values)
        self.warnings = []


    def parse(self, text: str) -> CsgNode:
        """ Tree of the file. Several top level statements are wrapped in a group. """
        self.tokens = _tokenize(text)
        self.pos = 0
        self.warnings = []
        statements = []
        while self.peek()[0] != 'end':
            node = self.statement()
            if node is not None: statements.append(node)
        if len(statements) == 1: return statements[0]
        return CsgNode('group', {}, statements, 1, 1)


    ##################################################
    # Token stream.

    def peek(self) -> tuple:
        return self.tokens[self.pos]


    def take(self) -> tuple:
        token = self.tokens[self.pos]
        self.pos += 1
        return token


    def expect(self, value: str) -> tuple:
        token = self.take()
        if token[1] != value or token[0] not in ('punct', 'name'):
            shown = 'end of file' if token[0] == 'end' else repr(token[1])
            raise CsgSyntaxError(f'CsgParser: Expected {value!r}, found {shown}', token[2], token[3])
        return token


    def accept(self, value: str) -> bool:
        token = self.peek()
        if token[0] == 'punct' and token[1] == value:
            self.pos += 1
            return True
        return False


    ##################################################
    # Grammar.

    def statement(self) -> CsgNode | None:
        if self.accept(';'): return None
        kind, name, line, column = self.take()
        if kind != 'name':
            shown = 'end of file' if kind == 'end' else repr(name)
            raise CsgSyntaxError(f'CsgParser: Expected a node name, found {shown}', line, column)
        self.expect('(')
        positional, named = self.arguments()

        children = []
        if self.accept('{'):
            while not self.accept('}'):
                if self.peek()[0] == 'end':
                    raise CsgSyntaxError(f'CsgParser: Block of {name} is not closed', line, column)
                child = self.statement()
                if child is not None: children.append(child)
        elif not self.accept(';'):
            child = self.statement()
            if child is not None: children.append(child)

        if name in GROUP_ALIASES: name, positional, named = 'group', [], {}
        if name not in PRIMITIVES and name not in OPERATIONS:
            message = f'CsgParser: Unknown node kind "{name}"'
            if self.strict: raise CsgSyntaxError(message, line, column)
            self.warnings.append(f'{message} at line {line}, it is ignored.')
            if self.verbose: print(self.warnings[-1])
            return None
        if name in PRIMITIVES and children:
            raise CsgSyntaxError(f'CsgParser: Primitive {name} cannot have children', line, column)
        return CsgNode(name, self.resolve(name, positional, named, line, column), children, line, column)


    def arguments(self) -> tuple[list, dict]:
        positional, named = [], {}
        if self.accept(')'): return positional, named
        while True:
            token, following = self.peek(), self.tokens[self.pos + 1]
            if token[0] == 'name' and following[1] == '=' and following[0] == 'punct':
                self.pos += 2
                named[token[1]] = self.value()
            else:
                if named:
                    raise CsgSyntaxError('CsgParser: Positional argument after a named one', token[2], token[3])
                positional.append(self.value())
            if self.accept(')'): return positional, named
            self.expect(',')


    def value(self):
        kind, value, line, column = self.take()
        if kind == 'number': return value
        if kind == 'string': return value
        if kind == 'punct' and value in '+-':
            number = self.value()
            if not isinstance(number, float):
                raise CsgSyntaxError('CsgParser: Sign before a non number', line, column)
            return -number if value == '-' else number
        if kind == 'punct' and value == '[':
            items = []
            if self.accept(']'): return items
            while True:
                items.append(self.value())
                if self.accept(']'): return items
                self.expect(',')
        if kind == 'name' and value in ('true', 'false'): return value == 'true'
        if kind == 'name' and value == 'undef': return None
        shown = 'end of file' if kind == 'end' else repr(value)
        raise CsgSyntaxError(f'CsgParser: Expected a value, found {shown}', line, column)


    ##################################################
    # Parameters.

    def resolve(self, kind: str, positional: list, named: dict, line: int, column: int) -> dict:
        """ Parameters of a node with every default filled in. """
        def fail(message):
            raise CsgSyntaxError(f'CsgParser: {kind}: {message}', line, column)

        def number(value, what):
            if isinstance(value, bool) or not isinstance(value, float | int): fail(f'{what} must be a number')
            return float(value)

        if kind in ('union', 'difference', 'intersection', 'group'): return {}

        if kind == 'multmatrix':
            matrix = named.get('m', positional[0] if positional else IDENTITY)
            if not isinstance(matrix, list) or len(matrix) not in (3, 4) \
                    or any(not isinstance(row, list) or len(row) != 4 for row in matrix):
                fail('matrix must be 3 or 4 rows of 4 numbers')
            matrix = [[number(x, 'matrix entry') for x in row] for row in matrix]
            if len(matrix) == 3: matrix.append([0.0, 0.0, 0.0, 1.0])
            return {'matrix': matrix}

        fragments = {key: number(named.get(key, default), key) for key, default in self.fragment_defaults.items()}

        if kind == 'cube':
            size = named.get('size', positional[0] if positional else self.primitive_defaults['cube']['size'])
            size = [number(x, 'size') for x in size] if isinstance(size, list) else [number(size, 'size')] * 3
            if len(size) != 3: fail('size must be a number or 3 numbers')
            center = named.get('center', positional[1] if len(positional) > 1 else False)
            return {'size': size, 'center': bool(center)}

        if kind == 'sphere':
            if 'd' in named and 'r' not in named: r = number(named['d'], 'd') / 2
            else: r = number(named.get('r', positional[0] if positional else self.primitive_defaults['sphere']['r']), 'r')
            return {'r': r, **fragments}

        if kind == 'cylinder':
            defaults = self.primitive_defaults['cylinder']
            h = number(named.get('h', positional[0] if positional else defaults['h']), 'h')
            r = named.get('r', positional[1] if len(positional) > 1 else None)
            if r is None and 'd' in named: r = number(named['d'], 'd') / 2
            r = defaults['r'] if r is None else number(r, 'r')
            r1 = named.get('r1', positional[2] if len(positional) > 2 else None)
            r2 = named.get('r2', positional[3] if len(positional) > 3 else None)
            if r1 is None and 'd1' in named: r1 = number(named['d1'], 'd1') / 2
            if r2 is None and 'd2' in named: r2 = number(named['d2'], 'd2') / 2
            r1 = r if r1 is None else number(r1, 'r1')
            r2 = r if r2 is None else number(r2, 'r2')
            return {'h': h, 'r1': r1, 'r2': r2, 'center': bool(named.get('center', False)), **fragments}

        # polyhedron
        points = named.get('points', positional[0] if positional else None)
        faces = named.get('faces', named.get('triangles', positional[1] if len(positional) > 1 else None))
        if not isinstance(points, list) or not isinstance(faces, list): fail('points and faces are required')
        if any(not isinstance(p, list) or len(p) != 3 for p in points): fail('points must be 3 numbers each')
        points = [[number(x, 'point coordinate') for x in p] for p in points]
        faces = [[int(number(i, 'face index')) for i in face] for face in faces]
        return {'points': points, 'faces': faces}



def parse_csg(text: str, strict: bool = False, defaults: dict = None, verbose: bool = True) -> CsgNode:
    return CsgParser(strict, defaults, verbose).parse(text)


##################################################
# Printing.

def _format_value(value) -> str:
    if isinstance(value, bool): return 'true' if value else 'false'
    if isinstance(value, float): return repr(value)
    if isinstance(value, int): return repr(float(value))
    if isinstance(value, list): return '[' + ', '.join(_format_value(v) for v in value) + ']'
    if value is None: return 'undef'
    return '"' + str(value).replace('"', '\\"') + '"'


def format_csg(node: CsgNode, indent: str = '\t', level: int = 0) -> str:
    """
    Text of a tree. Floats are written with repr, so parse_csg(format_csg(tree)) == tree.
    """
    if node.kind == 'multmatrix': arguments = _format_value(node.params['matrix'])
    else: arguments = ', '.join(f'{key} = {_format_value(value)}' for key, value in node.params.items())
    head = indent * level + f'{node.kind}({arguments})'
    if node.is_primitive(): return head + ';'
    if not node.children: return head + ' { }'
    inside = '\n'.join(format_csg(child, indent, level + 1) for child in node.children)
    return head + ' {\n' + inside + '\n' + indent * level + '}'
