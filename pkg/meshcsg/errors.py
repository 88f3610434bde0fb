"""
Exception hierarchy of meshcsg.
Every message starts with the name of the component that raised it, e.g. 'CDT: ...'.
"""


class MeshCSGError(Exception):
    """ Base class of every error raised on purpose by meshcsg. """


class KernelRangeError(MeshCSGError, ArithmeticError):
    """ An exact number left the exponent range of its kernel. """


class InvalidInput(MeshCSGError, ValueError):
    """ Input violates a precondition (empty mesh, non-finite coordinate, i = j constraint...). """


class DegenerateInput(MeshCSGError, ValueError):
    """ Exactly degenerate triangle given where a proper one is required. """


class DegenerateConstruction(MeshCSGError):
    """ A construction met a zero denominator. It means an upstream codepath was wrong. """


class OutOfDomain(MeshCSGError):
    """ A point inserted in a CDT is outside its enclosing triangle. """


class TopologyError(MeshCSGError):
    """ Combinatorial structure is not what the algorithm expects (odd bundle, open shell...). """


class CsgSyntaxError(MeshCSGError):
    """ Lexical or syntax error in a .csg file. """
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f'{message} (line {line}, column {column})')
        self.line = line
        self.column = column


class ExpressionSyntaxError(MeshCSGError, ValueError):
    """ Syntax error in a boolean expression given to --expr. """
    def __init__(self, message: str, position: int = 0):
        super().__init__(f'{message} (position {position})')
        self.position = position


class MeshFormatError(MeshCSGError):
    """ Malformed OBJ or STL file. """


class ValidationError(MeshCSGError):
    """ A result mesh failed the self-checks. """
