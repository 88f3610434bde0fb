from math import gcd
from meshcsg.errors import InvalidInput
from meshcsg.kernel.sign import Sign
from meshcsg.kernel.expansion import Expansion, compress
from meshcsg.kernel.bigfloat import BigFloat, bigfloat_compare


class ArithmeticKernel:
    """
    A number kernel chosen once per pipeline run. Kernels are stateless and
    shared; the numbers they produce are immutable.

    Attributes:
        name: str. Name used in configuration and on the command line.
        number_type: type. Expansion or BigFloat.
        unique_points: bool. True if homogeneous points have a unique normalized
                       representation, so that point order may compare raw coordinates.
    """
    name = ''
    number_type = None
    unique_points = False

    def number(self, value: float | int):
        if isinstance(value, self.number_type): return value
        if isinstance(value, int): return self.number_type.from_int(value)
        return self.number_type.from_double(value)


    def zero(self):
        return self.number_type()


    def same(self, a, b) -> bool:
        """ Cheap test that two numbers are equal. False negatives are allowed. """
        return a.same_as(b)


    def normalize(self, coordinates: tuple) -> tuple:
        """ Representation used to store a homogeneous point. Last coordinate is w. """
        return coordinates


    def compare(self, a, b) -> Sign:
        return (a - b).sign()


    def __repr__(self):
        return f'{self.__class__.__name__}()'



class ExpansionKernel(ArithmeticKernel):
    """ Floating-point expansions. Fast, but exact only inside the double exponent range. """
    name = 'expansion'
    number_type = Expansion
    unique_points = False

    def normalize(self, coordinates: tuple) -> tuple:
        return tuple(compress(c) for c in coordinates)



class MPFloatKernel(ArithmeticKernel):
    """
    Multiprecision floats. Homogeneous points are stored as integers with no
    common factor and w > 0, which makes the representation of a point unique.
    """
    name = 'mpfloat'
    number_type = BigFloat
    unique_points = True

    def normalize(self, coordinates: tuple) -> tuple:
        nonzero = [c for c in coordinates if c.mantissa != 0]
        lowest = min(c.exponent for c in nonzero)
        integers = [c.mantissa << (c.exponent - lowest) if c.mantissa else 0 for c in coordinates]
        content = gcd(*integers)
        if integers[-1] < 0: content = -content
        return tuple(BigFloat(i // content, 0) for i in integers)


    def compare(self, a, b) -> Sign:
        return bigfloat_compare(a, b)


KERNELS = {kernel.name: kernel for kernel in (ExpansionKernel(), MPFloatKernel())}


def get_kernel(name: str | ArithmeticKernel) -> ArithmeticKernel:
    if isinstance(name, ArithmeticKernel): return name
    try:
        return KERNELS[name]
    except KeyError:
        raise InvalidInput(f'Kernel: Unknown kernel "{name}". Choose from {list(KERNELS)}.')
