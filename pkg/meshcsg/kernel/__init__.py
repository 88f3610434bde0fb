from meshcsg.kernel.sign import Sign
from meshcsg.kernel.interval import Interval
from meshcsg.kernel.eft import two_sum, two_prod
from meshcsg.kernel.expansion import Expansion, expansion_add, expansion_sub, expansion_mul, compress, \
    expansion_sign, expansion_to_interval
from meshcsg.kernel.bigfloat import BigFloat, bigfloat_add, bigfloat_sub, bigfloat_mul, bigfloat_compare, \
    bigfloat_to_interval
from meshcsg.kernel.kernel import ArithmeticKernel, ExpansionKernel, MPFloatKernel, KERNELS, get_kernel
