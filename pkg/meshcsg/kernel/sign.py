from enum import IntEnum


class Sign(IntEnum):
    """ Result of every predicate. Ordered NEGATIVE < ZERO < POSITIVE. """
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    def __mul__(self, other):
        return Sign(int(self) * int(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Sign(-int(self))

    @classmethod
    def of(cls, value) -> 'Sign':
        """ Sign of any number supporting comparison with 0. """
        if value > 0: return cls.POSITIVE
        if value < 0: return cls.NEGATIVE
        return cls.ZERO
