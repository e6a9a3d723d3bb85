class TAlgebraError(Exception):
    pass


class ShapeError(TAlgebraError, ValueError):
    pass


class DomainError(TAlgebraError, ValueError):
    pass


class SingularError(TAlgebraError, ArithmeticError):
    def __init__(self, msg, dead_slices=()):
        super().__init__(msg)
        self.dead_slices = tuple(dead_slices)


class RankError(TAlgebraError, ValueError):
    pass


class InsufficientDataError(TAlgebraError, ValueError):
    pass


class FormatError(TAlgebraError, ValueError):
    pass


class NumericError(TAlgebraError, ArithmeticError):
    pass
