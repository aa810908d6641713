"""Exception hierarchy shared by all sgplab modules."""


class SgplabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SgplabError, ValueError):
    """Invalid user-supplied input (mapped to its own CLI exit code)."""


class ModulusError(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class ResidueError(ValidationError):
    pass


class PrincipalCharacterError(ValidationError):
    pass


class ShapeError(ValidationError):
    pass


class CharacterIndexError(SgplabError, IndexError):
    pass


class NumericalError(SgplabError, ArithmeticError):
    """A computation produced an unusable result."""


class NumericalRankError(NumericalError):
    pass
