"""Exception types shared across the package."""


class BergelabError(Exception):
    """Base class for all bergelab errors."""


class ParameterOutOfRange(BergelabError):
    pass


class EdgeWrongSize(BergelabError):
    pass


class VertexOutOfRange(BergelabError):
    pass


class DuplicateEdge(BergelabError):
    pass


class Unreachable(BergelabError):
    """A truncated edge trace never reaches the requested minimum degree."""


class WrongK(BergelabError):
    pass


class WrongR(BergelabError):
    pass


class InvalidPath(BergelabError):
    pass


class BudgetExceeded(BergelabError):
    pass


class Infeasible(BergelabError):
    """Exact enumeration would exceed the configured size guard."""


class MissingGamma0(BergelabError):
    pass


class ConfigInvalid(BergelabError):
    pass


class IoError(BergelabError):
    pass
