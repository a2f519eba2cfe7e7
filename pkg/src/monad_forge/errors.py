"""Exception hierarchy. Every raised error is a ForgeError subclass."""


class ForgeError(Exception):
    pass


class PosetError(ForgeError):
    """Bad poset data: duplicate identifiers or an order cycle."""


class UnknownPointError(ForgeError):
    pass


class RoleViolationError(ForgeError):
    """A point set does not have the role (upper/lower) it claims.

    Distinct from a validity check returning False: the input is ill-typed.
    """


class NonMonotoneError(ForgeError):
    pass


class CarrierMismatchError(ForgeError):
    pass


class KindError(ForgeError):
    """Weight totals violate the declared sub/prob regime."""


class TableError(ForgeError):
    """An open-set table is not strict/modular/monotone; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EmptyAtomError(ForgeError):
    pass


class InvalidElementError(ForgeError):
    """A hyperspace element or nested element fails its closure invariants."""


class LPError(ForgeError):
    """Malformed linear program input."""


class SchemaError(ForgeError):
    """JSON input violates a schema; carries a dotted path to the offender."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
