"""Exception hierarchy.

Every error raised by the toolkit derives from :class:`GeographyError` and
carries an ``exit_code`` used by the command line front end: 2 for
infeasible or unreachable requests, 3 for malformed input.
"""


class GeographyError(Exception):
    exit_code = 3

    def to_json(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class InputError(GeographyError, ValueError):
    """Malformed or out-of-domain input."""


class InfeasibleError(GeographyError):
    """The request is well formed but no witness exists in the searched range."""

    exit_code = 2


# invariants
class NonRealizable(InputError):
    pass


class RokhlinViolation(InputError):
    pass


class SpinInput(InputError):
    pass


# number theory
class Exhausted(InfeasibleError):
    pass


class NonCoprimeModuli(InputError):
    def __init__(self, first: int, second: int):
        super().__init__(f"moduli {first} and {second} are not coprime")
        self.pair = (first, second)


class InconsistentCongruences(InfeasibleError):
    pass


# branched covers
class NotGeneralType(InputError):
    pass


class InconsistentFormulas(GeographyError):
    """Internal identity failed; indicates a bug, never a user error."""


# representation / synthesis
class ParityMismatch(InputError):
    pass


class OutOfWindow(InfeasibleError):
    def __init__(self, a: int, b: int, window: tuple[int, int]):
        super().__init__(f"B={b} outside representable window {window} for A={a}")
        self.window = window


class ParityConflict(InputError):
    pass


class WindowFailure(InfeasibleError):
    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.details = details or {}

    def to_json(self) -> dict:
        out = super().to_json()
        out["details"] = {k: str(v) for k, v in self.details.items()}
        return out


# projective calculator
class NotASurface(InputError):
    pass


class UnknownEntry(InputError):
    pass


class AmplenessUnverified(UserWarning):
    """Canonical divisibility is not certified when a defining class is not ample."""


class NegativeEuler(UserWarning):
    """A computed Euler number is negative; the input is probably not a surface of interest."""


# symplectic geography
class Unreachable(InfeasibleError):
    def __init__(self, chi: int, c1sq: int, constraint: str):
        super().__init__(f"(chi={chi}, c1sq={c1sq}) unreachable: {constraint}")
        self.constraint = constraint


class SpinRecipe(InputError):
    pass


class NoEllipticSeam(InputError):
    pass


class NoEllipticBlock(InputError):
    pass


# verdicts
class WrongArity(InputError):
    pass


class CongruenceViolation(InputError):
    pass


class SlopeOutOfRange(InfeasibleError):
    pass


class SynthesisFailure(InfeasibleError):
    pass
