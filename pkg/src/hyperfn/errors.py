"""Exception hierarchy.

Every error carries a stable ``code`` string; the CLI prints it verbatim so
scripts can match on it.
"""


class HyperfnError(ValueError):
    code = "ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


# hyperfunction core
class TooCloseToSingularity(HyperfnError):
    code = "TOO_CLOSE_TO_SINGULARITY"


class NoConvergence(HyperfnError):
    code = "NO_CONVERGENCE"


class UnsupportedOrder(HyperfnError):
    code = "UNSUPPORTED_ORDER"


class InvalidTerm(HyperfnError):
    code = "INVALID_TERM"


# switches
class DimensionMismatch(HyperfnError):
    code = "DIMENSION_MISMATCH"


# preferences
class OverlappingImpulses(HyperfnError):
    code = "OVERLAPPING_IMPULSES"


class NotOrderPreserving(HyperfnError):
    code = "NOT_ORDER_PRESERVING"


class Tie(HyperfnError):
    code = "TIE"


class NotMonotone(HyperfnError):
    code = "NOT_MONOTONE"


# production structure
class NonpositiveFlow(HyperfnError):
    code = "NONPOSITIVE_FLOW"


class NonpositiveRate(HyperfnError):
    code = "NONPOSITIVE_RATE"


class NegativeInterval(HyperfnError):
    code = "NEGATIVE_INTERVAL"


class BadBins(HyperfnError):
    code = "BAD_BINS"


class EmptySet(HyperfnError):
    code = "EMPTY_SET"


class EmptyPath(HyperfnError):
    code = "EMPTY_PATH"


class InvalidGraph(HyperfnError):
    code = "INVALID_GRAPH"


# inflation
class EpsilonTooLarge(HyperfnError):
    code = "EPSILON_TOO_LARGE"


class InvalidConfig(HyperfnError):
    code = "INVALID_CONFIG"


# risk
class MissingEvent(HyperfnError):
    code = "MISSING_EVENT"


class MissingInput(HyperfnError):
    code = "MISSING_INPUT"


class NegativeRate(HyperfnError):
    code = "NEGATIVE_RATE"
