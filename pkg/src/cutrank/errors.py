"""Exception types shared across the package.

Certified negative *results* (a search that proves "nothing below this
budget") are not exceptions; they travel as ordinary result values.  The
classes here mark violated preconditions and exhausted resources.
"""


class CutrankError(Exception):
    """Base class for all package-specific errors."""


class AllZeroWeights(CutrankError):
    """Weight vector has no positive entry."""


class NegativeProfit(CutrankError):
    """Profit vector contains a negative entry where nonnegativity is required."""


class ZeroVector(CutrankError):
    """A nonzero vector is required."""


class ResourceBudgetExceeded(CutrankError):
    """No solver fits the instance within the configured budgets."""


class TooLarge(CutrankError):
    """Instance exceeds a hard size contract (e.g. exhaustive enumeration)."""


class NoExactFill(CutrankError):
    """Target value is not a subset sum of the basis values."""


class OddTotalWeight(CutrankError):
    """The greedy construction needs an even total weight."""


class GapNotFillable(CutrankError):
    """Remaining gap exceeds the interval covered by the chosen basis."""


class DimensionOverflow(CutrankError):
    """The block layout a|b|b|b|0 does not fit in the target dimension."""


class BasisCoverage(CutrankError):
    """Basis blocks would not cover {0, ..., max coefficient}."""


class GridTooLarge(CutrankError):
    """Certified enumeration grid exceeds the configured budget."""


class PreconditionsUnmet(CutrankError):
    """Instance violates the preconditions a certificate would rely on."""


class BudgetExceeded(CutrankError):
    """Enumeration budget exhausted (closure sandbox / vertex enumeration)."""


class UncertifiableGrid(CutrankError):
    """Some grid cell certifies no positive gamma."""


class GammaTooSmall(CutrankError):
    """The rank bound formula requires gamma >= 2."""


class EmptyPolytope(CutrankError):
    """Operation requires a nonempty polytope."""
