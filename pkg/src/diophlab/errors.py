"""Error taxonomy shared by all modules."""


class DiophlabError(Exception):
    """Base class for all diophlab errors."""


class PrecisionExhausted(DiophlabError):
    """A certified comparison could not be decided within the precision budget."""


class BudgetExceeded(DiophlabError):
    """An enumeration would exceed the configured lattice-point budget."""


class RankDeficient(DiophlabError):
    """The integer-translate group of the transposed matrix is not of maximal rank."""


class UnsupportedEntry(DiophlabError):
    """Operation not available for this entry kind (e.g. rank check on CF entries)."""


class InvalidWindow(DiophlabError):
    """Degenerate or empty enumeration window."""


class InsufficientData(DiophlabError):
    """Not enough best-approximation entries for the requested computation."""


class CoverageGap(DiophlabError):
    """The requested window is not covered by the computed interval family."""
