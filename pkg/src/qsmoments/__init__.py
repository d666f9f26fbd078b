"""Exact and simulated moments of quicksort comparison counts."""

__version__ = "0.1.0"

from .errors import ContractViolation, ResourceLimitError, UnsupportedError  # noqa: E402
from .exact_arith import ExactRational, TruncatedSeries  # noqa: E402
from .pgf_engine import (  # noqa: E402
    CountPolynomial,
    MomentReport,
    Source,
    bst_path_counts,
    comparison_counts,
    factorial_moment,
    moments_report,
    shift_identity_check,
)
