"""diophlab: exact-arithmetic experiments in inhomogeneous Diophantine
approximation — return sequences, transference, ubiquity coverage,
equidistribution diagnostics, and best-approximation counterparts."""

__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    CoverageGap,
    DiophlabError,
    InsufficientData,
    InvalidWindow,
    PrecisionExhausted,
    RankDeficient,
    UnsupportedEntry,
)
from .numeric import (
    CFReal,
    Ordering,
    Quadratic,
    Radical,
    RatInterval,
    compare,
    dec_str,
    dist_to_int,
    floor_exact,
    format_exact,
    parse_exact,
    quadratic,
    sign,
)
from .lattice import (
    ApproxMatrix,
    BestApproxSequence,
    IntVec,
    ReturnSequence,
    best_approximations,
    check_rank,
    continued_fraction,
    return_sequence,
    solve_homogeneous,
)
from .transference import (
    TransferBounds,
    solve_inhomogeneous,
    transfer_bounds,
    verify_corollary_3_3,
)
from .limsup import (
    PowerLog,
    TablePsi,
    Window,
    check_u_regular,
    coverage,
    measure_Bad,
    measure_W,
    psi_witness,
    ubiquity_params,
)
from .equidist import counting_ratio, estimate_equid_constant, weyl_sum
from .analysis import (
    b_alpha_test,
    classify_return_series,
    classify_series,
    estimate_exponents,
    gamma_sequence,
    key_inequality_check,
    verify_prop_5_1,
)
