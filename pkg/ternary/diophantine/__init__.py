# This file is part of ternary.
#
# SPDX-License-Identifier: MIT

# Version of the module
__version__ = "0.1.0"

# Export what we care about
from .config import FactoringBudget, Precision, Settings, load_settings
from .congruence import (
    LiftQuery,
    LiftReport,
    OrderRecord,
    check_cofactor_gcd,
    check_pair_congruence,
    check_pm1_multiples,
    least_pm1,
    verify_order_lift,
)
from .contfrac import (
    ContinuedFraction,
    Convergent,
    RealTarget,
    cf_log_ratio,
    cf_of_rational,
    convergents,
    gap_bounds_check,
    legendre_locate,
    shanks_quotients,
)
from .equation import (
    SolutionSet,
    enumerate_solutions,
    gelfond_bound,
    map_solution,
    solve_diff,
    solve_sum,
    transformed_instances,
    two_solution_family,
)
from .exceptions import (
    CertificationBudgetExceededError,
    ConfigurationError,
    FactoringBudgetExceededError,
    InvariantViolationError,
    LemmaViolationError,
    QuotientRangeError,
    RationalRatioError,
    ReportFormatError,
    TernaryError,
    ValidationError,
)
from .lemmas import (
    check_convergent_pair_x,
    check_convergent_pair_y,
    check_convergent_x,
    check_convergent_y,
    check_gap_diff,
    check_gap_sum,
    check_same_z,
    check_three_solutions,
    exceeds_polylog_threshold,
)
from .numeric import (
    factorize,
    mod_pow,
    multiplicative_order,
    p_adic_valuation,
    perfect_power_exponent,
)
from .report import GapKind, GapWitness, LemmaReport, Verdict
from .scanner import (
    ScanConfig,
    ScanRecord,
    ScanReport,
    VerifyResult,
    audit_triple,
    scan_range,
    verify_report,
)
from .store import JsonLinesScanStore, ScanStore
from .triple import (
    ExponentPair,
    Role,
    Solution,
    TransformedInstance,
    TransformedSolution,
    Triple,
)
