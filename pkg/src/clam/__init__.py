"""Iterated Carmichael lambda and Euler phi at table scale.

The public surface is re-exported here; see the submodules for details.
"""
from .arith import (
    IterateChain,
    LambdaTable,
    PhiTable,
    Tables,
    build_tables,
    carmichael,
    euler_phi,
    group_exponent_oracle,
    iterate_chain,
    phi_valuation_identity,
    valuation,
)
from .cache import CacheError
from .hk import ComponentBreakdown, HkParams, PrimeProfiles, decompose, default_psi, hk, hk_prime, small_valuation_sum
from .moments import C_TK, MomentReport, m1_exact, m1_predicted, m2_exact, tk_check
from .normal_order import (
    IteratePattern,
    PatternError,
    ScanRecord,
    ScanSummary,
    eval_pattern,
    parse_pattern,
    product_bound_check,
    scan,
)
from .sieve import (
    SpfTable,
    build_spf,
    count_progression_primes,
    factorize,
    mertens_sum,
    progression_recip_sum,
)

__version__ = "0.1.0"
