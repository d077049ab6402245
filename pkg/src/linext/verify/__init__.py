from .bounds import BOUND_NAMES, BoundReport, BoundValue, bound_report, format_pow2
from .distribution import Distribution, fwht, log2_sum, rho
from .exact import (
    EXACT_MAX_M,
    bitfixing_rho,
    bitfixing_rho_for,
    exact_distribution,
    exact_distribution_independent,
    fourier_bound,
    fourier_bound_for,
    fourier_bound_log2,
    fourier_coefficients,
)
from .montecarlo import MC_MAX_M, MCEstimate, mc_rho, output_histogram
from .oracle import ORACLE_MAX_BITS, brute_distribution, enumerate_source, rho_bruteforce

__all__ = [
    "BOUND_NAMES",
    "BoundReport",
    "BoundValue",
    "Distribution",
    "EXACT_MAX_M",
    "MCEstimate",
    "MC_MAX_M",
    "ORACLE_MAX_BITS",
    "bitfixing_rho",
    "bitfixing_rho_for",
    "bound_report",
    "brute_distribution",
    "enumerate_source",
    "exact_distribution",
    "exact_distribution_independent",
    "format_pow2",
    "fourier_bound",
    "fourier_bound_for",
    "fourier_bound_log2",
    "fourier_coefficients",
    "fwht",
    "log2_sum",
    "mc_rho",
    "output_histogram",
    "rho",
    "rho_bruteforce",
]
