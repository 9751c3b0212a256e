"""Zero-error codes for the (ell, r)-duplication and 0-insertion channels."""

from .core import INF, BudgetExceeded, ChannelParams, InvariantViolation
from .transform import phi, phi_inverse
from .channel import DUPLICATION, ZERO_INSERTION, confusable, output_set, sample_output
from .codebook import CodePrime, Codebook, block_lengths, count, greedy_block_construction
from .decoder import decode, decode_prime
from .capacity import cw_capacity, omega_star, solve_rho
from .oracle import brute_zero_error_check, build_graph, max_independent_set

__version__ = "0.1.0"

__all__ = [
    "INF", "BudgetExceeded", "ChannelParams", "InvariantViolation", "phi", "phi_inverse",
    "DUPLICATION", "ZERO_INSERTION", "confusable", "output_set", "sample_output",
    "CodePrime", "Codebook", "block_lengths", "count", "greedy_block_construction",
    "decode", "decode_prime", "cw_capacity", "omega_star", "solve_rho",
    "brute_zero_error_check", "build_graph", "max_independent_set",
]
