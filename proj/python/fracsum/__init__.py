"""Exact fractional sums S_f(x) = sum_{n<=x} f(floor(x/n)).

Functions are named as on the command line: one, id, tau, phi_over_n,
sigma_beta_norm (with beta), lambda, squarefree, kfree (with k), mobius.
Exact-valued functions return fractions.Fraction; real-valued ones float.
"""

from ._core import (
    FracError,
    blocked_sum,
    cli,
    compute_cf,
    decompose,
    exp_sum_tau,
    fit,
    interval_index,
    jutila_check,
    lemma4_pair,
    naive_sum,
    theorem2_exponent,
    theta_ratio,
)

__all__ = [
    "FracError",
    "blocked_sum",
    "cli",
    "compute_cf",
    "decompose",
    "exp_sum_tau",
    "fit",
    "interval_index",
    "jutila_check",
    "lemma4_pair",
    "naive_sum",
    "theorem2_exponent",
    "theta_ratio",
]
