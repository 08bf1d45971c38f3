"""Parity decision tree and Fourier toolkit for Boolean functions."""

from ._pdtlab import (  # noqa: F401
    BooleanFunction,
    adversary_refute,
    bound_profile,
    circuit_strategy,
    exact_depth,
    parity_certificate,
    reduce_threshold,
    spectrum,
    strategy_report,
)

__all__ = [
    "BooleanFunction",
    "adversary_refute",
    "bound_profile",
    "circuit_strategy",
    "exact_depth",
    "parity_certificate",
    "reduce_threshold",
    "spectrum",
    "strategy_report",
]
