"""Precision limits for moment estimation of subdiffraction incoherent objects.

Thin wrapper over the compiled extension. All functions accept plain Python
numbers and spec strings (the same strings the ``subdiff`` command-line tool
uses) and return dicts or lists of floats.
"""

from subdiff._core import (
    CheckError,
    ConfigError,
    NumericError,
    builtin_families,
    check_domination,
    direct_fisher,
    generalized_moments,
    lambda_min_profile,
    mode_probabilities,
    moments,
    precision_bits,
    quantum_bound,
    run_cli,
    set_precision_bits,
    simulate_spade,
    spade_constants,
    sweep_fit,
    theoretical_exponent,
)

__version__ = "0.1.0"

__all__ = [
    "CheckError",
    "ConfigError",
    "NumericError",
    "builtin_families",
    "check_domination",
    "direct_fisher",
    "generalized_moments",
    "lambda_min_profile",
    "mode_probabilities",
    "moments",
    "precision_bits",
    "quantum_bound",
    "run_cli",
    "set_precision_bits",
    "simulate_spade",
    "spade_constants",
    "sweep_fit",
    "theoretical_exponent",
]
