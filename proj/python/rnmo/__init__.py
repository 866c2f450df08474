"""Nonsmooth multiobjective descent on the unit sphere."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import _resolve_config, _run_batch

__all__ = [
    "ConfigError",
    "ContractViolation",
    "CutLocusError",
    "DirectionStatus",
    "Family",
    "NumericalError",
    "OracleError",
    "Problem",
    "ProblemDescriptor",
    "RunRecord",
    "RunStatus",
    "SolverParams",
    "Sphere",
    "compute_descent_direction",
    "min_norm",
    "resolve_config",
    "run",
    "run_batch",
    "run_multistart",
]


def resolve_config(config):
    """Fill defaults into a config dict and validate it; returns a new dict."""
    return _json.loads(_resolve_config(_json.dumps(config)))


def run_batch(config):
    """Run a multi-start batch described by a config dict and write its CSVs.

    Returns a dict with mean_iterations, status counts, per-start iteration
    counts and the output directory.
    """
    return _run_batch(_json.dumps(config))
