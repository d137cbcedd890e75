"""Python bindings for the Lovelock gravity verification core."""

import json

from . import _lovelock
from ._lovelock import (
    einstein_tensor,
    gkdelta,
    hodge_matrix,
    levi_civita,
    lovelock_density,
    lovelock_tensor,
    metric_at,
    verify_eps_delta,
)

SUITES = ("symbols", "forms", "jet", "hodge", "lovelock", "all")


def run_suite(suite, dim=0, r=0, seed=0, samples=0, tol=None, timing=True):
    """Run a check suite and return the report as a dict."""
    return json.loads(_lovelock.run_suite_json(suite, dim, r, seed, samples, tol, timing))


def evaluate(what, metric, params=None, r=1, point=None, step=1e-3):
    """Evaluate density, tensor, psi, divergence or eds for a metric."""
    params = {k: str(v) for k, v in (params or {}).items()}
    return json.loads(_lovelock.evaluate_json(what, metric, params, r, point, step))


__all__ = [
    "SUITES",
    "einstein_tensor",
    "evaluate",
    "gkdelta",
    "hodge_matrix",
    "levi_civita",
    "lovelock_density",
    "lovelock_tensor",
    "metric_at",
    "run_suite",
    "verify_eps_delta",
]
