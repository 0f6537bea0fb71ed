"""Dunkl Segal-Bargmann numerics for Z_2^N."""

import json

from ._dunklsb import (
    KernelConvergenceError,
    dunkl_kernel,
    gamma_factor,
    gauss_rule,
    heat_kernel,
    mms_constant,
    norm_probe,
    restriction_report,
    run_suite_json,
)


def run_suite(**config):
    """Run verification suites; keyword arguments use the JSON config keys."""
    return json.loads(run_suite_json(json.dumps(config)))


__all__ = [
    "KernelConvergenceError",
    "dunkl_kernel",
    "gamma_factor",
    "gauss_rule",
    "heat_kernel",
    "mms_constant",
    "norm_probe",
    "restriction_report",
    "run_suite",
]
