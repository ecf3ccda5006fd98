"""Euler characteristics of twisted Iwasawa modules at finite p-adic precision."""

import json as _json

from ._core import (
    Error,
    __version__,
    akashi,
    det_mult_mod_omega,
    euler_crossed,
    euler_gamma,
    find_twist_crossed,
    find_twist_gamma,
    lambda_mu,
    smith_exponents,
    twist,
    unit_inverse,
    valuation,
    weierstrass_prepare,
)
from ._core import run as _run


def run(problem_text, command, precision=None):
    """Run a workbench command and return (report dict, table, exit code)."""
    report, table, code = _run(problem_text, command, precision)
    return _json.loads(report), table, code


__all__ = [
    "Error",
    "__version__",
    "akashi",
    "det_mult_mod_omega",
    "euler_crossed",
    "euler_gamma",
    "find_twist_crossed",
    "find_twist_gamma",
    "lambda_mu",
    "run",
    "smith_exponents",
    "twist",
    "unit_inverse",
    "valuation",
    "weierstrass_prepare",
]
