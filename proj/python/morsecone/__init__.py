"""Morse indices of radial Lane-Emden solutions on cones and spherical sectors.

Structured results come back as dicts parsed from the same JSON documents the
command-line tool writes (see schemas/).
"""

import json as _json

from . import _core
from ._core import (
    BubbleNormalization,
    MorseconeError,
    RadialSolution,
    angular_branch_eigenvalue,
    bubble_residual,
    bubble_value,
    cap_area,
    critical_exponent,
    eta_rayleigh_quotient,
    eta_residual,
    eta_value,
    first_singular_eigenvalue,
    hardy_constant,
    hardy_quotient,
    multiplicity,
    ode_residual,
    q_u_on_bubble,
    singular_oracle,
    solve_lane_emden,
)

__all__ = [
    "BubbleNormalization",
    "MorseconeError",
    "RadialSolution",
    "angular_branch_eigenvalue",
    "bubble_morse",
    "bubble_residual",
    "bubble_value",
    "cap_area",
    "cap_spectrum",
    "count_equality",
    "critical_exponent",
    "eta_rayleigh_quotient",
    "eta_residual",
    "eta_value",
    "first_singular_eigenvalue",
    "hardy_constant",
    "hardy_quotient",
    "limit_study",
    "morse_report",
    "multiplicity",
    "ode_residual",
    "q_u_on_bubble",
    "singular_oracle",
    "singular_spectrum",
    "solve_lane_emden",
    "step1_form",
    "threshold",
]


def _spectrum_text(angular):
    return angular if isinstance(angular, str) else _json.dumps(angular)


def singular_spectrum(N, p, k_max=8, tol=1e-10):
    return _json.loads(_core.singular_spectrum(N, p, k_max, tol))


def cap_spectrum(N, theta0, lambda_max):
    return _json.loads(_core.cap_spectrum(N, theta0, lambda_max))


def morse_report(N, p, angular, k_max=8, tol=1e-10):
    """`angular` is a cap_spectrum document (dict or JSON text)."""
    return _json.loads(_core.morse_report(N, p, _spectrum_text(angular), k_max, tol))


def count_equality(N, p, theta0):
    return _json.loads(_core.count_equality(N, p, theta0))


def bubble_morse(N, angular):
    return _core.bubble_morse(N, _spectrum_text(angular))


def threshold(N, angular, tol=1e-4, jobs=1):
    return _json.loads(_core.threshold(N, _spectrum_text(angular), tol, jobs))


def limit_study(N, ps, tol=1e-10, jobs=1):
    return _json.loads(_core.limit_study(N, list(ps), tol, jobs))


def step1_form(N, ell, theta0, lam):
    return _json.loads(_core.step1_form(N, ell, theta0, lam))
