"""Kurepa's left factorial function K(z) and the generalized family K_i(z)."""

from .core import (
    EvalConfig,
    K,
    Ki,
    PoleInfo,
    closed_form_K,
    closed_form_Ki,
    kurepa_residue,
    left_factorial,
    pole_catalog,
    recurrence_residual,
    residue_numeric,
)
from .errors import (
    ConvergenceError,
    DomainError,
    KurepaError,
    NearPoleError,
    NonFiniteError,
    PoleError,
)
from .quadrature import QuadratureConfig, integrate_K, kurepa_integrand
from .result import KurepaResult, Method, Warn
from .special import ei_one, gamma, ln_gamma, upper_gamma_at_minus_one

__all__ = [
    "ConvergenceError", "DomainError", "EvalConfig", "K", "Ki", "KurepaError",
    "KurepaResult", "Method", "NearPoleError", "NonFiniteError", "PoleError",
    "PoleInfo", "QuadratureConfig", "Warn", "closed_form_K", "closed_form_Ki",
    "ei_one", "gamma", "integrate_K", "kurepa_integrand", "kurepa_residue",
    "left_factorial", "ln_gamma", "pole_catalog", "recurrence_residual",
    "residue_numeric", "upper_gamma_at_minus_one",
]
