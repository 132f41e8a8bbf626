"""Kurepa's function K(z), the family K_i(z), and their pole structure.

K is evaluated by one of four routes:

* ``quadrature``        the defining integral (Re z > 0)
* ``closed_form``       (Ei(1) + i pi)/e + (-1)^z Gamma(1+z) Gamma(-z,-1)/e
* ``recurrence_shift``  K(z) = K(z-1) + Gamma(z) applied until Re z lies in (0, 1]
* ``taylor_patch``      Cauchy formula on a circle around the removable point -2

K_i(z) = (K(z+i-1) - !(i-1)) / (i-1)!, with !n the exact left factorial.
"""

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import ConvergenceError, DomainError, NearPoleError, PoleError
from .quadrature import QuadratureConfig, integrate_K
from .result import KurepaResult, Method, Warn
from .special import (
    POLE_TOL,
    ei_one,
    gamma,
    minus_one_power,
    upper_gamma_at_minus_one,
)

METHODS = ("auto", "quadrature", "closed_form", "recurrence_shift")
QUADRATURE_MAX_RE = 30.0
PATCH_RADIUS = 0.1
PATCH_AGREEMENT = 1e-7
LARGE_SHIFT = 100
_EPS = 2.0 ** -52


@dataclass(frozen=True)
class EvalConfig:
    method: str = "auto"
    rel_tol: float = 1e-10
    near_pole_radius: float = 1e-3
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not 0 < self.near_pole_radius <= 0.1:
            raise ValueError("near_pole_radius must lie in (0, 0.1]")

    def quad_config(self):
        if self.quad.rel_tol <= self.rel_tol:
            return self.quad
        return replace(self.quad, rel_tol=self.rel_tol)


@dataclass(frozen=True)
class PoleInfo:
    location: int
    residue_exact: Fraction
    order: int = 1

    @property
    def residue_float(self):
        return float(self.residue_exact)


def _as_index(i):
    if isinstance(i, bool) or int(i) != i or i < 1:
        raise DomainError(f"family index must be an integer >= 1, got {i!r}")
    return int(i)


def _as_complex(z):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    return z


# ---------------------------------------------------------------- exact parts

def left_factorial(n):
    """!n = 0! + 1! + ... + (n-1)!, exactly."""
    if n < 0:
        raise DomainError("left factorial needs n >= 0")
    total, fact = 0, 1
    for k in range(n):
        total += fact
        fact *= k + 1
    return total


def _alternating_inverse_factorials(upto):
    # sum_{k=2}^{upto} (-1)^(k-1) / k!
    total = Fraction(0)
    fact = 1
    for k in range(2, upto + 1):
        fact *= k
        total += Fraction((-1) ** (k - 1), fact)
    return total


def kurepa_residue(location):
    """Exact residue of K at a pole: -1 at z = -1,
    sum_{k=2}^{m-1} (-1)^(k-1)/k! at z = -m for m >= 3."""
    m = -location
    if m == 1:
        return Fraction(-1)
    if m >= 3:
        return _alternating_inverse_factorials(m - 1)
    raise DomainError(f"K has no pole at z = {location}")


def is_pole(i, location):
    """True when the integer ``location`` is a pole of K_i."""
    i = _as_index(i)
    return location == -i or location <= -(i + 2)


def pole_catalog(i, limit):
    """Poles of K_i with location >= -limit, nearest to the origin first."""
    i = _as_index(i)
    if limit < 1:
        raise DomainError("limit must be >= 1")
    scale = Fraction(1, math.factorial(i - 1))
    poles = []
    if i <= limit:
        poles.append(PoleInfo(-i, -scale))
    for m in range(2, limit - i + 1):
        poles.append(PoleInfo(-(i + m), scale * _alternating_inverse_factorials(m)))
    return poles


# ----------------------------------------------------------- pole bookkeeping

def _check_poles(i, z, radius, formula_singular=False):
    """Raise for z at/near a pole of K_i. With ``formula_singular`` the
    removable point -(i+1) is excluded as well (closed form, upward shifts)."""
    n = round(z.real)
    d = abs(z - n)
    hit = n == -i or n <= -(i + 2)
    if hit and d <= POLE_TOL:
        raise PoleError(n)
    if hit or (formula_singular and n == -(i + 1)):
        if d < radius:
            raise NearPoleError(n, d, radius)
    return n, d


def _shift_pole_error(err, offset):
    if isinstance(err, NearPoleError):
        return NearPoleError(err.location + offset, err.distance, err.radius)
    return PoleError(err.location + offset)


# ------------------------------------------------------------------- routes

def _closed_form_terms(z):
    const = complex(ei_one(), math.pi) / math.e
    var = minus_one_power(z) * gamma(1.0 + z) * upper_gamma_at_minus_one(-z) / math.e
    return const, var


def closed_form_K(z, near_pole_radius=1e-3):
    """K(z) = (Ei(1) + i pi)/e + (-1)^z Gamma(1+z) Gamma(-z,-1)/e.

    Both factors of the second term are singular at every negative integer,
    including the removable point -2, so all of them are excluded.
    """
    z = _as_complex(z)
    _check_poles(1, z, near_pole_radius, formula_singular=True)
    const, var = _closed_form_terms(z)
    return const + var


def _closed_form_result(z, radius):
    z = _as_complex(z)
    _check_poles(1, z, radius, formula_singular=True)
    const, var = _closed_form_terms(z)
    value = const + var
    # Gamma and Gamma(a,-1) are good to a few 1e-14 relative.
    err = 1e-13 * (abs(const) + abs(var))
    warnings = (Warn.CANCELLATION,) if abs(value) < 1e-6 * abs(var) else ()
    return KurepaResult(value, Method.CLOSED_FORM, err, warnings)


def _recurrence_result(z, cfg):
    qcfg = cfg.quad_config()
    if z.real > 1.0:
        n = math.ceil(z.real) - 1
        z0 = z - n
        base = integrate_K(z0, qcfg)
        # sum_{j=1}^n Gamma(z0+j), scaled by Gamma(z0+n) and accumulated downward.
        term, scaled = 1.0 + 0j, 0j
        for j in range(n, 0, -1):
            scaled += term
            if j > 1:
                term /= z0 + j - 1
        top = gamma(z0 + n)
        shifted = top * scaled
        value = base.value + shifted
        err = base.est_abs_error + (n + 64) * _EPS * abs(shifted)
    elif z.real > 0.0:
        n = 0
        base = integrate_K(z, qcfg)
        value, err = base.value, base.est_abs_error
    else:
        _check_poles(1, z, cfg.near_pole_radius, formula_singular=True)
        n = math.floor(-z.real) + 1
        base = integrate_K(z + n, qcfg)
        terms = [gamma(z + j + 1) for j in range(n)]
        value = base.value - sum(terms)
        err = base.est_abs_error + (n + 64) * _EPS * sum(abs(t) for t in terms)
    warnings = (Warn.LARGE_SHIFT,) if n > LARGE_SHIFT else ()
    return KurepaResult(value, Method.RECURRENCE_SHIFT, err, warnings)


def taylor_patch(f, center, z):
    """Value of an analytic f at z (|z - center| < 0.1) from samples on circles
    about ``center``; returns (value, estimated absolute error).

    At the centre this is the plain circle mean over 16 points of radius 0.05,
    refined at radius 0.025. Off-centre the Cauchy kernel (w - c)/(w - z) is
    applied with 64 points on radii chosen well outside z.
    """
    d = abs(z - center)
    if d == 0.0:
        radii, count = (0.05, 0.025), 16
    else:
        radii, count = (max(0.05, 2.5 * d), max(0.025, 1.6 * d)), 64
    values = []
    scale = 0.0
    for rho in radii:
        acc = []
        for j in range(count):
            offset = rho * cmath.exp(2j * math.pi * j / count)
            fw = f(center + offset)
            scale = max(scale, abs(fw))
            acc.append(fw * offset / (center + offset - z))
        values.append(complex(math.fsum(a.real for a in acc), math.fsum(a.imag for a in acc)) / count)
    spread = abs(values[0] - values[1])
    if spread > PATCH_AGREEMENT:
        raise ConvergenceError(
            f"circle values around {center} disagree by {spread:.3g} under refinement"
        )
    return values[0], spread + 16 * _EPS * scale


def _patch_result(z, cfg):
    def f(w):
        return _closed_form_result(w, cfg.near_pole_radius).value

    value, err = taylor_patch(f, -2.0, z)
    return KurepaResult(value, Method.TAYLOR_PATCH, err)


def K(z, cfg=None):
    """Kurepa's function K(z) anywhere off its poles -1, -3, -4, ...

    Raises PoleError at a pole and NearPoleError within
    ``cfg.near_pole_radius`` of one.
    """
    cfg = cfg or EvalConfig()
    z = _as_complex(z)
    n, d = _check_poles(1, z, cfg.near_pole_radius)
    method = cfg.method
    if method == "auto":
        if n == -2 and d < PATCH_RADIUS:
            result = _patch_result(z, cfg)
        elif z.real > QUADRATURE_MAX_RE:
            result = _recurrence_result(z, cfg)
        elif z.real > 0:
            result = integrate_K(z, cfg.quad_config())
        else:
            result = _closed_form_result(z, cfg.near_pole_radius)
    elif method == "quadrature":
        result = integrate_K(z, cfg.quad_config())
    elif method == "closed_form":
        result = _closed_form_result(z, cfg.near_pole_radius)
    else:
        result = _recurrence_result(z, cfg)
    if n <= -1 and n != -2 and d < 0.1:
        result = replace(result, warnings=result.warnings + (Warn.NEAR_POLE,))
    return result


def closed_form_Ki(i, z):
    """K_i(z) = (-1)^i e^-1 (Gamma(1-i,-1) - (-1)^z Gamma(1-i-z,-1) Gamma(i+z)/(i-1)!)."""
    i = _as_index(i)
    z = _as_complex(z)
    first = upper_gamma_at_minus_one(1 - i)
    second = (
        minus_one_power(z)
        * upper_gamma_at_minus_one(1 - i - z)
        * gamma(i + z)
        / math.factorial(i - 1)
    )
    return (-1) ** i / math.e * (first - second), abs(first) + abs(second)


def Ki(i, z, cfg=None):
    """K_i(z) = (K(z + i - 1) - !(i-1)) / (i-1)!."""
    cfg = cfg or EvalConfig()
    i = _as_index(i)
    z = _as_complex(z)
    if cfg.method == "closed_form":
        _check_poles(i, z, cfg.near_pole_radius, formula_singular=True)
        value, size = closed_form_Ki(i, z)
        err = 1e-13 * size / math.e
        return KurepaResult(value, Method.CLOSED_FORM, err)
    n, d = _check_poles(i, z, cfg.near_pole_radius)
    try:
        base = K(z + (i - 1), cfg)
    except PoleError as exc:
        raise _shift_pole_error(exc, -(i - 1)) from None
    if i == 1:
        return base
    fact = math.factorial(i - 1)
    offset = float(Fraction(left_factorial(i - 1), fact))
    scaled = base.value / fact
    value = scaled - offset
    warnings = base.warnings
    if abs(value) < 1e-3 * abs(scaled):
        warnings = warnings + (Warn.CANCELLATION,)
    err = base.est_abs_error / fact + _EPS * abs(offset)
    return KurepaResult(value, base.method, err, warnings)


# ------------------------------------------------------------ verification ops

def residue_numeric(i, location, radius=1e-2, count=16):
    """Trapezoidal Cauchy estimate of res K_i at ``location``: the mean of
    (z - location) K_i(z) over ``count`` points on |z - location| = radius."""
    i = _as_index(i)
    if location != int(location) or not is_pole(i, int(location)):
        raise DomainError(f"z = {location} is not a pole of K_{i}")
    if not 1e-4 <= radius <= 0.4:
        raise DomainError("radius must lie in [1e-4, 0.4]")
    cfg = EvalConfig(near_pole_radius=min(1e-3, radius / 2))
    acc = []
    for j in range(count):
        offset = radius * cmath.exp(2j * math.pi * j / count)
        acc.append(offset * Ki(i, location + offset, cfg).value)
    return complex(math.fsum(a.real for a in acc), math.fsum(a.imag for a in acc)) / count


def recurrence_residual(i, z, cfg=None):
    """|(i-1)! (K_i(z+1) - K_i(z)) - Gamma(z+i)| / (1 + |Gamma(z+i)|)."""
    i = _as_index(i)
    z = _as_complex(z)
    g = gamma(z + i)
    fact = math.factorial(i - 1)
    diff = Ki(i, z + 1, cfg).value - Ki(i, z, cfg).value
    return abs(fact * diff - g) / (1.0 + abs(g))
