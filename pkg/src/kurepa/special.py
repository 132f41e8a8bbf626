"""Complex gamma, the upper incomplete gamma function at x = -1, and Ei(1).

All functions take and return Python ``complex`` (or ``float``) values.
The multivalued power (-1)**a is always the principal branch exp(i*pi*a).
"""

import cmath
import math

from .errors import ConvergenceError, NonFiniteError, PoleError

EULER_GAMMA = 0.57721566490153286
MAX_TERMS = 500
POLE_TOL = 1e-12

# Godfrey's coefficients for g = 607/128, n = 15.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_finite(value, what):
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NonFiniteError(f"{what} is not finite ({value!r})")
    return value


def sinpi(x):
    """sin(pi*x) for real x, exact at integers and half-integers."""
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def cospi(x):
    """cos(pi*x) for real x, exact at integers and half-integers."""
    r = abs(math.fmod(x, 2.0))
    if r > 1.0:
        r = 2.0 - r
    if r < 0.25:
        return math.cos(math.pi * r)
    return math.sin(math.pi * (0.5 - r))


def csinpi(z):
    """sin(pi*z) for complex z."""
    z = complex(z)
    y = math.pi * z.imag
    return complex(sinpi(z.real) * math.cosh(y), cospi(z.real) * math.sinh(y))


def minus_one_power(a):
    """Principal branch of (-1)**a, i.e. exp(i*pi*a)."""
    a = complex(a)
    scale = math.exp(-math.pi * a.imag)
    return complex(scale * cospi(a.real), scale * sinpi(a.real))


def expm1(w):
    """exp(w) - 1 for complex w without cancellation near 0."""
    w = complex(w)
    x, y = w.real, w.imag
    # exp(x)*cos(y) - 1 = expm1(x)*cos(y) - 2*sin(y/2)**2
    re = math.expm1(x) * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2
    return complex(re, math.exp(x) * math.sin(y))


def phi1(w):
    """(exp(w) - 1) / w, equal to 1 at w = 0."""
    w = complex(w)
    if abs(w) < 1e-3:
        term = total = 1.0 + 0j
        for k in range(2, 12):
            term *= w / k
            total += term
        return total
    return expm1(w) / w


def _nonpositive_integer_near(z, tol):
    n = round(z.real)
    if n <= 0 and abs(z - n) <= tol:
        return int(n)
    return None


def _lanczos_parts(z):
    """Return (t, series) for Gamma(z) = sqrt(2pi) t**(z-1/2) exp(-t) series."""
    x = z - 1.0
    series = complex(_LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        series += _LANCZOS_COEF[k] / (x + k)
    t = x + _LANCZOS_G + 0.5
    return t, series


def gamma(z):
    """Gamma function of a complex argument.

    Lanczos approximation for Re z >= 1/2, reflection formula otherwise.
    Raises PoleError within 1e-12 of a non-positive integer.
    """
    z = complex(z)
    n = _nonpositive_integer_near(z, POLE_TOL)
    if n is not None:
        raise PoleError(n)
    if z.imag == 0.0 and z.real == round(z.real) and 1.0 <= z.real <= 23.0:
        return complex(math.factorial(int(z.real) - 1))
    if z.real < 0.5:
        return _check_finite(math.pi / (csinpi(z) * gamma(1.0 - z)), "gamma(z)")
    t, series = _lanczos_parts(z)
    try:
        power = cmath.exp((z - 0.5) * cmath.log(t) - t)
    except OverflowError:
        raise NonFiniteError(f"gamma({z!r}) overflows") from None
    return _check_finite(math.sqrt(2.0 * math.pi) * power * series, "gamma(z)")


def ln_gamma(z):
    """A logarithm of Gamma(z); only exp(ln_gamma(z)) == gamma(z) is promised."""
    z = complex(z)
    n = _nonpositive_integer_near(z, POLE_TOL)
    if n is not None:
        raise PoleError(n)
    if z.real < 0.5:
        return math.log(math.pi) - cmath.log(csinpi(z)) - ln_gamma(1.0 - z)
    t, series = _lanczos_parts(z)
    return _HALF_LOG_2PI + (z - 0.5) * cmath.log(t) - t + cmath.log(series)


def _zeta_values(kmax):
    # Euler-Maclaurin with N = 20 and five Bernoulli corrections.
    N = 20
    b2j = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0)
    out = {}
    for k in range(2, kmax + 1):
        head = math.fsum(n ** -float(k) for n in range(1, N))
        tail = N ** (1.0 - k) / (k - 1) + 0.5 * N ** -float(k)
        rising = float(k)
        for j, b in enumerate(b2j, start=1):
            tail += b / math.factorial(2 * j) * rising * N ** (-k - 2 * j + 1.0)
            rising *= (k + 2 * j - 1) * (k + 2 * j)
        out[k] = head + tail
    return out


_ZETA = _zeta_values(40)


def _lngamma1p_over_eps(eps):
    """ln Gamma(1 + eps) / eps for |eps| <= 0.1 via its Taylor series."""
    total = complex(-EULER_GAMMA)
    power = 1.0 + 0j
    for k in range(2, 41):
        power *= eps
        term = (-1) ** k * _ZETA[k] * power / k
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def _neglog1m_over_eps(eps, m):
    """-log(1 - eps/m) / eps for |eps/m| <= 0.1."""
    u = eps / m
    total = complex(0.0)
    power = 1.0 + 0j
    for j in range(1, 60):
        term = power / j
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
        power *= u
    return total / m


def _lower_series(a, skip=None):
    """sum_{k>=0} 1/(k! (a + k)), optionally omitting index ``skip``."""
    total = 0j
    abs_total = 0.0
    inv_fact = 1.0
    for k in range(MAX_TERMS):
        if k != skip:
            term = inv_fact / (a + k)
            total += term
            abs_total += abs(term)
            if k > abs(a) + 2 and abs(term) <= 1e-17 * abs_total:
                return total
        inv_fact /= k + 1
    raise ConvergenceError(f"lower incomplete gamma series at a = {a!r} did not converge")


def upper_gamma_at_minus_one(a):
    """Gamma(a, -1) for complex a, with (-1)**a = exp(i*pi*a).

    Uses Gamma(a) - gamma(a, -1) with the lower series
    gamma(a, -1) = exp(i*pi*a) * sum_k 1/(k! (a + k)). Within 0.1 of a = -n
    the pole of Gamma(a) and the 1/(a + n) series term are merged analytically,
    so the result stays accurate across the (removable) singularities.
    """
    a = complex(a)
    n = -round(a.real)
    eps = a + n
    if n >= 0 and abs(eps) <= 0.1:
        return _upper_gamma_near_pole(a, n, eps)
    series = _lower_series(a)
    return _check_finite(gamma(a) - minus_one_power(a) * series, "Gamma(a, -1)")


def _upper_gamma_near_pole(a, n, eps):
    sign_over_fact = (-1) ** n / math.factorial(n)
    # Gamma(a) = (-1)^n/n! * (1/eps + (g(eps) - 1)/eps),
    # ln g(eps) = ln Gamma(1 + eps) - sum_{m<=n} log(1 - eps/m).
    h = _lngamma1p_over_eps(eps)
    for m in range(1, n + 1):
        h += _neglog1m_over_eps(eps, m)
    regular = sign_over_fact * h * phi1(eps * h)
    merged = sign_over_fact * (-1j * math.pi) * phi1(1j * math.pi * eps)
    rest = minus_one_power(a) * _lower_series(a, skip=n)
    return _check_finite(regular + merged - rest, "Gamma(a, -1)")


def ei_one():
    """Ei(1) = gamma + sum_{k>=1} 1/(k k!)."""
    terms = [EULER_GAMMA]
    inv_fact = 1.0
    for k in range(1, 30):
        inv_fact /= k
        terms.append(inv_fact / k)
    return math.fsum(terms)
