"""Property checks for K, K_i and the special-function engine.

Every check returns a :class:`CheckReport`; :func:`run_all` runs the full
battery in a fixed order. Random samples come from a 64-bit linear
congruential generator (multiplier 6364136223846793005, increment
1442695040888963407); a draw advances the state and keeps its top 53 bits,
so every platform sees the same points for the same seed.
"""

import cmath
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import core
from .core import EvalConfig, K, Ki
from .special import gamma, ln_gamma, minus_one_power, upper_gamma_at_minus_one

_MASK = (1 << 64) - 1


class Lcg:
    MULTIPLIER = 6364136223846793005
    INCREMENT = 1442695040888963407

    def __init__(self, seed):
        self.state = seed & _MASK

    def next_u64(self):
        self.state = (self.state * self.MULTIPLIER + self.INCREMENT) & _MASK
        return self.state

    def uniform(self, lo=0.0, hi=1.0):
        """Uniform on [lo, hi)."""
        return lo + (hi - lo) * ((self.next_u64() >> 11) * 2.0 ** -53)

    def complex_in(self, re_lo, re_hi, im_lo, im_hi):
        return complex(self.uniform(re_lo, re_hi), self.uniform(im_lo, im_hi))


def stream(seed, name):
    """Independent generator per (seed, check name)."""
    return Lcg((seed << 32) ^ zlib.crc32(name.encode()))


@dataclass(frozen=True)
class CheckReport:
    name: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool

    @classmethod
    def from_residuals(cls, name, residuals, tolerance):
        worst = max(residuals)
        return cls(name, len(residuals), worst, tolerance, worst <= tolerance)

    def as_dict(self):
        return asdict(self)


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _strip_point(rng):
    # (0, 5] x [-5, 5]
    return complex(5.0 - rng.uniform(0.0, 5.0), rng.uniform(-5.0, 5.0))


def _dist_to_nonpositive_int(z):
    n = min(round(z.real), 0)
    return abs(z - n)


# ------------------------------------------------------ special functions

def check_gamma_factorials():
    res = [_rel(gamma(n), math.factorial(n - 1)) for n in range(1, 31)]
    res += [_rel(gamma(n + 0.5), math.factorial(2 * n) * math.sqrt(math.pi) / (4 ** n * math.factorial(n)))
            for n in range(0, 20)]
    return CheckReport.from_residuals("gamma_exact_values", res, 1e-12)


def check_gamma_recurrence(seed, count=200):
    rng = stream(seed, "gamma_recurrence")
    res = []
    while len(res) < count:
        z = rng.complex_in(-20, 20, -20, 20)
        if abs(z) > 20 or _dist_to_nonpositive_int(z) < 1e-3 or _dist_to_nonpositive_int(z + 1) < 1e-3:
            continue
        res.append(abs(gamma(z + 1) / (z * gamma(z)) - 1.0))
    return CheckReport.from_residuals("gamma_recurrence", res, 1e-10)


def check_gamma_conjugate(seed, count=100):
    rng = stream(seed, "gamma_conjugate")
    res = []
    while len(res) < count:
        z = rng.complex_in(-30, 30, -30, 30)
        if abs(z) > 40 or _dist_to_nonpositive_int(z) < 1e-3:
            continue
        res.append(_rel(gamma(z.conjugate()), gamma(z).conjugate()))
    return CheckReport.from_residuals("gamma_conjugate_symmetry", res, 1e-12)


def check_ln_gamma(seed, count=100):
    rng = stream(seed, "ln_gamma")
    res = []
    while len(res) < count:
        z = rng.complex_in(-20, 20, -20, 20)
        if _dist_to_nonpositive_int(z) < 1e-3:
            continue
        res.append(_rel(cmath.exp(ln_gamma(z)), gamma(z)))
    return CheckReport.from_residuals("ln_gamma_exp_consistency", res, 1e-10)


def check_upper_gamma_exact():
    res = []
    for n in range(1, 16):
        partial = sum(Fraction((-1) ** k, math.factorial(k)) for k in range(n))
        ref = math.factorial(n - 1) * float(partial) * math.e
        res.append(abs(upper_gamma_at_minus_one(n) - ref) / max(1.0, abs(ref)))
    return CheckReport.from_residuals("upper_gamma_exact_values", res, 1e-12)


def check_upper_gamma_recurrence(seed, count=200):
    rng = stream(seed, "upper_gamma_recurrence")
    res = []
    while len(res) < count:
        a = rng.complex_in(-20, 20, -20, 20)
        if abs(a) > 20:
            continue
        lhs = upper_gamma_at_minus_one(a + 1)
        rhs = a * upper_gamma_at_minus_one(a) + minus_one_power(a) * math.e
        res.append(abs(lhs - rhs) / (1.0 + abs(lhs)))
    return CheckReport.from_residuals("upper_gamma_recurrence", res, 1e-9)


def check_upper_gamma_entire():
    res = []
    for k in range(10):
        at = upper_gamma_at_minus_one(-k)
        for step in (1e-6, 1e-6j):
            res.append(abs(upper_gamma_at_minus_one(-k + step) - at))
    return CheckReport.from_residuals("upper_gamma_continuity", res, 1e-4)


# ------------------------------------------------------------------ kurepa

def check_integer_agreement():
    cfg = EvalConfig(method="quadrature")
    res = [_rel(K(n, cfg).value, core.left_factorial(n)) for n in range(1, 11)]
    res.append(abs(K(0).value))
    return CheckReport.from_residuals("integer_agreement", res, 1e-9)


def check_family_collapse(seed, count=100):
    rng = stream(seed, "family_collapse")
    res = []
    for _ in range(count):
        z = _strip_point(rng)
        k = K(z).value
        res.append(abs(Ki(1, z).value - k) / (1.0 + abs(k)))
    return CheckReport.from_residuals("family_collapse", res, 1e-10)


def check_recurrence(seed, i, count=50):
    rng = stream(seed, f"recurrence_i{i}")
    res = []
    while len(res) < count:
        z = rng.complex_in(-0.5, 5.0, -5.0, 5.0)
        try:
            res.append(core.recurrence_residual(i, z))
        except core.PoleError:
            continue
    return CheckReport.from_residuals(f"recurrence_i{i}", res, 1e-8)


def check_conjugate_symmetry(seed, count=50):
    rng = stream(seed, "conjugate_symmetry")
    res = []
    for _ in range(count):
        z = _strip_point(rng)
        for method in ("quadrature", "closed_form"):
            cfg = EvalConfig(method=method)
            res.append(_rel(K(z.conjugate(), cfg).value, K(z, cfg).value.conjugate()))
    return CheckReport("conjugate_symmetry", count, max(res), 1e-9, max(res) <= 1e-9)


def check_residues(indices=(1, 2, 3), lowest=-8, radius=1e-2):
    res = []
    for i in indices:
        for pole in core.pole_catalog(i, -lowest):
            est = core.residue_numeric(i, pole.location, radius)
            res.append(abs(est - pole.residue_float))
    return CheckReport.from_residuals("residue_agreement", res, 1e-5)


def check_residue_transfer():
    res = []
    for i in range(1, 5):
        catalog = {p.location: p.residue_exact for p in core.pole_catalog(i, i + 4)}
        for m in (0, 2, 3, 4):
            lhs = catalog[-(i + m)] * math.factorial(i - 1)
            rhs = core.kurepa_residue(-(m + 1))
            res.append(float(abs(lhs - rhs)))
    return CheckReport.from_residuals("residue_transfer_exact", res, 0.0)


def check_route_agreement(seed, count=100, tolerance=1e-9):
    rng = stream(seed, "route_agreement")
    routes = [EvalConfig(method=m) for m in ("quadrature", "closed_form", "recurrence_shift")]
    res = []
    for _ in range(count):
        z = _strip_point(rng)
        q, c, r = (K(z, cfg).value for cfg in routes)
        res.append(max(_rel(q, c), _rel(q, r), _rel(c, r)))
    return CheckReport.from_residuals("route_agreement", res, tolerance)


def check_removable_point(seed, count=10):
    """K near -2: circle means at radii 0.05 / 0.025 agree at the centre, and
    the patched value matches the closed form at nearby off-centre points."""
    res = []
    _, spread = core.taylor_patch(core.closed_form_K, -2.0, -2.0)
    res.append(spread)
    rng = stream(seed, "removable_point")
    while len(res) < count + 1:
        z = -2.0 + rng.complex_in(-0.1, 0.1, -0.1, 0.1)
        if not 0.01 < abs(z + 2.0) < 0.1:
            continue
        patched = K(z).value
        direct = core.closed_form_K(z)
        res.append(abs(patched - direct) / (1.0 + abs(direct)))
    return CheckReport.from_residuals("removable_point", res, 1e-7)


def check_real_axis(seed, count=50):
    rng = stream(seed, "real_axis")
    res = []
    for _ in range(count):
        x = 20.0 - rng.uniform(0.0, 20.0)
        k = core.closed_form_K(x)
        res.append(abs(k.imag) / (1.0 + abs(k)))
    return CheckReport.from_residuals("real_on_positive_axis", res, 1e-9)


# -------------------------------------------------------------- asymptotics

_TIGHT = EvalConfig(rel_tol=1e-13)
ASYMPTOTIC_X = tuple(range(10, 65, 5))


def _validate_x(i, x_values):
    if list(x_values) != sorted(x_values) or len(set(x_values)) != len(x_values):
        raise ValueError("x_values must be strictly increasing")
    if x_values[0] <= -i + 1 or x_values[-1] > 60:
        raise ValueError(f"x_values must lie in ({-i + 1}, 60]")


def check_asymptotic_ratio(i, x_values=ASYMPTOTIC_X):
    """r(x) = (i-1)! K_i(x) / Gamma(x+i-1) against |r - 1| <= 2/(x+i-2),
    with |r - 1| non-increasing along x_values.

    The residual is the larger of max |r-1| / bound and the largest ratio of
    successive |r-1|; both must stay <= 1.
    """
    _validate_x(i, x_values)
    fact = math.factorial(i - 1)
    gaps = []
    res = []
    for x in x_values:
        r = (fact * Ki(i, x, _TIGHT).value / gamma(x + i - 1)).real
        gap = abs(r - 1.0)
        res.append(gap * (x + i - 2) / 2.0)
        gaps.append(gap)
    for a, b in zip(gaps, gaps[1:]):
        res.append(b / a if a else math.inf)
    worst = max(res)
    return CheckReport(f"asymptotic_ratio_i{i}", len(x_values), worst, 1.0, worst <= 1.0)


def check_asymptotic_null(i, x_values=ASYMPTOTIC_X):
    """q(x) = K_i(x) / Gamma(x+i): positive, decreasing, q <= 2/(x+i-1)."""
    _validate_x(i, x_values)
    qs = []
    res = []
    for x in x_values:
        q = (Ki(i, x, _TIGHT).value / gamma(x + i)).real
        qs.append(q)
        res.append(q * (x + i - 1) / 2.0 if q > 0 else math.inf)
    for a, b in zip(qs, qs[1:]):
        res.append(b / a if a > 0 else math.inf)
    worst = max(res)
    return CheckReport(f"asymptotic_null_i{i}", len(x_values), worst, 1.0, worst <= 1.0)


# ------------------------------------------- shifted-K route vs closed form

def family_route_samples(seed, i, count=20):
    """Points in [-i-2.5, 5] x [-3, 3] kept 0.05 away from the singular
    integers of K_i and 0.2 away from its zero at the origin."""
    rng = stream(seed, f"family_routes_i{i}")
    out = []
    while len(out) < count:
        z = rng.complex_in(-i - 2.5, 5.0, -3.0, 3.0)
        n = round(z.real)
        if n <= -i and abs(z - n) < 0.05:
            continue
        if abs(z) < 0.2:
            continue
        out.append(z)
    return out


def check_family_routes(i, sample, tolerance=1e-8):
    """K_i built from the shifted K against the direct incomplete-gamma form."""
    closed = EvalConfig(method="closed_form")
    res = [_rel(Ki(i, z).value, Ki(i, z, closed).value) for z in sample]
    return CheckReport.from_residuals(f"family_routes_i{i}", res, tolerance)


check_eq4_eq11_equivalence = check_family_routes


# -------------------------------------------------------------------- all

def _battery(seed):
    return [
        ("gamma_exact_values", check_gamma_factorials),
        ("gamma_recurrence", lambda: check_gamma_recurrence(seed)),
        ("gamma_conjugate_symmetry", lambda: check_gamma_conjugate(seed)),
        ("ln_gamma_exp_consistency", lambda: check_ln_gamma(seed)),
        ("upper_gamma_exact_values", check_upper_gamma_exact),
        ("upper_gamma_recurrence", lambda: check_upper_gamma_recurrence(seed)),
        ("upper_gamma_continuity", check_upper_gamma_entire),
        ("integer_agreement", check_integer_agreement),
        ("family_collapse", lambda: check_family_collapse(seed)),
        *[(f"recurrence_i{i}", lambda i=i: check_recurrence(seed, i)) for i in (1, 2, 3, 5)],
        ("conjugate_symmetry", lambda: check_conjugate_symmetry(seed)),
        ("residue_agreement", check_residues),
        ("residue_transfer_exact", check_residue_transfer),
        ("route_agreement", lambda: check_route_agreement(seed)),
        ("removable_point", lambda: check_removable_point(seed)),
        ("real_on_positive_axis", lambda: check_real_axis(seed)),
        *[(f"asymptotic_ratio_i{i}", lambda i=i: check_asymptotic_ratio(i)) for i in (1, 2)],
        *[(f"asymptotic_null_i{i}", lambda i=i: check_asymptotic_null(i)) for i in (1, 2, 3)],
        *[(f"family_routes_i{i}", lambda i=i: check_family_routes(i, family_route_samples(seed, i)))
          for i in (1, 2, 3)],
    ]


def _run_one(name, fn):
    try:
        return fn()
    except Exception:  # failures are reported, never raised
        return CheckReport(name, 0, math.inf, 0.0, False)


def run_all(seed=0, workers=1):
    """Run every check; the report order is fixed regardless of ``workers``."""
    battery = _battery(seed)
    if workers <= 1:
        return [_run_one(name, fn) for name, fn in battery]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda item: _run_one(*item), battery))
