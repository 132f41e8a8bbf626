"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary of any pytest run.
"""

import cmath
import io
import math
from fractions import Fraction
from pathlib import Path

from conftest import ACCEPTANCE_LINES
from kurepa import K, Ki, EvalConfig, closed_form_K, pole_catalog, recurrence_residual, residue_numeric
from kurepa.cli import main
from kurepa.errors import PoleError
from kurepa.special import gamma, minus_one_power, upper_gamma_at_minus_one
from kurepa.verify import check_asymptotic_null, check_asymptotic_ratio, family_route_samples, stream

FIXTURES = Path(__file__).parent / "fixtures"


def verdict(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def test_criterion_01_integer_agreement():
    quad = EvalConfig(method="quadrature")
    worst = max(rel(K(n, quad).value, sum(math.factorial(k) for k in range(n))) for n in range(1, 11))
    at_zero = abs(K(0).value)
    verdict(1, "K(n) = !n for n = 1..10, K(0) = 0", worst <= 1e-9 and at_zero <= 1e-12,
            f"max rel {worst:.2e} <= 1e-9, |K(0)| {at_zero:.2e} <= 1e-12")


def test_criterion_02_route_agreement():
    rng = stream(0, "acceptance_routes")
    routes = [EvalConfig(method=m) for m in ("quadrature", "closed_form", "recurrence_shift")]
    worst = 0.0
    for _ in range(100):
        z = complex(5.0 - rng.uniform(0.0, 5.0), rng.uniform(-5.0, 5.0))
        q, c, r = (K(z, cfg).value for cfg in routes)
        worst = max(worst, rel(q, c), rel(q, r), rel(c, r))
    verdict(2, "quadrature / closed form / recurrence agree on 100 points", worst <= 1e-8,
            f"max pairwise rel {worst:.2e} <= 1e-8")


def _expected_poles(i, lowest):
    # independent of the catalog: simple pole at -i, then -(i+m) for m >= 2
    scale = Fraction(1, math.factorial(i - 1))
    out = {-i: -scale}
    for m in range(2, -lowest - i + 1):
        out[-(i + m)] = scale * sum(Fraction((-1) ** (k - 1), math.factorial(k)) for k in range(2, m + 1))
    return out


def test_criterion_03_residues():
    worst = 0.0
    catalog_ok = True
    for i in (1, 2, 3):
        expected = _expected_poles(i, -8)
        catalog = {p.location: p.residue_exact for p in pole_catalog(i, 8)}
        catalog_ok &= catalog == expected
        for loc, res in expected.items():
            worst = max(worst, abs(residue_numeric(i, loc, 1e-2) - float(res)))
    named = [(1, -1, -1.0), (1, -3, -0.5), (1, -4, -1 / 3), (2, -2, -1.0)]
    named_worst = max(abs(residue_numeric(i, loc, 1e-2) - v) for i, loc, v in named)
    verdict(3, "circle-mean residues match exact rationals down to -8",
            catalog_ok and worst <= 1e-5 and named_worst <= 1e-5,
            f"max abs {worst:.2e}, named {named_worst:.2e} <= 1e-5, catalog exact: {catalog_ok}")


def _circle_mean(f, center, radius, count=16):
    return sum(f(center + radius * cmath.exp(2j * math.pi * k / count)) for k in range(count)) / count


def test_criterion_04_no_pole_at_minus_two():
    wide = _circle_mean(closed_form_K, -2.0, 0.05)
    narrow = _circle_mean(closed_form_K, -2.0, 0.025)
    value = K(-2).value
    gap = abs(wide - narrow)
    finite = math.isfinite(abs(value)) and abs(value - narrow) <= 1e-7
    verdict(4, "K finite at -2, circle means at radii 0.05 and 0.025 agree", gap <= 1e-7 and finite,
            f"|difference| {gap:.2e} <= 1e-7, K(-2) = {value.real:.15g}")


def test_criterion_05_recurrence():
    worst = {}
    for i in (1, 2, 3, 5):
        rng = stream(0, f"acceptance_recurrence_i{i}")
        res = []
        while len(res) < 50:
            z = rng.complex_in(-0.5, 5.0, -5.0, 5.0)
            try:
                res.append(recurrence_residual(i, z))
            except PoleError:
                continue
        worst[i] = max(res)
    top = max(worst.values())
    verdict(5, "recurrence residual for i in {1,2,3,5}, 50 samples each", top <= 1e-8,
            f"max residual {top:.2e} <= 1e-8")


def test_criterion_06_family_route_equivalence():
    closed = EvalConfig(method="closed_form")
    points = [(i, z) for i in (1, 2, 3) for z in family_route_samples(0, i)]
    points += [(3, -1.5), (2, -0.5 + 1j), (1, -0.7 + 0.3j), (2, -3.6 - 0.4j), (2, 0.5), (1, 3)]
    negative = sum(1 for _, z in points if complex(z).real < 0)
    worst = max(rel(Ki(i, z).value, Ki(i, z, closed).value) for i, z in points)
    verdict(6, "shifted-K route equals incomplete-gamma form of K_i", worst <= 1e-8 and negative >= 5,
            f"max rel {worst:.2e} <= 1e-8 over {len(points)} points, {negative} with Re z < 0")


def test_criterion_07_asymptotics():
    xs = [10, 20, 30, 40, 60]
    ratio = [check_asymptotic_ratio(i, xs) for i in (1, 2)]
    null = [check_asymptotic_null(i, xs) for i in (1, 2)]
    r10 = K(10, EvalConfig(rel_tol=1e-13)).value.real / gamma(10).real
    spot = abs(r10 - float(Fraction(409114, 362880)))
    ok = all(r.passed for r in ratio + null) and spot <= 1e-12
    verdict(7, "ratio and null asymptotics on x in {10,20,30,40,60}", ok,
            "ratio residuals " + ", ".join(f"{r.max_residual:.3f}" for r in ratio)
            + "; null residuals " + ", ".join(f"{r.max_residual:.3f}" for r in null)
            + f" (<= 1); |r(10) - 409114/362880| {spot:.2e} <= 1e-12")


def test_criterion_08_incomplete_gamma():
    g1 = abs(upper_gamma_at_minus_one(1) - math.e)
    g2 = abs(upper_gamma_at_minus_one(2))
    rng = stream(0, "acceptance_upper_gamma")
    worst = 0.0
    drawn = 0
    while drawn < 200:
        a = rng.complex_in(-20, 20, -20, 20)
        if abs(a) > 20:
            continue
        drawn += 1
        lhs = upper_gamma_at_minus_one(a + 1)
        rhs = a * upper_gamma_at_minus_one(a) + minus_one_power(a) * math.e
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    jumps = []
    for k in range(4):
        at = upper_gamma_at_minus_one(-k)
        jumps.append(abs(upper_gamma_at_minus_one(-k + 1e-6) - at) if math.isfinite(abs(at)) else math.inf)
    ok = g1 <= 1e-12 and g2 <= 1e-12 and worst <= 1e-9 and max(jumps) <= 1e-4
    verdict(8, "upper incomplete gamma at -1: values, recurrence, continuity", ok,
            f"|G(1,-1)-e| {g1:.1e}, |G(2,-1)| {g2:.1e} <= 1e-12; recurrence {worst:.1e} <= 1e-9 "
            f"on 200; max jump {max(jumps):.1e} <= 1e-4")


def test_criterion_09_real_on_positive_axis():
    rng = stream(0, "acceptance_real_axis")
    worst = 0.0
    for _ in range(50):
        x = 20.0 - rng.uniform(0.0, 20.0)
        k = closed_form_K(x)
        worst = max(worst, abs(k.imag) / (1.0 + abs(k)))
    verdict(9, "closed form is real for 50 x in (0, 20]", worst <= 1e-9,
            f"max |Im K|/(1+|K|) {worst:.2e} <= 1e-9")


def _cli(argv):
    out = io.StringIO()
    return main(argv, out=out), out.getvalue()


def test_criterion_10_cli_goldens():
    checks = {
        "poles": _cli(["poles", "--i", "1", "--limit", "4"])
        == (0, (FIXTURES / "poles_i1_limit4.csv").read_text()),
        "leftfact": _cli(["leftfact", "--n", "10"]) == (0, "409114\n"),
        "grid": _cli(["grid", "--i", "1", "--re-min", "1", "--re-max", "3", "--re-steps", "3",
                      "--im-min", "-1", "--im-max", "1", "--im-steps", "3"])
        == (0, (FIXTURES / "grid_3x3.csv").read_text()),
        "verify": _cli(["verify"])[0] == 0,
    }
    verdict(10, "CLI golden files byte-exact and verify exits 0", all(checks.values()),
            ", ".join(f"{k} {'ok' if v else 'MISMATCH'}" for k, v in checks.items()))
