"""Command line front end: ``kurepa {eval,grid,poles,leftfact,verify}``.

Exit codes: 0 success, 1 usage error, 2 pole / near-pole, 3 numerical
failure (convergence or overflow), 4 failed verification.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .core import EvalConfig, Ki, left_factorial, pole_catalog
from .errors import ConvergenceError, KurepaError, NearPoleError, NonFiniteError, PoleError
from .quadrature import QuadratureConfig
from .verify import run_all

EXIT_OK, EXIT_USAGE, EXIT_POLE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3, 4
GRID_HEADER = "i,re,im,k_re,k_im,method,est_abs_error,status"
MAX_GRID_POINTS = 10 ** 7
_METHODS = {
    "auto": "auto",
    "quadrature": "quadrature",
    "closed-form": "closed_form",
    "recurrence": "recurrence_shift",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x):
    """17 significant digits, JSON-compatible."""
    return format(x, ".17g")


@dataclass(frozen=True)
class GridSpec:
    re_min: float
    re_max: float
    re_steps: int
    im_min: float
    im_max: float
    im_steps: int

    def __post_init__(self):
        if self.re_steps < 1 or self.im_steps < 1:
            raise UsageError("step counts must be >= 1")
        if self.re_min > self.re_max or self.im_min > self.im_max:
            raise UsageError("grid bounds must satisfy min <= max")
        if self.re_steps * self.im_steps > MAX_GRID_POINTS:
            raise UsageError(f"grid exceeds {MAX_GRID_POINTS} points")

    @staticmethod
    def _axis(lo, hi, steps):
        if steps == 1:
            return [lo]
        h = (hi - lo) / (steps - 1)
        return [lo + k * h for k in range(steps - 1)] + [hi]

    def points(self):
        """Row-major: imaginary index outer, real index inner."""
        res = self._axis(self.re_min, self.re_max, self.re_steps)
        ims = self._axis(self.im_min, self.im_max, self.im_steps)
        return [(re, im) for im in ims for re in res]


# ---------------------------------------------------------------- records

def _record(i, re, im, result):
    if result is None:
        return {"i": i, "re": re, "im": im, "k": None, "method": None,
                "est_abs_error": None, "status": "near_pole"}
    return {"i": i, "re": re, "im": im,
            "k": {"re": result.value.real, "im": result.value.imag},
            "method": result.method.value, "est_abs_error": result.est_abs_error,
            "status": "ok"}


def record_json(rec):
    if rec["k"] is None:
        k, method, err = "null", "null", "null"
    else:
        k = '{"re":%s,"im":%s}' % (fmt(rec["k"]["re"]), fmt(rec["k"]["im"]))
        method = json.dumps(rec["method"])
        err = fmt(rec["est_abs_error"])
    return ('{"i":%d,"re":%s,"im":%s,"k":%s,"method":%s,"est_abs_error":%s,"status":%s}'
            % (rec["i"], fmt(rec["re"]), fmt(rec["im"]), k, method, err, json.dumps(rec["status"])))


def record_csv(rec):
    if rec["k"] is None:
        tail = ",,,,near_pole"
    else:
        tail = ",%s,%s,%s,%s,ok" % (fmt(rec["k"]["re"]), fmt(rec["k"]["im"]),
                                    rec["method"], fmt(rec["est_abs_error"]))
    return "%d,%s,%s" % (rec["i"], fmt(rec["re"]), fmt(rec["im"])) + tail


def _config(args):
    return EvalConfig(method=_METHODS[args.method], rel_tol=args.tol,
                      quad=QuadratureConfig(rel_tol=args.tol))


def _error_payload(exc):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, PoleError):
        payload["location"] = exc.location
    return json.dumps(payload)


# ----------------------------------------------------------- subcommands

def cmd_eval(args, out):
    z = complex(args.re, args.im)
    try:
        result = Ki(args.i, z, _config(args))
    except PoleError as exc:
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_POLE
    except (ConvergenceError, NonFiniteError) as exc:
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_NUMERIC
    except KurepaError as exc:
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_USAGE
    rec = _record(args.i, args.re, args.im, result)
    if args.format == "json":
        out.write(record_json(rec) + "\n")
    else:
        out.write(GRID_HEADER + "\n" + record_csv(rec) + "\n")
    return EXIT_OK


def _grid_point(i, cfg, point):
    re, im = point
    try:
        return _record(i, re, im, Ki(i, complex(re, im), cfg))
    except (PoleError, NearPoleError):
        return _record(i, re, im, None)


def cmd_grid(args, out):
    spec = GridSpec(args.re_min, args.re_max, args.re_steps,
                    args.im_min, args.im_max, args.im_steps)
    cfg = _config(args)
    points = spec.points()
    try:
        if args.workers > 1:
            with ThreadPoolExecutor(max_workers=args.workers) as pool:
                records = list(pool.map(lambda p: _grid_point(args.i, cfg, p), points))
        else:
            records = [_grid_point(args.i, cfg, p) for p in points]
    except (ConvergenceError, NonFiniteError) as exc:
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_NUMERIC

    stream = open(args.out, "w", newline="") if args.out != "-" else out
    try:
        if args.format == "json":
            stream.write("[\n" + ",\n".join(record_json(r) for r in records) + "\n]\n")
        else:
            stream.write(GRID_HEADER + "\n")
            for r in records:
                stream.write(record_csv(r) + "\n")
            stream.write(f"# rows={len(records)}\n")
    finally:
        if stream is not out:
            stream.close()
    return EXIT_OK


def cmd_poles(args, out):
    poles = pole_catalog(args.i, args.limit)
    if args.format == "json":
        rows = ['{"location":%d,"residue_num":%d,"residue_den":%d,"residue_float":%s}'
                % (p.location, p.residue_exact.numerator, p.residue_exact.denominator,
                   fmt(p.residue_float)) for p in poles]
        out.write("[\n" + ",\n".join(rows) + "\n]\n" if rows else "[]\n")
    else:
        out.write("location,residue_num,residue_den,residue_float\n")
        for p in poles:
            out.write("%d,%d,%d,%s\n" % (p.location, p.residue_exact.numerator,
                                         p.residue_exact.denominator, fmt(p.residue_float)))
    return EXIT_OK


def cmd_leftfact(args, out):
    if args.n < 0:
        print("leftfact: n must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    out.write(f"{left_factorial(args.n)}\n")
    return EXIT_OK


def cmd_verify(args, out):
    reports = run_all(args.seed, workers=args.workers)
    if args.format == "json":
        rows = ['{"name":%s,"samples":%d,"max_residual":%s,"tolerance":%s,"passed":%s}'
                % (json.dumps(r.name), r.samples, _json_float(r.max_residual),
                   _json_float(r.tolerance), "true" if r.passed else "false")
                for r in reports]
        out.write("[\n" + ",\n".join(rows) + "\n]\n")
    else:
        out.write("name,samples,max_residual,tolerance,passed\n")
        for r in reports:
            out.write("%s,%d,%s,%s,%s\n" % (r.name, r.samples, fmt(r.max_residual),
                                            fmt(r.tolerance), "true" if r.passed else "false"))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def _json_float(x):
    return fmt(x) if x == x and abs(x) != float("inf") else "null"


# ----------------------------------------------------------------- parser

def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser():
    parser = _Parser(prog="kurepa", description="Kurepa's left factorial K(z) and the K_i family.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def method_flags(p):
        p.add_argument("--i", type=int, default=1, help="family index (K_1 = K)")
        p.add_argument("--method", choices=sorted(_METHODS), default="auto")
        p.add_argument("--tol", type=_positive_float, default=1e-10)

    p = sub.add_parser("eval", help="evaluate K_i at one point")
    method_flags(p)
    p.add_argument("--re", type=float, required=True)
    p.add_argument("--im", type=float, default=0.0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="evaluate K_i on a rectangular grid")
    method_flags(p)
    for name in ("re-min", "re-max", "im-min", "im-max"):
        p.add_argument(f"--{name}", type=float, required=True)
    p.add_argument("--re-steps", type=int, required=True)
    p.add_argument("--im-steps", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("poles", help="list poles and exact residues of K_i")
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("leftfact", help="exact left factorial !n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_leftfact)

    p = sub.add_parser("verify", help="run the property checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "i", 1) < 1:
        print("error: --i must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "limit", 1) < 1:
        print("error: --limit must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
