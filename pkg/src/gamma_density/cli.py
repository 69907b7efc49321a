"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed, 2 usage or spec parse
error, 3 domain error (validity radius, unmet hypothesis, bad grid).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from .approx import ApproxError, build_bump_function, check_point
from .density import (
    DomainError,
    Grid,
    Policy,
    RatioTrace,
    classify_point,
    ratio_trace,
)
from .families import BumpSupport, ComplementWrapper, DyadicGap, FamilyError, family_from_json
from .intervals import EMPTY, POS_INF, REALS, IntervalError, RationalIntervalSet, normalize
from .modulus import (
    ConditionACertificate,
    Identity,
    LogModulus,
    ModulusError,
    Power,
    check_condition_a,
    parse_modulus,
    validate_modulus,
)
from .suites import SUITES, run_suites
from .topology import FinitePoints, HypothesisError, RepresentableSet, is_gamma_open, point_family_from_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
DOMAIN_ERRORS = (DomainError, FamilyError, IntervalError, ModulusError, ApproxError, HypothesisError)
SCHEMA_VERSION = 1

DEFAULTS = {
    "alpha0": "1/4",
    "q": "1/2",
    "K": 60,
    "window": 8,
    "tol": 1e-3,
    "theta": 1e-3,
    "theta_limsup": 1e-2,
    "side": "both",
    "of": "complement",
    "format": None,
    "seed": 42,
    "suite": "all",
}


class SpecError(ValueError):
    """Unparseable set, modulus or point specification."""


# ------------------------------------------------------------------ spec parsing


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"not a rational number: {text!r}") from exc


def _anchor(spec: str) -> Fraction:
    return parse_rational(spec.split("@", 1)[1]) if "@" in spec else Fraction(0)


def parse_set(spec: str):
    """Set spec: empty, reals, dyadic-gap[@a], dyadic-gaps[@a], bump-support[@a],
    interval:a,b, union:a,b;c,d, halfline:a, or a path to a JSON file."""
    s = spec.strip()
    base = s.split("@", 1)[0]
    try:
        if s == "empty":
            return EMPTY
        if s == "reals":
            return REALS
        if base == "dyadic-gap":
            return DyadicGap(_anchor(s))
        if base == "dyadic-gaps":
            return ComplementWrapper(DyadicGap(_anchor(s)))
        if base == "bump-support":
            return BumpSupport(_anchor(s))
        if s.startswith("interval:"):
            lo, hi = s.split(":", 1)[1].split(",")
            return normalize([(parse_rational(lo), parse_rational(hi))])
        if s.startswith("union:"):
            pairs = []
            for part in s.split(":", 1)[1].split(";"):
                lo, hi = part.split(",")
                pairs.append((parse_rational(lo), parse_rational(hi)))
            return normalize(pairs)
        if s.startswith("halfline:"):
            return normalize([(parse_rational(s.split(":", 1)[1]), POS_INF)])
        if s.endswith(".json") or os.path.exists(s):
            return set_from_json(json.loads(Path(s).read_text()))
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"cannot parse set spec {spec!r}: {exc}") from exc
    raise SpecError(f"unknown set spec {spec!r}")


def set_from_json(data: dict):
    if "kernel" in data:
        kernel = set_from_json(data["kernel"])
        added = point_family_from_json(data.get("added", {"kind": "finite"}))
        removed = point_family_from_json(data.get("removed", {"kind": "finite"}))
        return RepresentableSet(kernel, added, removed)
    if "kind" in data:
        return family_from_json(data)
    return RationalIntervalSet.from_json(data)


def with_points(target, add, remove):
    if not add and not remove:
        return target
    return RepresentableSet(
        target,
        FinitePoints(frozenset(parse_rational(p) for p in add or [])),
        FinitePoints(frozenset(parse_rational(p) for p in remove or [])),
    )


def parse_gamma(spec: str):
    try:
        return parse_modulus(spec)
    except ModulusError as exc:
        if "unknown" in str(exc):
            raise SpecError(str(exc)) from exc
        raise
    except (ValueError, ZeroDivisionError, IndexError) as exc:
        raise SpecError(f"cannot parse modulus spec {spec!r}") from exc


def _grid(args) -> Grid:
    return Grid(parse_rational(args.alpha0), parse_rational(args.q), int(args.K))


def _policy(args) -> Policy:
    return Policy(int(args.window), float(args.tol), float(args.theta), float(args.theta_limsup))


def _pair(q: Fraction) -> list[int]:
    return [q.numerator, q.denominator]


def _describe_set(target) -> dict:
    try:
        return target.to_json()
    except (AttributeError, IntervalError):
        return {"repr": str(target)}


# ------------------------------------------------------------------ output


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_output(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def trace_csv(trace: RatioTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RatioTrace.CSV_HEADER)
    for row in trace.rows():
        w.writerow(row[:-1] + (repr(row[-1]),))
    return buf.getvalue()


def trace_json(trace: RatioTrace, meta: dict) -> str:
    return dumps(
        {
            "schema": SCHEMA_VERSION,
            **meta,
            "side": trace.side,
            "of": trace.of,
            "truncated": trace.truncated,
            "rows": [
                {"k": k, "alpha": [an, ad], "measure": [mn, md], "ratio": r}
                for k, an, ad, mn, md, r in trace.rows()
            ],
        }
    )


def trace_ascii(trace: RatioTrace, width: int = 50) -> str:
    lines = [f"ratio trace ({trace.modulus}, side={trace.side}, of={trace.of})"]
    for k, r in enumerate(trace.float_ratios()):
        bar = "#" * int(round(min(max(r, 0.0), 1.0) * width))
        lines.append(f"{k:3d} {r:10.6f} |{bar}")
    return "\n".join(lines) + "\n"


def trace_svg(trace: RatioTrace, w: int = 480, h: int = 240, pad: int = 30) -> str:
    rs = trace.float_ratios()
    n = max(len(rs) - 1, 1)
    top = max(1.0, max(rs, default=1.0))
    pts = " ".join(
        f"{pad + (w - 2 * pad) * k / n:.2f},{h - pad - (h - 2 * pad) * r / top:.2f}" for k, r in enumerate(rs)
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
        f'<rect width="{w}" height="{h}" fill="white"/>\n'
        f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h - pad}" stroke="black"/>\n'
        f'<text x="{w / 2}" y="{h - 6}" font-size="11" text-anchor="middle">k (alpha = alpha0 q^k)</text>\n'
        f'<text x="4" y="{pad - 8}" font-size="11">ratio ({trace.modulus})</text>\n'
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>\n'
        "</svg>\n"
    )


# ------------------------------------------------------------------ commands


def _target(args):
    return with_points(parse_set(args.set), args.add, args.remove)


def cmd_trace(args) -> int:
    gamma = parse_gamma(args.modulus)
    target = _target(args)
    x = parse_rational(args.point)
    trace = ratio_trace(gamma, target, x, args.side, _grid(args), of=args.of)
    if trace.truncated:
        raise DomainError(
            f"{trace.offset} grid scale(s) exceed the validity radius {target.validity_radius(x)} at x = {x}"
        )
    fmt = args.format or "csv"
    if fmt == "csv":
        text = trace_csv(trace)
    elif fmt == "json":
        text = trace_json(trace, {"gamma": gamma.name, "point": _pair(x), "grid": _grid(args).to_json()})
    elif fmt == "ascii":
        text = trace_ascii(trace)
    else:
        text = trace_svg(trace)
    write_output(text, args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    gamma = parse_gamma(args.modulus)
    target = _target(args)
    x = parse_rational(args.point)
    policy = _policy(args)
    verdict = classify_point(gamma, target, x, policy, _grid(args), exact=not args.numeric)
    payload = {
        "schema": SCHEMA_VERSION,
        "gamma": gamma.name,
        "set": _describe_set(target),
        "point": _pair(x),
        "verdict": verdict.to_json(),
        "policy": policy.to_json(),
        "grid": _grid(args).to_json(),
    }
    write_output(dumps(payload), args.output)
    return EXIT_OK


def cmd_condition_a(args) -> int:
    gamma = parse_gamma(args.modulus)
    eps = float(args.epsilon)
    if not 0 < eps < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    result = check_condition_a(gamma, eps)
    payload = {"schema": SCHEMA_VERSION, "gamma": gamma.name, "result": result.to_json()}
    payload["status"] = "certificate" if isinstance(result, ConditionACertificate) else "refutation-evidence"
    write_output(dumps(payload), args.output)
    return EXIT_OK


def cmd_validate_modulus(args) -> int:
    gamma = parse_gamma(args.modulus)
    report = validate_modulus(gamma)
    write_output(dumps({"schema": SCHEMA_VERSION, "gamma": gamma.name, "report": report.to_json()}), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_open(args) -> int:
    gamma = parse_gamma(args.modulus)
    target = _target(args)
    policy = _policy(args)
    grid = _grid(args)
    result = is_gamma_open(gamma, target, policy, grid)
    payload = {
        "schema": SCHEMA_VERSION,
        "set": _describe_set(target),
        "gamma": gamma.name,
        **result.to_json(),
        "policy": policy.to_json(),
    }
    write_output(dumps(payload), args.output)
    return EXIT_OK


# ------------------------------------------------------------------ reproductions


def _value(value: float, expected: float, tol: float) -> dict:
    return {"value": value, "expected": expected, "tol": tol, "ok": abs(value - expected) <= tol}


def reproduce_ex17() -> dict:
    B = DyadicGap(Fraction(0))
    grid = Grid(Fraction(1, 2**10), Fraction(1, 2), 51)
    log_trace = ratio_trace(LogModulus(), B, 0, "both", grid)
    id_trace = ratio_trace(Identity(), B, 0, "both", grid)
    last = log_trace.float_ratios()[-10:]
    checks = {
        "log_ratio_last10_within_0.05_of_half": all(abs(r - 0.5) <= 0.05 for r in last),
        "identity_ratio_le_2h_exact": all(m / (2 * h) <= 2 * h for h, m in zip(id_trace.scales, id_trace.measures)),
        "sandwich_h2_over_4_le_m_le_4h2_exact": all(
            h * h / 4 <= m <= 4 * h * h for h, m in zip(id_trace.scales, id_trace.measures)
        ),
        "identity_density_point": classify_point(Identity(), B, 0).density is True,
        "log_not_density_point": classify_point(LogModulus(), B, 0).density is False,
    }
    values = {
        "log_ratio_at_2^-60": _value(last[-1], 0.5, 0.05),
        "log_ratio_mean_last10": _value(sum(last) / len(last), 0.5, 0.05),
    }
    return {"example": "ex17", "checks": checks, "values": values}


def reproduce_ex28() -> dict:
    U = RepresentableSet(DyadicGap(Fraction(0)), FinitePoints(frozenset([Fraction(0)])))
    log = is_gamma_open(LogModulus(), U)
    verdict = classify_point(LogModulus(), U.kernel, 0)
    checks = {
        "identity_open": is_gamma_open(Identity(), U).is_open,
        "power_half_open": is_gamma_open(Power(Fraction(1, 2)), U).is_open,
        "log_not_open": log.verdict.value == "NotOpen",
        "log_witness_is_anchor": log.witness == 0,
    }
    values = {"log_complement_limit_at_0": _value(verdict.limit_estimate, 0.5, 0.05)}
    return {"example": "ex28", "checks": checks, "values": values}


def reproduce_bump(n_max: int = 50) -> dict:
    bf = build_bump_function(n_max)
    A = BumpSupport(Fraction(0))
    sup = bf.func.sup_norm()
    checks = {
        "sup_equals_n_max": sup == n_max,
        "peaks_exact": all(bf(BumpSupport.center(n)) == n for n in range(1, n_max + 1)),
        "quadratic_bound_exact": all(
            A.complement_trace_measure(Fraction(1, 2**k)) <= BumpSupport.QUADRATIC_CONSTANT * Fraction(1, 4**k)
            for k in range(2, 62)
        ),
        "vanishes_off_supports": all(bf(Fraction(1, 2**k)) == 0 for k in range(1, 62)),
        "approx_continuous_identity": check_point(bf, 0, Identity()).overall is True,
        "approx_continuous_power_half": check_point(bf, 0, Power(Fraction(1, 2))).overall is True,
    }
    values = {
        "sup_norm": _value(float(sup), float(n_max), 0.0),
        "quadratic_constant": _value(float(BumpSupport.QUADRATIC_CONSTANT), 4 / 3, 1e-12),
    }
    return {"example": "bump", "n_max": n_max, "checks": checks, "values": values}


REPRODUCTIONS = {"ex17": reproduce_ex17, "ex28": reproduce_ex28, "bump": reproduce_bump}


def report_passed(report: dict) -> bool:
    return all(report["checks"].values()) and all(v["ok"] for v in report["values"].values())


def cmd_reproduce(args) -> int:
    report = REPRODUCTIONS[args.example]()
    report["passed"] = report_passed(report)
    report["schema"] = SCHEMA_VERSION
    write_output(dumps(report), args.output)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_verify(args) -> int:
    names = "all" if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    if names != "all":
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise SpecError(f"unknown suite(s): {', '.join(unknown)}")
    report = run_suites(names, int(args.seed))
    report["schema"] = SCHEMA_VERSION
    write_output(dumps(report), args.output)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# ------------------------------------------------------------------ parser


def _common(p: argparse.ArgumentParser, set_arg=True, point=True, grid=True, policy=False):
    if set_arg:
        p.add_argument("--set", help="set spec (empty, reals, dyadic-gap, interval:a,b, union:a,b;c,d, file.json)")
        p.add_argument("--add", action="append", metavar="X", help="add an isolated point")
        p.add_argument("--remove", action="append", metavar="X", help="remove a point")
    p.add_argument("--modulus", help="identity, power:p, bounded, log, psi:linear, ...")
    if point:
        p.add_argument("--point", help="rational point x")
    if grid:
        p.add_argument("--alpha0")
        p.add_argument("--q")
        p.add_argument("--K", type=int)
    if policy:
        p.add_argument("--window", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--theta", type=float)
        p.add_argument("--theta-limsup", dest="theta_limsup", type=float)
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--config", help="JSON file whose keys fill options left unset")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamma-density", description="gamma-density toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="ratio trace of a set at a point")
    _common(p)
    p.add_argument("--side", choices=("both", "left", "right"))
    p.add_argument("--of", choices=("complement", "set"))
    p.add_argument("--format", choices=("csv", "json", "ascii", "svg"))
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("classify", help="density / dispersion verdict")
    _common(p, policy=True)
    p.add_argument("--numeric", action="store_true", help="skip the exact shortcut")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("condition-a", help="Condition (A) certificate or refutation evidence")
    _common(p, set_arg=False, point=False, grid=False)
    p.add_argument("--epsilon")
    p.set_defaults(func=cmd_condition_a)

    p = sub.add_parser("validate-modulus", help="check the modulus axioms on grids")
    _common(p, set_arg=False, point=False, grid=False)
    p.set_defaults(func=cmd_validate_modulus)

    p = sub.add_parser("open", help="openness in the gamma-density topology")
    _common(p, point=False, policy=True)
    p.set_defaults(func=cmd_open)

    p = sub.add_parser("reproduce", help="reproduce a worked example")
    p.add_argument("example", choices=sorted(REPRODUCTIONS))
    p.add_argument("--output", "-o")
    p.add_argument("--config")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--suite", help=f"'all' or a comma list of: {', '.join(SUITES)}")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", "-o")
    p.add_argument("--config")
    p.set_defaults(func=cmd_verify)
    return parser


REQUIRED = {
    "trace": ("set", "modulus", "point"),
    "classify": ("set", "modulus", "point"),
    "condition-a": ("modulus", "epsilon"),
    "validate-modulus": ("modulus",),
    "open": ("set", "modulus"),
}


def _resolve(args) -> None:
    config = {}
    if getattr(args, "config", None):
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(config, dict):
            raise SpecError("config must be a JSON object")
    for key in vars(args):
        if getattr(args, key) is None:
            if key in config:
                setattr(args, key, config[key])
            elif key in DEFAULTS:
                setattr(args, key, DEFAULTS[key])
    missing = [k for k in REQUIRED.get(args.command, ()) if getattr(args, k, None) is None]
    if missing:
        raise SpecError(f"missing required option(s): {', '.join('--' + m for m in missing)}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _resolve(args)
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DOMAIN_ERRORS as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
