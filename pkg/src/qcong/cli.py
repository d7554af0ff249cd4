"""Command line front end.

Subcommands: count, density, minheight, variance, moments, lfunc-moment,
scan-exceptions, scan-asymptotic, scan-sharp.  Parameters can come from
a JSON config file (--config), with explicit flags taking precedence.

Exit codes: 0 success, 2 invalid arguments, 3 domain error during
computation, 4 desk-scale cap exceeded, 5 tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

from .arith import factorize
from .counting import CongruenceInstance, count_box_fast, local_density, minimal_height
from .errors import DomainError, ScaleCapError, ToleranceError
from .experiments import ScanConfig, run_ladder, write_csv, write_json
from .lfunc import eighth_moment
from .moments import moment_report, variance_report
from .smoothing import SmoothWeight

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DOMAIN = 3
EXIT_SCALE = 4
EXIT_TOLERANCE = 5


class InvalidArguments(Exception):
    """Raised by CLI-level validation, before any computation."""


def _real(x: float) -> str:
    return "%.12g" % x


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidArguments(message)


def _validated_instance(q: int, alpha2: int, alpha3: int) -> CongruenceInstance:
    _check(q >= 1, "q must be >= 1")
    _check(q % 2 == 1, f"modulus must be odd, got {q}")
    _check(alpha2 >= 1, "alpha2 must be >= 1")
    _check(math.gcd(alpha2, q) == 1, "alpha2 must be coprime to q")
    _check(1 <= alpha3 <= q, "alpha3 must lie in [1, q]")
    _check(math.gcd(alpha3, q) == 1, "alpha3 must be coprime to q")
    return CongruenceInstance(factorize(q), alpha2, alpha3)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidArguments("config file must hold a JSON object")
    return data


def _pick(args: argparse.Namespace, config: dict, key: str, default):
    """Flag value if given, else config file value, else default."""
    v = getattr(args, key, None)
    if v is not None:
        return v
    if key in config:
        return config[key]
    return default


def _parse_q_list(text) -> list[int]:
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        values = [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidArguments(f"bad Q list {text!r}") from exc
    _check(bool(values), "empty Q list")
    _check(all(v >= 1 for v in values), "every Q must be >= 1")
    return values


# ---------------------------------------------------------------------------
# Subcommand handlers.
# ---------------------------------------------------------------------------


def _cmd_count(args, config) -> int:
    inst = _validated_instance(args.q, _pick(args, config, "alpha2", 1), args.alpha3)
    _check(args.n >= 0, "n must be >= 0")
    print(count_box_fast(inst, args.n))
    return EXIT_OK


def _cmd_density(args, config) -> int:
    q = args.q
    alpha2 = _pick(args, config, "alpha2", 1)
    _check(q >= 1 and q % 2 == 1, f"modulus must be odd and positive, got {q}")
    _check(alpha2 >= 1 and math.gcd(alpha2, q) == 1, "alpha2 must be coprime to q")
    c = local_density(factorize(q), alpha2)
    print(f"{c.numerator}/{c.denominator}")
    return EXIT_OK


def _cmd_minheight(args, config) -> int:
    inst = _validated_instance(args.q, _pick(args, config, "alpha2", 1), args.alpha3)
    _check(args.hmax >= 0, "hmax must be >= 0")
    h = minimal_height(inst, args.hmax)
    print("none" if h is None else h)
    return EXIT_OK


def _cmd_variance(args, config) -> int:
    q = args.q
    alpha2 = _pick(args, config, "alpha2", 1)
    _check(q >= 1 and q % 2 == 1, "q must be odd and positive")
    _check(alpha2 >= 1 and math.gcd(2 * alpha2, q) == 1, "need gcd(2 alpha2, q) = 1")
    n = _pick(args, config, "n", None)
    n = int(n) if n is not None else math.isqrt(q - 1) + 1 if q > 1 else 1
    delta = float(_pick(args, config, "delta", n / 2.0))
    tolerance = float(_pick(args, config, "tolerance", 1e-9))
    w = SmoothWeight(n=float(n), delta=delta)
    rep = variance_report(factorize(q), alpha2, w)
    print(f"q={rep.q} alpha2={rep.alpha2} n={rep.n} delta={_real(rep.delta)}")
    print(f"v_direct = {_real(rep.v_direct)}")
    print(f"v1 = {_real(rep.v1)}")
    print(f"v2 = {_real(rep.v2)}")
    print(f"residual = {_real(rep.residual)}")
    print(f"relative_residual = {_real(rep.relative_residual)}")
    if args.out_json:
        payload = {
            "q": rep.q,
            "alpha2": rep.alpha2,
            "n": rep.n,
            "delta": rep.delta,
            "v_direct": rep.v_direct,
            "v1": rep.v1,
            "v2": rep.v2,
            "residual": rep.residual,
        }
        with open(args.out_json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if rep.relative_residual > tolerance:
        raise ToleranceError(
            f"variance identity residual {rep.relative_residual:.3e} exceeds {tolerance:.3e}"
        )
    return EXIT_OK


def _cmd_moments(args, config) -> int:
    big_q = args.Q
    alpha2 = _pick(args, config, "alpha2", 1)
    _check(big_q >= 1, "Q must be >= 1")
    _check(alpha2 >= 1, "alpha2 must be >= 1")
    n = _pick(args, config, "n", None)
    n = int(n) if n is not None else math.isqrt(2 * big_q - 1) + 1
    delta = float(_pick(args, config, "delta", n / 2.0))
    rep = moment_report(big_q, alpha2, n, delta, with_g=bool(args.with_g))
    print(f"Q={rep.big_q} alpha2={rep.alpha2} n={rep.n} delta={_real(rep.delta)}")
    print(f"e1 = {_real(rep.e1)}")
    print(f"e2 = {_real(rep.e2)}")
    print(f"f = {_real(rep.f_value)}")
    print(f"v2_sum = {_real(rep.v2_sum)}")
    print(f"holder_rhs = {_real(rep.holder_rhs)}")
    print(f"holder_ok = {rep.holder_ok}")
    if rep.g0 is not None:
        print(f"g0 = {rep.g0}")
        print(f"g1 = {rep.g1}")
    if args.out_json:
        payload = asdict(rep) | {"holder_rhs": rep.holder_rhs, "holder_ok": rep.holder_ok}
        with open(args.out_json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def _cmd_lfunc_moment(args, config) -> int:
    _check(args.Q >= 1, "Q must be >= 1")
    _check(args.T > 0, "T must be positive")
    value = eighth_moment(args.Q, args.T)
    bound = args.Q**2 * args.T**2 * math.log(2 * args.Q * args.T) ** 16
    print(f"eighth_moment = {_real(value)}")
    print(f"reference_bound = {_real(bound)}")
    print(f"ratio = {_real(value / bound)}")
    return EXIT_OK


_SCAN_KEYS = (
    ("alpha2", 1),
    ("eps", 0.05),
    ("height_exponent", 0.375),
    ("n_rule", None),
    ("n", None),
    ("delta_rule", "half"),
    ("delta", None),
    ("burgess_r", 3),
    ("seed", 1),
)


def _cmd_scan(args, config, kind: str) -> int:
    q_text = _pick(args, config, "Q", None)
    _check(q_text is not None, "--Q is required (flag or config)")
    q_values = _parse_q_list(q_text)
    picked = {key: _pick(args, config, key, default) for key, default in _SCAN_KEYS}
    threads = _pick(args, config, "threads", None)
    if threads is None:
        threads = int(os.environ.get("QCONG_THREADS", "1"))
    cubefree = bool(_pick(args, config, "cubefree_only", False))
    subsample = bool(_pick(args, config, "subsample", False))
    try:
        base = ScanConfig(
            big_q=q_values[0],
            alpha2=int(picked["alpha2"]),
            eps_exp=float(picked["eps"]),
            height_exponent=float(picked["height_exponent"]),
            n_rule=picked["n_rule"],
            n_explicit=None if picked["n"] is None else int(picked["n"]),
            delta_rule=picked["delta_rule"],
            delta_explicit=None if picked["delta"] is None else float(picked["delta"]),
            burgess_r=int(picked["burgess_r"]),
            cubefree_only=cubefree,
            subsample=subsample,
            seed=int(picked["seed"]),
            threads=int(threads),
        )
    except DomainError as exc:
        raise InvalidArguments(str(exc)) from exc
    report = run_ladder(kind, base, q_values)
    for s in report.summaries:
        if kind == "exceptions":
            print(
                f"{kind} Q={s.big_q} examined={s.examined} exceptions={s.exception_count} "
                f"fraction={_real(s.exception_fraction)} "
                f"ci=[{_real(s.ci_low)},{_real(s.ci_high)}] insoluble={s.insoluble_count}"
                + (" (sampled)" if s.sampled else "")
            )
        else:
            print(
                f"{kind} Q={s.big_q} examined={s.examined} n={s.n} delta={_real(s.delta)} "
                f"median={_real(s.rel_err_q50)} q90={_real(s.rel_err_q90)} "
                f"max={_real(s.rel_err_max)} frac_large={_real(s.frac_large_error)} "
                f"window_ok={s.window_ok}"
            )
    if args.out_csv:
        write_csv(report, args.out_csv)
    if args.out_json:
        write_json(report, args.out_json)
    if args.figures:
        from .figures import render_figures

        for path in render_figures(report, args.figures):
            print(f"figure: {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser construction and dispatch.
# ---------------------------------------------------------------------------


def _add_scan_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--Q", help="Q value or comma list for a ladder")
    p.add_argument("--alpha2", type=int)
    p.add_argument("--eps", type=float, help="exponent perturbation (default 0.05)")
    p.add_argument("--height-exponent", dest="height_exponent", type=float)
    p.add_argument("--n-rule", dest="n_rule", choices=["height", "sharp", "explicit"])
    p.add_argument("--n", type=int, help="explicit box radius for --n-rule explicit")
    p.add_argument("--delta-rule", dest="delta_rule", choices=["min", "half", "explicit"])
    p.add_argument("--delta", type=float, help="explicit width for --delta-rule explicit")
    p.add_argument("--burgess-r", dest="burgess_r", type=int, choices=[2, 3, 4])
    p.add_argument("--cubefree-only", dest="cubefree_only", action="store_const", const=True)
    p.add_argument("--subsample", action="store_const", const=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out-csv", dest="out_csv")
    p.add_argument("--out-json", dest="out_json")
    p.add_argument("--figures", help="directory for rendered figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcong",
        description="Ternary quadratic congruence counts, character moments, scans.",
    )
    parser.add_argument("--config", help="JSON file of defaults; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact box count for one instance")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha2", type=int)
    p.add_argument("--alpha3", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("density", help="local density C_q as an exact rational")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha2", type=int)

    p = sub.add_parser("minheight", help="minimal solution height up to a cap")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha2", type=int)
    p.add_argument("--alpha3", type=int, required=True)
    p.add_argument("--hmax", type=int, required=True)

    p = sub.add_parser("variance", help="variance identity report at one q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha2", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--out-json", dest="out_json")

    p = sub.add_parser("moments", help="dyadic moments and the Holder comparison")
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--alpha2", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--with-g", dest="with_g", action="store_const", const=True)
    p.add_argument("--out-json", dest="out_json")

    p = sub.add_parser("lfunc-moment", help="hybrid eighth moment of L-functions")
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--T", type=float, required=True)

    for kind, name in (("exceptions", "scan-exceptions"), ("asymptotic", "scan-asymptotic"), ("sharp", "scan-sharp")):
        p = sub.add_parser(name, help=f"{kind} scan over B(Q, alpha2)")
        _add_scan_flags(p)
    return parser


_HANDLERS = {
    "count": _cmd_count,
    "density": _cmd_density,
    "minheight": _cmd_minheight,
    "variance": _cmd_variance,
    "moments": _cmd_moments,
    "lfunc-moment": _cmd_lfunc_moment,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        if args.command in _HANDLERS:
            return _HANDLERS[args.command](args, config)
        kind = {"scan-exceptions": "exceptions", "scan-asymptotic": "asymptotic", "scan-sharp": "sharp"}[
            args.command
        ]
        return _cmd_scan(args, config, kind)
    except InvalidArguments as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ScaleCapError as exc:
        print(f"scale cap: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except ToleranceError as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
