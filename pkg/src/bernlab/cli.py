"""Command-line front end.

Every report starts from an echo of all parameters, defaults included, so a
run can be repeated from its own output. Exit codes: 0 success, 1 numerical
non-convergence (the report is still written), 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional

from . import __version__
from .asymptotics import EXTRAPOLATORS, RICHARDSON, TEST_FUNCTIONS, decay_bound_check, scaled_error_table, \
    scaling_identity_check
from .best_approx import ApproxProblem, best_approximation
from .constants import bernstein_l1, bernstein_l2, bernstein_linf_log, mu_constant, mu_equation
from .errors import BernlabError, DomainError, NumericalError
from .functions import FunctionSpec
from .numerics import DEFAULT_FLOOR, PNorm

EXIT_OK, EXIT_NUMERICAL, EXIT_DOMAIN = 0, 1, 2
_VARIANTS = {"full": "full", "cos": "cos_part", "sin": "sin_part"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _degrees(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pnorm(text: str) -> str:
    # validated later so that p < 1 maps to a domain error, not a usage error
    try:
        float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"p must be a number or 'inf', got {text!r}")
    return text


def build_parser() -> argparse.ArgumentParser:
    out = _Parser(add_help=False)
    out.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    out.add_argument("--output", default=None, help="write the report here instead of stdout")

    fn = _Parser(add_help=False)
    fn.add_argument("--alpha", type=float, default=0.5)
    fn.add_argument("--beta", type=float, default=0.0)
    fn.add_argument("--variant", choices=tuple(_VARIANTS), default="full")
    fn.add_argument("--p", type=_pnorm, default="inf")
    fn.add_argument("--grid-floor", type=float, default=DEFAULT_FLOOR)

    parser = _Parser(prog="bernlab", description="Best polynomial approximation of |x|^(alpha + i beta).")
    parser.add_argument("--version", action="version", version=f"bernlab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    c = sub.add_parser("constant", parents=[out], help="closed-form Bernstein constant")
    c.add_argument("--alpha", type=float, default=0.5)
    c.add_argument("--beta", type=float, default=0.0)
    c.add_argument("--variant", choices=tuple(_VARIANTS), default="full")
    c.add_argument("--p", type=_pnorm, default="2")
    c.add_argument("--sigma", type=float, default=1.0)

    e = sub.add_parser("error", parents=[out, fn], help="E_n on [-a, a]")
    e.add_argument("--degree", type=int, default=8)
    e.add_argument("--a", type=float, default=1.0)

    v = sub.add_parser("converge", parents=[out, fn], help="scaled error table and limit estimate")
    v.add_argument("--degrees", type=_degrees, default=[8, 16, 32, 64])
    v.add_argument("--method", choices=EXTRAPOLATORS, default=RICHARDSON)
    v.add_argument("--workers", type=int, default=1)

    m = sub.add_parser("mu", parents=[out], help="root of sqrt(x^2+1)/x = log(sqrt(x^2+1)+x)")
    m.add_argument("--tol", type=float, default=1e-12)

    b = sub.add_parser("bound-check", parents=[out], help="decay bound for band-limited functions")
    b.add_argument("--test-fn", choices=TEST_FUNCTIONS, default="cosine")
    b.add_argument("--sigma", type=float, default=1.0)
    b.add_argument("--tau", type=float, default=0.5)
    b.add_argument("--C", type=float, default=0.0)
    b.add_argument("--degrees", type=_degrees, default=list(range(4, 21)))

    s = sub.add_parser("scaling-check", parents=[out, fn], help="both sides of the dilation identity")
    s.add_argument("--degree", type=int, default=4)
    s.add_argument("--eta", type=float, default=2.0)
    s.add_argument("--a", type=float, default=1.0)
    return parser


def _spec(args) -> FunctionSpec:
    return FunctionSpec(args.alpha, args.beta, _VARIANTS[args.variant])


def _cmd_constant(args):
    p = PNorm.parse(args.p)
    if p.p == 1.0:
        if args.beta != 0.0 or args.variant != "full":
            raise DomainError("the p = 1 closed form needs beta = 0")
        const = bernstein_l1(args.alpha)
    elif p.p == 2.0:
        if args.variant != "full" and args.beta != 0.0:
            raise DomainError("the p = 2 closed form covers the full complex power only")
        const = bernstein_l2(args.alpha, args.beta)
    elif p.is_inf:
        if args.alpha != 0.0:
            raise DomainError("the p = inf closed form needs alpha = 0")
        const = bernstein_linf_log(args.beta, args.sigma, _VARIANTS[args.variant])
    else:
        raise DomainError(f"no closed form for p = {args.p}")
    return const.to_dict(), True


def _cmd_error(args):
    problem = ApproxProblem(_spec(args), args.degree, PNorm.parse(args.p), (-args.a, args.a),
                            origin_floor=args.grid_floor)
    res = best_approximation(problem)
    return res.to_dict(), bool(res.converged)


def _cmd_converge(args):
    report = scaled_error_table(_spec(args), PNorm.parse(args.p), args.degrees, args.grid_floor,
                                workers=max(1, args.workers), method=args.method)
    ok = report.converged and (report.limit is None or report.limit.stable)
    return report, ok


def _cmd_mu(args):
    x = mu_constant(args.tol)
    return {"mu": x, "residual": abs(mu_equation(x))}, True


def _cmd_bound(args):
    report = decay_bound_check(args.test_fn, args.sigma, args.tau, args.C, args.degrees)
    return report.to_dict(), report.passed


def _cmd_scaling(args):
    rep = scaling_identity_check(_spec(args), PNorm.parse(args.p), args.degree, args.eta, args.a,
                                 args.grid_floor)
    return rep.to_dict(), True


_COMMANDS = {
    "constant": _cmd_constant,
    "error": _cmd_error,
    "converge": _cmd_converge,
    "mu": _cmd_mu,
    "bound-check": _cmd_bound,
    "scaling-check": _cmd_scaling,
}


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items())}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=False, default=str)


def _flatten(prefix: str, obj, out: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, obj))


def _render(fmt: str, command: str, params: dict, result, ok: bool) -> str:
    body = result.to_dict() if hasattr(result, "to_dict") else result
    if fmt == "json":
        return _dumps({"command": command, "parameters": params, "result": body, "ok": ok}) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        for k, v in params.items():
            buf.write(f"# {k}={v}\n")
        if hasattr(result, "to_csv"):
            buf.write(result.to_csv())
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            rows = []
            _flatten("", body, rows)
            for k, v in rows:
                w.writerow([k, repr(v) if isinstance(v, float) else v])
        return buf.getvalue()
    lines = [f"# {k} = {v}" for k, v in params.items()]
    rows = []
    _flatten("", body, rows)
    lines += [f"{k}: {v!r}" if isinstance(v, float) else f"{k}: {v}" for k, v in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(code: int, exc: BaseException, fmt: str, params: Optional[dict], path: Optional[str]) -> int:
    message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
    print(f"bernlab: error: {message}", file=sys.stderr)
    if fmt == "json" and params is not None:
        err = {"type": type(exc).__name__, "message": message, "exit_code": code}
        _emit(_dumps({"command": params.get("command"), "parameters": params, "error": err}) + "\n", path)
    return code


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"bernlab: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:  # --help, --version
        return int(exc.code or 0)

    params = _echo(args)
    try:
        if hasattr(args, "p"):
            params["p"] = PNorm.parse(args.p).label()
        result, ok = _COMMANDS[args.command](args)
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, exc, args.format, params, args.output)
    except (NumericalError, ArithmeticError) as exc:
        return _fail(EXIT_NUMERICAL, exc, args.format, params, args.output)
    except BernlabError as exc:
        return _fail(EXIT_NUMERICAL, exc, args.format, params, args.output)
    _emit(_render(args.format, args.command, params, result, ok), args.output)
    return EXIT_OK if ok else EXIT_NUMERICAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
