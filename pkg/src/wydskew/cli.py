"""Command line front end: ``wydskew {eval,certify,skewinfo,bridge,selftest}``.

Exit codes: 0 success or certified, 1 self-test failure, 2 bad input,
3 certification rejected, 4 domain error (rank, regularity, evaluation).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import acceptance
from .errors import DomainError, NumericalError, ValidationError
from .generators import construct_f, g_auxiliary, sharp, star, tilde
from .loewner import certify_operator_convex, certify_operator_monotone
from .matrix_core import DensityMatrix, HermitianMatrix
from .serialization import (
    RunConfig,
    dumps_csv,
    dumps_json,
    generator_family,
    parse_generator,
    parse_matrix_file,
)
from .skew import (
    MorozovaCencov,
    bridge_skew_info,
    c_hat,
    c_value,
    masi_modular,
    masi_spectral,
    unbounded_masi,
    unbounded_wyd_commutator,
    wyd_commutator,
)

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_INPUT = 2
EXIT_REJECTED = 3
EXIT_DOMAIN = 4

EVAL_QUANTITIES = ("h", "sharp", "star", "tilde", "f", "raw-f", "g", "c", "chat")
CERTIFY_TARGETS = ("h", "sharp", "f", "raw-f", "g")
SKEW_METHODS = ("spectral", "modular", "commutator", "unbounded", "bridge", "all")

NAMED_FUNCTIONS = {
    "identity": lambda t: t,
    "square": np.square,
    "cube": lambda t: t ** 3,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "log": np.log,
    "inverse": lambda t: 1.0 / t,
}


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _floats(values) -> list:
    out = []
    for chunk in values or []:
        for piece in str(chunk).split(","):
            piece = piece.strip()
            if piece:
                try:
                    out.append(float(piece))
                except ValueError:
                    raise ValidationError(f"--t value {piece!r} is not a number") from None
    return out


# -- eval -----------------------------------------------------------------------

def _eval_callables(h, what: list, y: float) -> dict:
    table = {}
    for w in what:
        if w == "h":
            table[w] = h
        elif w == "sharp":
            table[w] = sharp(h)
        elif w == "star":
            table[w] = star(h)
        elif w == "tilde":
            table[w] = tilde(h)
        elif w == "f":
            table[w] = construct_f(h)
        elif w == "raw-f":
            table[w] = construct_f(h, normalize=False)
        elif w == "g":
            table[w] = g_auxiliary(h)
        elif w in ("c", "chat"):
            mc = MorozovaCencov.from_generator(h)
            kernel = c_value if w == "c" else c_hat
            table[w] = (lambda k: lambda t: k(mc, t, y))(kernel)
        else:
            raise ValidationError(f"unknown quantity {w!r}; choose from {', '.join(EVAL_QUANTITIES)}")
    return table


def cmd_eval(args) -> int:
    cfg = RunConfig(generator=args.generator, format=args.format)
    h = parse_generator(cfg.generator)
    what = [w.strip() for w in args.what.split(",") if w.strip()]
    ts = _floats(args.t)
    if not ts:
        raise ValidationError("eval needs at least one --t value")
    funcs = _eval_callables(h, what, args.y)
    rows, failed = [], False
    for t in ts:
        row = {"t": t}
        errors = []
        for w, fn in funcs.items():
            try:
                v = float(fn(t))
                if not np.isfinite(v):
                    raise DomainError(f"{w} is not finite at t={t!r}")
                row[w] = v
            except (DomainError, NumericalError, ZeroDivisionError) as exc:
                row[w] = "error"
                errors.append(f"{w}: {exc}")
        if errors:
            failed = True
            row["error"] = "; ".join(errors)
        rows.append(row)
    columns = ["t"] + what + (["error"] if failed else [])
    if cfg.format == "csv":
        text = dumps_csv(rows, columns)
    else:
        text = dumps_json({"generator": h.name, "columns": columns, "rows": rows})
    _emit(text, args.out)
    return EXIT_DOMAIN if failed else EXIT_OK


# -- certify --------------------------------------------------------------------

def _certify_function(args) -> Callable:
    if args.function:
        name = args.function.lower()
        if name.startswith("pow:"):
            try:
                p = float(name[4:])
            except ValueError:
                raise ValidationError(f"bad power in {args.function!r}") from None
            fn = lambda t: np.power(t, p)  # noqa: E731
        elif name in NAMED_FUNCTIONS:
            fn = NAMED_FUNCTIONS[name]
        else:
            raise ValidationError(f"unknown function {args.function!r}; choose from "
                                  f"{', '.join(sorted(NAMED_FUNCTIONS))} or pow:<p>")
        return _Named(fn, name)
    if not args.generator:
        raise ValidationError("certify needs --generator or --function")
    h = parse_generator(args.generator)
    target = {"constructed-f": "f", "h-sharp": "sharp"}.get(args.target, args.target)
    if target == "h":
        return h
    if target == "sharp":
        return sharp(h)
    if target == "f":
        return construct_f(h)
    if target == "raw-f":
        return construct_f(h, normalize=False)
    if target == "g":
        return g_auxiliary(h)
    raise ValidationError(f"unknown target {args.target!r}; choose from {', '.join(CERTIFY_TARGETS)}")


class _Named:
    def __init__(self, fn, name):
        self.fn, self.name = fn, name

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))


def cmd_certify(args) -> int:
    RunConfig(generator=args.generator, seed=args.seed, format=args.format)
    fn = _certify_function(args)
    if args.property == "convex":
        report = certify_operator_convex(fn, dim=args.order, trials=args.trials, seed=args.seed)
    else:
        report = certify_operator_monotone(fn, max_order=args.order, trials=args.trials, seed=args.seed,
                                           decreasing=args.property == "decreasing")
    data = report.to_dict()
    if args.format == "csv":
        rows = [{"key": k, "value": dumps_json(v).strip() if isinstance(v, dict) else v}
                for k, v in sorted(data.items())]
        text = dumps_csv(rows, ["key", "value"])
    else:
        text = dumps_json(data)
    _emit(text, args.out)
    return EXIT_OK if report.certified else EXIT_REJECTED


# -- skew information -------------------------------------------------------------

def _load_pair(state_path, observable_path):
    rho = parse_matrix_file(state_path)
    A = parse_matrix_file(observable_path)
    if not isinstance(rho, DensityMatrix):
        raise ValidationError(f"{state_path} is not a state file")
    if not isinstance(A, HermitianMatrix):
        raise ValidationError(f"{observable_path} is not an observable file")
    if rho.dim != A.dim:
        raise ValidationError(f"dimension mismatch: state {rho.dim}, observable {A.dim}")
    return rho.matrix, A.matrix


def _commutator_report(rho, A, p):
    if 0.0 < p < 1.0:
        return wyd_commutator(rho, A, p)
    return unbounded_wyd_commutator(rho, A, p)


def _run_method(method, args, rho, A):
    if method == "bridge":
        alpha = args.alpha
        if alpha is None and args.generator:
            fam, par = generator_family(args.generator)
            alpha = par if fam == "bridge" else None
        if alpha is None:
            raise ValidationError("bridge method needs --alpha or a bridge:<alpha> generator")
        return bridge_skew_info(alpha, rho, A)
    if method == "commutator":
        p = args.p
        if p is None and args.generator:
            fam, par = generator_family(args.generator)
            p = par if fam == "power" else None
        if p is None:
            raise ValidationError("commutator method needs --p or a power:<p> generator")
        return _commutator_report(rho, A, p)
    if not args.generator:
        raise ValidationError(f"method {method} needs --generator")
    h = parse_generator(args.generator)
    if method == "spectral":
        return masi_spectral(MorozovaCencov.from_generator(h), rho, A)
    if method == "modular":
        return masi_modular(h, rho, A)
    if method == "unbounded":
        return unbounded_masi(h, rho, A)
    raise ValidationError(f"unknown method {method!r}; choose from {', '.join(SKEW_METHODS)}")


def _applicable_methods(args) -> list:
    h = parse_generator(args.generator)
    fam, par = generator_family(args.generator)
    regular = construct_f(h).regular
    methods = ["spectral", "modular"] if regular else ["unbounded"]
    if fam == "power" or args.p is not None:
        methods.append("commutator")
    if fam == "bridge" or args.alpha is not None:
        methods.append("bridge")
    return methods


def _report_rows(reports):
    return [{"method": r.method, "value": r.value, "generator": r.generator, "metric": r.metric}
            for r in reports]


def _skew_output(reports, args, extra=None) -> str:
    if args.format == "csv":
        return dumps_csv(_report_rows(reports), ["method", "value", "generator", "metric"])
    if len(reports) == 1 and not extra:
        return dumps_json(reports[0].to_dict())
    payload = {"reports": [r.to_dict() for r in reports]}
    payload.update(extra or {})
    return dumps_json(payload)


def cmd_skewinfo(args) -> int:
    RunConfig(generator=args.generator, method=args.method, format=args.format)
    if args.method not in SKEW_METHODS:
        raise ValidationError(f"unknown method {args.method!r}")
    rho, A = _load_pair(args.state, args.observable)
    if args.method != "all":
        _emit(_skew_output([_run_method(args.method, args, rho, A)], args), args.out)
        return EXIT_OK
    if not args.generator:
        raise ValidationError("method all needs --generator")
    reports = [_run_method(m, args, rho, A) for m in _applicable_methods(args)]
    deviations = {}
    for i, a in enumerate(reports):
        for b in reports[i + 1:]:
            deviations[f"{a.method}-{b.method}"] = abs(a.value - b.value)
    extra = {"pairwise_deviations": deviations,
             "max_pairwise_deviation": max(deviations.values(), default=0.0)}
    _emit(_skew_output(reports, args, extra), args.out)
    return EXIT_OK


def cmd_bridge(args) -> int:
    if args.alpha is None:
        raise ValidationError("bridge needs --alpha")
    rho, A = _load_pair(args.state, args.observable)
    _emit(_skew_output([bridge_skew_info(args.alpha, rho, A)], args), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    overrides = {}
    for item in args.tamper or []:
        key, _, value = item.partition("=")
        try:
            overrides[key] = float(value)
        except ValueError:
            raise ValidationError(f"--tamper expects NAME=VALUE, got {item!r}") from None
    unknown = sorted(set(overrides) - set(acceptance.TOLERANCES))
    if unknown:
        raise ValidationError(f"unknown tolerance {unknown[0]!r}")
    summary = acceptance.run_selftest(overrides=overrides, stream=sys.stdout)
    return EXIT_OK if summary.passed else EXIT_SELFTEST_FAILED


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wydskew", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("eval", help="tabulate h, its transforms, f, g and the kernels")
    p.add_argument("--generator", required=True, help="power:<p> | bridge:<alpha> | exotic | wy | sld | harmonic")
    p.add_argument("--what", default="f", help=f"comma separated, from {', '.join(EVAL_QUANTITIES)}")
    p.add_argument("--t", action="append", help="grid points (comma separated, repeatable)")
    p.add_argument("--y", type=float, default=1.0, help="second argument for c and chat")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("certify", help="sample Loewner matrices or midpoint gaps")
    p.add_argument("--generator")
    p.add_argument("--target", default="f", help=f"{', '.join(CERTIFY_TARGETS)} (also constructed-f)")
    p.add_argument("--function", help=f"{', '.join(sorted(NAMED_FUNCTIONS))} or pow:<p>")
    p.add_argument("--property", choices=("monotone", "decreasing", "convex"), default="monotone")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_certify)

    for name, func in (("skewinfo", cmd_skewinfo), ("bridge", cmd_bridge)):
        p = sub.add_parser(name, help="skew information of a state/observable pair")
        p.add_argument("state")
        p.add_argument("observable")
        if name == "skewinfo":
            p.add_argument("--generator")
            p.add_argument("--method", default="spectral", help=", ".join(SKEW_METHODS))
            p.add_argument("--p", type=float)
        p.add_argument("--alpha", type=float)
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--tamper", action="append", metavar="NAME=VALUE", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, NumericalError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
