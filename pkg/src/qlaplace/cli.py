"""Command-line front end.

Exit codes: 0 success or PASS, 1 verification FAIL, 2 input or domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .classify import classify_classical, classify_q
from .equations import HypEquation, cjson, newton_diagram, riemann_scheme
from .errors import QError
from .matrixform import (
    MatrixCanonicalType,
    MatrixEquation,
    canonical_matrices,
    classify_matrix,
    conjugate_to_lower,
    eliminate,
    fundamental_solution,
    matrix_residual,
    verify_matrix_case,
)
from .qcore import EvalOptions, QBase, SeriesSpec, phi_rs, qpoch_infinite, theta
from .qfunctions import BesselKind, IdentityKind, airy_ai_q, bessel_j, e_nu, ramanujan_a_q, verify_identity

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

FUNCTIONS = ("phi", "theta", "qpoch", "besselJ1", "besselJ2", "besselJ3", "e1", "e2", "e3", "airy", "ramanujan")


@dataclass(frozen=True)
class CliConfig:
    rel_tol: float = 1e-12
    max_terms: int = 10000
    zero_tol: float = 0.0
    output: str = "json"
    seed: int = 0

    def eval_options(self) -> EvalOptions:
        return EvalOptions(rel_tol=self.rel_tol, max_terms=self.max_terms)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def parse_list(text: str) -> list:
    if text.strip() == "":
        return []
    return [parse_complex(t) for t in text.split(",")]


def _real(z: complex):
    return z.real if z.imag == 0 else z


class UsageError(Exception):
    pass


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_number_pair(v):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_fmt(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_pretty(v, indent) if isinstance(v, (dict, list)) and not _is_number_pair(v)
                         else f"{pad}- {_fmt(v)}" for v in obj)
    return pad + _fmt(obj)


def _is_number_pair(v) -> bool:
    return isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v)


def _fmt(v) -> str:
    if _is_number_pair(v):
        re, im = v
        return f"{re:.12g}" if im == 0 else f"{re:.12g}{im:+.12g}j"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _emit(cfg: CliConfig, payload: dict, text: Optional[str] = None) -> None:
    if cfg.output == "pretty":
        print(text if text is not None else _pretty(payload))
    else:
        print(json.dumps(payload, sort_keys=False))


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args, cfg: CliConfig) -> int:
    opts = cfg.eval_options()
    base = QBase(args.q)
    f = args.function
    if f == "phi":
        res = phi_rs(SeriesSpec(tuple(parse_list(args.upper)), tuple(parse_list(args.lower)), base, args.z), opts)
    elif f == "theta":
        res = theta(base, args.x, opts)
    elif f == "qpoch":
        res = qpoch_infinite(args.a, base, opts)
    elif f.startswith("besselJ"):
        res = bessel_j(BesselKind(f[-2:].upper()), args.t, args.x, base, opts)
    elif f in ("e1", "e2", "e3"):
        res = e_nu(int(f[1]), args.t, args.x, base, opts)
    elif f == "airy":
        res = airy_ai_q(args.x, base, opts)
    else:
        res = ramanujan_a_q(args.x, base, opts)
    _emit(cfg, {"function": f, "value": cjson(res.value), "err_bound": res.err_bound,
                "terms_used": res.terms_used})
    return EXIT_OK


def cmd_classify(args, cfg: CliConfig) -> int:
    eq = HypEquation.from_json(_load(args.input))
    result = classify_q(eq, zero_tol=cfg.zero_tol)
    _emit(cfg, result.to_json())
    return EXIT_OK


def cmd_scheme(args, cfg: CliConfig) -> int:
    eq = HypEquation.from_json(_load(args.input))
    scheme = riemann_scheme(eq)
    diagram = newton_diagram(eq, cfg.zero_tol)
    payload = {"scheme": scheme.to_json(), "newton": diagram.to_json()}
    _emit(cfg, payload, scheme.render() + "\n\n" + diagram.render())
    return EXIT_OK


def cmd_classical(args, cfg: CliConfig) -> int:
    data = _load(args.input)
    try:
        a, b = data["a"], data["b"]
    except (KeyError, TypeError) as exc:
        raise UsageError("classical input needs keys 'a' and 'b' with three entries each") from exc
    if len(a) != 3 or len(b) != 3:
        raise UsageError("'a' and 'b' need three entries each")
    vals = [v if not isinstance(v, list) else complex(v[0], v[1]) for v in (*a, *b)]
    result = classify_classical(*vals, sign=int(data.get("sign", 1)))
    _emit(cfg, result.to_json())
    return EXIT_OK


def _identity_params(args) -> tuple:
    params = {}
    for key in ("q", "t", "a", "b", "c"):
        val = getattr(args, key)
        if val is not None:
            params[key] = _real(val)
    if args.count is not None:
        params["count"] = args.count
    params["seed"] = args.seed_value
    points = None
    if args.x is not None:
        xs = [_real(v) for v in parse_list(args.x)]
        if args.identity == "morita":
            qv = params.get("q", 0.3)
            points = [(qv, x) for x in xs]
        else:
            points = xs
    return params, points


def cmd_verify(args, cfg: CliConfig) -> int:
    params, points = _identity_params(args)
    report = verify_identity(IdentityKind(args.identity), params, points, variant=args.variant)
    _emit(cfg, report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def _matrix_params(args) -> dict:
    return {k: _real(getattr(args, k)) for k in ("a", "b", "c", "t") if getattr(args, k, None) is not None}


def cmd_matrix(args, cfg: CliConfig) -> int:
    zero_tol = cfg.zero_tol if cfg.zero_tol > 0 else 1e-12
    action = args.action
    if action in ("classify", "eliminate") or args.input:
        if not args.input:
            raise UsageError(f"matrix {action} needs --input")
        meq = MatrixEquation.from_json(_load(args.input))
    else:
        meq = None
    if action == "classify":
        _emit(cfg, classify_matrix(meq, zero_tol).to_json())
        return EXIT_OK
    if action == "eliminate":
        meq.check_excluded(zero_tol)
        lower, P = conjugate_to_lower(meq, zero_tol)
        elim = eliminate(lower, zero_tol)
        _emit(cfg, {"conjugation": [[cjson(v) for v in r] for r in P], **elim.to_json()})
        return EXIT_OK
    points = [_real(v) for v in parse_list(args.x)] if args.x else [0.15, 0.25, 0.45]
    if args.type:
        mtype = MatrixCanonicalType(args.type)
        params = _matrix_params(args)
        base = QBase(args.q) if meq is None else meq.base
    elif meq is not None:
        cls = classify_matrix(meq, zero_tol)
        mtype, params, base = cls.mtype, cls.params, meq.base
    else:
        raise UsageError(f"matrix {action} needs --type or --input")
    printed = args.variant == "printed"
    if action == "fundamental":
        canon = canonical_matrices(mtype, params, base)
        Y = fundamental_solution(mtype, params, base, printed=printed)
        rows = []
        for x in points:
            y = Y(x)
            rows.append({"x": cjson(x), "Y": [[cjson(v) for v in r] for r in y],
                         "residual": matrix_residual(canon, Y, x)})
        _emit(cfg, {"type": mtype.value, "variant": args.variant, "canonical": canon.to_json(), "values": rows})
        return EXIT_OK
    report = verify_matrix_case(mtype, params, base, points, printed=printed)
    _emit(cfg, report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "pretty"), default=argparse.SUPPRESS)
    common.add_argument("--rel-tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--max-terms", type=int, default=argparse.SUPPRESS)
    common.add_argument("--zero-tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="qlaplace", parents=[common],
                                     description="q-special functions and q-difference equations of hypergeometric type")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a function")
    p.add_argument("--function", required=True, choices=FUNCTIONS)
    p.add_argument("--q", type=parse_complex, default=0.5)
    p.add_argument("--upper", default="", help="comma separated upper parameters")
    p.add_argument("--lower", default="", help="comma separated lower parameters")
    p.add_argument("--z", type=parse_complex, default=0)
    p.add_argument("--x", type=parse_complex, default=0.5)
    p.add_argument("--a", type=parse_complex, default=0.5)
    p.add_argument("--t", type=parse_complex, default=0.7, help="order as t = q^nu")
    p.set_defaults(func=cmd_eval)

    for name, func, help_ in (("classify", cmd_classify, "classify an equation"),
                              ("scheme", cmd_scheme, "Riemann scheme and Newton diagram"),
                              ("classify-classical", cmd_classical, "classify a Laplace-type ODE")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--input", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="verify an identity")
    p.add_argument("--identity", required=True, choices=[k.value for k in IdentityKind])
    p.add_argument("--variant", choices=("printed", "corrected"), default="printed")
    p.add_argument("--q", type=parse_complex)
    p.add_argument("--x", help="comma separated sample points")
    for key in ("t", "a", "b", "c"):
        p.add_argument(f"--{key}", type=parse_complex)
    p.add_argument("--count", type=int, help="number of random equations for fuchs")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("matrix", parents=[common], help="2x2 matrix systems")
    p.add_argument("action", choices=("classify", "eliminate", "fundamental", "verify"))
    p.add_argument("--input")
    p.add_argument("--type", choices=[t.value for t in MatrixCanonicalType])
    p.add_argument("--variant", choices=("printed", "corrected"), default="printed")
    p.add_argument("--q", type=parse_complex, default=0.5)
    p.add_argument("--x", help="comma separated sample points")
    for key in ("t", "a", "b", "c"):
        p.add_argument(f"--{key}", type=parse_complex)
    p.set_defaults(func=cmd_matrix)
    return parser


def _config(args) -> CliConfig:
    d = CliConfig()
    return CliConfig(rel_tol=getattr(args, "rel_tol", d.rel_tol), max_terms=getattr(args, "max_terms", d.max_terms),
                     zero_tol=getattr(args, "zero_tol", d.zero_tol), output=getattr(args, "output", d.output),
                     seed=getattr(args, "seed", d.seed))


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        args.seed_value = cfg.seed
        cfg.eval_options()
        return args.func(args, cfg)
    except (QError, UsageError, ValueError, ZeroDivisionError, OverflowError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
