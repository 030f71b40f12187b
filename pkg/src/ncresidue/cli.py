"""Command-line interface exposing the calculus.

Exit codes: 0 success, 1 parse error, 2 validation/domain error,
3 insufficient expansion depth, 4 property-check failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .calculus import (
    commutator_exp,
    commutator_xi,
    compose,
    residue,
    trace_defect,
    uniqueness_decompose,
)
from .cyclotomic import CyclotomicScalar
from .dsl import (
    _classical_term_text,
    _join_terms,
    format_nc_element,
    format_symbol,
    parse_nc_element,
    parse_symbol,
    random_symbol,
    symbol_from_json,
    symbol_to_json,
)
from .errors import (
    InsufficientExpansionError,
    ParseError,
    ValidationError,
)
from .nctorus import (
    NCSymbol,
    nc_apply,
    nc_compose,
    nc_residue,
    nc_trace_defect,
    semiclassical_check,
)
from .scalars import ComplexRational, PiGradedScalar
from .symbols import ClassicalSymbol

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_INSUFFICIENT = 3
EXIT_PROPERTY = 4


def _read_document(path: str, stdin_used: list[bool]):
    if path == "-":
        if stdin_used[0]:
            raise ValidationError("standard input can supply only one document")
        stdin_used[0] = True
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    if text.lstrip().startswith("{"):
        return symbol_from_json(json.loads(text))
    return parse_symbol(text)


def _expect_classical(sym) -> ClassicalSymbol:
    if not isinstance(sym, ClassicalSymbol):
        raise ValidationError(
            "this command expects a commutative symbol; use the nc- variant"
        )
    return sym


def _expect_nc(sym) -> NCSymbol:
    if not isinstance(sym, NCSymbol):
        raise ValidationError(
            "this command expects a twisted symbol (theta header required)"
        )
    return sym


def _pi_value_json(value: PiGradedScalar) -> dict:
    out: dict = {"pi_exponent": str(value.pi_exponent)}
    c = value.coeff
    if isinstance(c, ComplexRational):
        out["re"] = str(c.re)
        out["im"] = str(c.im)
    elif isinstance(c, CyclotomicScalar):
        out["order"] = c.order
        out["coeffs"] = [str(x) for x in c.coeffs]
    else:
        out["re"] = complex(c).real
        out["im"] = complex(c).imag
    return out


def _emit_value(value: PiGradedScalar, as_json: bool) -> None:
    if as_json:
        print(json.dumps({"value": _pi_value_json(value)}))
    else:
        print(str(value))


def _emit_symbol(sym, as_json: bool) -> None:
    if as_json:
        print(json.dumps(symbol_to_json(sym)))
    else:
        print(format_symbol(sym))


def _trig_poly_text(poly) -> str:
    if poly.is_zero():
        return "0"
    pieces = [
        _classical_term_text(mode, (0,) * poly.n, 0, coeff)
        for mode, coeff in sorted(poly.coeffs.items())
    ]
    return _join_terms(pieces)


def _component_text(comp) -> str:
    if comp.is_zero():
        return "0"
    pieces = [
        _classical_term_text(mode, alpha, npow, coeff)
        for (mode, alpha, npow), coeff in sorted(comp.raw_terms().items())
    ]
    return _join_terms(pieces)


def _cmd_residue(args) -> int:
    sym = _expect_classical(_read_document(args.input, args._stdin_used))
    _emit_value(residue(sym), args.json)
    return EXIT_OK


def _cmd_compose(args) -> int:
    left = _read_document(args.left, args._stdin_used)
    right = _read_document(args.right, args._stdin_used)
    _emit_symbol(compose(_expect_classical(left), _expect_classical(right)), args.json)
    return EXIT_OK


def _cmd_nc_residue(args) -> int:
    sym = _expect_nc(_read_document(args.input, args._stdin_used))
    _emit_value(nc_residue(sym), args.json)
    return EXIT_OK


def _cmd_nc_compose(args) -> int:
    left = _read_document(args.left, args._stdin_used)
    right = _read_document(args.right, args._stdin_used)
    _emit_symbol(nc_compose(_expect_nc(left), _expect_nc(right)), args.json)
    return EXIT_OK


def _random_pair(rng: random.Random, dim: int):
    m1 = rng.randint(-1, 2)
    m2 = rng.randint(-1, 2)
    s1 = random_symbol(
        rng.getrandbits(32),
        dim=dim,
        order=m1,
        depth=m1 + dim + m2,
        max_mode=3,
        max_alpha=3,
    )
    s2 = random_symbol(
        rng.getrandbits(32),
        dim=dim,
        order=m2,
        depth=m2 + dim + m1,
        max_mode=3,
        max_alpha=3,
    )
    return s1, s2


def _cmd_trace_check(args) -> int:
    rng = random.Random(args.seed)
    failures = 0
    for trial in range(args.trials):
        s1, s2 = _random_pair(rng, args.dim)
        defect = trace_defect(s1, s2)
        if not defect.is_zero():
            failures += 1
            print(f"trial {trial}: nonzero defect {defect}", file=sys.stderr)
    result = {
        "trials": args.trials,
        "dim": args.dim,
        "seed": args.seed,
        "failures": failures,
    }
    if args.json:
        print(json.dumps(result))
    else:
        status = "ok" if failures == 0 else "FAILED"
        print(
            f"trace-check: {args.trials} trials, dim {args.dim}, "
            f"{failures} failures [{status}]"
        )
    return EXIT_OK if failures == 0 else EXIT_PROPERTY


def _random_nc_pair(rng: random.Random, theta: Fraction):
    m1 = rng.randint(-1, 1)
    m2 = rng.randint(-1, 1)
    s1 = random_symbol(
        rng.getrandbits(32),
        dim=2,
        order=m1,
        depth=m1 + 2 + m2,
        max_mode=2,
        max_alpha=2,
        theta=theta,
    )
    s2 = random_symbol(
        rng.getrandbits(32),
        dim=2,
        order=m2,
        depth=m2 + 2 + m1,
        max_mode=2,
        max_alpha=2,
        theta=theta,
    )
    return s1, s2


def _cmd_nc_trace_check(args) -> int:
    theta = Fraction(args.theta)
    rng = random.Random(args.seed)
    failures = 0
    for trial in range(args.trials):
        s1, s2 = _random_nc_pair(rng, theta)
        defect = nc_trace_defect(s1, s2)
        if not defect.is_zero():
            failures += 1
            print(f"trial {trial}: nonzero defect {defect}", file=sys.stderr)
    result = {
        "trials": args.trials,
        "theta": str(theta),
        "seed": args.seed,
        "failures": failures,
    }
    if args.json:
        print(json.dumps(result))
    else:
        status = "ok" if failures == 0 else "FAILED"
        print(
            f"nc-trace-check: {args.trials} trials, theta {theta}, "
            f"{failures} failures [{status}]"
        )
    return EXIT_OK if failures == 0 else EXIT_PROPERTY


def _cmd_decompose(args) -> int:
    sym = _expect_classical(_read_document(args.input, args._stdin_used))
    cert = uniqueness_decompose(sym)
    direct = residue(sym)
    implied = cert.implied_residue()
    if args.json:
        payload = {
            "sphere_mean": {
                ",".join(map(str, mode)): {"re": str(c.re), "im": str(c.im)}
                for mode, c in sorted(cert.sphere_mean.coeffs.items())
            },
            "antiderivative_degrees": sorted(cert.antiderivative_families),
            "remainder_terms": len(cert.remainder.raw_terms()),
            "residue": _pi_value_json(direct),
            "implied_residue": _pi_value_json(implied),
            "consistent": direct == implied,
        }
        print(json.dumps(payload))
    else:
        print(f"sphere mean r(x) = {_trig_poly_text(cert.sphere_mean)}")
        for deg in sorted(cert.antiderivative_families, reverse=True):
            fam = cert.antiderivative_families[deg]
            print(f"degree {deg}: divergence of {len(fam)} antiderivatives")
        print(f"remainder = {_component_text(cert.remainder)}")
        print(f"residue = {direct}")
        print(f"implied residue = {implied}")
        print(f"consistent: {direct == implied}")
    return EXIT_OK


def _cmd_commutator(args) -> int:
    sym = _expect_classical(_read_document(args.input, args._stdin_used))
    if args.with_kind == "xi":
        result = commutator_xi(sym, args.dir)
    else:
        depth = args.depth
        if depth is None:
            if sym.trusted_floor is None:
                raise ValidationError(
                    "--depth is required for a symbol with a complete expansion"
                )
            top = max(sym.components) if sym.components else sym.order
            depth = max(0, top - sym.trusted_floor + 1)
        result = commutator_exp(sym, args.dir, depth)
    _emit_symbol(result, args.json)
    return EXIT_OK


def _cmd_apply(args) -> int:
    sym = _expect_nc(_read_document(args.input, args._stdin_used))
    element = parse_nc_element(args.element, sym.theta)
    out = nc_apply(sym, element)
    if args.json:
        payload = [
            {"nc": [m, n], "re": s.real, "im": s.imag}
            for (m, n), s in sorted(out.coeffs.items())
        ]
        print(json.dumps({"result": payload}))
    else:
        print(format_nc_element(out))
    return EXIT_OK


def _cmd_semiclassical(args) -> int:
    sym = _expect_nc(_read_document(args.input, args._stdin_used))
    report = semiclassical_check(sym)
    if args.json:
        print(
            json.dumps(
                {
                    "lhs": _pi_value_json(report.lhs),
                    "rhs": _pi_value_json(report.rhs),
                    "equal": report.equal,
                }
            )
        )
    else:
        print(f"euclidean residue = {report.lhs}")
        print(f"(2*pi)^2 * twisted residue = {report.rhs}")
        print(f"equal: {report.equal}")
    return EXIT_OK if report.equal else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncres",
        description="Exact residue calculus for symbols on ordinary and quantum tori.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="structured output")
        return p

    p = add("residue", _cmd_residue, help="residue of a commutative symbol")
    p.add_argument("input", help="symbol file, or - for stdin")

    p = add("compose", _cmd_compose, help="compose two commutative symbols")
    p.add_argument("left")
    p.add_argument("right")

    p = add("nc-residue", _cmd_nc_residue, help="residue of a twisted symbol")
    p.add_argument("input")

    p = add("nc-compose", _cmd_nc_compose, help="compose two twisted symbols")
    p.add_argument("left")
    p.add_argument("right")

    p = add("trace-check", _cmd_trace_check, help="randomized trace-property check")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=2)

    p = add(
        "nc-trace-check",
        _cmd_nc_trace_check,
        help="randomized twisted trace-property check",
    )
    p.add_argument("--theta", required=True, help="rational twist p/q")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    p = add("decompose", _cmd_decompose, help="uniqueness-proof decomposition")
    p.add_argument("input")

    p = add("commutator", _cmd_commutator, help="commutator with xi_l or e^(i x_l)")
    p.add_argument("--with", dest="with_kind", choices=["xi", "exp"], required=True)
    p.add_argument("--dir", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("input")

    p = add("apply", _cmd_apply, help="apply a twisted symbol to an algebra element")
    p.add_argument("--element", required=True, help="e.g. 'U*V + 2'")
    p.add_argument("input")

    p = add(
        "semiclassical-check",
        _cmd_semiclassical,
        help="compare euclidean and twisted residues at theta 0",
    )
    p.add_argument("input")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._stdin_used = [False]
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InsufficientExpansionError as exc:
        print(f"insufficient expansion: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
