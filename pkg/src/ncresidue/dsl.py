"""Textual and JSON representations of symbols, plus a seeded generator.

Grammar (whitespace-insensitive; ``INT`` admits a leading minus)::

    document := header block*
    header   := "dim" INT "order" INT "floor" INT ["theta" RAT]
    block    := "deg" INT "{" expr "}"
    expr     := ["-"] term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := RAT | "i" | "e(" INT ("," INT)* ")" | "U" ["^" INT]
              | "V" ["^" INT] | "xi" INT ["^" INT] | "r" "^" INT
              | "(" expr ")"

Documents with a ``theta`` header describe twisted symbols and must use the
U/V generators; documents without it describe commutative symbols and must
use ``e(...)`` modes.  Root-of-unity coefficients of twisted symbols are
rendered grammar-purely as commutator words ``V * U^t * V^-1 * U^-t``,
which evaluate back to the same phase.

Formatting a symbol whose expansion is complete (``trusted_floor=None``)
materializes the floor as the lowest stored degree; the text format cannot
state completeness.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import NamedTuple

from . import terms as T
from .cyclotomic import CyclotomicScalar, decompose_root
from .errors import ParseError, ValidationError
from .nctorus import NCPolynomial, NCSymbol, Theta
from .scalars import ComplexRational
from .symbols import ClassicalSymbol, HomogeneousComponent


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"\s+|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(){},])")


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        chunk = m.group(0)
        if m.lastgroup == "num":
            tokens.append(Token("NUMBER", chunk, line, col))
        elif m.lastgroup == "name":
            tokens.append(Token("NAME", chunk, line, col))
        elif m.lastgroup == "op":
            tokens.append(Token(chunk, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    return tokens


_XI_RE = re.compile(r"^xi(\d+)$")


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.saw_uv = False
        self.saw_mode = False

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def expect_name(self, name: str) -> Token:
        tok = self.next()
        if tok.kind != "NAME" or tok.text != name:
            raise ParseError(f"expected {name!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def at_name(self, name: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "NAME" and tok.text == name

    # -- numeric atoms -------------------------------------------------------

    def parse_int(self) -> int:
        sign = 1
        tok = self.peek()
        if tok is not None and tok.kind == "-":
            self.next()
            sign = -1
        num = self.expect("NUMBER")
        return sign * int(num.text)

    def parse_rational(self) -> Fraction:
        sign = 1
        tok = self.peek()
        if tok is not None and tok.kind == "-":
            self.next()
            sign = -1
        num = self.expect("NUMBER")
        value = Fraction(int(num.text))
        tok = self.peek()
        if tok is not None and tok.kind == "/":
            self.next()
            den = self.expect("NUMBER")
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.line, den.col)
            value = Fraction(int(num.text), int(den.text))
        return sign * value

    # -- document ------------------------------------------------------------

    def parse_document(self):
        self.expect_name("dim")
        dim = self.parse_int()
        if dim < 2:
            raise ValidationError(f"dimension must be at least 2, got {dim}")
        self.expect_name("order")
        order = self.parse_int()
        self.expect_name("floor")
        floor = self.parse_int()
        theta = None
        if self.at_name("theta"):
            self.next()
            theta = Theta.from_rational(self.parse_rational())
            if dim != 2:
                raise ValidationError("twisted symbols require dim 2")
        system = _system_and_check(theta)
        blocks: dict[int, dict] = {}
        while self.peek() is not None:
            tok = self.peek()
            if not (tok.kind == "NAME" and tok.text == "deg"):
                raise ParseError(f"expected 'deg', found {tok.text!r}", tok.line, tok.col)
            self.next()
            deg_tok = self.peek()
            deg = self.parse_int()
            self.expect("{")
            value = self.parse_expr(dim, theta, system)
            self.expect("}")
            for (mode, alpha, npow), _s in value.items():
                if sum(alpha) + npow != deg:
                    raise ValidationError(
                        f"term of degree {sum(alpha) + npow} in a block declared "
                        f"deg {deg} (line {deg_tok.line}, column {deg_tok.col})"
                    )
            bucket = blocks.setdefault(deg, {})
            for key, s in value.items():
                T.bag_add(system, bucket, key, s)
        if theta is not None and not self.saw_uv:
            raise ValidationError("a theta header requires U/V generators")
        if theta is None and self.saw_uv:
            raise ValidationError("U/V generators require a theta header")
        for deg in blocks:
            if deg > order:
                raise ValidationError(f"block degree {deg} exceeds order {order}")
            if deg < floor:
                raise ValidationError(f"block degree {deg} lies below floor {floor}")
        if theta is None:
            comps = {
                deg: HomogeneousComponent.from_raw(dim, deg, raw)
                for deg, raw in blocks.items()
            }
            comps = {d: c for d, c in comps.items() if not c.is_zero()}
            return ClassicalSymbol(dim, order, comps, floor)
        return NCSymbol(theta, order, blocks, floor)

    # -- expressions ----------------------------------------------------------

    def parse_expr(self, dim: int, theta, system) -> dict:
        tok = self.peek()
        negate = False
        if tok is not None and tok.kind == "-":
            self.next()
            negate = True
        value = self.parse_term(dim, theta, system)
        if negate:
            value = {k: system.neg(s) for k, s in value.items()}
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in ("+", "-"):
                break
            self.next()
            rhs = self.parse_term(dim, theta, system)
            if tok.kind == "-":
                rhs = {k: system.neg(s) for k, s in rhs.items()}
            value = T.add_terms(system, value, rhs)
        return value

    def parse_term(self, dim: int, theta, system) -> dict:
        value = self.parse_factor(dim, theta, system)
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "*":
                break
            self.next()
            rhs = self.parse_factor(dim, theta, system)
            value = T.mul_terms(system, value, rhs)
        return value

    def parse_factor(self, dim: int, theta, system) -> dict:
        tok = self.next()
        unit_key = ((0,) * dim, (0,) * dim, 0)
        if tok.kind == "NUMBER":
            value = Fraction(int(tok.text))
            nxt = self.peek()
            if nxt is not None and nxt.kind == "/":
                self.next()
                den = self.expect("NUMBER")
                if int(den.text) == 0:
                    raise ParseError("zero denominator", den.line, den.col)
                value = Fraction(int(tok.text), int(den.text))
            return {unit_key: _embed(system, theta, ComplexRational(value))}
        if tok.kind == "(":
            value = self.parse_expr(dim, theta, system)
            self.expect(")")
            return value
        if tok.kind == "NAME":
            if tok.text == "i":
                return {unit_key: _embed(system, theta, ComplexRational(0, 1))}
            if tok.text == "e":
                self.expect("(")
                entries = [self.parse_int()]
                while self.peek() is not None and self.peek().kind == ",":
                    self.next()
                    entries.append(self.parse_int())
                self.expect(")")
                if len(entries) != dim:
                    raise ValidationError(
                        f"mode e({', '.join(map(str, entries))}) has length "
                        f"{len(entries)}, expected {dim} "
                        f"(line {tok.line}, column {tok.col})"
                    )
                if theta is not None:
                    raise ValidationError(
                        "e(...) modes cannot appear in a twisted document "
                        f"(line {tok.line}, column {tok.col})"
                    )
                self.saw_mode = True
                key = (tuple(entries), (0,) * dim, 0)
                return {key: _embed(system, theta, ComplexRational(1))}
            if tok.text in ("U", "V"):
                self.saw_uv = True
                exponent = 1
                if self.peek() is not None and self.peek().kind == "^":
                    self.next()
                    exponent = self.parse_int()
                mode = (exponent, 0) if tok.text == "U" else (0, exponent)
                if theta is None:
                    # recorded; the document-level check reports the error
                    mode = mode + (0,) * (dim - 2) if dim > 2 else mode
                key = (mode, (0,) * dim, 0)
                return {key: _embed(system, theta, ComplexRational(1))}
            m = _XI_RE.match(tok.text)
            if m:
                idx = int(m.group(1))
                if not 1 <= idx <= dim:
                    raise ValidationError(
                        f"xi{idx} is out of range for dim {dim} "
                        f"(line {tok.line}, column {tok.col})"
                    )
                exponent = 1
                if self.peek() is not None and self.peek().kind == "^":
                    self.next()
                    exponent = self.parse_int()
                if exponent < 0:
                    raise ValidationError(
                        f"xi exponents must be nonnegative, got {exponent} "
                        f"(line {tok.line}, column {tok.col})"
                    )
                alpha = tuple(exponent if i == idx - 1 else 0 for i in range(dim))
                key = ((0,) * dim, alpha, 0)
                return {key: _embed(system, theta, ComplexRational(1))}
            if tok.text == "r":
                self.expect("^")
                exponent = self.parse_int()
                key = ((0,) * dim, (0,) * dim, exponent)
                return {key: _embed(system, theta, ComplexRational(1))}
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def _system_and_check(theta):
    if theta is None:
        return T.RATIONAL_SYSTEM
    if theta.is_exact:
        return T.CyclotomicSystem(theta.exact.numerator, theta.exact.denominator)
    return T.FloatSystem(theta.approximate)


def _embed(system, theta, value: ComplexRational):
    if theta is None:
        return value
    if theta.is_exact:
        return CyclotomicScalar.from_complex_rational(value)
    return value.to_complex()


def parse_symbol(text: str):
    """Parse a symbol document; returns a ClassicalSymbol or NCSymbol."""
    parser = _Parser(text)
    return parser.parse_document()


def parse_nc_element(text: str, theta: Theta) -> NCPolynomial:
    """Parse a bare algebra element (rationals, i, U, V) at the given twist."""
    parser = _Parser(text)
    system = _system_and_check(theta)
    value = parser.parse_expr(2, theta, system)
    if parser.peek() is not None:
        tok = parser.peek()
        raise ParseError(f"unexpected trailing token {tok.text!r}", tok.line, tok.col)
    coeffs: dict = {}
    for (mode, alpha, npow), s in value.items():
        if any(alpha) or npow:
            raise ValidationError("algebra elements cannot contain xi or r factors")
        cur = coeffs.get(mode)
        coeffs[mode] = s if cur is None else system.add(cur, s)
    return NCPolynomial(theta, coeffs)


# -- formatting ---------------------------------------------------------------


def _fraction_text(value: Fraction) -> str:
    return str(value)


def _coeff_pieces(coeff: ComplexRational) -> tuple[str, list[str]]:
    """Sign and leading factor strings for an exact coefficient."""
    if coeff.im == 0:
        sign = "-" if coeff.re < 0 else "+"
        mag = abs(coeff.re)
        return sign, [] if mag == 1 else [_fraction_text(mag)]
    if coeff.re == 0:
        sign = "-" if coeff.im < 0 else "+"
        mag = abs(coeff.im)
        factors = [] if mag == 1 else [_fraction_text(mag)]
        return sign, factors + ["i"]
    re_txt = _fraction_text(coeff.re)
    im_mag = abs(coeff.im)
    im_txt = "i" if im_mag == 1 else f"{_fraction_text(im_mag)} * i"
    op = "+" if coeff.im > 0 else "-"
    return "+", [f"({re_txt} {op} {im_txt})"]


def _classical_term_text(mode, alpha, npow, coeff) -> tuple[str, str]:
    sign, factors = _coeff_pieces(coeff)
    if any(mode):
        factors.append("e(" + ",".join(map(str, mode)) + ")")
    for i, a in enumerate(alpha):
        if a:
            factors.append(f"xi{i + 1}" + (f"^{a}" if a != 1 else ""))
    if npow:
        factors.append(f"r^{npow}")
    if not factors:
        factors = ["1"]
    return sign, " * ".join(factors)


def _join_terms(pieces: list[tuple[str, str]]) -> str:
    out = []
    for idx, (sign, text) in enumerate(pieces):
        if idx == 0:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


def _materialized_floor(sym) -> int:
    if sym.trusted_floor is not None:
        return sym.trusted_floor
    degs = sym.degrees()
    return min(degs) if degs else sym.order


def _nc_unit_pieces(
    theta: Theta, scalar: CyclotomicScalar
) -> list[tuple[ComplexRational, int, int]]:
    """Split a cyclotomic coefficient into (Q(i) part, phase exponent, j) pieces.

    Each piece denotes coeff * zeta_q^b with q the theta denominator; the
    trailing index only fixes a deterministic ordering.
    """
    q = theta.exact.denominator
    pieces = []
    for j, c in enumerate(scalar.coeffs):
        if c == 0:
            continue
        a, b = decompose_root(scalar.order, j, q)
        unit = [ComplexRational(1), ComplexRational(0, 1), ComplexRational(-1), ComplexRational(0, -1)][a % 4]
        pieces.append((unit * c, b, j))
    return pieces


def _phase_word_factors(theta: Theta, b: int) -> list[str]:
    # zeta_q^b as the group commutator V U^t V^-1 U^-t with p*t == b (mod q)
    q = theta.exact.denominator
    p = theta.exact.numerator % q
    t = (b * pow(p, -1, q)) % q
    return ["V", "U" if t == 1 else f"U^{t}", "V^-1", f"U^-{t}"]


def _nc_term_texts(theta: Theta, mode, alpha, npow, scalar) -> list[tuple[str, str]]:
    out = []
    for coeff, b, _j in _nc_unit_pieces(theta, scalar):
        sign, factors = _coeff_pieces(coeff)
        if b:
            factors.extend(_phase_word_factors(theta, b))
        m, n = mode
        if m:
            factors.append("U" + (f"^{m}" if m != 1 else ""))
        if n:
            factors.append("V" + (f"^{n}" if n != 1 else ""))
        if m == 0 and n == 0 and not b:
            factors.extend(["U^0", "V^0"])
        for i, a in enumerate(alpha):
            if a:
                factors.append(f"xi{i + 1}" + (f"^{a}" if a != 1 else ""))
        if npow:
            factors.append(f"r^{npow}")
        out.append((sign, " * ".join(factors)))
    return out


def format_symbol(sym) -> str:
    """Deterministic canonical rendering; parse(format(s)) == s on DSL symbols."""
    if isinstance(sym, ClassicalSymbol):
        floor = _materialized_floor(sym)
        lines = [f"dim {sym.n} order {sym.order} floor {floor}"]
        for deg in sym.degrees():
            pieces = [
                _classical_term_text(mode, alpha, npow, coeff)
                for (mode, alpha, npow), coeff in sorted(
                    sym.components[deg].raw_terms().items()
                )
            ]
            lines.append(f"deg {deg} {{ {_join_terms(pieces)} }}")
        return "\n".join(lines)
    if isinstance(sym, NCSymbol):
        if not sym.theta.is_exact:
            raise ValidationError(
                "the text format requires an exact theta; use the JSON form"
            )
        floor = _materialized_floor(sym)
        theta = sym.theta.exact
        lines = [
            f"dim 2 order {sym.order} floor {floor} theta "
            f"{theta.numerator}/{theta.denominator}"
        ]
        for deg in sym.degrees():
            pieces = []
            for (mode, alpha, npow), scalar in sorted(sym.components[deg].items()):
                pieces.extend(_nc_term_texts(sym.theta, mode, alpha, npow, scalar))
            lines.append(f"deg {deg} {{ {_join_terms(pieces)} }}")
        return "\n".join(lines)
    raise TypeError(f"cannot format {type(sym).__name__}")


# -- JSON mirror ---------------------------------------------------------------


def _coeff_to_json(coeff: ComplexRational) -> dict:
    return {"re": str(coeff.re), "im": str(coeff.im)}


def _coeff_from_json(data, exact: bool):
    if not isinstance(data, dict) or "re" not in data or "im" not in data:
        raise ValidationError("coeff must be an object with re and im fields")
    re_v, im_v = data["re"], data["im"]
    if exact:
        if isinstance(re_v, float) or isinstance(im_v, float):
            raise ValidationError("exact symbols require string or integer coefficients")
        return ComplexRational(Fraction(str(re_v)), Fraction(str(im_v)))
    return complex(float(Fraction(str(re_v))), float(Fraction(str(im_v))))


def symbol_to_json(sym) -> dict:
    """The JSON mirror of the text format, one object per degree block."""
    if isinstance(sym, ClassicalSymbol):
        blocks = []
        for deg in sym.degrees():
            terms = []
            for (mode, alpha, npow), coeff in sorted(
                sym.components[deg].raw_terms().items()
            ):
                entry = {"coeff": _coeff_to_json(coeff), "alpha": list(alpha), "npow": npow}
                if any(mode):
                    entry["mode"] = list(mode)
                terms.append(entry)
            blocks.append({"deg": deg, "terms": terms})
        return {
            "dim": sym.n,
            "order": sym.order,
            "floor": _materialized_floor(sym),
            "blocks": blocks,
        }
    if isinstance(sym, NCSymbol):
        theta = sym.theta
        out = {
            "dim": 2,
            "order": sym.order,
            "floor": _materialized_floor(sym),
            "blocks": [],
        }
        if theta.is_exact:
            out["theta"] = f"{theta.exact.numerator}/{theta.exact.denominator}"
        else:
            out["theta"] = theta.approximate
        for deg in sym.degrees():
            terms = []
            for (mode, alpha, npow), scalar in sorted(sym.components[deg].items()):
                if theta.is_exact:
                    for coeff, b, _j in _nc_unit_pieces(theta, scalar):
                        entry = {
                            "coeff": _coeff_to_json(coeff),
                            "nc": list(mode),
                            "alpha": list(alpha),
                            "npow": npow,
                        }
                        if b:
                            entry["phase"] = [theta.exact.denominator, b]
                        terms.append(entry)
                else:
                    terms.append(
                        {
                            "coeff": {"re": scalar.real, "im": scalar.imag},
                            "nc": list(mode),
                            "alpha": list(alpha),
                            "npow": npow,
                        }
                    )
            out["blocks"].append({"deg": deg, "terms": terms})
        return out
    raise TypeError(f"cannot serialize {type(sym).__name__}")


def symbol_from_json(data: dict):
    """Inverse of symbol_to_json; validates the same rules as the text parser."""
    if not isinstance(data, dict):
        raise ValidationError("symbol JSON must be an object")
    try:
        dim = int(data["dim"])
        order = int(data["order"])
        floor = int(data["floor"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad or missing header field: {exc}") from None
    if dim < 2:
        raise ValidationError(f"dimension must be at least 2, got {dim}")
    theta = None
    if "theta" in data and data["theta"] is not None:
        raw = data["theta"]
        if isinstance(raw, str):
            theta = Theta.from_rational(Fraction(raw))
        elif isinstance(raw, int):
            theta = Theta.from_rational(Fraction(raw))
        else:
            theta = Theta.from_float(float(raw))
        if dim != 2:
            raise ValidationError("twisted symbols require dim 2")
    system = _system_and_check(theta)
    blocks: dict[int, dict] = {}
    for block in data.get("blocks", []):
        deg = int(block["deg"])
        bucket = blocks.setdefault(deg, {})
        for term in block.get("terms", []):
            alpha = tuple(int(a) for a in term.get("alpha", (0,) * dim))
            if len(alpha) != dim or any(a < 0 for a in alpha):
                raise ValidationError(f"bad xi multi-index {list(alpha)}")
            npow = int(term.get("npow", 0))
            if sum(alpha) + npow != deg:
                raise ValidationError(
                    f"term of degree {sum(alpha) + npow} in a block declared deg {deg}"
                )
            has_mode = "mode" in term
            has_nc = "nc" in term
            if theta is None:
                if has_nc:
                    raise ValidationError("nc terms require a theta field")
                mode = tuple(int(k) for k in term.get("mode", (0,) * dim))
                if len(mode) != dim:
                    raise ValidationError(f"bad Fourier mode {term.get('mode')}")
                coeff = _coeff_from_json(term["coeff"], exact=True)
                T.bag_add(system, bucket, (mode, alpha, npow), coeff)
            else:
                if has_mode:
                    raise ValidationError("e-modes cannot appear in a twisted symbol")
                mode = tuple(int(k) for k in term.get("nc", (0, 0)))
                if len(mode) != 2:
                    raise ValidationError(f"bad U/V exponents {term.get('nc')}")
                coeff = _coeff_from_json(term["coeff"], exact=theta.is_exact)
                if theta.is_exact:
                    scalar = CyclotomicScalar.from_complex_rational(coeff)
                    if "phase" in term:
                        q, b = term["phase"]
                        scalar = scalar * CyclotomicScalar.root_of_unity(int(q), int(b))
                else:
                    scalar = coeff
                T.bag_add(system, bucket, (mode, alpha, npow), scalar)
    for deg in blocks:
        if deg > order:
            raise ValidationError(f"block degree {deg} exceeds order {order}")
        if deg < floor:
            raise ValidationError(f"block degree {deg} lies below floor {floor}")
    if theta is None:
        comps = {
            deg: HomogeneousComponent.from_raw(dim, deg, raw)
            for deg, raw in blocks.items()
        }
        comps = {d: c for d, c in comps.items() if not c.is_zero()}
        return ClassicalSymbol(dim, order, comps, floor)
    return NCSymbol(theta, order, blocks, floor)


# -- random generation ----------------------------------------------------------


def random_symbol(
    seed: int,
    *,
    dim: int,
    order: int,
    depth: int,
    max_mode: int,
    max_alpha: int,
    theta=None,
):
    """A deterministic pseudo-random symbol with small rational coefficients.

    Components run from ``order`` down through ``depth`` further degrees, so
    the trusted floor is ``order - depth``.  The draw sequence does not
    depend on ``theta``, which keeps the integer data fixed when the same
    seed is instantiated at several twists.
    """
    if dim < 2:
        raise ValidationError(f"dim must be at least 2, got {dim}")
    if depth < 0 or max_mode < 0 or max_alpha < 0:
        raise ValidationError("depth, max_mode and max_alpha must be nonnegative")
    if theta is not None:
        if not isinstance(theta, Theta):
            theta = (
                Theta.from_rational(theta)
                if isinstance(theta, (int, Fraction))
                else Theta.from_float(theta)
            )
        if dim != 2:
            raise ValidationError("twisted symbols require dim 2")
    rng = random.Random(seed)
    floor = order - depth
    blocks: dict[int, list] = {}
    for deg in range(order, floor - 1, -1):
        if deg != order and rng.random() < 0.2:
            continue
        terms = []
        for _ in range(rng.randint(1, 2)):
            mode = tuple(rng.randint(-max_mode, max_mode) for _ in range(dim))
            total = rng.randint(0, max_alpha)
            alpha = [0] * dim
            for _ in range(total):
                alpha[rng.randrange(dim)] += 1
            npow = deg - total
            num = rng.choice([-3, -2, -1, 1, 2, 3])
            den = rng.randint(1, 3)
            if rng.random() < 0.25:
                coeff = ComplexRational(0, Fraction(num, den))
            else:
                coeff = ComplexRational(Fraction(num, den))
            terms.append((coeff, mode, tuple(alpha), npow))
        blocks[deg] = terms
    if theta is None:
        comps = {}
        for deg, terms in blocks.items():
            comp = HomogeneousComponent(dim, deg, terms)
            if not comp.is_zero():
                comps[deg] = comp
        return ClassicalSymbol(dim, order, comps, floor)
    return NCSymbol(theta, order, blocks, floor)


def format_nc_element(poly: NCPolynomial) -> str:
    """Human-readable rendering of an algebra element."""
    if not poly.coeffs:
        return "0"
    parts = []
    for (m, n), s in sorted(poly.coeffs.items()):
        word = ""
        if m:
            word += "U" + (f"^{m}" if m != 1 else "")
        if n:
            word += ("*" if word else "") + ("V" + (f"^{n}" if n != 1 else ""))
        if not word:
            word = "1"
        if hasattr(s, "to_complex"):
            s = s.to_complex() if not isinstance(s, CyclotomicScalar) else s
        parts.append(f"({s}) * {word}")
    return " + ".join(parts)
