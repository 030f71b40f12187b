"""The twisted two-torus side: finite Fourier sums in U, V with VU = e^(2 pi i theta) UV,
derivations, the normalized trace, symbols with algebra-valued coefficients,
their residue, and the theta = 0 bridge back to the ordinary torus.

Two scalar backends coexist: exact cyclotomic coefficients for rational
twists (decidable equality, exact trace identities) and floating complex
coefficients for continuity experiments at arbitrary twists.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import terms as T
from .calculus import residue
from .cyclotomic import CyclotomicScalar, cyclotomic_phase
from .errors import DomainError, InsufficientExpansionError, ValidationError
from .scalars import ComplexRational, PiGradedScalar, sphere_monomial_integral, torus_volume
from .symbols import ClassicalSymbol, HomogeneousComponent


class Theta:
    """The twist angle, either an exact rational or a floating value."""

    __slots__ = ("exact", "approximate")

    def __init__(self, exact: Fraction | None = None, approximate: float | None = None):
        if (exact is None) == (approximate is None):
            raise ValidationError("exactly one of exact/approximate must be set")
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "approximate", approximate)

    def __setattr__(self, name, value):
        raise AttributeError("Theta is immutable")

    @classmethod
    def from_rational(cls, value) -> "Theta":
        return cls(exact=Fraction(value))

    @classmethod
    def from_float(cls, value: float) -> "Theta":
        return cls(approximate=float(value))

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def as_float(self) -> float:
        return float(self.exact) if self.is_exact else self.approximate

    def __eq__(self, other) -> bool:
        if not isinstance(other, Theta):
            return NotImplemented
        return self.exact == other.exact and self.approximate == other.approximate

    def __hash__(self):
        return hash((self.exact, self.approximate))

    def __repr__(self) -> str:
        if self.is_exact:
            return f"Theta({self.exact})"
        return f"Theta(~{self.approximate})"


THETA_ZERO = Theta.from_rational(0)


def _system_for(theta: Theta):
    if theta.is_exact:
        return T.CyclotomicSystem(theta.exact.numerator, theta.exact.denominator)
    return T.FloatSystem(theta.approximate)


def _phase(theta: Theta, t: int):
    if theta.is_exact:
        return cyclotomic_phase(theta.exact.numerator, theta.exact.denominator, t)
    return cmath.exp(2j * cmath.pi * theta.approximate * t)


def _coerce_scalar(theta: Theta, value):
    if theta.is_exact:
        if isinstance(value, CyclotomicScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return CyclotomicScalar.from_rational(value)
        if isinstance(value, ComplexRational):
            return CyclotomicScalar.from_complex_rational(value)
        raise TypeError(
            f"exact backend cannot hold a {type(value).__name__} coefficient"
        )
    if isinstance(value, CyclotomicScalar):
        return value.to_complex()
    if isinstance(value, ComplexRational):
        return value.to_complex()
    return complex(value)


class NCPolynomial:
    """A finite Fourier sum sum a_mn U^m V^n in the twisted torus algebra."""

    __slots__ = ("theta", "coeffs")

    def __init__(self, theta: Theta, coeffs: dict | None = None):
        system = _system_for(theta)
        clean = {}
        for mode, value in (coeffs or {}).items():
            m, n = mode
            s = _coerce_scalar(theta, value)
            if not system.is_zero(s):
                clean[(int(m), int(n))] = s
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("NCPolynomial is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, theta: Theta) -> "NCPolynomial":
        return cls(theta, {})

    @classmethod
    def one(cls, theta: Theta) -> "NCPolynomial":
        return cls(theta, {(0, 0): 1})

    @classmethod
    def monomial(cls, theta: Theta, m: int, n: int, coeff=1) -> "NCPolynomial":
        return cls(theta, {(m, n): coeff})

    # -- structure -----------------------------------------------------------

    def _system(self):
        return _system_for(self.theta)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _check_theta(self, other: "NCPolynomial") -> None:
        if self.theta != other.theta:
            raise ValidationError(
                f"twist mismatch: {self.theta!r} vs {other.theta!r}"
            )

    def coefficient(self, m: int, n: int):
        return self.coeffs.get((m, n), self._system().zero)

    # -- algebra --------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        self._check_theta(other)
        system = self._system()
        out = dict(self.coeffs)
        for mode, s in other.coeffs.items():
            cur = out.get(mode)
            new = s if cur is None else system.add(cur, s)
            if system.is_zero(new):
                out.pop(mode, None)
            else:
                out[mode] = new
        return NCPolynomial(self.theta, out)

    def __sub__(self, other):
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        system = self._system()
        return NCPolynomial(
            self.theta, {mode: system.neg(s) for mode, s in self.coeffs.items()}
        )

    def __mul__(self, other):
        if isinstance(other, NCPolynomial):
            self._check_theta(other)
            system = self._system()
            out: dict = {}
            for (a, b), s1 in self.coeffs.items():
                for (c, d), s2 in other.coeffs.items():
                    s = system.mul(s1, s2)
                    t = b * c
                    if t:
                        ph = _phase(self.theta, t)
                        if not (self.theta.is_exact and ph.is_rational() and ph.coeffs[0] == 1):
                            s = system.mul(s, ph)
                    mode = (a + c, b + d)
                    cur = out.get(mode)
                    new = s if cur is None else system.add(cur, s)
                    if system.is_zero(new):
                        out.pop(mode, None)
                    else:
                        out[mode] = new
            return NCPolynomial(self.theta, out)
        # scalar multiple
        try:
            s = _coerce_scalar(self.theta, other)
        except TypeError:
            return NotImplemented
        system = self._system()
        return NCPolynomial(
            self.theta, {mode: system.mul(s, v) for mode, v in self.coeffs.items()}
        )

    def __rmul__(self, other):
        if isinstance(other, NCPolynomial):
            return NotImplemented
        return self * other

    def adjoint(self) -> "NCPolynomial":
        """The *-involution: (U^m V^n)* = e^(2 pi i theta m n) U^-m V^-n."""
        system = self._system()
        out = {}
        for (m, n), s in self.coeffs.items():
            conj = s.conjugate()
            t = m * n
            if t:
                conj = system.mul(conj, _phase(self.theta, t))
            out[(-m, -n)] = conj
        return NCPolynomial(self.theta, out)

    def trace(self):
        """The normalized trace: the (0, 0) Fourier coefficient."""
        return self.coeffs.get((0, 0), self._system().zero)

    def delta(self, j: int) -> "NCPolynomial":
        """The basic derivation delta_j; scales a_mn by m (j=1) or n (j=2)."""
        if j not in (1, 2):
            raise ValidationError(f"derivation index must be 1 or 2, got {j}")
        system = self._system()
        out = {}
        for (m, n), s in self.coeffs.items():
            w = m if j == 1 else n
            if w:
                out[(m, n)] = system.times_int(s, w)
        return NCPolynomial(self.theta, out)

    def approximate(self) -> "NCPolynomial":
        """The same element with floating coefficients."""
        if not self.theta.is_exact:
            return self
        theta = Theta.from_float(self.theta.as_float())
        return NCPolynomial(
            theta, {mode: s.to_complex() for mode, s in self.coeffs.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self.theta == other.theta and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self) -> str:
        inner = " + ".join(
            f"({s})*U^{m}V^{n}" for (m, n), s in sorted(self.coeffs.items())
        )
        return f"<ncpoly theta={self.theta!r}: {inner or '0'}>"


def nc_u(theta: Theta) -> NCPolynomial:
    return NCPolynomial.monomial(theta, 1, 0)


def nc_v(theta: Theta) -> NCPolynomial:
    return NCPolynomial.monomial(theta, 0, 1)


class NCSymbol:
    """A classical symbol whose coefficients live in the twisted algebra.

    Terms are stored at the granularity of single U^m V^n modes, mirroring
    the Fourier modes of the commutative calculus; the canonical form is
    the same maximal-|xi|-power extraction per (mode, parity) class.
    Coefficients always multiply from the left.
    """

    __slots__ = ("theta", "order", "trusted_floor", "_components")

    def __init__(
        self,
        theta: Theta,
        order: int,
        components: dict | None = None,
        trusted_floor: int | None = None,
    ):
        system = _system_for(theta)
        comps: dict[int, dict] = {}
        for deg, block in (components or {}).items():
            raw: dict = {}
            items = block.items() if isinstance(block, dict) else (
                (key, None) for key in block
            )
            for entry, value in items:
                if value is None:
                    coeff, mode, alpha, npow = entry
                else:
                    mode, alpha, npow = entry
                    coeff = value
                key = (tuple(mode), tuple(alpha), int(npow))
                if len(key[0]) != 2 or len(key[1]) != 2:
                    raise ValidationError("twisted symbols live in dimension 2")
                if any(a < 0 for a in key[1]):
                    raise ValidationError(f"xi exponents must be nonnegative: {alpha}")
                s = _coerce_scalar(theta, coeff)
                T.bag_add(system, raw, key, s)
            ct = T.canonical_terms(system, 2, deg, raw)
            if not ct:
                continue
            if deg > order:
                raise ValidationError(
                    f"component degree {deg} exceeds symbol order {order}"
                )
            if trusted_floor is not None and deg < trusted_floor:
                raise ValidationError(
                    f"component degree {deg} lies below the trusted floor "
                    f"{trusted_floor}"
                )
            comps[deg] = ct
        if trusted_floor is not None and trusted_floor > order:
            raise ValidationError(
                f"trusted floor {trusted_floor} exceeds order {order}"
            )
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "trusted_floor", trusted_floor)
        object.__setattr__(self, "_components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("NCSymbol is immutable")

    @classmethod
    def _from_canonical(
        cls, theta: Theta, order: int, comps: dict, trusted_floor: int | None
    ) -> "NCSymbol":
        self = object.__new__(cls)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "trusted_floor", trusted_floor)
        object.__setattr__(self, "_components", comps)
        return self

    @property
    def components(self) -> dict[int, dict]:
        return {d: dict(t) for d, t in self._components.items()}

    def degrees(self) -> list[int]:
        return sorted(self._components, reverse=True)

    def component_raw(self, degree: int) -> dict:
        if self.trusted_floor is not None and degree < self.trusted_floor:
            raise InsufficientExpansionError(
                f"degree {degree} lies below the trusted floor {self.trusted_floor}"
            )
        return dict(self._components.get(degree, {}))

    def blocks(self) -> dict[int, list[tuple[tuple[int, int], int, NCPolynomial]]]:
        """Components grouped as (alpha, npow) -> algebra coefficient."""
        out = {}
        for deg, terms in self._components.items():
            grouped: dict = {}
            for (mode, alpha, npow), s in terms.items():
                grouped.setdefault((alpha, npow), {})[mode] = s
            out[deg] = [
                (alpha, npow, NCPolynomial(self.theta, modes))
                for (alpha, npow), modes in sorted(grouped.items())
            ]
        return out

    def is_zero(self) -> bool:
        return not self._components

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCSymbol):
            return NotImplemented
        return (
            self.theta == other.theta
            and self.trusted_floor == other.trusted_floor
            and self._components == other._components
        )

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"<ncsymbol theta={self.theta!r} order={self.order} "
            f"floor={self.trusted_floor} degrees={self.degrees()}>"
        )


def _nc_standard_floor(sigma: NCSymbol, tau: NCSymbol) -> int | None:
    parts = []
    if sigma.trusted_floor is not None:
        parts.append(sigma.trusted_floor + tau.order)
    if tau.trusted_floor is not None:
        parts.append(sigma.order + tau.trusted_floor)
    return max(parts) if parts else None


def _nc_compose_impl(
    sigma: NCSymbol, tau: NCSymbol, floor: int | None, *, degrees=None
) -> NCSymbol:
    if sigma.theta != tau.theta:
        raise ValidationError("twist mismatch in composition")
    system = _system_for(sigma.theta)
    if floor is None and degrees is None:
        sigma_poly = all(
            T.terms_polynomial(t) for t in sigma._components.values()
        )
        tau_const = all(
            T.terms_x_independent(t) for t in tau._components.values()
        )
        if not (sigma_poly or tau_const):
            raise ValidationError(
                "composition of two complete symbols does not terminate here; "
                "assign a finite trusted floor to one factor"
            )
    raw = T.compose_components(
        system, 2, sigma._components, tau._components, floor, degrees=degrees
    )
    return NCSymbol._from_canonical(
        sigma.theta, sigma.order + tau.order, raw, floor
    )


def nc_compose(sigma: NCSymbol, tau: NCSymbol) -> NCSymbol:
    """Composition with D_x^gamma replaced by delta^gamma; sigma acts from the left."""
    return _nc_compose_impl(sigma, tau, _nc_standard_floor(sigma, tau))


def nc_residue(sigma: NCSymbol) -> PiGradedScalar:
    """Circle integral of the trace of the degree-(-2) coefficient.

    Exact (a cyclotomic multiple of pi) under the exact backend; floating
    under the approximate one.
    """
    if sigma.trusted_floor is not None and sigma.trusted_floor > -2:
        raise InsufficientExpansionError(
            f"residue needs the expansion down to degree -2, but the floor is "
            f"{sigma.trusted_floor}"
        )
    system = _system_for(sigma.theta)
    total = system.zero
    for (mode, alpha, _p), s in sigma._components.get(-2, {}).items():
        if mode != (0, 0):
            continue  # the trace kills every other U^m V^n word
        integral = sphere_monomial_integral(alpha, 2)
        if integral.is_zero():
            continue
        if integral.pi_exponent != 1:
            raise ArithmeticError("unexpected pi grade in a circle integral")
        coeff = integral.coeff
        total = system.add(total, system.times_fraction(s, coeff.re))
    if system.is_zero(total):
        return PiGradedScalar(0)
    return PiGradedScalar(total, 1)


def _nc_residue_of_composition(sigma: NCSymbol, tau: NCSymbol) -> PiGradedScalar:
    floor = _nc_standard_floor(sigma, tau)
    if floor is not None and floor > -2:
        raise InsufficientExpansionError(
            f"composition is only trusted down to degree {floor}, above -2"
        )
    return nc_residue(_nc_compose_impl(sigma, tau, floor, degrees={-2}))


def nc_trace_defect(sigma: NCSymbol, tau: NCSymbol) -> PiGradedScalar:
    """Residue of the composition commutator; exactly zero for rational twists."""
    return _nc_residue_of_composition(sigma, tau) - _nc_residue_of_composition(
        tau, sigma
    )


def nc_apply(sigma: NCSymbol, a: NCPolynomial) -> NCPolynomial:
    """Apply the operator of sigma to an algebra element by lattice evaluation.

    Each Fourier mode (m, n) of ``a`` is scaled on the left by the symbol
    evaluated at xi = (m, n); the (0, 0) mode is cut off because homogeneous
    components are singular at the origin.  Output uses the floating backend.
    """
    if sigma.theta != a.theta:
        raise ValidationError("twist mismatch between symbol and argument")
    theta = Theta.from_float(sigma.theta.as_float())
    out = NCPolynomial.zero(theta)
    for (m, n), coeff in a.coeffs.items():
        if (m, n) == (0, 0):
            continue
        norm_sq = m * m + n * n
        values: dict = {}
        for (mode, alpha, p), s in _all_terms(sigma):
            radial = norm_sq ** (p // 2) if p % 2 == 0 else math.sqrt(norm_sq) ** p
            v = (m ** alpha[0]) * (n ** alpha[1]) * radial
            if v == 0:
                continue
            sc = s.to_complex() if hasattr(s, "to_complex") else complex(s)
            values[mode] = values.get(mode, 0j) + sc * v
        sym_val = NCPolynomial(theta, values)
        arg = NCPolynomial(
            theta,
            {(m, n): coeff.to_complex() if hasattr(coeff, "to_complex") else complex(coeff)},
        )
        out = out + sym_val * arg
    return out


def _all_terms(sigma: NCSymbol):
    for terms in sigma._components.values():
        yield from terms.items()


def to_euclidean(sigma: NCSymbol) -> ClassicalSymbol:
    """Identify U, V with e^(ix), e^(iy) at twist zero.

    Intertwines the two composition formulas and carries the twisted
    residue to the commutative one up to the torus volume (2 pi)^2.
    """
    if not (sigma.theta.is_exact and sigma.theta.exact == 0):
        raise DomainError("the Euclidean identification requires theta exactly 0")
    comps = {}
    for deg, terms in sigma._components.items():
        raw = {
            (mode, alpha, npow): s.to_complex_rational()
            for (mode, alpha, npow), s in terms.items()
        }
        comp = HomogeneousComponent.from_raw(2, deg, raw)
        if not comp.is_zero():
            comps[deg] = comp
    return ClassicalSymbol(2, sigma.order, comps, sigma.trusted_floor)


@dataclass(frozen=True)
class SemiclassicalReport:
    lhs: PiGradedScalar
    rhs: PiGradedScalar
    equal: bool


def semiclassical_check(sigma: NCSymbol) -> SemiclassicalReport:
    """Compare the Euclidean residue with (2 pi)^2 times the twisted residue.

    The factor reconciles the unnormalized torus integral with the
    normalized trace; at twist zero the two sides agree exactly.
    """
    lhs = residue(to_euclidean(sigma))
    rhs = torus_volume(2) * nc_residue(sigma)
    return SemiclassicalReport(lhs=lhs, rhs=rhs, equal=lhs == rhs)
