"""Homogeneous components and classical symbols on the n-torus.

The symbol class is deliberately structural: trigonometric-polynomial
dependence on x and xi^alpha |xi|^p dependence on xi.  It is closed under
every operation of the calculus (xi-derivatives, x-derivatives, products,
Euler antiderivatives) and admits exact sphere and torus integration, which
is what turns the residue identities into decidable statements.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

from . import terms as T
from .errors import (
    CriticalDegreeError,
    InsufficientExpansionError,
    ValidationError,
)
from .scalars import (
    ComplexRational,
    PiGradedScalar,
    sphere_monomial_integral,
    sphere_surface_measure,
)

_SYS = T.RATIONAL_SYSTEM


def _as_cr(value) -> ComplexRational:
    if isinstance(value, ComplexRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ComplexRational(value)
    raise TypeError(f"expected an exact scalar, got {type(value).__name__}")


class SymbolTerm(NamedTuple):
    """coeff * e^(i mode.x) * xi^alpha * |xi|^npow"""

    coeff: ComplexRational
    mode: tuple[int, ...]
    alpha: tuple[int, ...]
    npow: int

    @property
    def degree(self) -> int:
        return sum(self.alpha) + self.npow


class HomogeneousComponent:
    """A degree-d homogeneous function of (x, xi), kept in canonical form."""

    __slots__ = ("n", "degree", "_terms")

    def __init__(self, n: int, degree: int, terms: Iterable = ()):
        if n < 2:
            raise ValidationError(f"dimension must be at least 2, got {n}")
        raw: dict = {}
        for item in terms:
            coeff, mode, alpha, npow = item
            mode = tuple(mode)
            alpha = tuple(alpha)
            if len(mode) != n:
                raise ValidationError(f"Fourier mode {mode} has length != {n}")
            if any(a < 0 for a in alpha):
                raise ValidationError(f"xi exponents must be nonnegative: {alpha}")
            T.bag_add(_SYS, raw, (mode, alpha, int(npow)), _as_cr(coeff))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", T.canonical_terms(_SYS, n, degree, raw))

    def __setattr__(self, name, value):
        raise AttributeError("HomogeneousComponent is immutable")

    @classmethod
    def _from_canonical(cls, n: int, degree: int, canonical: dict) -> "HomogeneousComponent":
        self = object.__new__(cls)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", canonical)
        return self

    @classmethod
    def from_raw(cls, n: int, degree: int, raw: dict) -> "HomogeneousComponent":
        return cls._from_canonical(n, degree, T.canonical_terms(_SYS, n, degree, dict(raw)))

    def terms(self) -> tuple[SymbolTerm, ...]:
        return tuple(
            SymbolTerm(s, mode, alpha, npow)
            for (mode, alpha, npow), s in sorted(self._terms.items())
        )

    def raw_terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _check_compatible(self, other: "HomogeneousComponent") -> None:
        if self.n != other.n:
            raise ValidationError(f"dimension mismatch: {self.n} != {other.n}")

    def __add__(self, other):
        if not isinstance(other, HomogeneousComponent):
            return NotImplemented
        self._check_compatible(other)
        if self.degree != other.degree and self._terms and other._terms:
            raise ValidationError(
                f"cannot add components of degrees {self.degree} and {other.degree}"
            )
        deg = self.degree if self._terms or not other._terms else other.degree
        raw = T.add_terms(_SYS, self._terms, other._terms)
        return HomogeneousComponent._from_canonical(
            self.n, deg, T.canonical_terms(_SYS, self.n, deg, raw)
        )

    def __sub__(self, other):
        if not isinstance(other, HomogeneousComponent):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return HomogeneousComponent._from_canonical(
            self.n, self.degree, {k: -s for k, s in self._terms.items()}
        )

    def scale(self, c) -> "HomogeneousComponent":
        c = _as_cr(c)
        if c.is_zero():
            return HomogeneousComponent._from_canonical(self.n, self.degree, {})
        return HomogeneousComponent._from_canonical(
            self.n, self.degree, {k: c * s for k, s in self._terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, HomogeneousComponent):
            return NotImplemented
        self._check_compatible(other)
        deg = self.degree + other.degree
        raw = T.mul_terms(_SYS, self._terms, other._terms)
        return HomogeneousComponent._from_canonical(
            self.n, deg, T.canonical_terms(_SYS, self.n, deg, raw)
        )

    def partial_xi(self, direction: int) -> "HomogeneousComponent":
        """d/d(xi_direction); directions are 1-based."""
        axis = self._axis(direction)
        raw = T.partial_xi_terms(_SYS, self._terms, axis)
        deg = self.degree - 1
        return HomogeneousComponent._from_canonical(
            self.n, deg, T.canonical_terms(_SYS, self.n, deg, raw)
        )

    def deriv_x(self, direction: int) -> "HomogeneousComponent":
        """D_x = -i d/dx in the given 1-based direction."""
        axis = self._axis(direction)
        raw = T.mode_deriv_terms(_SYS, self._terms, axis)
        return HomogeneousComponent._from_canonical(
            self.n, self.degree, T.canonical_terms(_SYS, self.n, self.degree, raw)
        )

    def _axis(self, direction: int) -> int:
        if not 1 <= direction <= self.n:
            raise ValidationError(
                f"direction must lie in 1..{self.n}, got {direction}"
            )
        return direction - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousComponent):
            return NotImplemented
        return (
            self.n == other.n
            and (self.degree == other.degree or self.is_zero() and other.is_zero())
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items()) if self._terms else 0))

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{s}*e{list(mode)}*xi^{list(alpha)}*r^{p}"
            for (mode, alpha, p), s in sorted(self._terms.items())
        )
        return f"<component n={self.n} deg={self.degree}: {inner or '0'}>"


def canonicalize(component: HomogeneousComponent) -> HomogeneousComponent:
    """Rebuild the canonical form; idempotent by construction."""
    return HomogeneousComponent.from_raw(
        component.n, component.degree, component.raw_terms()
    )


def zero_component(n: int, degree: int) -> HomogeneousComponent:
    return HomogeneousComponent._from_canonical(n, degree, {})


class TrigPolynomial:
    """A finite Fourier sum on the n-torus with exact coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict | None = None):
        clean = {}
        for mode, c in (coeffs or {}).items():
            mode = tuple(mode)
            if len(mode) != n:
                raise ValidationError(f"Fourier mode {mode} has length != {n}")
            c = _as_cr(c)
            if not c.is_zero():
                clean[mode] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TrigPolynomial is immutable")

    def hat(self, mode) -> ComplexRational:
        return self.coeffs.get(tuple(mode), ComplexRational(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        if not isinstance(other, TrigPolynomial) or self.n != other.n:
            return NotImplemented
        out = dict(self.coeffs)
        for mode, c in other.coeffs.items():
            out[mode] = out.get(mode, ComplexRational(0)) + c
        return TrigPolynomial(self.n, out)

    def __neg__(self):
        return TrigPolynomial(self.n, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, TrigPolynomial) or self.n != other.n:
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "TrigPolynomial":
        c = _as_cr(c)
        return TrigPolynomial(self.n, {m: c * v for m, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, TrigPolynomial):
            return self.n == other.n and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, ComplexRational)):
            other = _as_cr(other)
            if other.is_zero():
                return self.is_zero()
            return self.coeffs == {(0,) * self.n: other}
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        inner = " + ".join(f"{c}*e{list(m)}" for m, c in sorted(self.coeffs.items()))
        return f"<trigpoly n={self.n}: {inner or '0'}>"


def euler_antiderivatives(component: HomogeneousComponent) -> list[HomogeneousComponent]:
    """Components h_l = xi_l * c / (n + d) with sum_l d(h_l)/d(xi_l) = c.

    Euler's identity makes the divergence of (xi * c) equal (n + d) c for a
    degree-d homogeneous c, so the construction degenerates exactly at
    d = -n, which is a hard error.
    """
    n, d = component.n, component.degree
    if d == -n:
        raise CriticalDegreeError(
            f"Euler antiderivatives degenerate at degree {-n} in dimension {n}"
        )
    factor = ComplexRational(Fraction(1, n + d))
    out = []
    for axis in range(n):
        raw = {}
        for (mode, alpha, p), s in component.raw_terms().items():
            key = (mode, T._bump(alpha, axis, 1), p)
            raw[key] = s * factor
        out.append(
            HomogeneousComponent._from_canonical(
                n, d + 1, T.canonical_terms(_SYS, n, d + 1, raw)
            )
        )
    return out


def sphere_average(component: HomogeneousComponent) -> TrigPolynomial:
    """Mean of a degree-(-n) component over the unit xi-sphere, per mode.

    On |xi| = 1 every |xi| power is 1 and the pi factors of the monomial
    integrals cancel against the surface measure, so the coefficients are
    complex rationals.
    """
    n = component.n
    if component.degree != -n:
        raise ValidationError(
            f"sphere average requires degree {-n}, got {component.degree}"
        )
    measure = sphere_surface_measure(n)
    sums: dict[tuple[int, ...], PiGradedScalar] = {}
    for (mode, alpha, _p), s in component.raw_terms().items():
        integral = sphere_monomial_integral(alpha, n)
        if integral.is_zero():
            continue
        contrib = integral * s
        sums[mode] = sums[mode] + contrib if mode in sums else contrib
    coeffs = {}
    for mode, total in sums.items():
        ratio = total / measure
        if ratio.pi_exponent != 0:
            raise ArithmeticError("sphere average did not cancel the pi grading")
        coeffs[mode] = ratio.coeff
    return TrigPolynomial(n, coeffs)


class ClassicalSymbol:
    """A truncated classical symbol: homogeneous components from ``order``
    down to ``trusted_floor``.

    ``trusted_floor=None`` marks a complete expansion (every unlisted degree
    is known to be zero), which is how exact polynomial symbols such as
    xi_l or e^(i x_l) enter the calculus.  Finite floors record how deep a
    truncated expansion can be trusted; operations refuse to answer
    questions that the missing lower components could change.
    """

    __slots__ = ("n", "order", "trusted_floor", "_components")

    def __init__(
        self,
        n: int,
        order: int,
        components: dict[int, HomogeneousComponent] | None = None,
        trusted_floor: int | None = None,
    ):
        if n < 2:
            raise ValidationError(f"dimension must be at least 2, got {n}")
        comps = {}
        for deg, comp in (components or {}).items():
            if not isinstance(comp, HomogeneousComponent):
                raise TypeError("components must be HomogeneousComponent values")
            if comp.n != n:
                raise ValidationError("component dimension mismatch")
            if comp.is_zero():
                continue
            if comp.degree != deg:
                raise ValidationError(
                    f"component of degree {comp.degree} stored at degree {deg}"
                )
            if deg > order:
                raise ValidationError(
                    f"component degree {deg} exceeds symbol order {order}"
                )
            if trusted_floor is not None and deg < trusted_floor:
                raise ValidationError(
                    f"component degree {deg} lies below the trusted floor "
                    f"{trusted_floor}"
                )
            comps[deg] = comp
        if trusted_floor is not None and trusted_floor > order:
            raise ValidationError(
                f"trusted floor {trusted_floor} exceeds order {order}"
            )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "trusted_floor", trusted_floor)
        object.__setattr__(self, "_components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("ClassicalSymbol is immutable")

    @property
    def components(self) -> dict[int, HomogeneousComponent]:
        return dict(self._components)

    def degrees(self) -> list[int]:
        return sorted(self._components, reverse=True)

    def component(self, degree: int) -> HomogeneousComponent:
        if self.trusted_floor is not None and degree < self.trusted_floor:
            raise InsufficientExpansionError(
                f"degree {degree} lies below the trusted floor {self.trusted_floor}"
            )
        return self._components.get(degree, zero_component(self.n, degree))

    def is_zero(self) -> bool:
        return not self._components

    def _floor_add(self, other: "ClassicalSymbol") -> int | None:
        if self.trusted_floor is None:
            return other.trusted_floor
        if other.trusted_floor is None:
            return self.trusted_floor
        return max(self.trusted_floor, other.trusted_floor)

    def __add__(self, other):
        if not isinstance(other, ClassicalSymbol):
            return NotImplemented
        if self.n != other.n:
            raise ValidationError("dimension mismatch in symbol addition")
        floor = self._floor_add(other)
        comps: dict[int, HomogeneousComponent] = {}
        for deg in set(self._components) | set(other._components):
            if floor is not None and deg < floor:
                continue
            a = self._components.get(deg)
            b = other._components.get(deg)
            c = a + b if a and b else (a or b)
            if c and not c.is_zero():
                comps[deg] = c
        return ClassicalSymbol(self.n, max(self.order, other.order), comps, floor)

    def __sub__(self, other):
        if not isinstance(other, ClassicalSymbol):
            return NotImplemented
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "ClassicalSymbol":
        c = _as_cr(c)
        comps = {
            deg: comp.scale(c) for deg, comp in self._components.items()
        }
        if c.is_zero():
            comps = {}
        return ClassicalSymbol(self.n, self.order, comps, self.trusted_floor)

    def deriv_x(self, direction: int) -> "ClassicalSymbol":
        comps = {}
        for deg, comp in self._components.items():
            d = comp.deriv_x(direction)
            if not d.is_zero():
                comps[deg] = d
        return ClassicalSymbol(self.n, self.order, comps, self.trusted_floor)

    def partial_xi(self, direction: int) -> "ClassicalSymbol":
        comps = {}
        for deg, comp in self._components.items():
            d = comp.partial_xi(direction)
            if not d.is_zero():
                comps[deg - 1] = d
        floor = None if self.trusted_floor is None else self.trusted_floor - 1
        return ClassicalSymbol(self.n, self.order - 1, comps, floor)

    def __eq__(self, other) -> bool:
        """Equality of expansions: same dimension, floor and components.

        The declared order is presentation metadata (an upper bound), so two
        symbols that differ only there compare equal.
        """
        if not isinstance(other, ClassicalSymbol):
            return NotImplemented
        return (
            self.n == other.n
            and self.trusted_floor == other.trusted_floor
            and self._components == other._components
        )

    def __hash__(self):
        return hash(
            (self.n, self.trusted_floor, frozenset(self._components.items()))
        )

    def __repr__(self) -> str:
        comps = ", ".join(f"{d}: {c!r}" for d, c in sorted(self._components.items(), reverse=True))
        return (
            f"<symbol n={self.n} order={self.order} floor={self.trusted_floor} "
            f"{{{comps}}}>"
        )


def monomial_symbol(
    n: int,
    coeff,
    mode: tuple[int, ...] = None,
    alpha: tuple[int, ...] = None,
    npow: int = 0,
) -> ClassicalSymbol:
    """A complete one-term symbol coeff * e^(i mode.x) xi^alpha |xi|^npow."""
    mode = tuple(mode) if mode is not None else (0,) * n
    alpha = tuple(alpha) if alpha is not None else (0,) * n
    degree = sum(alpha) + npow
    comp = HomogeneousComponent(n, degree, [(coeff, mode, alpha, npow)])
    comps = {} if comp.is_zero() else {degree: comp}
    return ClassicalSymbol(n, degree, comps, None)


def xi_symbol(n: int, direction: int) -> ClassicalSymbol:
    """The coordinate symbol xi_direction (1-based), complete at all depths."""
    if not 1 <= direction <= n:
        raise ValidationError(f"direction must lie in 1..{n}, got {direction}")
    alpha = tuple(1 if i == direction - 1 else 0 for i in range(n))
    return monomial_symbol(n, 1, alpha=alpha)


def exp_symbol(n: int, mode: tuple[int, ...]) -> ClassicalSymbol:
    """The oscillating symbol e^(i mode.x), complete at all depths."""
    return monomial_symbol(n, 1, mode=mode)


def one_symbol(n: int) -> ClassicalSymbol:
    return monomial_symbol(n, 1)
