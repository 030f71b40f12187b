"""Operator-level calculus on the torus: composition, residue, commutators.

The composition expansion is the finite-per-degree double sum over
homogeneous components and derivative multi-indices; truncation bookkeeping
follows the rule floor(lambda) = max(floor(sigma) + order(tau),
order(sigma) + floor(tau)), which is exactly the set of degrees that the
unknown components below either factor's floor cannot reach.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import terms as T
from .errors import InsufficientExpansionError, ValidationError
from .scalars import (
    PiGradedScalar,
    sphere_monomial_integral,
    sphere_surface_measure,
    torus_volume,
)
from .symbols import (
    ClassicalSymbol,
    HomogeneousComponent,
    TrigPolynomial,
    euler_antiderivatives,
    exp_symbol,
    sphere_average,
    xi_symbol,
    zero_component,
)

_SYS = T.RATIONAL_SYSTEM


def _standard_floor(sigma: ClassicalSymbol, tau: ClassicalSymbol) -> int | None:
    parts = []
    if sigma.trusted_floor is not None:
        parts.append(sigma.trusted_floor + tau.order)
    if tau.trusted_floor is not None:
        parts.append(sigma.order + tau.trusted_floor)
    return max(parts) if parts else None


def _symbol_polynomial(sym: ClassicalSymbol) -> bool:
    return all(T.terms_polynomial(c.raw_terms()) for c in sym.components.values())


def _symbol_x_independent(sym: ClassicalSymbol) -> bool:
    return all(T.terms_x_independent(c.raw_terms()) for c in sym.components.values())


def _compose_impl(
    sigma: ClassicalSymbol,
    tau: ClassicalSymbol,
    floor: int | None,
    *,
    degrees=None,
    gamma_cap: int | None = None,
) -> ClassicalSymbol:
    if sigma.n != tau.n:
        raise ValidationError(
            f"dimension mismatch in composition: {sigma.n} != {tau.n}"
        )
    if floor is None and degrees is None and gamma_cap is None:
        if not (_symbol_polynomial(sigma) or _symbol_x_independent(tau)):
            raise ValidationError(
                "composition of two complete symbols does not terminate here; "
                "assign a finite trusted floor to one factor"
            )
    n = sigma.n
    comps_a = {d: c.raw_terms() for d, c in sigma.components.items()}
    comps_b = {d: c.raw_terms() for d, c in tau.components.items()}
    raw = T.compose_components(
        _SYS, n, comps_a, comps_b, floor, degrees=degrees, gamma_cap=gamma_cap
    )
    comps = {
        d: HomogeneousComponent._from_canonical(n, d, ct) for d, ct in raw.items()
    }
    return ClassicalSymbol(n, sigma.order + tau.order, comps, floor)


def compose(sigma: ClassicalSymbol, tau: ClassicalSymbol) -> ClassicalSymbol:
    """Symbol of the operator product, emitted down to the composed floor."""
    return _compose_impl(sigma, tau, _standard_floor(sigma, tau))


def residue(sigma: ClassicalSymbol) -> PiGradedScalar:
    """The residue integral of the degree-(-n) component.

    The torus integral keeps only Fourier mode zero, with weight (2*pi)^n;
    the sphere integral of each monomial is evaluated in closed form.
    Refuses (rather than guessing zero) when the expansion is not trusted
    down to degree -n.
    """
    n = sigma.n
    if sigma.trusted_floor is not None and sigma.trusted_floor > -n:
        raise InsufficientExpansionError(
            f"residue needs the expansion down to degree {-n}, but the floor "
            f"is {sigma.trusted_floor}"
        )
    comp = sigma.components.get(-n)
    if comp is None:
        return PiGradedScalar(0)
    zero_mode = (0,) * n
    total = PiGradedScalar(0)
    for (mode, alpha, _p), s in comp.raw_terms().items():
        if mode != zero_mode:
            continue
        total = total + sphere_monomial_integral(alpha, n) * s
    return torus_volume(n) * total


def _residue_of_composition(sigma: ClassicalSymbol, tau: ClassicalSymbol) -> PiGradedScalar:
    n = sigma.n
    floor = _standard_floor(sigma, tau)
    if floor is not None and floor > -n:
        raise InsufficientExpansionError(
            f"composition is only trusted down to degree {floor}, above {-n}"
        )
    return residue(_compose_impl(sigma, tau, floor, degrees={-n}))


def trace_defect(sigma: ClassicalSymbol, tau: ClassicalSymbol) -> PiGradedScalar:
    """Res of [T_sigma, T_tau]; the trace property makes this exactly zero."""
    return _residue_of_composition(sigma, tau) - _residue_of_composition(tau, sigma)


def commutator_xi(sigma: ClassicalSymbol, direction: int) -> ClassicalSymbol:
    """Symbol of [T_xi_l, T_sigma]; equals D_x_l sigma componentwise.

    The gamma expansion terminates after one step because the second
    xi-derivative of xi_l vanishes, and the unknown tails below the floor
    cancel between the two orderings, so the result is trusted exactly as
    deep as sigma itself.
    """
    xi = xi_symbol(sigma.n, direction)
    floor = sigma.trusted_floor
    left = _compose_impl(xi, sigma, floor)
    right = _compose_impl(sigma, xi, floor)
    return left - right


def commutator_exp(
    sigma: ClassicalSymbol, direction: int, depth: int
) -> ClassicalSymbol:
    """Symbol of [T_sigma, T_e^(i x_l)] with the gamma series cut at ``depth``.

    Matches sum_{j=1..depth} (1/j!) (d_xi_l^j sigma) e^(i x_l) down to the
    returned floor; the terms beyond ``depth`` live strictly below it.

    The result is trusted one degree deeper than sigma itself: the zeroth
    series term cancels between the two orderings, and every other term at
    degree floor(sigma) - 1 differentiates a stored component.
    """
    if depth < 0:
        raise ValidationError(f"depth must be nonnegative, got {depth}")
    n = sigma.n
    if not 1 <= direction <= n:
        raise ValidationError(f"direction must lie in 1..{n}, got {direction}")
    mode = tuple(1 if i == direction - 1 else 0 for i in range(n))
    exp = exp_symbol(n, mode)
    comps = sigma.components
    top = max(comps) if comps else sigma.order
    if sigma.trusted_floor is None and _symbol_polynomial(sigma) and depth >= max(top, 0):
        floor = None  # the series provably terminates within the cap
    elif sigma.trusted_floor is None:
        floor = top - depth
    else:
        floor = max(sigma.trusted_floor - 1, top - depth)
    left = _compose_impl(sigma, exp, floor, gamma_cap=depth)
    right = _compose_impl(exp, sigma, floor)
    return left - right


@dataclass(frozen=True)
class DecompositionCertificate:
    """Constructive witness of the residue-uniqueness decomposition.

    For every trusted degree d != -n the symbol's component is exhibited as
    a divergence sum_l d(h_l)/d(xi_l); the degree-(-n) component splits as
    r(x) |xi|^(-n) plus a remainder with zero sphere average at every mode.
    """

    n: int
    antiderivative_families: dict[int, list[HomogeneousComponent]]
    sphere_mean: TrigPolynomial
    remainder: HomogeneousComponent

    def implied_residue(self) -> PiGradedScalar:
        """(2*pi)^n |S^(n-1)| r_hat(0): the residue determined by the mean."""
        return (
            torus_volume(self.n)
            * sphere_surface_measure(self.n)
            * self.sphere_mean.hat((0,) * self.n)
        )


def uniqueness_decompose(sigma: ClassicalSymbol) -> DecompositionCertificate:
    """Split a symbol into divergences plus the sphere-mean part at -n."""
    n = sigma.n
    if sigma.trusted_floor is not None and sigma.trusted_floor > -n:
        raise InsufficientExpansionError(
            f"decomposition needs the expansion down to degree {-n}, but the "
            f"floor is {sigma.trusted_floor}"
        )
    families = {}
    for deg, comp in sigma.components.items():
        if deg != -n:
            families[deg] = euler_antiderivatives(comp)
    comp = sigma.components.get(-n, zero_component(n, -n))
    mean = sphere_average(comp)
    mean_part = HomogeneousComponent(
        n,
        -n,
        [(c, mode, (0,) * n, -n) for mode, c in mean.coeffs.items()],
    )
    remainder = comp - mean_part
    if not sphere_average(remainder).is_zero():
        raise ArithmeticError("remainder of the mean split has nonzero average")
    return DecompositionCertificate(n, families, mean, remainder)
