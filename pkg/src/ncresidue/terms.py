"""Term-level machinery shared by the commutative and twisted calculi.

A homogeneous component is stored as a dict mapping

    (mode, alpha, npow) -> scalar

where ``mode`` is the Fourier index of the oscillating factor (a lattice
point on the torus, or the (m, n) word exponents of the twisted algebra),
``alpha`` the xi-monomial exponents and ``npow`` the power of |xi|.  The
same representation serves both calculi; a coefficient-system object tells
the engine how to operate on scalars and what phase the product of two
modes picks up.

Canonical form: within each (mode, parity of npow) class all terms share
the maximal norm power such that the polynomial part is not divisible by
xi_1^2 + ... + xi_n^2.  This removes the only relation among the
generators, so structural equality of canonical term dicts is equality of
functions on R^n minus the origin.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CYC_ZERO, CyclotomicScalar, cyclotomic_phase
from .errors import ValidationError
from .scalars import CR_ZERO, ComplexRational

TermKey = tuple[tuple[int, ...], tuple[int, ...], int]


class RationalSystem:
    """Exact complex-rational coefficients; trivial mode phases."""

    zero = CR_ZERO

    @staticmethod
    def is_zero(s) -> bool:
        return s.is_zero()

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def times_int(s, k: int):
        return s * k

    @staticmethod
    def times_fraction(s, f: Fraction):
        return s * f

    @staticmethod
    def from_fraction(f) -> ComplexRational:
        return ComplexRational(f)

    @staticmethod
    def phase(left_mode, right_mode):
        return None


class CyclotomicSystem:
    """Exact cyclotomic coefficients twisted by a rational angle."""

    zero = CYC_ZERO

    def __init__(self, theta_num: int, theta_den: int):
        self.theta_num = theta_num
        self.theta_den = theta_den

    @staticmethod
    def is_zero(s) -> bool:
        return s.is_zero()

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def times_int(s, k: int):
        return s * k

    @staticmethod
    def times_fraction(s, f: Fraction):
        return s * f

    @staticmethod
    def from_fraction(f) -> CyclotomicScalar:
        return CyclotomicScalar.from_rational(f)

    def phase(self, left_mode, right_mode):
        t = left_mode[1] * right_mode[0]
        if (self.theta_num * t) % self.theta_den == 0:
            return None
        return cyclotomic_phase(self.theta_num, self.theta_den, t)


class FloatSystem:
    """Floating complex coefficients for numerical experiments."""

    zero = 0j

    def __init__(self, theta: float = 0.0):
        self.theta = float(theta)

    @staticmethod
    def is_zero(s) -> bool:
        return s == 0

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def times_int(s, k: int):
        return s * k

    @staticmethod
    def times_fraction(s, f: Fraction):
        return s * float(f)

    @staticmethod
    def from_fraction(f) -> complex:
        return complex(float(f))

    def phase(self, left_mode, right_mode):
        t = left_mode[1] * right_mode[0]
        if self.theta == 0.0 or t == 0:
            return None
        return cmath.exp(2j * cmath.pi * self.theta * t)


RATIONAL_SYSTEM = RationalSystem()


def bag_add(system, bag: dict, key: TermKey, scalar) -> None:
    cur = bag.get(key)
    if cur is None:
        if not system.is_zero(scalar):
            bag[key] = scalar
        return
    new = system.add(cur, scalar)
    if system.is_zero(new):
        del bag[key]
    else:
        bag[key] = new


def add_terms(system, a: dict, b: dict) -> dict:
    out = dict(a)
    for key, s in b.items():
        bag_add(system, out, key, s)
    return out


def scale_terms(system, terms: dict, scalar) -> dict:
    out = {}
    for key, s in terms.items():
        v = system.mul(scalar, s)
        if not system.is_zero(v):
            out[key] = v
    return out


def mul_terms(system, left: dict, right: dict, out: dict | None = None) -> dict:
    """Pointwise product; modes add, with the system's phase twist.

    Left scalars multiply on the left, which is what the twisted calculus
    requires; the commutative backend does not care.
    """
    if out is None:
        out = {}
    for (m1, a1, p1), s1 in left.items():
        for (m2, a2, p2), s2 in right.items():
            s = system.mul(s1, s2)
            ph = system.phase(m1, m2)
            if ph is not None:
                s = system.mul(s, ph)
            key = (
                tuple(x + y for x, y in zip(m1, m2)),
                tuple(x + y for x, y in zip(a1, a2)),
                p1 + p2,
            )
            bag_add(system, out, key, s)
    return out


def partial_xi_terms(system, terms: dict, axis: int) -> dict:
    """d/d(xi_axis), termwise: |alpha| + npow drops by one."""
    out = {}
    for (mode, alpha, p), s in terms.items():
        a = alpha[axis]
        if a:
            key = (mode, _bump(alpha, axis, -1), p)
            bag_add(system, out, key, system.times_int(s, a))
        if p:
            key = (mode, _bump(alpha, axis, 1), p - 2)
            bag_add(system, out, key, system.times_int(s, p))
    return out


def mode_deriv_terms(system, terms: dict, axis: int) -> dict:
    """The mode-weighting derivative (D_x or delta_j): scales by mode[axis]."""
    out = {}
    for (mode, alpha, p), s in terms.items():
        k = mode[axis]
        if k:
            out[(mode, alpha, p)] = system.times_int(s, k)
    return out


def _bump(alpha: tuple[int, ...], axis: int, delta: int) -> tuple[int, ...]:
    return alpha[:axis] + (alpha[axis] + delta,) + alpha[axis + 1 :]


def terms_x_independent(terms: dict) -> bool:
    return all(not any(mode) for (mode, _a, _p) in terms)


def terms_polynomial(terms: dict) -> bool:
    """True when every |xi| power is even and nonnegative (a polynomial)."""
    return all(p >= 0 and p % 2 == 0 for (_m, _a, p) in terms)


# -- canonical form ---------------------------------------------------------


def canonical_terms(system, n: int, degree: int, raw: dict) -> dict:
    """Canonicalize a raw term bag of the given homogeneity degree."""
    groups: dict[tuple, list] = {}
    for (mode, alpha, npow), s in raw.items():
        if system.is_zero(s):
            continue
        if len(alpha) != n:
            raise ValidationError(f"xi multi-index {alpha} has length != {n}")
        if sum(alpha) + npow != degree:
            raise ValidationError(
                f"term xi^{alpha} |xi|^{npow} is homogeneous of degree "
                f"{sum(alpha) + npow}, not {degree}"
            )
        groups.setdefault((mode, npow % 2), []).append((alpha, npow, s))
    out = {}
    for (mode, _parity), items in groups.items():
        pmin = min(p for _a, p, _s in items)
        poly: dict = {}
        for alpha, p, s in items:
            _accumulate_sum_sq_power(system, poly, alpha, (p - pmin) // 2, n, s)
        while poly:
            quo = _divide_by_sum_sq(system, poly, n)
            if quo is None:
                break
            poly = quo
            pmin += 2
        for alpha, s in poly.items():
            out[(mode, alpha, pmin)] = s
    return out


def _accumulate_sum_sq_power(system, poly: dict, alpha, k: int, n: int, s) -> None:
    # add s * xi^alpha * (xi_1^2 + ... + xi_n^2)^k into poly
    if k == 0:
        bag_add(system, poly, alpha, s)
        return
    kfact = math.factorial(k)
    for beta in compositions(n, k):
        m = kfact
        for b in beta:
            m //= math.factorial(b)
        key = tuple(a + 2 * b for a, b in zip(alpha, beta))
        bag_add(system, poly, key, system.times_int(s, m))


def _divide_by_sum_sq(system, poly: dict, n: int):
    """Exact quotient of poly by xi_1^2 + ... + xi_n^2, or None."""
    rem = dict(poly)
    quo: dict = {}
    while rem:
        alpha = max(rem)
        c = rem.pop(alpha)
        if alpha[0] < 2:
            return None
        beta = (alpha[0] - 2,) + alpha[1:]
        bag_add(system, quo, beta, c)
        for j in range(1, n):
            key = beta[:j] + (beta[j] + 2,) + beta[j + 1 :]
            bag_add(system, rem, key, system.neg(c))
    return quo


# -- composition ------------------------------------------------------------


@lru_cache(maxsize=None)
def compositions(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All multi-indices of length n with total k."""
    if n == 1:
        return ((k,),)
    out = []
    for first in range(k + 1):
        for rest in compositions(n - 1, k - first):
            out.append((first,) + rest)
    return tuple(out)


def gamma_factorial(gamma: tuple[int, ...]) -> int:
    f = 1
    for g in gamma:
        f *= math.factorial(g)
    return f


def compose_components(
    system,
    n: int,
    comps_a: dict[int, dict],
    comps_b: dict[int, dict],
    floor: int | None,
    *,
    degrees=None,
    gamma_cap: int | None = None,
) -> dict[int, dict]:
    """Components of sum_gamma (1/gamma!) (d_xi^gamma a) (D^gamma b).

    ``floor`` bounds the emitted degrees from below; ``degrees`` restricts
    to an explicit set; ``gamma_cap`` truncates the derivative order.  With
    ``floor=None`` and no other bound the caller must guarantee that the
    series terminates (left factor polynomial in xi, or right factor free
    of modes) or the loop would not end.
    """
    wanted = None if degrees is None else set(degrees)
    out: dict[int, dict] = {}
    for a_deg, a_terms in comps_a.items():
        if not a_terms:
            continue
        levels = [{(0,) * n: a_terms}]

        def extend_levels(upto: int) -> None:
            while len(levels) <= upto:
                k = len(levels)
                prev = levels[-1]
                cur = {}
                if prev:
                    for gamma in compositions(n, k):
                        j = next(i for i, g in enumerate(gamma) if g)
                        parent = _bump(gamma, j, -1)
                        pt = prev.get(parent)
                        if pt:
                            d = canonical_terms(
                                system, n, a_deg - k, partial_xi_terms(system, pt, j)
                            )
                            if d:
                                cur[gamma] = d
                levels.append(cur)

        for b_deg, b_terms in comps_b.items():
            if not b_terms:
                continue
            kmax: int | None
            if wanted is not None:
                ks = [a_deg + b_deg - d for d in wanted if a_deg + b_deg - d >= 0]
                if not ks:
                    continue
                kmax = max(ks)
            elif floor is not None:
                kmax = a_deg + b_deg - floor
                if kmax < 0:
                    continue
            else:
                kmax = None
            if terms_x_independent(b_terms):
                kmax = 0 if kmax is None else min(kmax, 0)
            if gamma_cap is not None:
                kmax = gamma_cap if kmax is None else min(kmax, gamma_cap)
            k = 0
            while kmax is None or k <= kmax:
                extend_levels(k)
                level = levels[k]
                if not level:
                    break  # every higher xi-derivative vanishes too
                target = a_deg + b_deg - k
                if wanted is not None and target not in wanted:
                    k += 1
                    continue
                bucket = out.setdefault(target, {})
                for gamma, left in level.items():
                    right = _weighted_right(system, b_terms, gamma)
                    if right:
                        mul_terms(system, left, right, out=bucket)
                k += 1
    result = {}
    for d, raw in out.items():
        ct = canonical_terms(system, n, d, raw)
        if ct:
            result[d] = ct
    return result


def _weighted_right(system, b_terms: dict, gamma: tuple[int, ...]) -> dict:
    # (1/gamma!) D^gamma applied termwise: each term scales by mode^gamma
    fact = gamma_factorial(gamma)
    if not any(gamma):
        return b_terms if fact == 1 else scale_terms(system, b_terms, system.from_fraction(Fraction(1, fact)))
    out = {}
    for key, s in b_terms.items():
        mode = key[0]
        w = 1
        for axis, g in enumerate(gamma):
            if g:
                m = mode[axis]
                if m == 0:
                    w = 0
                    break
                w *= m**g
        if w:
            out[key] = system.times_fraction(s, Fraction(w, fact))
    return out
