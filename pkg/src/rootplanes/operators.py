"""Symmetric Newton-like operators on quadratics and their critical structure.

A Newton-like root finder applied to a quadratic, conjugated so the roots sit
at 0 and infinity, becomes O(z) = z**n * num(z)/den(z) where num and den are
reciprocal polynomials (reversed coefficient vectors).  Such maps satisfy
O(1/z) = 1/O(z) exactly, fix z = 1, and have a palindromic derivative
numerator, so free critical points come in {c, 1/c} pairs and can be found by
halving the degree with x = z + 1/z.

This module provides the operator abstraction, its derivative numerator,
fixed points with multipliers, generic and closed-form free critical points,
and the catalog of four parameterized families (a fourth-order Kim-type
family, a multipoint Chebyshev variant, an Ermakov-Kalitkin type family, and
a sixth-order scheme) together with vectorized per-pixel helpers used by the
renderer.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from . import _kernels
from .polyalgebra import (
    DegenerateLeadingError,
    Polynomial,
    lift_root,
    poly_derivative,
    poly_divmod,
    poly_mul,
    reciprocal,
    reduce_palindromic,
    solve_cubic,
    solve_poly_oracle,
    solve_quadratic,
)

INFINITY = complex(math.inf, 0.0)

REL_TOL = 1e-12


class DegenerateParameterError(ValueError):
    """Family parameter collapses the operator (leading/trailing denominator zero)."""


class NotFixedError(ValueError):
    """Multiplier requested at a point that is not fixed."""


class DeflationResidualError(ArithmeticError):
    """A claimed prefixed factor does not divide the derivative numerator."""


class StabilityClass(Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    PARABOLIC = "parabolic"
    IRRATIONALLY_INDIFFERENT = "irrationally_indifferent"


def classify_multiplier(lam: complex, band: float = 1e-8) -> StabilityClass:
    """Stability class from |multiplier|, with a tolerance band around 1.

    Indifferent multipliers are parabolic when arg(lam)/2pi is within 1e-8 of
    a rational r/s with s <= 64.
    """
    mag = abs(lam)
    if mag < 1e-10:
        return StabilityClass.SUPERATTRACTING
    if mag < 1.0 - band:
        return StabilityClass.ATTRACTING
    if mag > 1.0 + band:
        return StabilityClass.REPELLING
    theta = (cmath.phase(lam) / (2 * math.pi)) % 1.0
    approx = Fraction(theta).limit_denominator(64)
    if abs(theta - float(approx)) <= 1e-8 or abs(theta - 1.0) <= 1e-8:
        return StabilityClass.PARABOLIC
    return StabilityClass.IRRATIONALLY_INDIFFERENT


@dataclass(frozen=True)
class FixedPointInfo:
    location: complex
    multiplier: complex
    stability: StabilityClass


@dataclass(frozen=True)
class CriticalSet:
    """Free critical points grouped by the z -> 1/z symmetry.

    representatives holds one point per {c, 1/c} pair (the member with
    |c| >= 1, ties on the unit circle broken toward Im >= 0); full holds every
    free critical point.
    """

    representatives: tuple[complex, ...]
    full: tuple[complex, ...]


class NewtonLikeOperator:
    """O(z) = z**n * num(z)/den(z) with num the coefficient reversal of den.

    Denominators are stored unnormalized; both the constant and leading
    denominator coefficients must be nonzero (relative to the largest
    coefficient), otherwise the degree would silently drop and the symmetry
    pairing of critical points would change.
    """

    def __init__(self, n: int, den) -> None:
        if n < 1:
            raise ValueError("exponent n must be a positive integer")
        den = den if isinstance(den, Polynomial) else Polynomial(den)
        m = den.maxmag
        if abs(den.coeffs[0]) < REL_TOL * m or abs(den.coeffs[-1]) < REL_TOL * m:
            raise DegenerateParameterError(
                "denominator constant or leading coefficient is numerically zero")
        self.n = int(n)
        self.den = den
        self.num = reciprocal(den)
        self._den_arr = self.den.as_array()
        self._num_arr = self.num.as_array()
        self._num_d_arr = poly_derivative(self.num).as_array()
        self._den_d_arr = poly_derivative(self.den).as_array()

    @property
    def k(self) -> int:
        return len(self.den.coeffs) - 1

    def eval(self, z: complex) -> complex:
        """Evaluate on the extended plane.

        Horner for |z| <= 1; the exact symmetry O(z) = 1/O(1/z) otherwise, so
        large inputs never overflow.  Poles and the point at infinity map to
        infinity.
        """
        return complex(_kernels.op_eval(complex(z), self.n, self._num_arr, self._den_arr))

    __call__ = eval

    def __repr__(self) -> str:
        return f"NewtonLikeOperator(n={self.n}, den={list(self.den.coeffs)!r})"


def derivative_numerator(op: NewtonLikeOperator) -> Polynomial:
    """B(z) with O'(z) = z**(n-1) * B(z) / den(z)**2.

    Quotient rule: B = n*num*den + z*(num'*den - num*den').  B is always
    palindromic, which is what makes the critical-point degree halving work.
    """
    num, den = op.num, op.den
    bracket = poly_mul(poly_derivative(num), den) - poly_mul(num, poly_derivative(den))
    return float(op.n) * poly_mul(num, den) + bracket.shifted(1)


def _horner_arrays(coeffs: np.ndarray, z: complex) -> complex:
    r = 0j
    for c in coeffs[::-1]:
        r = r * z + complex(c)
    return r


def _derivative_at(op: NewtonLikeOperator, z: complex) -> complex:
    """O'(z) from z**(n-1) * B(z) / den(z)**2, switching to the reciprocal side
    for |z| > 1 via O'(z) = O'(1/z) * (O(z)/z)**2."""
    z = complex(z)
    if cmath.isinf(z):
        z = 0j
    if abs(z) <= 1.0:
        nv = _horner_arrays(op._num_arr, z)
        dv = _horner_arrays(op._den_arr, z)
        ndv = _horner_arrays(op._num_d_arr, z)
        ddv = _horner_arrays(op._den_d_arr, z)
        if abs(dv) < 1e-300:
            return INFINITY
        bracket = op.n * nv * dv + z * (ndv * dv - nv * ddv)
        return z ** (op.n - 1) * bracket / (dv * dv)
    w = 1.0 / z
    ow = op.eval(z)
    return _derivative_at(op, w) * (ow / z) ** 2


def multiplier(op: NewtonLikeOperator, z0: complex) -> complex:
    """Derivative of O at a fixed point, cross-validated by central differences.

    Accepts 0 and infinity (evaluated on the reciprocal-conjugate side, which
    for these symmetric maps is O itself); any other point must satisfy
    |O(z0) - z0| <= 1e-8 * (1 + |z0|).
    """
    z0 = complex(z0)
    if cmath.isinf(z0):
        ref_pt = 0j
    else:
        if z0 != 0 and abs(op.eval(z0) - z0) > 1e-8 * (1.0 + abs(z0)):
            raise NotFixedError(f"{z0} is not fixed")
        ref_pt = z0 if abs(z0) <= 1.0 else 1.0 / z0
    lam = _derivative_at(op, z0)
    h = 1e-6
    fd = (op.eval(ref_pt + h) - op.eval(ref_pt - h)) / (2 * h)
    ref = _derivative_at(op, ref_pt)
    if abs(fd - ref) > 1e-5 * max(1.0, abs(ref)):
        raise ArithmeticError(
            f"analytic derivative {ref} disagrees with finite differences {fd} at {ref_pt}")
    return lam


def _representative(c: complex) -> complex:
    r = c if abs(c) >= 1.0 else 1.0 / c
    if abs(abs(r) - 1.0) < 1e-12 and r.imag < 0:
        r = 1.0 / r
    return r


def _equivalent(a: complex, b: complex, tol: float = 1e-9) -> bool:
    scale = 1.0 + abs(a)
    if abs(a - b) <= tol * scale:
        return True
    return b != 0 and abs(a - 1.0 / b) <= tol * scale


def _build_critical_set(points: list[complex]) -> CriticalSet:
    reps: list[complex] = []
    for c in points:
        r = _representative(c)
        if not any(_equivalent(r, s) for s in reps):
            reps.append(r)
    full: list[complex] = []
    for c in points:
        if not any(abs(c - f) <= 1e-9 * (1.0 + abs(c)) for f in full):
            full.append(c)
    key = lambda v: (v.real, v.imag)
    return CriticalSet(tuple(sorted(reps, key=key)), tuple(sorted(full, key=key)))


def free_critical_points(op: NewtonLikeOperator, known_prefixed=()) -> CriticalSet:
    """Free critical points of O: roots of B after deflating known factors.

    Supplied factors (e.g. powers of 1+z or preimage quadratics of the fixed
    point 1) are removed by synthetic division with a residual check; the
    remaining palindromic polynomial is solved through the degree-halving
    reduction, falling back to the simultaneous-iteration oracle when the
    reduced degree exceeds three.
    """
    b = derivative_numerator(op)
    rest = b
    for factor in known_prefixed:
        factor = factor if isinstance(factor, Polynomial) else Polynomial(factor)
        quo, rem = poly_divmod(rest, factor)
        if rem.maxmag > 1e-8 * max(rest.maxmag, 1e-300):
            raise DeflationResidualError(
                f"factor {list(factor.coeffs)} does not divide the derivative numerator "
                f"(residual {rem.maxmag:.3e})")
        rest = quo
    rest = rest.trimmed()
    points: list[complex] = []
    while rest.degree() % 2 == 1:
        # odd palindromic: -1 is a root; split it off and keep its trivial pair
        quo, rem = poly_divmod(rest, Polynomial((1, 1)))
        if rem.maxmag > 1e-8 * max(rest.maxmag, 1e-300):
            raise DeflationResidualError("odd-degree remainder is not divisible by z+1")
        points.extend([-1.0 + 0j, -1.0 + 0j])
        rest = quo.trimmed()
    if rest.degree() >= 2:
        reduced = reduce_palindromic(rest)
        deg = reduced.degree()
        c = reduced.trimmed().coeffs
        if deg == 1:
            xs = [-c[0] / c[1]]
        elif deg == 2:
            xs = solve_quadratic(c[2], c[1], c[0])
        elif deg == 3:
            xs = solve_cubic(c[3], c[2], c[1], c[0])
        else:
            xs = solve_poly_oracle(reduced)
        for x in xs:
            points.extend(lift_root(x))
    return _build_critical_set(points)


def _polish_multiple_root(poly: Polynomial, z: complex, multiplicity: int) -> complex:
    """Newton refinement of an m-fold root via the (m-1)th derivative, where
    the root is simple and convergence is quadratic."""
    p = poly
    for _ in range(multiplicity - 1):
        p = poly_derivative(p)
    dp = poly_derivative(p)
    for _ in range(40):
        dv = dp(z)
        if dv == 0:
            break
        step = p(z) / dv
        z = z - step
        if abs(step) <= 1e-15 * (1.0 + abs(z)):
            break
    return z


def fixed_points(op: NewtonLikeOperator) -> list[FixedPointInfo]:
    """All fixed points with multipliers: 0, infinity, and the strange ones.

    The strange fixed points are the roots of z**(n-1)*num(z) - den(z); root
    clusters from the oracle (multiple fixed points, e.g. parabolic ones) are
    merged within a 1e-4 relative radius and polished to full accuracy.
    """
    f = op.num.shifted(op.n - 1) - op.den
    roots = solve_poly_oracle(f)
    merged: list[list[complex]] = []
    for r in roots:
        for group in merged:
            center = sum(group) / len(group)
            if abs(r - center) <= 1e-4 * (1.0 + abs(center)):
                group.append(r)
                break
        else:
            merged.append([r])
    infos = []
    for group in merged:
        loc = sum(group) / len(group)
        if len(group) > 1:
            polished = _polish_multiple_root(f, loc, len(group))
            if abs(f(polished)) <= abs(f(loc)):
                loc = polished
        lam = multiplier(op, loc)
        infos.append(FixedPointInfo(loc, lam, classify_multiplier(lam)))
    infos.sort(key=lambda fp: (fp.location.real, fp.location.imag))
    for loc in (0j, INFINITY):
        lam = multiplier(op, loc)
        infos.append(FixedPointInfo(loc, lam, classify_multiplier(lam)))
    return infos


def strange_fixed_points(op: NewtonLikeOperator) -> list[FixedPointInfo]:
    """fixed_points without the superattracting roots 0 and infinity."""
    return [fp for fp in fixed_points(op)
            if not cmath.isinf(fp.location) and fp.location != 0]


# --------------------------------------------------------------------------
# family catalog


class FamilyKind(Enum):
    KIM4 = "kim"
    CHEBYSHEV_MULTIPOINT = "cheby"
    ERMAKOV_KALITKIN = "ermakov"
    SIXTH_ORDER = "sixth"


@dataclass(frozen=True)
class FamilyId:
    kind: FamilyKind
    a: complex


def _kim_den(a):
    one = np.ones_like(a)
    return np.stack([one, 4 * one, 6 * one, 4 * one, 1 - a], axis=-1)


def _cheby_den(a):
    one = np.ones_like(a)
    return np.stack([one, 4 - 4 * a, 5 - 8 * a + 4 * a * a, 2 - 4 * a], axis=-1)


def _ermakov_den(a):
    return np.stack([2 * (a - 1), 4 * (a - 1), a * a + 2 * a - 2], axis=-1)


def _sixth_den(a):
    one = np.ones_like(a)
    a2 = a * a
    return np.stack([one, 8 - 2 * a, 28 - 12 * a + a2, 56 - 30 * a + 4 * a2,
                     69 - 40 * a + 6 * a2, 48 - 28 * a + 4 * a2, 10 - 4 * a], axis=-1)


def _kim_reduced(a):
    return (1 - a, 4 + a, 4 + a)


def _cheby_reduced(a):
    return (6 * a - 3, -12 + 22 * a - 12 * a * a, -12 + 20 * a - 24 * a * a + 8 * a ** 3)


def _ermakov_reduced(a):
    a2 = a * a
    return (6 * (a - 1) * (a2 + 2 * a - 2), 8 * (a - 1) * (a2 + 6 * a - 6),
            a2 * a2 - 8 * a2 * a + 56 * a2 - 96 * a + 48)


def _sixth_reduced_cubic(a):
    a2 = a * a
    return (-15 + 6 * a, -94 + 63 * a - 11 * a2, -160 + 152 * a - 49 * a2 + 5 * a2 * a,
            -64 + 80 * a - 34 * a2 + 5 * a2 * a)


_EXPONENT = {
    FamilyKind.KIM4: 4,
    FamilyKind.CHEBYSHEV_MULTIPOINT: 3,
    FamilyKind.ERMAKOV_KALITKIN: 3,
    FamilyKind.SIXTH_ORDER: 6,
}

_DEN_GRID = {
    FamilyKind.KIM4: _kim_den,
    FamilyKind.CHEBYSHEV_MULTIPOINT: _cheby_den,
    FamilyKind.ERMAKOV_KALITKIN: _ermakov_den,
    FamilyKind.SIXTH_ORDER: _sixth_den,
}

_N_REPS = {
    FamilyKind.KIM4: 2,
    FamilyKind.CHEBYSHEV_MULTIPOINT: 2,
    FamilyKind.ERMAKOV_KALITKIN: 2,
    FamilyKind.SIXTH_ORDER: 3,
}


def family_exponent(kind: FamilyKind) -> int:
    return _EXPONENT[kind]


def representatives_count(kind: FamilyKind) -> int:
    return _N_REPS[kind]


def den_grid(kind: FamilyKind, a: np.ndarray) -> np.ndarray:
    """Per-pixel ascending denominator coefficients, shape (npix, k+1)."""
    return _DEN_GRID[kind](np.asarray(a, dtype=np.complex128))


def degenerate_mask(den2d: np.ndarray) -> np.ndarray:
    """Pixels whose constant or leading denominator coefficient vanishes (relative)."""
    mags = np.abs(den2d)
    cut = REL_TOL * mags.max(axis=-1)
    return (mags[..., 0] <= cut) | (mags[..., -1] <= cut)


def known_prefixed_factors(kind: FamilyKind, a: complex) -> list[Polynomial]:
    """Known divisors of the derivative numerator that carry no free dynamics
    (preimages of the fixed point 1)."""
    a = complex(a)
    if kind is FamilyKind.KIM4:
        return [Polynomial((1, 4, 6, 4, 1))]
    if kind is FamilyKind.CHEBYSHEV_MULTIPOINT:
        return [Polynomial((1, 2 - 2 * a, 1))]
    if kind is FamilyKind.ERMAKOV_KALITKIN:
        return []
    return [Polynomial((1, 4, 6, 4, 1)), Polynomial((-1, -2 + a, -1))]


def instantiate(family: FamilyId) -> NewtonLikeOperator:
    """Build the operator of a catalog family at its parameter."""
    den = den_grid(family.kind, np.array([family.a]))[0]
    try:
        return NewtonLikeOperator(_EXPONENT[family.kind], den.tolist())
    except DegenerateParameterError as exc:
        raise DegenerateParameterError(
            f"{family.kind.value} family is degenerate at a={family.a}") from exc


def _kim_closed(a: complex) -> list[complex]:
    s1 = cmath.sqrt(5 * a * (4 + a))
    inner_m = cmath.sqrt(10 * a * (6 - a) - 2 * (4 + a) * s1)
    inner_p = cmath.sqrt(10 * a * (6 - a) + 2 * (4 + a) * s1)
    d = 4 * (a - 1)
    return [(4 + a - s1 - inner_m) / d, (4 + a - s1 + inner_m) / d,
            (4 + a + s1 - inner_p) / d, (4 + a + s1 + inner_p) / d]


def _cheby_closed(a: complex) -> list[complex]:
    s1 = cmath.sqrt(1 + 36 * a - 12 * a * a)
    head = 6 - 11 * a + 6 * a * a
    body = 6 + 25 * a - 48 * a * a + 12 * a ** 3
    inner_m = cmath.sqrt(2 * a * (body - head * s1))
    inner_p = cmath.sqrt(2 * a * (body + head * s1))
    d = 6 * (-1 + 2 * a)
    return [(head - a * s1 - inner_m) / d, (head - a * s1 + inner_m) / d,
            (head + a * s1 - inner_p) / d, (head + a * s1 + inner_p) / d]


def _ermakov_closed(a: complex) -> list[complex]:
    s1 = cmath.sqrt(2 * (1 - a) * (26 - 26 * a + 3 * a * a))
    head = -6 + 6 * a + a * a
    body = 192 - 384 * a + 154 * a * a + 38 * a ** 3 + 3 * a ** 4
    inner_m = cmath.sqrt(2 * (1 - a) * (body - 4 * head * s1))
    inner_p = cmath.sqrt(2 * (1 - a) * (body + 4 * head * s1))
    d = 12 * (a - 1) * (-2 + 2 * a + a * a)
    lead = 4 * (1 - a) * head
    return [(lead - a * a * s1 - a * inner_m) / d, (lead - a * a * s1 + a * inner_m) / d,
            (lead + a * a * s1 - a * inner_p) / d, (lead + a * a * s1 + a * inner_p) / d]


def closed_form_criticals(family: FamilyId) -> CriticalSet:
    """Free critical points from the explicit radical formulas of each family
    (reduced-cubic roots lifted through z + 1/z for the sixth-order family)."""
    a = complex(family.a)
    den = den_grid(family.kind, np.array([a]))[0]
    if degenerate_mask(den[None, :])[0]:
        raise DegenerateParameterError(
            f"{family.kind.value} family is degenerate at a={a}")
    if family.kind is FamilyKind.KIM4:
        points = _kim_closed(a)
    elif family.kind is FamilyKind.CHEBYSHEV_MULTIPOINT:
        points = _cheby_closed(a)
    elif family.kind is FamilyKind.ERMAKOV_KALITKIN:
        points = _ermakov_closed(a)
    else:
        q3, q2, q1, q0 = _sixth_reduced_cubic(a)
        points = []
        for x in solve_cubic(q3, q2, q1, q0):
            points.extend(lift_root(x))
    return _build_critical_set(points)


# --------------------------------------------------------------------------
# vectorized per-pixel helpers for the renderer


def _quad_roots_grid(q2, q1, q0):
    with np.errstate(all="ignore"):
        s = np.sqrt(q1 * q1 - 4 * q2 * q0)
        s = np.where((np.conj(q1) * s).real < 0, -s, s)
        r = -(q1 + s) / 2
        safe = np.abs(r) > 0
        x1 = np.where(safe, r / np.where(np.abs(q2) > 0, q2, 1), 0)
        x2 = np.where(safe, q0 / np.where(safe, r, 1), 0)
    return x1, x2


def _cubic_roots_grid(q3, q2, q1, q0):
    with np.errstate(all="ignore"):
        p = q2 / q3
        q = q1 / q3
        r = q0 / q3
        big_p = q - p * p / 3
        big_q = 2 * p ** 3 / 27 - p * q / 3 + r
        sd = np.sqrt((big_q / 2) ** 2 + (big_p / 3) ** 3)
        u3a = -big_q / 2 + sd
        u3b = -big_q / 2 - sd
        u3 = np.where(np.abs(u3a) >= np.abs(u3b), u3a, u3b)
        u = u3 ** (1.0 / 3.0)
        w = complex(-0.5, math.sqrt(3) / 2)
        roots = []
        for k in range(3):
            uk = u * w ** k
            vk = np.where(np.abs(uk) > 0, -big_p / (3 * np.where(np.abs(uk) > 0, uk, 1)), 0)
            roots.append(uk + vk - p / 3)
    return roots


def _lift_grid(x):
    with np.errstate(all="ignore"):
        s = np.sqrt(x * x - 4)
        s = np.where((np.conj(x) * s).real < 0, -s, s)
        z = (x + s) / 2
        tie = (np.abs(np.abs(z) - 1.0) < 1e-12) & (z.imag < 0)
        z = np.where(tie, 1 / np.where(np.abs(z) > 0, z, 1), z)
    return z


def criticals_grid(kind: FamilyKind, a: np.ndarray) -> np.ndarray:
    """One symmetry representative per critical pair, per pixel: (npix, n_reps).

    Values at degenerate pixels are meaningless; callers mask them out.
    """
    a = np.asarray(a, dtype=np.complex128)
    if kind is FamilyKind.KIM4:
        x1, x2 = _quad_roots_grid(*_kim_reduced(a))
        xs = [x1, x2]
    elif kind is FamilyKind.CHEBYSHEV_MULTIPOINT:
        x1, x2 = _quad_roots_grid(*_cheby_reduced(a))
        xs = [x1, x2]
    elif kind is FamilyKind.ERMAKOV_KALITKIN:
        x1, x2 = _quad_roots_grid(*_ermakov_reduced(a))
        xs = [x1, x2]
    else:
        q3, q2, q1, q0 = _sixth_reduced_cubic(a)
        xs = _cubic_roots_grid(q3, q2, q1, q0)
    return np.stack([_lift_grid(x) for x in xs], axis=-1)


def multiplier_at_one_grid(kind: FamilyKind, a: np.ndarray) -> np.ndarray:
    """|O'(1)| ingredients vectorized: the derivative of each family member at
    the fixed point 1, as (n*S + num'(1) - den'(1)) / S with S the coefficient
    sum.  Pixels where 1 is a pole yield inf."""
    den2 = den_grid(kind, a)
    n = _EXPONENT[kind]
    idx = np.arange(den2.shape[-1])
    s = den2.sum(axis=-1)
    den_d1 = (idx * den2).sum(axis=-1)
    num_d1 = (idx * den2[..., ::-1]).sum(axis=-1)
    with np.errstate(all="ignore"):
        lam = np.where(np.abs(s) > 0, (n * s + num_d1 - den_d1) / np.where(np.abs(s) > 0, s, 1),
                       np.inf)
    return lam


def cheby_strange_multiplier_grid(a: np.ndarray) -> np.ndarray:
    """Smallest |O'| over the two strange fixed-point pairs of the Chebyshev
    variant (beyond z=1), vectorized per pixel.

    The strange quartic 1 + (5-4a)z + 4(2-2a+a^2)z^2 + (5-4a)z^3 + z^4 is
    palindromic; it reduces to x^2 + (5-4a)x + (6-8a+4a^2).  Each pair's
    multiplier is evaluated at the |z| <= 1 member (inverse pairs share
    multipliers).
    """
    a = np.asarray(a, dtype=np.complex128)
    one = np.ones_like(a)
    x1, x2 = _quad_roots_grid(one, 5 - 4 * a, 6 - 8 * a + 4 * a * a)
    den2 = _cheby_den(a)
    num2 = den2[..., ::-1]
    idx = np.arange(den2.shape[-1])

    def horner_rows(co, z):
        r = np.zeros_like(z)
        for i in range(co.shape[-1] - 1, -1, -1):
            r = r * z + co[..., i]
        return r

    num_d = num2[..., 1:] * idx[1:]
    den_d = den2[..., 1:] * idx[1:]
    best = np.full(a.shape, np.inf)
    with np.errstate(all="ignore"):
        for x in (x1, x2):
            zb = _lift_grid(x)
            z = 1.0 / np.where(np.abs(zb) > 0, zb, 1)  # |z| <= 1 member
            nv = horner_rows(num2, z)
            dv = horner_rows(den2, z)
            ndv = horner_rows(num_d, z)
            ddv = horner_rows(den_d, z)
            bracket = 3 * nv * dv + z * (ndv * dv - nv * ddv)
            lam = np.abs(z * z * bracket / (dv * dv))
            lam = np.where(np.isfinite(lam), lam, np.inf)
            best = np.minimum(best, lam)
    return best
