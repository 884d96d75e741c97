"""Complex polynomial arithmetic with reciprocal/palindromic structure.

Coefficients are stored in ascending degree order everywhere: ``coeffs[i]``
multiplies ``z**i``.  Reversing the coefficient vector gives the reciprocal
polynomial, and a polynomial equal to its own reciprocal is palindromic.
Palindromic polynomials of even degree 2m can be rewritten as
``z**m * q(z + 1/z)`` with ``deg q = m``; :func:`reduce_palindromic` computes
``q`` and :func:`lift_root` inverts the substitution.  Root solvers cover the
closed forms up to degree three plus a simultaneous-iteration oracle
(Durand-Kerner) used to cross-check every closed formula.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

ZERO_THRESHOLD = 1e-12


class NotPalindromicError(ValueError):
    """Input expected to be palindromic failed the symmetry test."""


class OddDegreeError(ValueError):
    """Even degree required (odd palindromics must have z+1 divided out first)."""


class DegenerateLeadingError(ValueError):
    """Leading coefficient is (numerically) zero."""


class NonRealCoefficientsError(ValueError):
    """Real coefficients required."""


class NoConvergenceError(ArithmeticError):
    """Iterative root solver did not reach its residual bound."""


@dataclass(init=False, eq=True)
class Polynomial:
    """Dense complex polynomial, constant term first.

    >>> Polynomial([1, 0, 1])(1j)
    0j
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs):
        cs = tuple(complex(c) for c in coeffs)
        if not cs:
            raise ValueError("polynomial needs at least one coefficient")
        self.coeffs = cs

    @property
    def maxmag(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def degree(self, zero_threshold: float = ZERO_THRESHOLD) -> int:
        """Degree after stripping trailing coefficients below the relative threshold."""
        cut = zero_threshold * self.maxmag
        for i in range(len(self.coeffs) - 1, -1, -1):
            if abs(self.coeffs[i]) > cut:
                return i
        return 0

    def trimmed(self, zero_threshold: float = ZERO_THRESHOLD) -> "Polynomial":
        return Polynomial(self.coeffs[: self.degree(zero_threshold) + 1])

    def __call__(self, z: complex) -> complex:
        r = 0j
        for c in reversed(self.coeffs):
            r = r * z + c
        return r

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return Polynomial(tuple(complex(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def shifted(self, k: int = 1) -> "Polynomial":
        """Multiply by z**k."""
        return Polynomial((0j,) * k + self.coeffs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.complex128)


def reciprocal(p: Polynomial) -> Polynomial:
    """Reverse the raw coefficient vector (trailing zeros are preserved)."""
    return Polynomial(p.coeffs[::-1])


def is_palindromic(p: Polynomial, tol: float = 1e-10) -> bool:
    """True iff coeffs[i] == coeffs[n-i] within tol * max coefficient magnitude."""
    c, m = p.coeffs, p.maxmag
    return all(abs(c[i] - c[-1 - i]) <= tol * m for i in range(len(c)))


def is_antipalindromic(p: Polynomial, tol: float = 1e-10) -> bool:
    """True iff coeffs[i] == -coeffs[n-i] within tol * max coefficient magnitude."""
    c, m = p.coeffs, p.maxmag
    return all(abs(c[i] + c[-1 - i]) <= tol * m for i in range(len(c)))


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Coefficient convolution."""
    out = [0j] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Polynomial(out)


def poly_derivative(p: Polynomial) -> Polynomial:
    """Formal derivative; the derivative of a constant is [0]."""
    if len(p.coeffs) == 1:
        return Polynomial((0j,))
    return Polynomial(tuple((i + 1) * c for i, c in enumerate(p.coeffs[1:])))


def poly_divmod(p: Polynomial, d: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Quotient and remainder of p / d (d taken at its trimmed degree)."""
    dc = d.trimmed().coeffs
    if abs(dc[-1]) == 0.0:
        raise DegenerateLeadingError("division by (numerically) zero polynomial")
    rem = list(p.coeffs)
    if len(rem) < len(dc):
        return Polynomial((0j,)), Polynomial(rem)
    quo = [0j] * (len(rem) - len(dc) + 1)
    for i in range(len(quo) - 1, -1, -1):
        t = rem[i + len(dc) - 1] / dc[-1]
        quo[i] = t
        for j, dj in enumerate(dc):
            rem[i + j] -= t * dj
    return Polynomial(quo), Polynomial(rem[: len(dc) - 1] or [0j])


def reduce_palindromic(p: Polynomial) -> Polynomial:
    """Degree-halving substitution x = z + 1/z for an even palindromic polynomial.

    Returns q of degree m with ``z**m * q(z + 1/z) == p(z)``.  Coefficients are
    peeled from the top: for j = m..0 the z**(m+j) coefficient of the running
    remainder becomes q_j and ``q_j * z**(m-j) * (z**2+1)**j`` is subtracted.
    The final remainder doubles as a palindromicity check.
    """
    t = p.trimmed()
    deg = len(t.coeffs) - 1
    if deg % 2:
        raise OddDegreeError(f"degree {deg} polynomial cannot be reduced; divide out z+1 first")
    m = deg // 2
    rem = list(t.coeffs)
    q = [0j] * (m + 1)
    for j in range(m, -1, -1):
        qj = rem[m + j]
        q[j] = qj
        if qj != 0:
            for k in range(j + 1):
                rem[m - j + 2 * k] -= qj * math.comb(j, k)
    residual = max(abs(c) for c in rem)
    if residual > 1e-10 * max(t.maxmag, 1e-300):
        raise NotPalindromicError(f"reduction residual {residual:.3e} exceeds tolerance")
    return Polynomial(q)


def lift_root(x: complex) -> tuple[complex, complex]:
    """The two roots (z, 1/z) of z**2 - x*z + 1 = 0, larger-magnitude member first.

    The sign of the square root is chosen so the first root is computed without
    cancellation; ties on the unit circle are broken toward nonnegative
    imaginary part.  x = +/-2 yields the double root +/-1 returned twice.
    """
    x = complex(x)
    s = cmath.sqrt(x * x - 4)
    if (x.conjugate() * s).real < 0:
        s = -s
    z = (x + s) / 2
    if z == 0:
        # only reachable for non-finite x; keep the contract total
        return (complex("inf"), 0j)
    if abs(abs(z) - 1.0) < 1e-12 and z.imag < 0:
        z = 1 / z
    return (z, 1 / z)


def _sorted_roots(roots) -> list[complex]:
    return sorted(roots, key=lambda r: (r.real, r.imag))


def solve_quadratic(a2: complex, a1: complex, a0: complex) -> list[complex]:
    """Both roots of a2 x^2 + a1 x + a0, via the cancellation-free variant.

    The larger-magnitude root is computed with the sign choice that avoids
    subtractive cancellation; the other follows from the root product a0/a2.
    """
    a2, a1, a0 = complex(a2), complex(a1), complex(a0)
    if abs(a2) < ZERO_THRESHOLD * max(abs(a2), abs(a1), abs(a0), 1e-300):
        raise DegenerateLeadingError("quadratic leading coefficient is numerically zero")
    s = cmath.sqrt(a1 * a1 - 4 * a2 * a0)
    if (a1.conjugate() * s).real < 0:
        s = -s
    r = -(a1 + s) / 2
    if r == 0:
        return [0j, 0j]
    return _sorted_roots([r / a2, a0 / r])


def solve_cubic(a3: complex, a2: complex, a1: complex, a0: complex) -> list[complex]:
    """Three roots of a3 x^3 + ... + a0 by Cardano's method in complex arithmetic."""
    a3, a2, a1, a0 = complex(a3), complex(a2), complex(a1), complex(a0)
    scale = max(abs(a3), abs(a2), abs(a1), abs(a0), 1e-300)
    if abs(a3) < ZERO_THRESHOLD * scale:
        raise DegenerateLeadingError("cubic leading coefficient is numerically zero")
    p, q, r = a2 / a3, a1 / a3, a0 / a3
    big_p = q - p * p / 3
    big_q = 2 * p ** 3 / 27 - p * q / 3 + r
    sd = cmath.sqrt((big_q / 2) ** 2 + (big_p / 3) ** 3)
    u3a, u3b = -big_q / 2 + sd, -big_q / 2 - sd
    u3 = u3a if abs(u3a) >= abs(u3b) else u3b
    u = u3 ** (1 / 3) if u3 != 0 else 0j
    w = complex(-0.5, math.sqrt(3) / 2)
    roots = []
    for k in range(3):
        uk = u * w ** k
        vk = -big_p / (3 * uk) if uk != 0 else 0j
        roots.append(uk + vk - p / 3)
    for x in roots:
        res = abs(((a3 * x + a2) * x + a1) * x + a0)
        if res > 1e-10 * scale * max(1.0, abs(x)) ** 3:
            raise NoConvergenceError(f"cubic residual {res:.3e} at root {x}")
    return _sorted_roots(roots)


def solve_poly_oracle(p: Polynomial, max_sweeps: int = 1000) -> list[complex]:
    """All roots with multiplicity by Durand-Kerner simultaneous iteration.

    Brute-force oracle: initial guesses on a perturbed circle of Cauchy-bound
    radius, sweeps until the largest relative step drops below 1e-13 or the
    sweep limit is hit, then every residual must satisfy |p(root)| < 1e-8 times
    the largest input coefficient magnitude.
    """
    t = p.trimmed()
    deg = len(t.coeffs) - 1
    if deg < 1:
        raise DegenerateLeadingError("oracle needs degree >= 1 after trimming")
    mon = [c / t.coeffs[-1] for c in t.coeffs]
    radius = 1.0 + max(abs(c) for c in mon[:-1])
    zs = [radius * cmath.exp(1j * (2 * math.pi * k / deg + 0.4)) for k in range(deg)]
    for _ in range(max_sweeps):
        max_step = 0.0
        for i in range(deg):
            d = 1 + 0j
            for j in range(deg):
                if j != i:
                    d *= zs[i] - zs[j]
            if d == 0:
                d = 1e-20 + 0j
            val = 0j
            for c in reversed(mon):
                val = val * zs[i] + c
            step = val / d
            zs[i] -= step
            max_step = max(max_step, abs(step) / (1.0 + abs(zs[i])))
        if max_step < 1e-13:
            break
    bound = 1e-8 * p.maxmag
    bad = [(z, abs(t(z))) for z in zs if abs(t(z)) > bound]
    if bad:
        detail = ", ".join(f"|p({z:.6g})|={r:.3e}" for z, r in bad[:4])
        raise NoConvergenceError(f"residuals above {bound:.3e}: {detail}")
    return _sorted_roots(zs)


class RootGroupKind(Enum):
    INVERSE_REAL_PAIR = "inverse_real_pair"
    UNIT_CIRCLE_CONJUGATE_PAIR = "unit_circle_conjugate_pair"
    QUARTIC_QUADRUPLE = "quartic_quadruple"


@dataclass(frozen=True)
class RootClassification:
    """One symmetry-closed group of roots of a real palindromic polynomial."""

    kind: RootGroupKind
    roots: tuple[complex, ...]


def _solve_by_degree(q: Polynomial) -> list[complex]:
    c = q.trimmed().coeffs
    m = len(c) - 1
    if m == 0:
        return []
    if m == 1:
        return [-c[0] / c[1]]
    if m == 2:
        return solve_quadratic(c[2], c[1], c[0])
    if m == 3:
        return solve_cubic(c[3], c[2], c[1], c[0])
    return solve_poly_oracle(q)


def classify_palindromic_roots(p: Polynomial, tol: float = 1e-8) -> list[RootClassification]:
    """Partition the roots of a real even palindromic polynomial into symmetry groups.

    Each real reduced root x with |x| >= 2 lifts to a pair of inverse real
    roots; |x| < 2 lifts to a conjugate pair on the unit circle; conjugate
    pairs of complex reduced roots lift to quadruples closed under both
    z -> 1/z and conjugation.
    """
    if max(abs(c.imag) for c in p.coeffs) > 1e-10 * max(p.maxmag, 1e-300):
        raise NonRealCoefficientsError("real coefficients required")
    q = reduce_palindromic(p)
    xs = _solve_by_degree(q)
    groups: list[RootClassification] = []
    used = [False] * len(xs)
    for i, x in enumerate(xs):
        if used[i]:
            continue
        used[i] = True
        if abs(x.imag) <= tol * (1 + abs(x)):
            xr = complex(x.real, 0.0)
            pair = lift_root(xr)
            kind = (RootGroupKind.INVERSE_REAL_PAIR if abs(xr.real) >= 2
                    else RootGroupKind.UNIT_CIRCLE_CONJUGATE_PAIR)
            groups.append(RootClassification(kind, pair))
            continue
        partner = None
        for j in range(i + 1, len(xs)):
            if not used[j] and abs(xs[j] - x.conjugate()) <= tol * (1 + abs(x)):
                partner = j
                break
        if partner is None:
            raise NonRealCoefficientsError(f"no conjugate partner for reduced root {x}")
        used[partner] = True
        quad = lift_root(x) + lift_root(xs[partner])
        groups.append(RootClassification(RootGroupKind.QUARTIC_QUADRUPLE, quad))
    return groups
