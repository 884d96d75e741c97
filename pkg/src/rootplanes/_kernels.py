"""Compiled orbit-iteration kernels shared by `dynamics` and `renderer`.

Single source of truth for operator evaluation and the escape-time stop
criterion: the scalar API in `dynamics` and the pixel sweeps in `renderer`
both call these functions, so classifications agree exactly and rendered
output is byte-identical regardless of worker count.

Operators are passed as (n, num, den) with ascending complex128 coefficient
arrays, num being the reversal of den.  Evaluation uses Horner directly for
|z| <= 1 and the exact reciprocal symmetry O(z) = 1/O(1/z) otherwise, so no
intermediate overflows occur; poles and non-finite values map to infinity.
"""
import numpy as np
from numba import njit

KIND_NONCONVERGED = -1
KIND_TO_ZERO = 0
KIND_TO_INFINITY = 1
KIND_TARGET_BASE = 2

VERDICT_NONE = 0
VERDICT_CAPTURE = 1
VERDICT_DISJOINT = 2
VERDICT_INCONCLUSIVE = 3

_INF = complex(np.inf, 0.0)


@njit(cache=True, nogil=True, inline="always")
def op_eval(z, n, num, den):
    az2 = z.real * z.real + z.imag * z.imag
    if np.isnan(az2) or az2 == np.inf:
        return _INF
    if az2 <= 1.0:
        nv = num[len(num) - 1]
        for i in range(len(num) - 2, -1, -1):
            nv = nv * z + num[i]
        dv = den[len(den) - 1]
        for i in range(len(den) - 2, -1, -1):
            dv = dv * z + den[i]
        if abs(dv) < 1e-300:
            return _INF
        zn = complex(1.0, 0.0)
        for _ in range(n):
            zn = zn * z
        return zn * nv / dv
    w = 1.0 / z
    nv = num[len(num) - 1]
    for i in range(len(num) - 2, -1, -1):
        nv = nv * w + num[i]
    dv = den[len(den) - 1]
    for i in range(len(den) - 2, -1, -1):
        dv = dv * w + den[i]
    wn = complex(1.0, 0.0)
    for _ in range(n):
        wn = wn * w
    t = wn * nv
    if abs(t) < 1e-300:
        return _INF
    return dv / t


@njit(cache=True, nogil=True)
def classify(z0, n, num, den, esc, targets, target_tol, max_iter):
    """Escape-time classification of one orbit.

    Stop checks run before each application of the operator, in fixed order:
    |z| < 1/esc, |z| > esc, then each extra target.  Returns (kind, iterations)
    with kind = KIND_TARGET_BASE + index for target hits.
    """
    eps = 1.0 / esc
    eps2 = eps * eps
    esc2 = esc * esc
    tol2 = target_tol * target_tol
    z = z0
    for i in range(max_iter):
        az2 = z.real * z.real + z.imag * z.imag
        if np.isnan(az2) or az2 == np.inf:
            return KIND_TO_INFINITY, i
        if az2 < eps2:
            return KIND_TO_ZERO, i
        if az2 > esc2:
            return KIND_TO_INFINITY, i
        for t in range(len(targets)):
            dr = z.real - targets[t].real
            di = z.imag - targets[t].imag
            if dr * dr + di * di < tol2:
                return KIND_TARGET_BASE + t, i
        z = op_eval(z, n, num, den)
    return KIND_NONCONVERGED, max_iter


@njit(cache=True, nogil=True)
def iterate(z, n, num, den, steps):
    for _ in range(steps):
        z = op_eval(z, n, num, den)
    return z


@njit(cache=True, nogil=True)
def orbit_window(z, n, num, den, out):
    """Fill out with the iterates following z (out[0] = O(z), ...)."""
    for i in range(len(out)):
        z = op_eval(z, n, num, den)
        out[i] = z
    return z


@njit(cache=True, nogil=True)
def same_cycle(c1, c3, n, num, den, refine, window, tol):
    """Cycle-capture comparison between two non-root-converging critical orbits.

    Refines c1 by `refine` iterations and records the next `window` iterates of
    both the refined c1-orbit and the independently refined (1/c1)-orbit, then
    refines c3 and reports capture iff its endpoint lands within tol of either
    window.  Only cycles of period < window are detectable.
    """
    z1 = iterate(c1, n, num, den, refine)
    w1 = np.empty(window, dtype=np.complex128)
    orbit_window(z1, n, num, den, w1)
    z2 = iterate(1.0 / c1, n, num, den, refine)
    w2 = np.empty(window, dtype=np.complex128)
    orbit_window(z2, n, num, den, w2)
    z3 = iterate(c3, n, num, den, refine)
    if not (np.isfinite(z3.real) and np.isfinite(z3.imag)):
        return VERDICT_INCONCLUSIVE
    for i in range(window):
        if not (np.isfinite(w1[i].real) and np.isfinite(w1[i].imag)):
            return VERDICT_INCONCLUSIVE
        if not (np.isfinite(w2[i].real) and np.isfinite(w2[i].imag)):
            return VERDICT_INCONCLUSIVE
    best = np.inf
    for i in range(window):
        d1 = abs(z3 - w1[i])
        if d1 < best:
            best = d1
        d2 = abs(z3 - w2[i])
        if d2 < best:
            best = d2
    if best < tol:
        return VERDICT_CAPTURE
    return VERDICT_DISJOINT


@njit(cache=True, nogil=True)
def param_block(crit, num2, den2, valid, n, esc, max_iter, n_conv, slowest):
    """Classify every critical orbit of a block of per-pixel operators.

    crit: (npix, m) critical seeds; num2/den2: (npix, k+1) coefficients.
    Writes the count of root-converging orbits and the slowest convergence
    time (0 if none converged); invalid pixels get n_conv = -1.
    """
    targets = np.empty(0, dtype=np.complex128)
    npix, m = crit.shape
    for p in range(npix):
        if not valid[p]:
            n_conv[p] = -1
            slowest[p] = 0
            continue
        cnt = 0
        slow = 0
        for c in range(m):
            kind, it = classify(crit[p, c], n, num2[p], den2[p], esc, targets, 1e-6, max_iter)
            if kind == KIND_TO_ZERO or kind == KIND_TO_INFINITY:
                cnt += 1
                if it > slow:
                    slow = it
        n_conv[p] = cnt
        slowest[p] = slow


@njit(cache=True, nogil=True)
def capture_block(crit, num2, den2, valid, n, esc, max_iter, refine, window, tol,
                  n_conv, slowest, verdict):
    """param_block plus the capture/disjoint comparison where nothing converged."""
    param_block(crit, num2, den2, valid, n, esc, max_iter, n_conv, slowest)
    npix = crit.shape[0]
    for p in range(npix):
        if n_conv[p] == 0:
            verdict[p] = same_cycle(crit[p, 0], crit[p, 1], n, num2[p], den2[p],
                                    refine, window, tol)
        else:
            verdict[p] = VERDICT_NONE


@njit(cache=True, nogil=True)
def dyn_block(seeds, n, num, den, esc, targets, target_tol, max_iter, kinds, iters):
    """Classify a block of phase-plane seeds under one fixed operator."""
    for p in range(len(seeds)):
        k, it = classify(seeds[p], n, num, den, esc, targets, target_tol, max_iter)
        kinds[p] = k
        iters[p] = it


def warmup():
    """Trigger compilation of every kernel on tiny inputs."""
    num = np.array([0.5, 1.0], dtype=np.complex128)
    den = num[::-1].copy()
    targets = np.array([1.0 + 0j], dtype=np.complex128)
    classify(0.3 + 0.1j, 2, num, den, 1e4, targets, 1e-6, 5)
    iterate(0.3 + 0.1j, 2, num, den, 3)
    orbit_window(0.3 + 0.1j, 2, num, den, np.empty(2, dtype=np.complex128))
    same_cycle(0.3 + 0.1j, 0.4 + 0.1j, 2, num, den, 5, 3, 1e-6)
    crit = np.array([[0.3 + 0.1j, 0.4 - 0.2j]], dtype=np.complex128)
    num2 = np.array([num]); den2 = np.array([den])
    valid = np.array([True])
    n_conv = np.empty(1, np.int16); slowest = np.empty(1, np.int32)
    param_block(crit, num2, den2, valid, 2, 1e4, 5, n_conv, slowest)
    verdict = np.empty(1, np.int8)
    capture_block(crit, num2, den2, valid, 2, 1e4, 5, 5, 3, 1e-6,
                  n_conv, slowest, verdict)
    kinds = np.empty(1, np.int8); iters = np.empty(1, np.int32)
    dyn_block(np.array([0.3 + 0.1j]), 2, num, den, 1e4, targets, 1e-6, 5, kinds, iters)
