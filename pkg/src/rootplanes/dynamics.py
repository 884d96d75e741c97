"""Orbit iteration with the symmetric stop criterion and cycle comparison.

Convergence to the roots is detected with |z| < eps for 0 and |z| > esc for
infinity, with eps locked to 1/esc: the operators commute with z -> 1/z, so a
critical orbit and its mirror cross their respective thresholds on the same
iterate, making counts independent of which pair member is iterated.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .operators import NewtonLikeOperator


@dataclass(frozen=True)
class EscapeConfig:
    """Stop thresholds and iteration budget.

    eps is derived as 1/esc and cannot be set independently; target_tol is the
    absolute radius for extra point targets (e.g. the fixed point 1).
    """

    esc: float = 1e4
    max_iter: int = 500
    target_tol: float = 1e-6

    def __post_init__(self) -> None:
        if not (1.0 < self.esc < 1e140):
            raise ValueError("esc must lie in (1, 1e140)")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.target_tol <= 0:
            raise ValueError("target_tol must be positive")

    @property
    def eps(self) -> float:
        return 1.0 / self.esc


class OrbitKind(Enum):
    TO_ZERO = "to_zero"
    TO_INFINITY = "to_infinity"
    TO_TARGET = "to_target"
    NON_CONVERGED = "non_converged"


@dataclass(frozen=True)
class OrbitOutcome:
    """Destination of one critical orbit and the iterate at which it was decided.

    iterations is the index of the first stop check that held (0 when the seed
    already satisfies it); non-converged orbits carry iterations == max_iter.
    """

    kind: OrbitKind
    iterations: int
    target: complex | None = None

    @property
    def converged_to_root(self) -> bool:
        return self.kind in (OrbitKind.TO_ZERO, OrbitKind.TO_INFINITY)


class CycleVerdict(Enum):
    CAPTURE = "capture"
    DISJOINT = "disjoint"
    INCONCLUSIVE = "inconclusive"


_VERDICT_FROM_CODE = {
    _kernels.VERDICT_CAPTURE: CycleVerdict.CAPTURE,
    _kernels.VERDICT_DISJOINT: CycleVerdict.DISJOINT,
    _kernels.VERDICT_INCONCLUSIVE: CycleVerdict.INCONCLUSIVE,
}


def classify_orbit(op: NewtonLikeOperator, z0: complex, cfg: EscapeConfig,
                   targets=()) -> OrbitOutcome:
    """Iterate z0 and report where the orbit lands.

    Checks run before each application of the operator, in fixed order: root
    at 0, root at infinity, then each extra target.  Non-finite intermediates
    count as convergence to infinity (they only arise from pole hits).
    """
    t_arr = np.asarray([complex(t) for t in targets], dtype=np.complex128)
    kind, iters = _kernels.classify(complex(z0), op.n, op._num_arr, op._den_arr,
                                    cfg.esc, t_arr, cfg.target_tol, cfg.max_iter)
    if kind == _kernels.KIND_TO_ZERO:
        return OrbitOutcome(OrbitKind.TO_ZERO, iters)
    if kind == _kernels.KIND_TO_INFINITY:
        return OrbitOutcome(OrbitKind.TO_INFINITY, iters)
    if kind >= _kernels.KIND_TARGET_BASE:
        return OrbitOutcome(OrbitKind.TO_TARGET, iters,
                            complex(t_arr[kind - _kernels.KIND_TARGET_BASE]))
    return OrbitOutcome(OrbitKind.NON_CONVERGED, iters)


def slowest_convergence(outcomes) -> tuple[bool, int, int]:
    """(all_converged, count, slowest iteration) over root-converging outcomes.

    Only convergence to 0 or infinity counts; target hits do not.
    """
    outcomes = list(outcomes)
    if not outcomes:
        raise ValueError("outcomes must be non-empty")
    converged = [o for o in outcomes if o.converged_to_root]
    slowest = max((o.iterations for o in converged), default=0)
    return (len(converged) == len(outcomes), len(converged), slowest)


def same_cycle(op: NewtonLikeOperator, c1: complex, c3: complex,
               refine: int = 10000, window: int = 100,
               tol: float = 1e-6) -> CycleVerdict:
    """Do two non-root-converging critical orbits land on the same cycle?

    c1 is refined by `refine` iterations; the next `window` iterates of the
    refined c1-orbit and of the independently refined (1/c1)-orbit are stored;
    c3 is refined the same way and the verdict is capture iff its endpoint
    lies within tol of either stored window (so symmetric cycles count as
    one).  Cycles of period >= window are not detectable; non-finite refined
    values give an inconclusive verdict.
    """
    code = _kernels.same_cycle(complex(c1), complex(c3), op.n,
                               op._num_arr, op._den_arr,
                               int(refine), int(window), float(tol))
    return _VERDICT_FROM_CODE[code]
