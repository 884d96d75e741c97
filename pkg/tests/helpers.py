"""Shared test utilities: symmetry-aware set matching and parameter sampling."""
import math
from itertools import permutations

from rootplanes import FamilyKind

# parameters where each family's operator collapses (leading/trailing
# denominator coefficient vanishes)
DEGENERATE_POINTS = {
    FamilyKind.KIM4: (1.0 + 0j,),
    FamilyKind.CHEBYSHEV_MULTIPOINT: (0.5 + 0j,),
    FamilyKind.ERMAKOV_KALITKIN: (1.0 + 0j, complex(-1 + math.sqrt(3)), complex(-1 - math.sqrt(3))),
    FamilyKind.SIXTH_ORDER: (2.5 + 0j,),
}


def sym_dist(a: complex, b: complex) -> float:
    """Distance between points identified modulo z -> 1/z."""
    d = abs(a - b)
    if b != 0:
        d = min(d, abs(a - 1 / b))
    return d


def sym_hausdorff(a_set, b_set) -> float:
    """Two-sided Hausdorff distance of point sets modulo z -> 1/z."""
    worst = 0.0
    for a in a_set:
        worst = max(worst, min(sym_dist(a, b) for b in b_set))
    for b in b_set:
        worst = max(worst, min(sym_dist(b, a) for a in a_set))
    return worst


def pairing_max_dist(a_set, b_set, symmetric: bool = False) -> float:
    """Best one-to-one pairing: the max pair distance.

    Exact (brute force) for n <= 6; greedy global-minimum matching beyond
    that, which is exact whenever the sets are well separated relative to the
    matching error.
    """
    assert len(a_set) == len(b_set)
    dist = sym_dist if symmetric else (lambda a, b: abs(a - b))
    n = len(a_set)
    if n <= 6:
        best = math.inf
        for perm in permutations(range(n)):
            worst = max(dist(a, b_set[perm[i]]) for i, a in enumerate(a_set))
            best = min(best, worst)
        return best
    remaining_a = list(range(n))
    remaining_b = list(range(n))
    worst = 0.0
    while remaining_a:
        pair = min(((dist(a_set[i], b_set[j]), i, j)
                    for i in remaining_a for j in remaining_b))
        worst = max(worst, pair[0])
        remaining_a.remove(pair[1])
        remaining_b.remove(pair[2])
    return worst


def random_params(rng, kind: FamilyKind, count: int, box=(-5.0, 5.0, -5.0, 5.0),
                  min_sep: float = 0.1):
    """Random complex parameters inside box, kept away from degenerate points."""
    out = []
    bad = DEGENERATE_POINTS[kind]
    while len(out) < count:
        a = complex(rng.uniform(box[0], box[1]), rng.uniform(box[2], box[3]))
        if all(abs(a - d) >= min_sep for d in bad):
            out.append(a)
    return out
