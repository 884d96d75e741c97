"""Pixel sweeps: parameter planes, capture planes, dynamical planes, stability maps.

A parameter plane iterates every symmetry-representative critical orbit of the
family member at each pixel simultaneously.  When all of them reach the roots
the pixel gets a gradient color keyed to the slowest convergence time (so no
per-root bookkeeping is needed and square-root branch flips in the critical
point formulas cannot produce spurious lines); otherwise the pixel gets a
count color for how many orbits did converge.

Every sweep is data-parallel over rows with write-once disjoint output slots,
so rendered bytes are identical for any worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dynamics import CycleVerdict, EscapeConfig
from .operators import (
    CriticalSet,
    FamilyId,
    FamilyKind,
    NewtonLikeOperator,
    cheby_strange_multiplier_grid,
    criticals_grid,
    degenerate_mask,
    den_grid,
    derivative_numerator,
    family_exponent,
    instantiate,
    known_prefixed_factors,
    multiplier_at_one_grid,
    representatives_count,
)
from .polyalgebra import poly_divmod, solve_poly_oracle

RGB = tuple[int, int, int]


@dataclass(frozen=True)
class Window:
    """Axis-aligned view rectangle sampled at pixel centers, row 0 on top."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    width: int
    height: int

    def __post_init__(self) -> None:
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("window bounds must satisfy xmin < xmax and ymin < ymax")
        if self.width < 1 or self.height < 1:
            raise ValueError("resolution must be positive")

    def param_at(self, i: int, j: int) -> complex:
        x = self.xmin + (i + 0.5) * (self.xmax - self.xmin) / self.width
        y = self.ymax - (j + 0.5) * (self.ymax - self.ymin) / self.height
        return complex(x, y)

    def row_params(self, j: int) -> np.ndarray:
        x = self.xmin + (np.arange(self.width) + 0.5) * (self.xmax - self.xmin) / self.width
        y = self.ymax - (j + 0.5) * (self.ymax - self.ymin) / self.height
        return x + 1j * y

    def pixel_of(self, z: complex) -> tuple[int, int]:
        """Nearest pixel (i, j) to a complex point (may fall outside the raster)."""
        i = round((z.real - self.xmin) / (self.xmax - self.xmin) * self.width - 0.5)
        j = round((self.ymax - z.imag) / (self.ymax - self.ymin) * self.height - 0.5)
        return int(i), int(j)


@dataclass(frozen=True)
class Palette:
    """Fixed color constants; the originals are qualitative so these are our picks."""

    gradient: tuple[RGB, ...] = ((255, 0, 0), (255, 255, 0), (170, 255, 170),
                                 (0, 0, 255), (255, 255, 255))
    count_colors: tuple[RGB, ...] = ((0, 0, 0), (255, 105, 180), (0, 100, 0),
                                     (255, 165, 0))
    overflow_count: RGB = (128, 128, 128)
    degenerate: RGB = (255, 0, 255)
    target_basin: RGB = (0, 100, 0)
    unresolved: RGB = (0, 0, 0)
    disjoint: RGB = (0, 0, 255)
    stable_fixed: RGB = (0, 170, 0)
    stable_strange: RGB = (220, 40, 40)
    neutral: RGB = (255, 255, 255)
    marker: RGB = (255, 255, 255)

    def count_color(self, k: int) -> RGB:
        return self.count_colors[k] if k < len(self.count_colors) else self.overflow_count


DEFAULT_PALETTE = Palette()


@dataclass(frozen=True)
class ParamCell:
    a: complex
    n_free: int
    n_converged: int
    slowest_iters: int
    verdict: CycleVerdict | None
    degenerate: bool


@dataclass
class ParamGrid:
    """Per-pixel classification results of a parameter sweep."""

    window: Window
    n_free: int
    n_converged: np.ndarray
    slowest: np.ndarray
    verdict: np.ndarray | None
    degenerate: np.ndarray
    max_iter: int

    def cell(self, i: int, j: int) -> ParamCell:
        degen = bool(self.degenerate[j, i])
        verdict = None
        if self.verdict is not None and not degen:
            verdict = _VERDICT_FROM_CODE.get(int(self.verdict[j, i]))
        return ParamCell(
            a=self.window.param_at(i, j),
            n_free=self.n_free,
            n_converged=0 if degen else int(self.n_converged[j, i]),
            slowest_iters=0 if degen else int(self.slowest[j, i]),
            verdict=verdict,
            degenerate=degen,
        )


_VERDICT_FROM_CODE = {
    _kernels.VERDICT_CAPTURE: CycleVerdict.CAPTURE,
    _kernels.VERDICT_DISJOINT: CycleVerdict.DISJOINT,
    _kernels.VERDICT_INCONCLUSIVE: CycleVerdict.INCONCLUSIVE,
}


@dataclass
class RasterImage:
    """Row-major RGB8 raster, top row first."""

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def to_bytes(self) -> bytes:
        return np.ascontiguousarray(self.pixels).tobytes()


@dataclass
class RenderStats:
    pixels: int = 0
    converged: int = 0


def gradient_position(iters, max_iter: int):
    """Gradient parameter t = log(1+iters)/log(1+max_iter), clamped to [0, 1].

    Log scaling keeps contrast at the low iteration counts where basin
    boundaries live.
    """
    t = np.log1p(np.asarray(iters, dtype=np.float64)) / np.log1p(float(max_iter))
    return np.clip(t, 0.0, 1.0)


def _gradient_rgb(t: np.ndarray, palette: Palette) -> np.ndarray:
    anchors = np.asarray(palette.gradient, dtype=np.float64)
    pos = np.linspace(0.0, 1.0, len(anchors))
    out = np.empty(t.shape + (3,), dtype=np.uint8)
    for ch in range(3):
        out[..., ch] = np.rint(np.interp(t, pos, anchors[:, ch])).astype(np.uint8)
    return out


def _cell_colors(n_free: int, n_conv: np.ndarray, slowest: np.ndarray,
                 degenerate: np.ndarray, verdict: np.ndarray | None,
                 palette: Palette, max_iter: int, shift: bool) -> np.ndarray:
    n_conv = np.asarray(n_conv)
    lut = np.asarray(list(palette.count_colors) + [palette.overflow_count], dtype=np.uint8)
    colors = lut[np.clip(n_conv, 0, len(palette.count_colors))]
    grad = _gradient_rgb(gradient_position(slowest, max_iter), palette)
    grad_mask = n_conv == n_free
    if shift:
        grad_mask |= n_conv == n_free - 1
    colors[grad_mask] = grad[grad_mask]
    if verdict is not None:
        colors[(n_conv == 0) & (verdict == _kernels.VERDICT_DISJOINT)] = palette.disjoint
        colors[(n_conv == 0) & (verdict != _kernels.VERDICT_DISJOINT)] = palette.unresolved
    colors[degenerate] = palette.degenerate
    return colors


def colormap(cell: ParamCell, palette: Palette, cfg: EscapeConfig,
             shift: bool = False) -> RGB:
    """Color of one parameter cell (pure; vector path applied to a single cell)."""
    verdict_arr = None
    if cell.verdict is not None:
        code = {CycleVerdict.CAPTURE: _kernels.VERDICT_CAPTURE,
                CycleVerdict.DISJOINT: _kernels.VERDICT_DISJOINT,
                CycleVerdict.INCONCLUSIVE: _kernels.VERDICT_INCONCLUSIVE}[cell.verdict]
        verdict_arr = np.array([code], dtype=np.int8)
    rgb = _cell_colors(cell.n_free, np.array([cell.n_converged]),
                       np.array([cell.slowest_iters]), np.array([cell.degenerate]),
                       verdict_arr, palette, cfg.max_iter, shift)[0]
    return (int(rgb[0]), int(rgb[1]), int(rgb[2]))


def _run_rows(height: int, workers: int, fn) -> None:
    if workers <= 0:
        workers = os.cpu_count() or 1
    if workers == 1 or height == 1:
        for j in range(height):
            fn(j)
        return
    with ThreadPoolExecutor(max_workers=workers) as ex:
        for _ in ex.map(fn, range(height)):
            pass


def _oracle_check_row(kind: FamilyKind, a_row: np.ndarray, crit: np.ndarray,
                      valid: np.ndarray, j: int, stride: int = 100) -> None:
    """Validate closed-form critical points against the root-finding oracle on
    a deterministic 1% pixel sample of the row."""
    for i in range(len(a_row)):
        if (i + j) % stride or not valid[i]:
            continue
        a = complex(a_row[i])
        op = instantiate(FamilyId(kind, a))
        rest = derivative_numerator(op)
        for factor in known_prefixed_factors(kind, a):
            rest, _rem = poly_divmod(rest, factor)
        roots = solve_poly_oracle(rest.trimmed())
        for rep in crit[i]:
            rep = complex(rep)
            ok = any(min(abs(rep - r), abs(rep - 1 / r) if r != 0 else np.inf)
                     <= 1e-8 * (1 + abs(rep)) for r in roots)
            if not ok:
                raise ArithmeticError(
                    f"oracle check failed at pixel ({i}, {j}), a={a}: "
                    f"closed-form critical {rep} not among oracle roots")


def render_parameter_plane(kind: FamilyKind, window: Window, cfg: EscapeConfig,
                           palette: Palette = DEFAULT_PALETTE, shift: bool = False,
                           workers: int = 0, oracle_check: bool = False
                           ) -> tuple[ParamGrid, RasterImage]:
    """Joint parameter plane: every critical orbit of every pixel, one sweep.

    With shift=True (useful when one critical pair is structurally bound, e.g.
    to a parabolic point, so at most n_free-1 orbits can ever reach the roots)
    the gradient is also used when exactly one orbit short of all converged.
    """
    h, w = window.height, window.width
    n = family_exponent(kind)
    nreps = representatives_count(kind)
    n_conv = np.empty((h, w), np.int16)
    slowest = np.empty((h, w), np.int32)
    degen = np.empty((h, w), bool)
    colors = np.empty((h, w, 3), np.uint8)

    def do_row(j: int) -> None:
        a = window.row_params(j)
        den2 = den_grid(kind, a)
        dmask = degenerate_mask(den2)
        valid = ~dmask
        crit = np.ascontiguousarray(criticals_grid(kind, a))
        crit[dmask] = 0
        nc = np.empty(w, np.int16)
        sl = np.empty(w, np.int32)
        _kernels.param_block(crit, np.ascontiguousarray(den2[:, ::-1]),
                             np.ascontiguousarray(den2), valid, n,
                             cfg.esc, cfg.max_iter, nc, sl)
        if oracle_check:
            _oracle_check_row(kind, a, crit, valid, j)
        n_conv[j] = nc
        slowest[j] = sl
        degen[j] = dmask
        colors[j] = _cell_colors(nreps, nc, sl, dmask, None, palette, cfg.max_iter, shift)

    _run_rows(h, workers, do_row)
    grid = ParamGrid(window, nreps, n_conv, slowest, None, degen, cfg.max_iter)
    return grid, RasterImage(w, h, colors)


def render_capture_plane(kind: FamilyKind, window: Window, cfg: EscapeConfig,
                         palette: Palette = DEFAULT_PALETTE, workers: int = 0,
                         oracle_check: bool = False,
                         refine: int = 10000, cycle_window: int = 100,
                         cycle_tol: float = 1e-6) -> tuple[ParamGrid, RasterImage]:
    """Parameter plane distinguishing capture from disjoint parameters.

    Where neither critical orbit reaches the roots, the two orbits are
    compared: black if they land on the same (or symmetric) cycle, blue if on
    different cycles.
    """
    if representatives_count(kind) != 2:
        raise ValueError("capture planes need a family with exactly 2 critical representatives")
    h, w = window.height, window.width
    n = family_exponent(kind)
    n_conv = np.empty((h, w), np.int16)
    slowest = np.empty((h, w), np.int32)
    verdict = np.empty((h, w), np.int8)
    degen = np.empty((h, w), bool)
    colors = np.empty((h, w, 3), np.uint8)

    def do_row(j: int) -> None:
        a = window.row_params(j)
        den2 = den_grid(kind, a)
        dmask = degenerate_mask(den2)
        valid = ~dmask
        crit = np.ascontiguousarray(criticals_grid(kind, a))
        crit[dmask] = 0
        nc = np.empty(w, np.int16)
        sl = np.empty(w, np.int32)
        vd = np.empty(w, np.int8)
        _kernels.capture_block(crit, np.ascontiguousarray(den2[:, ::-1]),
                               np.ascontiguousarray(den2), valid, n,
                               cfg.esc, cfg.max_iter, refine, cycle_window,
                               cycle_tol, nc, sl, vd)
        if oracle_check:
            _oracle_check_row(kind, a, crit, valid, j)
        n_conv[j] = nc
        slowest[j] = sl
        verdict[j] = vd
        degen[j] = dmask
        colors[j] = _cell_colors(2, nc, sl, dmask, vd, palette, cfg.max_iter, False)

    _run_rows(h, workers, do_row)
    grid = ParamGrid(window, 2, n_conv, slowest, verdict, degen, cfg.max_iter)
    return grid, RasterImage(w, h, colors)


def _dyn_colors(kinds: np.ndarray, iters: np.ndarray, targets: np.ndarray,
                palette: Palette, max_iter: int) -> np.ndarray:
    colors = np.empty(kinds.shape + (3,), np.uint8)
    colors[:] = palette.unresolved
    root = (kinds == _kernels.KIND_TO_ZERO) | (kinds == _kernels.KIND_TO_INFINITY)
    grad = _gradient_rgb(gradient_position(iters, max_iter), palette)
    colors[root] = grad[root]
    for idx, t in enumerate(targets):
        mask = kinds == _kernels.KIND_TARGET_BASE + idx
        if abs(t - 1.0) < 1e-12:
            colors[mask] = palette.target_basin
        else:
            colors[mask] = palette.unresolved
    return colors


def _render_dynamical(op: NewtonLikeOperator, window: Window, cfg: EscapeConfig,
                      palette: Palette, criticals: CriticalSet | None,
                      targets=(1.0 + 0j,), workers: int = 0
                      ) -> tuple[RasterImage, RenderStats]:
    h, w = window.height, window.width
    t_arr = np.asarray([complex(t) for t in targets], dtype=np.complex128)
    colors = np.empty((h, w, 3), np.uint8)
    stats_rows = np.zeros(h, np.int64)

    def do_row(j: int) -> None:
        seeds = np.ascontiguousarray(window.row_params(j))
        kinds = np.empty(w, np.int8)
        iters = np.empty(w, np.int32)
        _kernels.dyn_block(seeds, op.n, op._num_arr, op._den_arr, cfg.esc,
                           t_arr, cfg.target_tol, cfg.max_iter, kinds, iters)
        colors[j] = _dyn_colors(kinds, iters, t_arr, palette, cfg.max_iter)
        stats_rows[j] = int(((kinds == _kernels.KIND_TO_ZERO)
                             | (kinds == _kernels.KIND_TO_INFINITY)).sum())

    _run_rows(h, workers, do_row)
    if criticals is not None:
        for c in criticals.full:
            _draw_marker(colors, window, c, palette.marker)
    img = RasterImage(w, h, colors)
    return img, RenderStats(pixels=h * w, converged=int(stats_rows.sum()))


def render_dynamical_plane(op: NewtonLikeOperator, window: Window, cfg: EscapeConfig,
                           palette: Palette = DEFAULT_PALETTE,
                           criticals: CriticalSet | None = None,
                           targets=(1.0 + 0j,), workers: int = 0) -> RasterImage:
    """Phase plane of one operator: gradient for root basins keyed to escape
    time, dark green for the basin of the fixed point 1, black otherwise, with
    5x5 white squares marking the free critical points."""
    img, _stats = _render_dynamical(op, window, cfg, palette, criticals, targets, workers)
    return img


def _draw_marker(colors: np.ndarray, window: Window, c: complex, rgb: RGB,
                 half: int = 2) -> None:
    i, j = window.pixel_of(c)
    h, w = colors.shape[:2]
    if i < -half or i >= w + half or j < -half or j >= h + half:
        return
    i0, i1 = max(0, i - half), min(w, i + half + 1)
    j0, j1 = max(0, j - half), min(h, j + half + 1)
    if i0 < i1 and j0 < j1:
        colors[j0:j1, i0:i1] = rgb


def _render_stability(kind: FamilyKind, window: Window,
                      palette: Palette = DEFAULT_PALETTE, workers: int = 0
                      ) -> tuple[RasterImage, RenderStats]:
    h, w = window.height, window.width
    colors = np.empty((h, w, 3), np.uint8)
    stats_rows = np.zeros(h, np.int64)

    def do_row(j: int) -> None:
        a = window.row_params(j)
        den2 = den_grid(kind, a)
        dmask = degenerate_mask(den2)
        lam = multiplier_at_one_grid(kind, a)
        with np.errstate(all="ignore"):
            green = np.abs(lam) < 1.0
        green &= np.isfinite(lam)
        row = np.empty((w, 3), np.uint8)
        row[:] = palette.neutral
        if kind is FamilyKind.CHEBYSHEV_MULTIPOINT:
            red = cheby_strange_multiplier_grid(a) < 1.0
            row[red] = palette.stable_strange
        row[green] = palette.stable_fixed
        row[dmask] = palette.degenerate
        colors[j] = row
        stats_rows[j] = int(green.sum())

    _run_rows(h, workers, do_row)
    return RasterImage(w, h, colors), RenderStats(pixels=h * w, converged=int(stats_rows.sum()))


def render_stability_map(kind: FamilyKind, window: Window,
                         palette: Palette = DEFAULT_PALETTE,
                         workers: int = 0) -> RasterImage:
    """Stability of the strange fixed point 1 over the parameter window: green
    where it attracts, red where a strange fixed-point pair attracts instead
    (Chebyshev variant only), white otherwise, magenta at degenerate parameters."""
    img, _stats = _render_stability(kind, window, palette, workers)
    return img
