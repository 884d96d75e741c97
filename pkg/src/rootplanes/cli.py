"""Command-line front end: build a render job, sweep, write PPM/CSV outputs.

Output formats are chosen for byte-exactness: binary PPM (P6) for images and
plain CSV for classification grids, so identical jobs produce identical files
on any platform and with any worker count.  Exit codes: 0 success, 1 usage or
validation error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .dynamics import CycleVerdict, EscapeConfig
from .operators import FamilyId, FamilyKind, closed_form_criticals, instantiate, \
    representatives_count
from .renderer import (
    DEFAULT_PALETTE,
    Palette,
    ParamGrid,
    RasterImage,
    Window,
    _render_dynamical,
    _render_stability,
    render_capture_plane,
    render_parameter_plane,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

_FAMILIES = {k.value: k for k in FamilyKind}
_MODES = ("param", "capture", "dyn", "stability")


class UsageError(ValueError):
    """Unknown or malformed command-line flag."""


class ValidationError(ValueError):
    """Flags are individually well-formed but inconsistent for the job."""


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException) -> None:
        super().__init__(f"{stage}: {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        # values like "-55,85,-70,70" must parse as values, not flags
        self._negative_number_matcher = re.compile(r"^-(\d|\.\d)")

    def error(self, message: str) -> None:  # argparse would sys.exit(2)
        raise UsageError(message)


def _parse_window(text: str, res: str) -> Window:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValidationError(f"--window expects xmin,xmax,ymin,ymax, got {text!r}")
    try:
        xmin, xmax, ymin, ymax = (float(p) for p in parts)
    except ValueError as exc:
        raise ValidationError(f"--window: {exc}") from exc
    wh = res.lower().split("x")
    if len(wh) != 2:
        raise ValidationError(f"--res expects WxH, got {res!r}")
    try:
        width, height = int(wh[0]), int(wh[1])
    except ValueError as exc:
        raise ValidationError(f"--res: {exc}") from exc
    try:
        return Window(xmin, xmax, ymin, ymax, width, height)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError(f"--param expects re,im, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ValidationError(f"--param: {exc}") from exc


@dataclass
class RenderJob:
    mode: str
    family: FamilyKind
    window: Window
    cfg: EscapeConfig
    palette: Palette
    shift: bool
    out: Path
    grid_out: Path | None
    workers: int
    oracle_check: bool
    param: complex | None = None


def parse_args(argv) -> RenderJob:
    p = _Parser(prog="rootplanes", allow_abbrev=False,
                description="Render parameter/dynamical planes of Newton-like "
                            "root-finding operators on quadratics.")
    p.add_argument("--mode", required=True, choices=_MODES)
    p.add_argument("--family", required=True, choices=sorted(_FAMILIES))
    p.add_argument("--window", required=True, help="xmin,xmax,ymin,ymax")
    p.add_argument("--res", default="1000x1000", help="WxH pixels (default 1000x1000)")
    p.add_argument("--max-iter", type=int, default=None,
                   help="iteration budget (default 500; 2000 for dyn mode)")
    p.add_argument("--esc", type=float, default=1e4,
                   help="escape radius for the root at infinity; 1/esc detects the root at 0")
    p.add_argument("--param", default=None, help="re,im of the family parameter (dyn mode)")
    p.add_argument("--shift", action="store_true",
                   help="also use the gradient when all but one critical orbit converge")
    p.add_argument("--out", required=True, help="output image path (binary PPM)")
    p.add_argument("--grid-out", default=None, help="per-pixel classification CSV path")
    p.add_argument("--threads", type=int, default=0, help="worker count (0 = auto)")
    p.add_argument("--oracle-check", action="store_true",
                   help="cross-check closed-form critical points against the root "
                        "oracle on a 1%% pixel sample")
    ns = p.parse_args(list(argv))

    mode = ns.mode
    family = _FAMILIES[ns.family]
    window = _parse_window(ns.window, ns.res)
    max_iter = ns.max_iter if ns.max_iter is not None else (2000 if mode == "dyn" else 500)
    try:
        cfg = EscapeConfig(esc=ns.esc, max_iter=max_iter)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc

    param = None
    if mode == "dyn":
        if ns.param is None:
            raise ValidationError("dyn mode requires --param re,im")
        param = _parse_complex(ns.param)
    elif ns.param is not None:
        raise ValidationError(f"--param is only valid in dyn mode, not {mode}")
    if ns.shift and mode != "param":
        raise ValidationError("--shift is only valid in param mode")
    if ns.grid_out is not None and mode not in ("param", "capture"):
        raise ValidationError(f"--grid-out is only valid in param/capture modes, not {mode}")
    if mode == "capture" and representatives_count(family) != 2:
        raise ValidationError(
            f"capture mode needs a family with exactly 2 critical representatives; "
            f"{ns.family} has {representatives_count(family)}")
    if ns.threads < 0:
        raise ValidationError("--threads must be >= 0")

    return RenderJob(mode=mode, family=family, window=window, cfg=cfg,
                     palette=DEFAULT_PALETTE, shift=ns.shift, out=Path(ns.out),
                     grid_out=Path(ns.grid_out) if ns.grid_out else None,
                     workers=ns.threads, oracle_check=ns.oracle_check, param=param)


def write_ppm(img: RasterImage, path) -> None:
    """Binary portable pixmap; header is exactly 'P6\\n{w} {h}\\n255\\n'."""
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(img.to_bytes())


_VERDICT_NAMES = {None: "none", CycleVerdict.CAPTURE: "capture",
                  CycleVerdict.DISJOINT: "disjoint",
                  CycleVerdict.INCONCLUSIVE: "none"}


def write_grid_csv(grid: ParamGrid, path) -> None:
    """Row-major per-pixel CSV: re,im,n_free,n_converged,slowest_iters,verdict,degenerate.

    Floats carry 17 significant digits; degenerate cells leave the numeric
    fields empty.
    """
    with open(path, "w", newline="\n") as fh:
        fh.write("re,im,n_free,n_converged,slowest_iters,verdict,degenerate\n")
        for j in range(grid.window.height):
            for i in range(grid.window.width):
                cell = grid.cell(i, j)
                re, im = f"{cell.a.real:.17g}", f"{cell.a.imag:.17g}"
                if cell.degenerate:
                    fh.write(f"{re},{im},,,,none,true\n")
                else:
                    fh.write(f"{re},{im},{cell.n_free},{cell.n_converged},"
                             f"{cell.slowest_iters},{_VERDICT_NAMES[cell.verdict]},false\n")


def run(job: RenderJob) -> int:
    """Execute a validated job: render, write outputs, print a one-line summary."""
    t0 = time.perf_counter()
    grid = None
    stage = "render"
    try:
        if job.mode == "param":
            grid, img = render_parameter_plane(
                job.family, job.window, job.cfg, job.palette, shift=job.shift,
                workers=job.workers, oracle_check=job.oracle_check)
        elif job.mode == "capture":
            grid, img = render_capture_plane(
                job.family, job.window, job.cfg, job.palette,
                workers=job.workers, oracle_check=job.oracle_check)
        elif job.mode == "dyn":
            fid = FamilyId(job.family, job.param)
            op = instantiate(fid)
            crits = closed_form_criticals(fid)
            img, stats = _render_dynamical(op, job.window, job.cfg, job.palette,
                                           crits, workers=job.workers)
        else:
            img, stats = _render_stability(job.family, job.window, job.palette,
                                           workers=job.workers)
        if grid is not None:
            valid = ~grid.degenerate
            pixels = int(valid.size)
            converged = int((grid.n_converged[valid] == grid.n_free).sum())
        else:
            pixels, converged = stats.pixels, stats.converged
        stage = "write-image"
        write_ppm(img, job.out)
        if job.grid_out is not None:
            stage = "write-grid"
            write_grid_csv(grid, job.grid_out)
    except (UsageError, ValidationError):
        raise
    except Exception as exc:
        raise StageError(stage, exc) from exc
    wall = time.perf_counter() - t0
    pct = 100.0 * converged / pixels if pixels else 0.0
    print(f"{job.mode} {job.family.value}: {pixels} pixels in {wall:.2f}s, "
          f"{pct:.1f}% converged -> {job.out}")
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        job = parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return run(job)
    except StageError as exc:
        print(f"error during {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - unexpected
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
