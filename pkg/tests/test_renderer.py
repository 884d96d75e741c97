import math

import numpy as np
import pytest

from rootplanes.dynamics import CycleVerdict, EscapeConfig, OrbitKind, classify_orbit
from rootplanes.operators import (
    FamilyId,
    FamilyKind,
    closed_form_criticals,
    instantiate,
)
from rootplanes.renderer import (
    DEFAULT_PALETTE,
    ParamCell,
    Window,
    colormap,
    gradient_position,
    render_capture_plane,
    render_dynamical_plane,
    render_parameter_plane,
    render_stability_map,
)

PAL = DEFAULT_PALETTE


def cell(n_free=2, n_conv=2, slowest=0, verdict=None, degenerate=False, a=0j):
    return ParamCell(a=a, n_free=n_free, n_converged=n_conv, slowest_iters=slowest,
                     verdict=verdict, degenerate=degenerate)


def window_centered(center: complex, half: float = 1e-3, res: int = 1) -> Window:
    return Window(center.real - half, center.real + half,
                  center.imag - half, center.imag + half, res, res)


class TestWindow:
    def test_pixel_centers(self):
        w = Window(-1.0, 1.0, -2.0, 2.0, 4, 4)
        assert w.param_at(0, 0) == complex(-0.75, 1.5)
        assert w.param_at(3, 3) == complex(0.75, -1.5)
        assert np.allclose(w.row_params(1), [complex(x, 0.5) for x in (-0.75, -0.25, 0.25, 0.75)])

    def test_row_matches_scalar(self):
        w = Window(-55, 85, -70, 70, 37, 23)
        row = w.row_params(11)
        for i in (0, 18, 36):
            assert row[i] == w.param_at(i, 11)

    def test_validation(self):
        with pytest.raises(ValueError):
            Window(1, 0, 0, 1, 4, 4)
        with pytest.raises(ValueError):
            Window(0, 1, 0, 1, 0, 4)

    def test_pixel_of_roundtrip(self):
        w = Window(-1.0, 1.0, -1.0, 1.0, 10, 10)
        assert w.pixel_of(w.param_at(3, 7)) == (3, 7)


class TestColormap:
    def test_fast_convergence_is_near_red(self):
        rgb = colormap(cell(slowest=1), PAL, EscapeConfig(max_iter=500))
        assert rgb[0] == 255 and rgb[2] == 0 and rgb[1] < 128

    def test_zero_converged_black(self):
        assert colormap(cell(n_conv=0), PAL, EscapeConfig()) == PAL.count_colors[0]

    def test_one_of_two_pink(self):
        assert colormap(cell(n_conv=1), PAL, EscapeConfig()) == PAL.count_colors[1]

    def test_counts_beyond_table(self):
        rgb = colormap(cell(n_free=6, n_conv=5), PAL, EscapeConfig())
        assert rgb == PAL.overflow_count

    def test_shift_promotes_one_short(self):
        shifted = colormap(cell(n_conv=1, slowest=9), PAL, EscapeConfig(), shift=True)
        full = colormap(cell(n_conv=2, slowest=9), PAL, EscapeConfig())
        assert shifted == full
        assert colormap(cell(n_conv=0), PAL, EscapeConfig(), shift=True) == PAL.count_colors[0]

    def test_degenerate_magenta(self):
        assert colormap(cell(degenerate=True), PAL, EscapeConfig()) == PAL.degenerate

    def test_capture_verdicts(self):
        assert colormap(cell(n_conv=0, verdict=CycleVerdict.DISJOINT), PAL,
                        EscapeConfig()) == PAL.disjoint
        assert colormap(cell(n_conv=0, verdict=CycleVerdict.CAPTURE), PAL,
                        EscapeConfig()) == PAL.unresolved
        assert colormap(cell(n_conv=0, verdict=CycleVerdict.INCONCLUSIVE), PAL,
                        EscapeConfig()) == PAL.unresolved

    def test_gradient_monotone(self):
        t = gradient_position(np.arange(0, 501), 500)
        assert np.all(np.diff(t) >= 0)
        assert t[0] == 0.0 and t[-1] == 1.0

    def test_gradient_endpoints(self):
        near_white = colormap(cell(slowest=500), PAL, EscapeConfig(max_iter=500))
        assert near_white == (255, 255, 255)


class TestParameterPlane:
    def test_deterministic_across_workers(self):
        win = Window(-55, 85, -70, 70, 48, 36)
        cfg = EscapeConfig(max_iter=60)
        grid1, img1 = render_parameter_plane(FamilyKind.KIM4, win, cfg, workers=1)
        grid3, img3 = render_parameter_plane(FamilyKind.KIM4, win, cfg, workers=3)
        assert img1.to_bytes() == img3.to_bytes()
        assert np.array_equal(grid1.n_converged, grid3.n_converged)
        assert np.array_equal(grid1.slowest, grid3.slowest)

    def test_counts_match_scalar_dynamics(self):
        win = Window(-35, -25, -1, 9, 5, 5)
        cfg = EscapeConfig(max_iter=300)
        grid, _ = render_parameter_plane(FamilyKind.KIM4, win, cfg, workers=2)
        for (i, j) in ((0, 0), (2, 2), (4, 1), (3, 4)):
            a = win.param_at(i, j)
            fid = FamilyId(FamilyKind.KIM4, a)
            op = instantiate(fid)
            reps = closed_form_criticals(fid).representatives
            outs = [classify_orbit(op, c, cfg) for c in reps]
            want = sum(o.converged_to_root for o in outs)
            assert grid.cell(i, j).n_converged == want

    def test_degenerate_pixel_marked(self):
        win = window_centered(1 + 0j)  # kim degenerate parameter
        grid, img = render_parameter_plane(FamilyKind.KIM4, win, EscapeConfig(max_iter=50))
        assert grid.cell(0, 0).degenerate
        assert tuple(img.pixels[0, 0]) == PAL.degenerate

    def test_shift_coloring_applies(self):
        # ermakov: the parabolic-bound orbit never converges, so shift shows
        # the gradient where one of two orbits reaches the roots
        win = window_centered(-7 + 0j)
        cfg = EscapeConfig(max_iter=400)
        grid_p, img_plain = render_parameter_plane(FamilyKind.ERMAKOV_KALITKIN, win, cfg)
        _, img_shift = render_parameter_plane(FamilyKind.ERMAKOV_KALITKIN, win, cfg,
                                              shift=True)
        assert grid_p.cell(0, 0).n_converged == 1
        assert tuple(img_plain.pixels[0, 0]) == PAL.count_colors[1]
        expected = colormap(grid_p.cell(0, 0), PAL, cfg, shift=True)
        assert tuple(img_shift.pixels[0, 0]) == expected
        assert expected not in (PAL.count_colors[1], PAL.count_colors[0])

    def test_oracle_check_mode(self):
        win = Window(-3, 3, -3, 3, 10, 10)
        render_parameter_plane(FamilyKind.CHEBYSHEV_MULTIPOINT, win,
                               EscapeConfig(max_iter=40), oracle_check=True)

    def test_partner_criticals_give_same_grid(self):
        # iterating 1/c instead of c leaves counts and times unchanged
        from rootplanes import _kernels
        from rootplanes.operators import criticals_grid, degenerate_mask, den_grid
        win = Window(-35, -25, -1, 9, 8, 1)
        a = win.row_params(0)
        den2 = np.ascontiguousarray(den_grid(FamilyKind.KIM4, a))
        num2 = np.ascontiguousarray(den2[:, ::-1])
        valid = ~degenerate_mask(den2)
        crit = np.ascontiguousarray(criticals_grid(FamilyKind.KIM4, a))
        out = []
        for seeds in (crit, 1.0 / crit):
            nc = np.empty(8, np.int16)
            sl = np.empty(8, np.int32)
            _kernels.param_block(np.ascontiguousarray(seeds), num2, den2, valid,
                                 4, 1e4, 300, nc, sl)
            out.append((nc.copy(), sl.copy()))
        assert np.array_equal(out[0][0], out[1][0])
        assert np.array_equal(out[0][1], out[1][1])


class TestCapturePlane:
    def test_verdict_pixels(self):
        cfg = EscapeConfig(max_iter=500)
        grid, img = render_capture_plane(FamilyKind.CHEBYSHEV_MULTIPOINT,
                                         window_centered(1.7 + 0j), cfg)
        assert grid.cell(0, 0).verdict is CycleVerdict.DISJOINT
        assert tuple(img.pixels[0, 0]) == PAL.disjoint
        grid, img = render_capture_plane(FamilyKind.CHEBYSHEV_MULTIPOINT,
                                         window_centered(1.45 + 0j), cfg)
        assert grid.cell(0, 0).verdict is CycleVerdict.CAPTURE
        assert tuple(img.pixels[0, 0]) == PAL.unresolved

    def test_all_converged_keeps_gradient(self):
        cfg = EscapeConfig(max_iter=500)
        grid, img = render_capture_plane(FamilyKind.CHEBYSHEV_MULTIPOINT,
                                         window_centered(2j), cfg)
        c = grid.cell(0, 0)
        assert c.n_converged == 2 and c.verdict is None
        assert tuple(img.pixels[0, 0]) == colormap(c, PAL, cfg)

    def test_needs_two_representatives(self):
        with pytest.raises(ValueError):
            render_capture_plane(FamilyKind.SIXTH_ORDER, window_centered(4 + 0j),
                                 EscapeConfig(max_iter=50))

    def test_deterministic_across_workers(self):
        win = Window(1.25, 2.75, -0.75, 0.75, 6, 6)
        cfg = EscapeConfig(max_iter=120)
        g1, i1 = render_capture_plane(FamilyKind.CHEBYSHEV_MULTIPOINT, win, cfg,
                                      workers=1, refine=2000, cycle_window=50)
        g2, i2 = render_capture_plane(FamilyKind.CHEBYSHEV_MULTIPOINT, win, cfg,
                                      workers=3, refine=2000, cycle_window=50)
        assert i1.to_bytes() == i2.to_bytes()
        assert np.array_equal(g1.verdict, g2.verdict)


class TestDynamicalPlane:
    def test_root_basins_and_markers(self):
        fid = FamilyId(FamilyKind.KIM4, -2)
        op = instantiate(fid)
        crits = closed_form_criticals(fid)
        win = Window(-3, 2, -2.5, 2.5, 100, 100)
        cfg = EscapeConfig(max_iter=500)
        img = render_dynamical_plane(op, win, cfg, criticals=crits)
        for c in crits.full:
            out = classify_orbit(op, c, cfg, targets=[1])
            assert out.converged_to_root
            i, j = win.pixel_of(c)
            assert tuple(img.pixels[j, i]) == PAL.marker

    def test_target_basin_colored(self):
        fid = FamilyId(FamilyKind.KIM4, 84)
        op = instantiate(fid)
        crits = closed_form_criticals(fid)
        c = crits.representatives[0]
        win = Window(c.real - 0.02, c.real + 0.02, c.imag - 0.02, c.imag + 0.02, 9, 9)
        img = render_dynamical_plane(op, win, EscapeConfig(max_iter=2000), criticals=crits)
        # the critical marker fills the 5x5 center; corners are basin pixels
        for (i, j) in ((0, 0), (8, 0), (0, 8), (8, 8)):
            assert tuple(img.pixels[j, i]) == PAL.target_basin

    def test_nonconverged_black(self):
        # ermakov parabolic-bound critical: neighborhood stays black
        fid = FamilyId(FamilyKind.ERMAKOV_KALITKIN, -7)
        op = instantiate(fid)
        reps = closed_form_criticals(fid).representatives
        cfg = EscapeConfig(max_iter=2000, target_tol=1e-3)
        outs = [classify_orbit(op, c, cfg, targets=[1, -1]) for c in reps]
        root_hits = [o for o in outs if o.converged_to_root]
        assert len(root_hits) == 1
        other = next(o for o in outs if not o.converged_to_root)
        assert other.kind in (OrbitKind.NON_CONVERGED, OrbitKind.TO_TARGET)
        bound = next(c for c, o in zip(reps, outs) if not o.converged_to_root)
        win = Window(bound.real - 0.01, bound.real + 0.01,
                     bound.imag - 0.01, bound.imag + 0.01, 5, 5)
        img = render_dynamical_plane(op, win, cfg, criticals=None, targets=(1,))
        assert tuple(img.pixels[0, 0]) == PAL.unresolved

    def test_symmetry_of_classifications(self, rng):
        fid = FamilyId(FamilyKind.KIM4, -2)
        op = instantiate(fid)
        cfg = EscapeConfig(max_iter=300)
        checked = 0
        while checked < 25:
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if not 0.05 < abs(z) < 20 or abs(abs(z) - 1) < 1e-3:
                continue
            a_out = classify_orbit(op, z, cfg)
            b_out = classify_orbit(op, 1 / z, cfg)
            swap = {OrbitKind.TO_ZERO: OrbitKind.TO_INFINITY,
                    OrbitKind.TO_INFINITY: OrbitKind.TO_ZERO,
                    OrbitKind.NON_CONVERGED: OrbitKind.NON_CONVERGED}
            assert b_out.kind is swap[a_out.kind] and b_out.iterations == a_out.iterations
            checked += 1

    def test_deterministic_across_workers(self):
        op = instantiate(FamilyId(FamilyKind.KIM4, -2))
        win = Window(-3, 2, -2.5, 2.5, 40, 40)
        cfg = EscapeConfig(max_iter=100)
        img1 = render_dynamical_plane(op, win, cfg, workers=1)
        img2 = render_dynamical_plane(op, win, cfg, workers=4)
        assert img1.to_bytes() == img2.to_bytes()


class TestStabilityMap:
    def test_kim_circle_boundary(self):
        win = Window(-60, 100, -80, 80, 160, 160)
        img = render_stability_map(FamilyKind.KIM4, win)
        green = np.all(img.pixels == np.array(PAL.stable_fixed, np.uint8), axis=-1)
        dx = (win.xmax - win.xmin) / win.width
        dy = (win.ymax - win.ymin) / win.height
        diag = math.hypot(dx, dy)
        for j in range(win.height):
            for i in range(win.width):
                a = win.param_at(i, j)
                dist = abs(abs(a - 16) - 64)
                if dist > 1.5 * diag:
                    assert green[j, i] == (abs(a - 16) > 64)

    def test_cheby_regions(self):
        img = render_stability_map(FamilyKind.CHEBYSHEV_MULTIPOINT,
                                   window_centered(2 + 1.5j))
        assert tuple(img.pixels[0, 0]) == PAL.stable_strange
        img = render_stability_map(FamilyKind.CHEBYSHEV_MULTIPOINT,
                                   window_centered(1.7 + 0j))
        assert tuple(img.pixels[0, 0]) == PAL.stable_fixed
        img = render_stability_map(FamilyKind.CHEBYSHEV_MULTIPOINT,
                                   window_centered(2j))
        assert tuple(img.pixels[0, 0]) == PAL.neutral

    def test_degenerate_magenta(self):
        img = render_stability_map(FamilyKind.KIM4, window_centered(1 + 0j))
        assert tuple(img.pixels[0, 0]) == PAL.degenerate

    def test_deterministic_across_workers(self):
        win = Window(-27, 13, -20, 20, 30, 30)
        img1 = render_stability_map(FamilyKind.ERMAKOV_KALITKIN, win, workers=1)
        img2 = render_stability_map(FamilyKind.ERMAKOV_KALITKIN, win, workers=3)
        assert img1.to_bytes() == img2.to_bytes()
