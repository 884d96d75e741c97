"""Parameter-plane and dynamical-plane renderer for symmetric Newton-like
root-finding operators on quadratic polynomials."""

from .dynamics import CycleVerdict, EscapeConfig, OrbitKind, OrbitOutcome, \
    classify_orbit, same_cycle, slowest_convergence
from .operators import (
    CriticalSet,
    FamilyId,
    FamilyKind,
    FixedPointInfo,
    NewtonLikeOperator,
    StabilityClass,
    closed_form_criticals,
    derivative_numerator,
    fixed_points,
    free_critical_points,
    instantiate,
    known_prefixed_factors,
    multiplier,
    strange_fixed_points,
)
from .polyalgebra import (
    Polynomial,
    RootClassification,
    RootGroupKind,
    classify_palindromic_roots,
    is_antipalindromic,
    is_palindromic,
    lift_root,
    poly_derivative,
    poly_mul,
    reciprocal,
    reduce_palindromic,
    solve_cubic,
    solve_poly_oracle,
    solve_quadratic,
)
from .renderer import (
    DEFAULT_PALETTE,
    Palette,
    ParamCell,
    ParamGrid,
    RasterImage,
    Window,
    colormap,
    render_capture_plane,
    render_dynamical_plane,
    render_parameter_plane,
    render_stability_map,
)

__version__ = "0.1.0"
