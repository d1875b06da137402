"""Toolkit for twin-beam squeezing noise: covariance simulation,
closed-form modeling, parameter inversion, and curve generation."""

from .circuit import (
    CircuitSpec,
    Diagnostic,
    Loss,
    MeasureJoint,
    MeasureSingle,
    Mix,
    ParseResult,
    Squeeze2,
    apply_overrides,
    evaluate,
    parse,
    render,
    render_element,
)
from .estimate import (
    EstimateResult,
    EstimateSummary,
    InsufficientDataError,
    MeasurementPoint,
    aggregate,
    epsilon_scan,
    invert_point,
)
from .gaussian import (
    GaussianState,
    ModeLabel,
    apply_loss,
    apply_two_mode_squeeze,
    apply_visibility_mixer,
    joint_quadrature_variance,
    quadrature_variance,
    symplectic_form,
    vacuum,
)
from .measurements import (
    MeasurementFormatError,
    RowProblem,
    load_measurements,
)
from .model import (
    ModelParams,
    NoiseQuartet,
    antisqueezed_noise,
    conjugate_noise,
    from_db,
    gain_from_dc,
    noise_quartet,
    probe_noise,
    squeezed_noise,
    to_db,
    visibility,
)
from .sweeps import (
    FamilyCurve,
    SweepResult,
    SweepSpec,
    locate_minimum,
    sweep,
    visibility_family,
)

__version__ = "0.1.0"
