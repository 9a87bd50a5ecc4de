"""Fractional Fourier transforms of two-photon transverse states.

Submodules: ``frft`` (transform engine), ``gaussian`` (closed-form
double-Gaussian moments), ``twophoton`` (sampled states, densities, slit
scans), ``optics`` (ray-matrix lens designs), ``analysis`` (fits and
variance tables) and ``cli``.
"""
from .errors import (
    BiphotonError,
    ConfigError,
    DegenerateGeometry,
    DegenerateOrder,
    FitDegenerate,
    GridInadequate,
    GridTooCoarse,
    NoSolution,
    NotAnFrft,
    NumericError,
    OrderOutOfRange,
    OutOfGrid,
    SingularConditioning,
)
from .frft import (
    ComplexField1D,
    FrftOrder,
    JointAmplitude,
    SampledAxis,
    frft_1d,
    hermite_gauss,
    joint_frft,
    kernel_amplitude,
    kernel_value,
)
from .gaussian import (
    BiphotonMoments,
    CorrelationKind,
    DoubleGaussianParams,
    conditional_variance,
    epr_product,
    initial_moments,
    no_correlation_beta,
    position_correlation,
    propagate_moments,
)
from .twophoton import (
    ConditionalProfile,
    JointDensity,
    PumpSincParams,
    analytic_density,
    build_double_gaussian,
    build_pump_sinc,
    conditional_profile,
    joint_density,
)
from .optics import (
    FreeSpace,
    OpticalSystem,
    RayMatrix,
    ThinLens,
    compose,
    free_space_frft,
    match_frft,
    scale_per_meter,
    type1_design,
)
from .analysis import (
    TABLE_SCENARIOS,
    GaussianFit,
    epr_from_variances,
    fit_gaussian,
    scenario_density,
    variance_table,
)

__version__ = "0.1.0"
