"""Capture into autoresonance in two weakly coupled oscillators.

Simulation of the primary resonance equations, construction of their
algebraic asymptotic expansions, linear stability along each family, the
elliptic envelope analysis near the bounded solution, and the capture
threshold experiments.
"""

from .asymptotics import (
    AsymptoticSeries,
    DegenerateThresholdError,
    SeriesFamily,
    StageError,
    ThresholdError,
    adjoint_null,
    bounded_series,
    build_stage_matrix,
    eval_series,
    eval_series_derivative,
    growing_series,
    nullspace_vector,
    odot,
    residual_slope,
    series_residual,
    turning_angle,
)
from .envelope import (
    AngleSingularityError,
    EnvelopeInvariants,
    NoRealOrbitError,
    correction_boundedness_probe,
    drift_rate,
    invariants_of,
    orbit_period,
    phase_drift,
    psi_quadrature,
    state_from_invariants,
    to_angles,
)
from .experiments import (
    CAPTURED,
    NOT_CAPTURED,
    UNDETERMINED,
    CaptureVerdict,
    NeighborhoodReport,
    NoBracketError,
    RunConfig,
    ScanError,
    ThresholdScan,
    classify_capture,
    emit_run,
    neighborhood_run,
    read_run,
    run_and_classify,
    simulate,
    threshold_scan,
)
from .integrator import (
    BLOW_UP_DETECTED,
    COMPLETED,
    STEP_BUDGET_EXHAUSTED,
    IntegratorConfig,
    Trajectory,
    integrate,
    integrate_complex,
)
from .model import (
    EnvelopeState,
    PhysicalParams,
    PhysicalState,
    ResonanceState,
    rhs_envelope_leading,
    rhs_physical,
    rhs_primary,
    rhs_rotating,
    rhs_slow,
)
from .reduction import (
    ScalingMap,
    envelope_peaks,
    normalized_to_slow,
    reconstruct_physical,
    scale_params,
    slow_to_normalized,
)
from .stability import (
    INDETERMINATE,
    UNSTABLE,
    EigenReport,
    VariationalMatrix,
    asymptotic_eigenvalues,
    classify_stability,
    eigen_report,
    linearize,
    variational_matrix,
)

__version__ = "0.1.0"
