"""Spectral NLS simulator with quadratic potentials built on the exact Mehler propagator."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateWeightError,
    DomainError,
    InsufficientDataError,
    MehlerNLSError,
    NonzeroLinearTermError,
    NyquistViolation,
    SingularTimeError,
    ZeroTimeError,
)
from .trajectories import (
    PotentialSpec,
    TrajectoryPair,
    classical_pair,
    domin_threshold,
    flow_matrix,
    heisenberg_matrix,
    singular_times,
)
from .grid import (
    Grid,
    WaveFunction,
    gaussian,
    grad_norm,
    hermite,
    load_snapshot,
    lp_norm,
    moment_norm,
    save_snapshot,
    sigma_norm,
)
from .propagator import MehlerStepPlan, mehler_apply, mehler_plan, propagate_linear, splitstep_linear
from .frame import FrameState, LensFrame
from .integrator import (
    EvolutionRecord,
    EvolutionResult,
    SolverConfig,
    confirm_blowup,
    decompose_linear_remainder,
    default_t0,
    evolve,
    nonlinear_phase_step,
    strang_step,
)
from .observables import (
    OperatorTag,
    apply_operator,
    decay_fit,
    energy,
    factorized_operator,
    gn_check,
    scattering_diagnostic,
    wave_operator,
    wave_operator_round_trip,
)
from .weights import (
    WeightProfile,
    effective_dimension_check,
    exponent_triple,
    is_sharp_admissible,
    weak_l1_norm,
    weight_profile,
    weight_value,
)
