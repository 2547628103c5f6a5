"""Relativistic two-body dynamics on the equal-time slice.

The pipeline: a mass shell fixes the collective mass from the two rest
masses and the interaction first integral; the reduced relative motion runs
in the rest frame of the total momentum against a collective parameter; two
quadratures synchronize the individual clocks and the center-of-mass time;
world lines and the center of energy follow algebraically.
"""

from .binding import (
    binding_energy,
    lambda_shell,
    self_consistent_M,
    self_consistent_circular,
    self_consistent_shell,
)
from .circular import (
    CircularOrbit,
    ConstancyReport,
    PeriodicityReport,
    find_circular,
    verify_periodicity,
    verify_constancy,
)
from .errors import (
    AdmissibilityViolation,
    BadParameter,
    ConfigError,
    DegenerateOrbit,
    DomainError,
    EnergyConditionViolation,
    FrameMismatch,
    InadmissibleAlpha,
    LambdaBoundViolation,
    MassBoundViolation,
    NoRoot,
    NonMonotoneTime,
    NonTimelikeP,
    NotCentral,
    NotSynchronized,
    OutOfRange,
    PtbError,
    RealityViolation,
    StepFailure,
)
from .kinematics import (
    CanonicalState,
    ExternalInternal,
    ScalarQuintet,
    angular_momentum_L2,
    center_of_mass,
    merge,
    noether_N,
    scalar_quintet,
    split,
)
from .mass_ratio import RatioAnalysis, RatioRow, analyze, limit_report, offset_limit
from .mass_shell import (
    MassShell,
    individual_energy_limits,
    lambda_from_M2,
    mass_excess,
    mass_shell_from_lambda,
    nonrel_check,
)
from .minkowski import (
    FourVector,
    boost_from_rest,
    boost_to_rest,
    lorentz_dot,
    tilde_project,
)
from .potentials import (
    CentralPowerPotential,
    FreePotential,
    HarmonicPotential,
    PotentialEval,
    PotentialSpec,
    builtin,
)
from .reduced import (
    IntegratorOptions,
    ReducedState,
    Trajectory,
    TrajectorySample,
    dT_dlambda,
    integrate,
    rest_quintet,
    rhs,
    synchronize,
)
from .toy import (
    ToyParams,
    analytic_T,
    analytic_state,
    dT_dlambda_analytic,
    intF_analytic,
    min_dT_dlambda,
    shell_for_toy,
    sufficient_condition_margin,
    toy_from_masses,
)
from .worldline import (
    WorldlineSample,
    WorldlineSet,
    export_lab_frame,
    lambda_from_T,
    resample_uniform_T,
    worldlines,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # shell
    "MassShell", "mass_shell_from_lambda", "lambda_from_M2", "mass_excess",
    "nonrel_check", "individual_energy_limits",
    # kinematics
    "FourVector", "lorentz_dot", "tilde_project", "boost_to_rest",
    "boost_from_rest", "CanonicalState", "ExternalInternal", "ScalarQuintet",
    "split", "merge", "scalar_quintet", "angular_momentum_L2", "noether_N",
    "center_of_mass",
    # models
    "PotentialSpec", "PotentialEval", "FreePotential", "HarmonicPotential",
    "CentralPowerPotential", "builtin",
    # dynamics
    "IntegratorOptions", "ReducedState", "TrajectorySample", "Trajectory",
    "integrate", "synchronize", "rhs", "rest_quintet", "dT_dlambda",
    # world lines
    "WorldlineSample", "WorldlineSet", "worldlines", "lambda_from_T",
    "resample_uniform_T", "export_lab_frame",
    # circular orbits
    "CircularOrbit", "find_circular", "verify_constancy", "verify_periodicity",
    "ConstancyReport", "PeriodicityReport",
    # self-consistency
    "lambda_shell", "binding_energy", "self_consistent_M",
    "self_consistent_shell", "self_consistent_circular",
    # oscillator oracle
    "ToyParams", "analytic_state", "analytic_T", "intF_analytic",
    "dT_dlambda_analytic", "min_dT_dlambda", "sufficient_condition_margin",
    "shell_for_toy", "toy_from_masses",
    # mass ratio
    "RatioAnalysis", "RatioRow", "analyze", "offset_limit", "limit_report",
    # errors
    "PtbError", "NonTimelikeP", "AdmissibilityViolation", "RealityViolation",
    "LambdaBoundViolation", "EnergyConditionViolation", "MassBoundViolation",
    "InadmissibleAlpha", "DomainError", "BadParameter", "StepFailure",
    "NonMonotoneTime", "NotSynchronized", "OutOfRange", "FrameMismatch",
    "NoRoot", "NotCentral", "DegenerateOrbit", "ConfigError",
]
