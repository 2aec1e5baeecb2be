"""Exact dynamics of a three-level cascade atom coupled to a cavity field in a
nonlinear coherent state, with intensity-dependent coupling."""
from .coherent_state import CoefficientVector, FieldParams, coefficients, truncation_order
from .dynamics import CouplingParams, EvolvedState, evolve, rabi_frequency
from .errors import (
    ConvergenceError,
    DomainError,
    InvalidSpec,
    RealityViolation,
    UnknownPreset,
)
from .nonlinearity import Kind, NonlinearitySpec, evaluate, log_f_factorial
from .observables import (
    ObservableSample,
    atomic_inversion,
    b1,
    b2,
    mandel_q,
    mean_photon_number,
    mean_photon_number_squared,
    sample,
    sample_grid,
    squeezing,
)
from .presets import PRESETS, Preset, RunConfig, load_preset

__version__ = "0.1.0"
