"""Lee-Yang zeros of periodic lattice spin models.

Exact zeros come from sector weights (enumeration or transfer matrices) and
a simultaneous polynomial root finder; asymptotic zeros come from tracing
coexistence curves of metastable free energies.
"""

from leeyang._backend import NAME as BACKEND
from leeyang.errors import (
    ConditioningError,
    ConvergenceError,
    DegenerateGradientError,
    DomainError,
    InvalidConfigurationError,
    LeeYangError,
    NumericalError,
    RangeError,
    RootFindingError,
)
from leeyang.freeenergy import PhaseSystem, blume_capel_f, ising_f, potts_f, potts_transition_J
from leeyang.locator import (
    CoexistenceCurve,
    MultiplePoint,
    blume_capel_criticals,
    find_multiple_points,
    predict,
    quantize_zeros,
    refine_two_term,
    seed_scan,
    trace_curve,
    zero_density,
)
from leeyang.models import ModelKind, ModelSpec, SectorWeights, enumerate_sector_weights, evaluate_Z, hamiltonian
from leeyang.polyroots import Zero, ZeroSet, find_roots, match_zeros
from leeyang.transfer import evaluate_Z_tm, extract_coefficients

__version__ = "0.1.0"
