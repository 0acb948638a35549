"""Covariance-matrix simulator for Gaussian quantum-optical circuits.

States are (means, covariance) pairs; operations are Gaussian semigroup
maps (alpha, A, G) validated against the complete-positivity condition.
A circuit DSL, homodyne/heterodyne conditioning with feedforward, and an
independent truncated-Fock-space oracle round out the package.
"""

from .errors import (
    CPViolationError,
    ExecutionError,
    GaussimError,
    ParseError,
    PhysicalityError,
)
from .maps import (
    CPReport,
    GaussianMap,
    amplifier,
    apply,
    beamsplitter,
    clifford,
    compose,
    displacement,
    embed,
    identity,
    is_clifford,
    loss,
    noise_second_moments,
    phase_shift,
    squeeze,
    symplectic,
    thermal_noise,
    two_mode_squeeze,
    validate_cp,
)
from .measure import (
    Feedforward,
    MeasurementRecord,
    RandomSource,
    discard_measurement,
    feedforward,
    heterodyne,
    homodyne,
    homodyne_project,
)
from .phasespace import (
    DEFAULT_TOL,
    HBAR,
    is_hermitian_psd,
    is_symplectic,
    sigma,
    symplectic_spectrum,
)
from .states import (
    GaussianState,
    ResourceCount,
    attach_vacuum,
    coherent,
    epr,
    partial_trace,
    resource_count,
    squeezed_vacuum,
    thermal,
    vacuum,
    wigner,
)

__version__ = "0.1.0"

__all__ = [
    "CPReport",
    "CPViolationError",
    "DEFAULT_TOL",
    "ExecutionError",
    "Feedforward",
    "GaussianMap",
    "GaussianState",
    "GaussimError",
    "HBAR",
    "MeasurementRecord",
    "ParseError",
    "PhysicalityError",
    "RandomSource",
    "ResourceCount",
    "amplifier",
    "apply",
    "attach_vacuum",
    "beamsplitter",
    "clifford",
    "coherent",
    "compose",
    "discard_measurement",
    "displacement",
    "embed",
    "epr",
    "feedforward",
    "heterodyne",
    "homodyne",
    "homodyne_project",
    "identity",
    "is_clifford",
    "is_hermitian_psd",
    "is_symplectic",
    "loss",
    "noise_second_moments",
    "partial_trace",
    "phase_shift",
    "resource_count",
    "sigma",
    "squeeze",
    "squeezed_vacuum",
    "symplectic",
    "symplectic_spectrum",
    "thermal",
    "thermal_noise",
    "two_mode_squeeze",
    "vacuum",
    "validate_cp",
    "wigner",
]
