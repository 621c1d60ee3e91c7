"""Counter-diabatic single-qubit drive workbench.

Builds the counter-diabatic correction for a driven two-level system,
propagates states with and without dissipation, realizes the frozen-
Hamiltonian and frozen-population measurement protocols as virtual
experiments, and verifies the work-conservation and geometric-tensor
identities of the two-point-measurement work statistics.
"""

from .config import RunConfig, parse_config
from .exceptions import (
    ConfigError,
    DegenerateSpectrumError,
    FitFailureError,
    InvalidFieldError,
    PropagatorConfigError,
    ProtocolError,
    ScheduleRangeError,
    StaError,
)
from .geometry import (
    BlochSample,
    EstimatorPoint,
    GeometricTensor,
    bloch_trajectory,
    excess_from_qgt,
    geometric_quantity_estimator,
    qgt_analytic,
    qgt_numeric,
)
from .propagate import (
    DissipationParams,
    PropagatorConfig,
    frozen_field_fn,
    propagate_lindblad,
    propagate_lindblad_sampled,
    propagate_pure,
    propagate_pure_sampled,
    reference_field_fn,
    total_field_fn,
)
from .qubit import (
    SpectralDecomposition,
    bloch_vector,
    hamiltonian_from_field,
    reference_eigenstate,
    spectral_decompose,
    su2_matrix,
    su2_step,
)
from .schedules import (
    CallableSchedule,
    GeodesicDragSchedule,
    RampSchedule,
    Schedule,
    cd_field_analytic,
    cd_hamiltonian_generic,
    reference_field,
    total_field,
    validate_schedule,
)
from .units import mhz_to_rad_ns, rad_ns_to_mhz
from .virtual_lab import (
    EnergyFit,
    FrozenPopResult,
    RamseyRecord,
    extract_eigenenergies,
    frozen_hamiltonian_run,
    frozen_hamiltonian_sweep,
    frozen_population_run,
    frozen_population_sweep,
    make_drag_schedule,
    prepare_initial,
)
from .workstats import (
    MomentRecord,
    WorkDistribution,
    adiabatic_moment,
    conditional_probs,
    excess_fluctuation,
    moment_table,
    moments,
    thermal_moments,
    work_distribution,
)

__version__ = "0.1.0"
