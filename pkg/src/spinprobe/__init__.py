"""Steady-state thermodynamics of autonomous heat pumps read out by a two-level probe.

The package builds weak-coupling generators for small driven-by-heat
machines, solves for their nonequilibrium steady state, computes bath
heat currents, and sweeps a probe qubit across frequencies to locate the
machine's open decay channels from nothing but the probe's polarization.
"""

from .errors import (
    ContractViolationError,
    DomainError,
    NonErgodicError,
    NumericalFailureError,
    PositivityError,
    RankDeficiencyError,
    SpinprobeError,
    UndefinedQuantityError,
)
from .kernels import BACKEND
from .lindblad import (
    BathSpec,
    DecayChannel,
    Liouvillian,
    build_liouvillian,
    eigenoperator_decomposition,
    rate,
)
from .models import (
    ModelSpec,
    Preset,
    ProbeSpec,
    ValidityReport,
    build_maser3,
    build_maser3_with_probe,
    build_preset,
    build_pump4,
    build_pump4_with_probe,
    omega_c_rev,
    preset,
    validity_report,
)
from .scanner import (
    ChannelEstimate,
    DiagnosisReport,
    GridSpec,
    ScanConfig,
    ScanRow,
    detect_channels,
    diagnose,
    scan,
)
from .steady import SteadyState, steady_state, uniqueness_report
from .thermo import (
    HeatCurrents,
    ProbeReading,
    carnot_cop,
    cop,
    cop_endoreversible_estimate,
    filter_temperature,
    heat_currents,
    probe_reading,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BathSpec",
    "ChannelEstimate",
    "ContractViolationError",
    "DecayChannel",
    "DiagnosisReport",
    "DomainError",
    "GridSpec",
    "HeatCurrents",
    "Liouvillian",
    "ModelSpec",
    "NonErgodicError",
    "NumericalFailureError",
    "PositivityError",
    "Preset",
    "ProbeReading",
    "ProbeSpec",
    "RankDeficiencyError",
    "ScanConfig",
    "ScanRow",
    "SpinprobeError",
    "SteadyState",
    "UndefinedQuantityError",
    "ValidityReport",
    "build_liouvillian",
    "build_maser3",
    "build_maser3_with_probe",
    "build_preset",
    "build_pump4",
    "build_pump4_with_probe",
    "carnot_cop",
    "cop",
    "cop_endoreversible_estimate",
    "detect_channels",
    "diagnose",
    "eigenoperator_decomposition",
    "filter_temperature",
    "heat_currents",
    "omega_c_rev",
    "preset",
    "probe_reading",
    "rate",
    "scan",
    "steady_state",
    "uniqueness_report",
    "validity_report",
    "__version__",
]
