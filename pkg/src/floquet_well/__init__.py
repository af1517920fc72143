"""Complex Floquet quasi-energies of a leaky square well with a driven barrier."""

from .channels import ChannelSet, build_channels
from .matching import (
    DegenerateRootError,
    FloquetState,
    MatchingMatrix,
    NotARootError,
    Variant,
    assemble,
    determinant,
    null_state,
    quasienergy_det,
    singular_residual,
)
from .model import (
    ComplexEnergy,
    StaticDrivingError,
    WellParams,
    alpha,
    default_sidebands,
    reduce_to_first_zone,
    required_sidebands,
)
from .observables import SurvivalSeries, survival, wavefunction_density
from .rootfind import (
    Box,
    BoundaryRootError,
    BranchPointInBoxError,
    RootCountError,
    RootResult,
    count_roots_in_box,
    find_all_in_box,
    polish,
    split_box_at_verticals,
)
from .staticwell import StaticSpectrum, solve_static
from .sweep import (
    BranchTrace,
    CrossingEvent,
    CrossingKind,
    SweepParameter,
    ThresholdScanError,
    TraceError,
    classify_crossings,
    minimum_zone_gap,
    run_sweep,
    seed_driven_root,
    threshold_scan,
    trace_branch,
)

__version__ = "0.1.0"

__all__ = [
    "Box",
    "BoundaryRootError",
    "BranchPointInBoxError",
    "BranchTrace",
    "ChannelSet",
    "ComplexEnergy",
    "CrossingEvent",
    "CrossingKind",
    "DegenerateRootError",
    "FloquetState",
    "MatchingMatrix",
    "NotARootError",
    "RootCountError",
    "RootResult",
    "StaticDrivingError",
    "StaticSpectrum",
    "SurvivalSeries",
    "SweepParameter",
    "ThresholdScanError",
    "TraceError",
    "Variant",
    "WellParams",
    "alpha",
    "assemble",
    "build_channels",
    "classify_crossings",
    "count_roots_in_box",
    "default_sidebands",
    "determinant",
    "find_all_in_box",
    "minimum_zone_gap",
    "null_state",
    "polish",
    "quasienergy_det",
    "reduce_to_first_zone",
    "required_sidebands",
    "run_sweep",
    "seed_driven_root",
    "singular_residual",
    "solve_static",
    "split_box_at_verticals",
    "survival",
    "threshold_scan",
    "trace_branch",
    "wavefunction_density",
]
