"""delaymargin: relative stability analysis of SISO dead-time systems.

Given a proper plant G in feedback with a pure input delay, the package
enumerates the characteristic-root crossings of a shifted stability
boundary Re(s) = sigma0 < 0 in increasing delay order, counts the roots
right of the boundary on every delay interval, and determines the stable
delay intervals over all h >= 0. An argument-principle oracle provides
independent verification of every count and crossing direction.
"""

from ._kernels import backend_name
from .boundary import (
    BoundaryFunctions,
    guard_candidates,
    BoundaryInterval,
    boundary_functions,
    crossing_direction,
    default_omega_cap,
    direction_intervals,
    feasible_intervals,
    intersect,
    multiplicity_guard,
)
from .delays import (
    AllDelaysVerdict,
    AnalysisResult,
    CrossingEvent,
    DelayIntervalReport,
    ImaginaryAxisResult,
    analyze_all_delays,
    analyze_up_to,
    imaginary_axis_analysis,
    initial_root_count,
    leaving_count_total,
    phase_offset,
    prepare_intervals,
    stable_from_reports,
)
from .errors import DelayMarginError
from .oracle import (
    CountRegion,
    count_roots,
    enclosure_bounds,
    numeric_crossing_direction,
    refine_root,
)
from .plant import (
    BoundaryConfig,
    PoleZeroGain,
    boundary_clearance,
    char_poly_at_zero_delay,
    evaluate,
    feedthrough,
    from_rational,
    validate,
)
from .poly import (
    RealPolynomial,
    all_complex_roots,
    derivative,
    eval_at_complex,
    nonnegative_real_roots,
)

__version__ = "0.1.0"

__all__ = [
    "AllDelaysVerdict",
    "AnalysisResult",
    "BoundaryConfig",
    "BoundaryFunctions",
    "BoundaryInterval",
    "CountRegion",
    "CrossingEvent",
    "DelayIntervalReport",
    "DelayMarginError",
    "ImaginaryAxisResult",
    "PoleZeroGain",
    "RealPolynomial",
    "all_complex_roots",
    "analyze_all_delays",
    "analyze_up_to",
    "backend_name",
    "boundary_clearance",
    "boundary_functions",
    "char_poly_at_zero_delay",
    "count_roots",
    "crossing_direction",
    "default_omega_cap",
    "derivative",
    "direction_intervals",
    "enclosure_bounds",
    "eval_at_complex",
    "evaluate",
    "feasible_intervals",
    "feedthrough",
    "from_rational",
    "guard_candidates",
    "imaginary_axis_analysis",
    "initial_root_count",
    "intersect",
    "leaving_count_total",
    "multiplicity_guard",
    "nonnegative_real_roots",
    "numeric_crossing_direction",
    "phase_offset",
    "prepare_intervals",
    "stable_from_reports",
    "refine_root",
    "validate",
]
