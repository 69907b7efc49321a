"""gamma-density toolkit: exact measures, density points, topologies and approximate continuity."""

from .density import (
    Grid,
    HarmonicGrid,
    PointClass,
    Policy,
    RatioTrace,
    Verdict,
    classify_point,
    density_points_on_grid,
    one_sided_equivalence_check,
    ratio_trace,
    sequential_criterion_check,
)
from .families import BumpSupport, ComplementWrapper, DyadicGap, FiniteIntersectionWrapper, FiniteUnionWrapper
from .intervals import EMPTY, REALS, RationalIntervalSet, interval, normalize, trace_measure
from .modulus import (
    Bounded,
    Identity,
    LogModulus,
    Power,
    PsiSpec,
    check_condition_a,
    from_psi,
    parse_modulus,
    ratio_bound,
    validate_modulus,
)
from .topology import RepresentableSet, interior, is_gamma_open, limit_point_test

__version__ = "0.1.0"
