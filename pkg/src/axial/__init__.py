"""Exact computation toolkit for 1D shifts of finite type and the limits
of their high-dimensional axial powers.

The headline quantity is the independence entropy: the best asymptotic
average of log set-sizes over independently legal set-words. It equals
the limit of the topological entropies of the d-dimensional axial powers
as d grows, it is always (1/n)*log(k) for integers k, n, and this package
computes it exactly, together with the maximizing cycles, the structure
of the limiting isotropic measures of maximal entropy, samples from those
measures on finite boxes, and exact box counts that sandwich the theory
at desk scale.
"""

from .core import (
    Alphabet,
    DEFAULT_CAPS,
    EmptyLanguageError,
    ExactScore,
    SpecError,
    SubshiftSpec,
    WorkCaps,
    WorkCapExceeded,
    canonicalize_score,
    compare_log_means,
    independence_score,
    score_compare,
    spec_from_json_dict,
    validate_spec,
)
from .automaton import (
    LegalityReport,
    WindowGraph,
    build_window_graph,
    candidate_set_letters,
    is_independently_legal,
)
from .optimize import (
    ConditionTwoResult,
    MaximizingCycle,
    MMEClassification,
    PhaseOrbit2D,
    RationalScore,
    check_condition_two,
    classify_mme,
    enumerate_simple_maximizing_cycles,
    independence_entropy,
    independence_pressure,
    max_mean_cycle,
)
from .counting import (
    BoxCount,
    ConvergenceTable,
    count_box,
    count_box_sides,
    entropy_1d,
    entropy_estimate_table,
    oracle_hind,
)
from .measures import (
    BatchStats,
    MaximizingBoxField,
    SampleBatch,
    empirical_stats,
    maximizing_point_box,
    sample_box,
)
from .models import ModelDescriptor, build_model, builtin_zoo, parse_model

__version__ = "0.1.0"
