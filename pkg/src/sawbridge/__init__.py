"""Exact enumeration, structural analysis, surgery and Monte Carlo
sampling for self-avoiding walks and bridges on the integer lattice."""

from .counting import (
    CountsTable,
    KestenAudit,
    binom_ratio_check,
    build_counts_table,
    connective_estimates,
    count_saw,
    enumerate_isab,
    enumerate_sab,
    enumerate_saw,
    generating_bridge_audit,
    hw_unfold,
    kesten_partial_sums,
    mu_hat_from_table,
    mvmp_audit,
    series_identity_check,
)
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    DimensionMismatch,
    NotBridge,
    NotSelfAvoiding,
    ParseError,
    SurgeryError,
    WalkError,
)
from .montecarlo import (
    SampleStats,
    TruncatedIsabLaw,
    build_truncated_law,
    run_stats,
    sample_block,
    sample_halfspace_walk,
    sample_pstar,
    stickbreak_experiment,
    substream,
)
from .structure import (
    Decomposition,
    StructureReport,
    analyze,
    decompose,
    diamond_points,
    is_irreducible,
    level_class,
    level_profile,
    renewal_points,
    visiting_edge_set,
    zigzags,
)
from .surgery import (
    UnfoldRecord,
    multi_unfold,
    short_zigzags,
    stickbreak,
    stickbreak_reconstruct,
    unfold,
    unfold_record,
    unfold_set,
)
from .walks import (
    Bridge,
    Point,
    SelfAvoidingWalk,
    Walk,
    as_bridge,
    as_saw,
    concat,
    is_bridge,
    is_self_avoiding,
    parse,
    reflect_across_y_level,
    rotate_quarter_cw,
    serialize,
    translate_to_origin,
    width,
)

__version__ = "0.1.0"
