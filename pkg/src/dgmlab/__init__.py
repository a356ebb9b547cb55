"""dgmlab: desk-scale numerics for double sine series with general
monotone coefficient classes.

Provides difference operators and block p-norms over sequence rules,
scanners for the windowed variation class bounds, Dirichlet-type kernels
with step-r summation by parts, regular-convergence remainder profiling,
and the explicit divergence example with its certificate.
"""

from .convergence import (
    ConvergenceVerdict,
    DecayReport,
    DecayVerdict,
    GridSpec,
    RemainderProfile,
    TailEstimate,
    classify_decay,
    col_diff_tail_sup,
    col_tail_sup,
    double_partial_sum,
    grid_points,
    jk_decay,
    log_integral_bound,
    loglog_decay,
    mixed_diff_tail,
    rational_point_convergence,
    regular_remainder_sup,
    row_diff_tail_sup,
    row_tail_sup,
)
from .counterexample import (
    DivergenceCertificate,
    divergence_certificate,
    double_rule,
    double_term,
    single_rule,
    single_term,
    violation_ratio,
)
from .kernels import (
    PartialSumBound,
    SbpDecomposition,
    SingularAbscissa,
    band_index,
    dirichlet_cos,
    dirichlet_sin,
    direct_sine_sum,
    kernel_band_bound,
    kernel_bound_sweep,
    partial_sum_bound,
    sbp_decompose,
)
from .membership import (
    BoundFamily,
    BoundSpec,
    BoundValue,
    EmbeddingReport,
    MembershipReport,
    Verdict,
    divisor_embedding_check,
    embedding_check,
    gm_membership_scan,
    membership_scan,
    rhs_col_bound,
    rhs_mixed_bound,
    rhs_row_bound,
)
from .sequences import (
    HORIZON_LIMIT,
    DoubleSequenceRule,
    SequenceRule,
    SingleTailEnvelope,
    TailEnvelope,
    additive_rule,
    block_p_norm,
    col_diff,
    constant_rule,
    double_block_p_norm,
    geometric_double_rule,
    geometric_rule,
    mixed_diff,
    power_double_rule,
    power_rule,
    product_rule,
    row_diff,
    rule_from_function,
    rule_from_values,
    step_diff,
    table_rule,
    transpose_rule,
    zero_double_rule,
)

__version__ = "0.1.0"
