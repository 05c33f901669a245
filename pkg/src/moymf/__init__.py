"""moymf: graded Koszul matrix factorizations for colored planar diagrams."""

from .poly_core import (
    CutoffExceeded,
    DegreeMismatch,
    GradedVar,
    Poly,
    QuotientRing,
    divided_difference,
    divided_difference_values,
    quotient_dimension_series,
)
from .qseries import (
    QLaurent,
    jacobi_series,
    p_coeff,
    poincare_regular_quotient,
    qbinomial,
    quantum_integer,
)
from .symfun import (
    Alphabet,
    ColorMismatch,
    L_poly,
    Lambda_poly,
    V_poly,
    power_sum_F,
    power_sum_in,
    product_term,
)
from .mf_core import (
    GradedFreeModule,
    InhomogeneousRow,
    KoszulMF,
    MatrixFactorization,
    SparseMat,
    grade_shift,
    koszul_expand,
    merge_bases,
    tensor,
    translate,
    unit_object,
)
from .reduce import (
    ConditionUnmet,
    LogEntry,
    PotentialMismatch,
    ReductionSession,
    RegularityUnverified,
    ZeroScalar,
    absorb_zero_row,
    exclude_variable,
    exclusion_candidate,
    glue,
    regularity_heuristic,
    replace_first_sequence,
    replace_second_sequence,
    row_op,
    scalar_twist,
    transpose_row,
)
from .diagram import (
    ColorConstraintViolation,
    Diagram,
    DiagramSyntaxError,
    boundary_potential,
    compile_diagram,
    parse,
    render,
)
from .analysis import (
    DEFAULT_CUTOFF,
    Irreducible,
    NotClosed,
    RELATION_NAMES,
    euler_characteristic,
    euler_of_diagram,
    homology,
    moy_bracket,
    oracle_crosscheck,
    verify_relation,
)

__version__ = "0.1.0"
