"""gbbench: monomial-order comparators and a Groebner-basis order benchmark.

The package compares a subtotal (prefix-sum) total-degree order against
degree-reverse-lexicographic order, both as native comparators and as
equivalent weight-matrix orders, inside a Buchberger engine over Z_p.
"""

from .modfield import DEFAULT_MODULUS, FieldElement, PrimeField
from .ordering import (
    EQUAL,
    GREATER,
    LESS,
    WeightMatrix,
    cmp_by_matrix,
    cmp_degrevlex,
    cmp_lex,
    cmp_subtotal,
    degrevlex_weight_matrix,
    identity_weight_matrix,
    is_admissible,
    make_order,
    orders_equivalent_certificate,
    orders_equivalent_oracle,
    subtotal_weight_matrix,
    weight_vector,
)
from .poly import PolyContext, Polynomial, Term, CachedTerm, add_poly, div_monomial, mul_term, reduce, s_polynomial
from .groebner import (
    EngineStats,
    GroebnerResult,
    SelectionStrategy,
    audit_cached_weights,
    buchberger,
    reduce_basis,
    reorder_variables,
    verify_groebner,
)
from .corpus import (
    SystemSpec,
    ParseError,
    bundled_systems,
    clear_denominators,
    cyclic_system,
    katsura_system,
    load_bundled,
    parse_system,
    realize,
    render_system,
)
from .bench import (
    BenchmarkConfig,
    BenchmarkReport,
    comparator_microbench,
    published_reference_ratios,
    render_report,
    run_benchmark,
    summarize_ratios,
    timed_run,
    verify_order_robustness,
)

__version__ = "0.1.0"
