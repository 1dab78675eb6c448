"""
Northcott-type binomial systems, the numerical semigroups they present and
a brute-force numerical semigroup toolkit to check them against.
"""

from .version import __version__
from .linalg import SmithDecomposition, smith_normal_form, row_lattice_contains
from .northcott import (
    NorthcottExponents,
    BinomialSystem,
    MonoidPresentation,
    validate,
    family_instance,
    binomials,
    defining_matrix,
    monoid_presentation,
    numerical_test,
    minor_generators,
    saturation_index,
    betti_degrees,
)
from .invariants import (
    apery_closed,
    invariants_closed,
    factorization_closed,
    wilf_margin,
    invariant_report,
    InvariantReport,
)
from .numsgp import (
    NumericalSemigroup,
    OracleConfig,
    from_generators,
    minimal_generators,
    apery,
    basic_invariants,
    factorizations,
    betti_elements,
    betti_and_presentation,
    is_uniquely_presented,
    delta_and_catenary,
    glue,
    detect_gluing,
    critical_exponents,
    is_critical,
)
from .groebner import (
    WeightedOrder,
    PureBinomial,
    compare,
    s_polynomial,
    reduce,
    verify_groebner,
    standard_monomials,
)
from .search import SearchConfig, random_instances
