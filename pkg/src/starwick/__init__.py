"""Exact symbolic engine for star products with abstract propagator
coefficients, Wick calculus, and the graph combinatorics behind both."""

from .algebra import CoeffElement, CoeffMonomial, Poly, PropagatorSymbol, VarMonomial
from .combinat import (
    AdjacencyMatrix,
    TwoRowSSYT,
    admissible_witness,
    enumerate_adjacency_by_degree,
    enumerate_adjacency_by_rowsums,
    is_admissible,
    matching_to_involution,
    multinomial,
    ssyt_two_row,
)
from .exprparse import ParseError, parse
from .fields import (
    KernelGrid,
    QuadratureRule,
    field_expectation,
    field_poisson,
    field_star,
    field_wick_power,
    functional_star,
    specialize,
)
from .graphs import (
    BernoulliGraph,
    FeynmanGraph,
    embed_graph,
    export_dot,
    from_feynman,
    graph_from_matrix,
    graph_product,
    kontsevich_apply,
    star_via_graphs,
    to_feynman,
)
from .star import (
    PropagatorChangeTerm,
    PropagatorMatrix,
    apply_bivector,
    change_propagator,
    poisson_bracket,
    reexpand,
    star2,
    star_multi,
    star_tensor,
)
from .wick import (
    WickMonomialSpec,
    WickTheoremTerm,
    expectation_formula,
    expectation_oracle,
    reexpand_wick,
    wick_monomial_star,
    wick_power,
    wick_theorem_expand,
    wick_unpower,
)

__version__ = "0.1.0"
