"""Exact-arithmetic rational homotopy Lie algebras from the geometric cobar complex."""

from .bar import CDGAlgebra, bar_complex, builtin_cdga, compare, qbar
from .dgl import HomotopyReport, build_P, build_R, homotopy_ranks, whitehead_bracket
from .errors import BudgetExceeded, ConventionFault, InvalidInput, WindowViolation
from .fincat import (
    DMorphism,
    GroupRingElement,
    SetMap,
    bracket_element,
    cobar_differential,
    delta,
    phi,
    psi,
    realize,
    s_element,
    w_element,
)
from .freelie import (
    GradedGenerators,
    TensorElement,
    bracket,
    derivation_d,
    lie_rank,
    quillen_rho,
    right_action,
)
from .homalg import ChainComplex, FilteredComplex, homology, image_summand, lemma_PQ
from .simplicial import (
    Space,
    point,
    power,
    product,
    relative_chains,
    space_from_expression,
    sphere,
    wedge,
)

__version__ = "0.1.0"
