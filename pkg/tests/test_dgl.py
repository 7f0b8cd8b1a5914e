"""The assembled cobar objects: columns, ranks, brackets, certificates."""

from fractions import Fraction

import pytest

from cobarlie.errors import BudgetExceeded, ConventionFault, WindowViolation
from cobarlie.fincat import w_element
from cobarlie.homalg import homology, homology_ranks
from cobarlie.dgl import (
    assemble_total,
    build_P,
    build_R,
    check_window,
    group_ring_matrix_geometric,
    group_ring_matrix_tensor,
    homotopy_ranks,
    leibniz_square_holds,
    tensor_power_complex,
    whitehead_bracket,
)
from cobarlie.simplicial import relative_chains, sphere, wedge

S2 = sphere(2)
S3 = sphere(3)


# ---------------------------------------------------------------------------
# window rule

def test_window_rule_connectivity_one():
    with pytest.raises(WindowViolation):
        check_window(2, 9, 3, 1)
    check_window(3, 7, 3, 1)
    with pytest.raises(WindowViolation):
        check_window(3, 6, 3, 1)  # q_max too small


def test_window_rule_higher_connectivity():
    check_window(3, 8, 4, 2)  # odd sphere: T may exceed N
    with pytest.raises(WindowViolation):
        check_window(1, 9, 4, 2)


# ---------------------------------------------------------------------------
# columns and projectors

def test_build_R_single_column_is_reduced_homology():
    R = build_R(S2, 1, 4)
    data = R.column(1, 4)
    ranks = homology_ranks(data.summand.complex, range(5))
    assert ranks == {0: 0, 1: 0, 2: 1, 3: 0, 4: 0}


def test_projector_rank_on_homology_even_sphere():
    """The swap fixes the square class of the even sphere: rank one."""
    cx = relative_chains(S2, 2, 5)
    e = group_ring_matrix_geometric(S2, cx, w_element(2), [4])[4].scale(
        Fraction(1, 2)
    )
    h = homology(cx, 4)
    assert h.rank == 1
    image_class = h.class_coordinates(e.apply(h.representatives[0]))
    assert image_class == {0: Fraction(1)}


def test_projector_rank_on_homology_odd_sphere():
    """The signed swap kills the square class of the odd sphere."""
    cx = relative_chains(S3, 2, 7)
    e = group_ring_matrix_geometric(S3, cx, w_element(2), [6])[6].scale(
        Fraction(1, 2)
    )
    h = homology(cx, 6)
    assert h.rank == 1
    assert h.class_coordinates(e.apply(h.representatives[0])) == {}


def test_tensor_and_geometric_projector_images_agree():
    """Idempotent transfer across the shuffle quasi-isomorphism."""
    P = build_P(S2, 2, 6)
    data = P.tensor_column(2, 6)
    geo = {q: homology(data.summand.complex, q).rank for q in range(6)}
    tens = {q: homology(data.tensor_summand.complex, q).rank for q in range(6)}
    assert geo == tens


def test_e_matrices_idempotent_at_chain_level():
    P = build_P(S2, 2, 5)
    data = P.column(2, 5)
    for q in range(5):
        e = group_ring_matrix_geometric(S2, data.chains, w_element(2), [q])[q].scale(
            Fraction(1, 2)
        )
        assert e.compose(e) == e


# ---------------------------------------------------------------------------
# homotopy ranks

def test_s2_small_window_direct_and_certificate_agree():
    P = build_P(S2, 2, 5)
    rep = homotopy_ranks(P, 2)
    assert rep.ranks == {1: 1, 2: 1}
    # direct totalization gives the same answer
    tot = assemble_total(P, 2)
    assert homology_ranks(tot, range(1, 3)) == rep.ranks


def test_s2_acceptance_window():
    P = build_P(S2, 4, 8)
    rep = homotopy_ranks(P, 3)
    assert rep.ranks == {1: 1, 2: 1, 3: 0}
    assert rep.certificates["e1_degeneration"]
    assert rep.certificates["column_transfer_cross_checked"]


def test_s3_ranks():
    P = build_P(S3, 3, 9)
    rep = homotopy_ranks(P, 4)
    assert rep.ranks == {1: 0, 2: 1, 3: 0, 4: 0}


def test_wedge_ranks_match_free_lie_oracle():
    from cobarlie.freelie import lie_rank

    W = wedge(sphere(2), sphere(2))
    P = build_P(W, 3, 8)
    rep = homotopy_ranks(P, 2)
    assert rep.ranks == {1: 2, 2: lie_rank(2, 2, 1)}


def test_truncation_stability():
    vals = {}
    for N in (3, 4, 5):
        P = build_P(S2, N, 8)
        vals[N] = homotopy_ranks(P, 2).ranks
    assert vals[3] == vals[4] == vals[5]


def test_qmax_stability():
    a = homotopy_ranks(build_P(S2, 3, 7), 2).ranks
    b = homotopy_ranks(build_P(S2, 3, 9), 2).ranks
    assert a == b


def test_loop_space_homology_of_even_sphere():
    """The full carrier computes the loop homology: the tensor algebra on a
    single degree-one class, one dimension in every degree."""
    R = build_R(S2, 3, 8)
    rep = homotopy_ranks(R, 3)
    assert rep.ranks == {1: 1, 2: 1, 3: 1}


def test_report_json_shape():
    P = build_P(S2, 2, 5)
    rep = homotopy_ranks(P, 2)
    d = rep.to_json_dict()
    assert d["ranks"] == {"1": 1, "2": 1}
    assert d["route"] == "e1-degeneration"
    assert all(isinstance(v, bool) for v in d["certificates"].values())


# ---------------------------------------------------------------------------
# brackets

def test_whitehead_square_on_even_sphere():
    P = build_P(S2, 4, 8)
    br = whitehead_bracket(P, 1, 1)
    assert not br.is_zero()
    assert br.certificates["bracket_commutativity_route"]
    assert br.certificates["bracket_lands_in_projector_image"]
    assert br.certificates["representative_independence"]


def test_whitehead_square_seed_independent():
    P = build_P(S2, 3, 8)
    a = whitehead_bracket(P, 1, 1, seed=0)
    b = whitehead_bracket(P, 1, 1, seed=12345)
    assert a.matrix == b.matrix


def test_whitehead_square_vanishes_on_odd_sphere():
    P = build_P(S3, 3, 9)
    br = whitehead_bracket(P, 2, 2)
    assert br.is_zero()


def test_wedge_bracket_table_symmetric_and_full_rank():
    from cobarlie.homalg import rank_of

    W = wedge(sphere(2), sphere(2))
    P = build_P(W, 3, 8)
    br = whitehead_bracket(P, 1, 1)
    # degree-one classes: graded antisymmetry makes the pairing symmetric
    assert br.matrix[0][1] == br.matrix[1][0]
    values = [v for row in br.matrix for v in row]
    assert rank_of(values) == 3  # brackets span the weight-two component


def test_bracket_beyond_truncation_is_zero():
    P = build_P(S2, 1, 4)
    rep = homotopy_ranks(P, 1)
    assert rep.ranks == {1: 1}
    br = whitehead_bracket(P, 1, 1)
    assert br.is_zero()  # the target column is cut off by the truncation


# ---------------------------------------------------------------------------
# algebra structure

def test_leibniz_square_p1_q1():
    R = build_R(S2, 3, 7)
    pairs = [(2, 2), (2, 3), (3, 2)]
    assert leibniz_square_holds(R, 1, 1, pairs)


def test_tensor_power_complex_shape():
    base = relative_chains(S2, 1, 6)
    t3 = tensor_power_complex(base, 3, 6)
    assert t3.chain_ranks() == {6: 1}
    sign_rank = group_ring_matrix_tensor(t3, w_element(3), 6).rank()
    assert sign_rank == 0  # no weight-three component on one even class
