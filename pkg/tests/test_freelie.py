"""Free Lie algebra oracles: the projector action versus hand-built brackets."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cobarlie.errors import InvalidInput
from cobarlie.fincat import bracket_element, w_element
from cobarlie.freelie import (
    GradedGenerators,
    TensorElement,
    bracket,
    bracket_via_group_ring,
    degree_derivation,
    derivation_d,
    generator,
    in_lie_submodule,
    lie_rank,
    lyndon_count,
    lyndon_words,
    quillen_rho,
    right_action,
    witt_rank,
    word_element,
)

ONE = Fraction(1)

GENS = GradedGenerators.of(["v", "w"], 1)
V = generator(GENS, 0)
W = generator(GENS, 1)


def iterated_bracket(gens, word):
    acc = generator(gens, word[0])
    for g in word[1:]:
        acc = bracket(acc, generator(gens, g))
    return acc


# ---------------------------------------------------------------------------
# the projector acts as the bracket

def test_w2_action_is_symmetric_bracket_on_odd():
    assert right_action(w_element(2), V.concat(W)) == V.concat(W) + W.concat(V)
    assert bracket(V, W) == V.concat(W) + W.concat(V)


def test_w1_action_trivial():
    assert right_action(w_element(1), V) == V


def test_w3_action_matches_hand_expansion():
    # [[v, w], v] expanded by hand: |[v,w]| = 2 is even, so
    # [u, v] = uv - vu with u = vw + wv
    u = V.concat(W) + W.concat(V)
    expected = u.concat(V) - V.concat(u)
    assert right_action(w_element(3), V.concat(W).concat(V)) == expected


@given(st.lists(st.integers(0, 1), min_size=2, max_size=5))
@settings(max_examples=50, deadline=None)
def test_w_action_equals_iterated_bracket(word):
    word = tuple(word)
    n = len(word)
    acted = right_action(w_element(n), word_element(GENS, word))
    assert acted == iterated_bracket(GENS, word)


def test_action_size_mismatch():
    with pytest.raises(InvalidInput):
        right_action(w_element(3), V.concat(W))


# ---------------------------------------------------------------------------
# derivations

def test_squaring_derivation_values():
    assert derivation_d(V) == V.concat(V)
    assert derivation_d(V.concat(W)) == word_element(GENS, (0, 0, 1)) - word_element(
        GENS, (0, 1, 1)
    )


def test_squaring_derivation_squares_to_zero():
    for n in range(1, 6):
        for word in list(GENS.words(n))[:10]:
            t = word_element(GENS, word)
            assert derivation_d(derivation_d(t)).is_zero()


def test_squaring_derivation_preserves_brackets():
    for n in range(1, 5):
        for word in list(GENS.words(n))[:6]:
            l = right_action(w_element(n), word_element(GENS, word))
            assert in_lie_submodule(derivation_d(l))


def test_degree_derivation():
    l = right_action(w_element(2), V.concat(W))
    assert degree_derivation(l) == l.scale(2)
    with pytest.raises(InvalidInput):
        degree_derivation(V.concat(W) - W.concat(V))  # not in the image


def test_degree_derivation_is_a_bracket_derivation():
    for p in (1, 2):
        for q in (1, 2):
            for wp in list(GENS.words(p))[:3]:
                for wq in list(GENS.words(q))[:3]:
                    a = right_action(w_element(p), word_element(GENS, wp))
                    b = right_action(w_element(q), word_element(GENS, wq))
                    if a.is_zero() or b.is_zero():
                        continue
                    lhs = bracket(a, b).scale(p + q)
                    rhs = bracket(a.scale(p), b) + bracket(a, b.scale(q))
                    assert lhs == rhs


# ---------------------------------------------------------------------------
# Quillen's left inverse

def test_rho_on_single_letter():
    assert quillen_rho(V) == V


def test_rho_left_inverse_on_bracket_component():
    for n in range(1, 5):
        for word in list(GENS.words(n))[:8]:
            l = right_action(w_element(n), word_element(GENS, word))
            assert quillen_rho(l) == l


def test_scaled_projector_is_left_inverse_too():
    for n in range(1, 5):
        for word in list(GENS.words(n))[:6]:
            l = right_action(w_element(n), word_element(GENS, word))
            assert right_action(w_element(n), l) == l.scale(n)


# ---------------------------------------------------------------------------
# rank oracles

def test_lie_ranks_on_odd_generators():
    # frozen from the matrix oracle; the trace route is asserted internally
    assert lie_rank(2, 2, 1) == 3
    assert lie_rank(2, 1, 1) == 1
    assert lie_rank(3, 1, 1) == 0
    assert lie_rank(3, 2, 1) == 2


def test_lie_ranks_on_even_generators_match_necklaces():
    for n in range(1, 6):
        for m in range(1, 4):
            assert lie_rank(n, m, 0) == witt_rank(n, m) == lyndon_count(n, m)


def test_lyndon_generation_against_definition():
    def is_lyndon(w):
        return all(w < w[i:] + w[:i] for i in range(1, len(w)))

    got = set(lyndon_words(4, 2))
    expected = {
        w
        for w in __import__("itertools").product(range(2), repeat=4)
        if is_lyndon(tuple(w))
    }
    assert got == expected


# ---------------------------------------------------------------------------
# bracket closure and the graded Lie laws

def test_group_ring_bracket_matches_graded_bracket():
    for p in (1, 2):
        for q in (1, 2):
            for wp in list(GENS.words(p))[:3]:
                for wq in list(GENS.words(q))[:3]:
                    a = right_action(w_element(p), word_element(GENS, wp))
                    b = right_action(w_element(q), word_element(GENS, wq))
                    assert bracket(a, b) == bracket_via_group_ring(a, b)


def test_bracket_of_components_lands_in_component():
    for p in (1, 2, 3):
        for q in (1, 2):
            if p + q > 5:
                continue
            for wp in list(GENS.words(p))[:3]:
                for wq in list(GENS.words(q))[:3]:
                    a = right_action(w_element(p), word_element(GENS, wp))
                    b = right_action(w_element(q), word_element(GENS, wq))
                    assert in_lie_submodule(
                        bracket(a, b) + TensorElement(GENS, p + q)
                    )


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_graded_antisymmetry_and_jacobi(data):
    p = data.draw(st.integers(1, 2))
    q = data.draw(st.integers(1, 2))
    r = data.draw(st.integers(1, 1))
    wp = data.draw(st.sampled_from(list(GENS.words(p))))
    wq = data.draw(st.sampled_from(list(GENS.words(q))))
    wr = data.draw(st.sampled_from(list(GENS.words(r))))
    x = right_action(w_element(p), word_element(GENS, wp))
    y = right_action(w_element(q), word_element(GENS, wq))
    z = right_action(w_element(r), word_element(GENS, wr))
    # degrees equal weights for degree-1 generators
    sign = Fraction((-1) ** (p * q + 1))
    assert bracket(x, y) == bracket(y, x).scale(sign)
    lhs = bracket(x, bracket(y, z))
    rhs = bracket(bracket(x, y), z) + bracket(y, bracket(x, z)).scale(
        Fraction((-1) ** (p * q))
    )
    assert lhs == rhs


def test_trace_rank_consistency_is_enforced():
    # lie_rank computes the rank two ways and aborts on mismatch; reaching a
    # value at all is the consistency statement
    for n in (2, 3, 4):
        lie_rank(n, 2, 1)
