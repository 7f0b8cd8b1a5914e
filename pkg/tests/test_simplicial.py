"""Spaces, powers, relative chains and the shuffle map."""

import json
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cobarlie.errors import ConventionFault, InvalidInput
from cobarlie.fincat import SetMap, cobar_differential, delta, transposition
from cobarlie.homalg import Matrix, homology, homology_ranks
from cobarlie.simplicial import (
    CellSpace,
    Simplex,
    TupleSpace,
    compose_eta,
    count_relative_basis,
    ez_multi,
    ez_on_cells,
    full_chains,
    identity_eta,
    induced_dmorphism_map,
    induced_map,
    load_space,
    monotone_surjections,
    normalized_chains,
    point,
    power,
    product,
    relative_chains,
    space_from_expression,
    space_from_json,
    space_to_json,
    sphere,
    strip_common,
    wedge,
)

ONE = Fraction(1)
S2 = sphere(2)
S3 = sphere(3)


# ---------------------------------------------------------------------------
# basic space structure

def test_sphere_counts():
    assert len(S2.cells(0)) == 1 and len(S2.cells(2)) == 1
    for q in range(3, 8):
        assert len(S3.simplices(q)) == 1 + comb(q, 3)


def test_sphere_rejects_low_dimension():
    with pytest.raises(InvalidInput):
        sphere(1)


def test_validation_catches_nonreduced():
    bad = {"*": 0, "edge": 1}
    faces = {"*": [], "edge": [Simplex((0,), "*"), Simplex((0,), "*")]}
    with pytest.raises(InvalidInput):
        CellSpace("bad", bad, faces)


def test_validation_catches_wrong_face_count():
    dims = {"*": 0, "e": 2}
    with pytest.raises(InvalidInput):
        CellSpace("broken", dims, {"*": [], "e": [Simplex((0, 0), "*")] * 2})


def test_wedge_and_product_reduced():
    W = wedge(S2, S2)
    assert len(W.cells(2)) == 2 and len(W.cells(0)) == 1
    X = product(S2, S3)
    X.validate(3)
    assert not X.cells(1)  # reduced: pairs of degenerate 1-simplices degenerate


def test_product_with_point_is_the_space():
    P = product(S2, point())
    ranks = homology_ranks(normalized_chains(P, 4), range(5))
    assert ranks == {0: 1, 1: 0, 2: 1, 3: 0, 4: 0}


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_strip_common_recomposes(data):
    q = data.draw(st.integers(1, 5))
    k1 = data.draw(st.integers(0, q))
    k2 = data.draw(st.integers(0, q))
    e1 = data.draw(st.sampled_from(monotone_surjections(q, k1)))
    e2 = data.draw(st.sampled_from(monotone_surjections(q, k2)))
    common, reduced = strip_common([e1, e2])
    assert compose_eta(reduced[0], common) == e1
    assert compose_eta(reduced[1], common) == e2
    # reduced pair shares no flat position
    qr = len(reduced[0]) - 1
    shared = [
        i
        for i in range(qr)
        if reduced[0][i] == reduced[0][i + 1] and reduced[1][i] == reduced[1][i + 1]
    ]
    assert not shared


# ---------------------------------------------------------------------------
# chains

def test_relative_chain_ranks_sphere():
    cx = relative_chains(S2, 1, 4)
    assert cx.chain_ranks() == {2: 1}
    assert homology_ranks(cx, range(5)) == {0: 0, 1: 0, 2: 1, 3: 0, 4: 0}


def test_relative_chains_power_two_kunneth():
    cx = relative_chains(S2, 2, 5)
    ranks = homology_ranks(cx, range(6))
    # smash square of the sphere: one class, in degree 4
    assert ranks == {0: 0, 1: 0, 2: 0, 3: 0, 4: 1, 5: 0}


def test_relative_chains_connectivity_window():
    for n in (2, 3):
        cx = relative_chains(S2, n, 2 * n)
        for q in range(2 * n):
            assert homology(cx, q).rank == 0


def test_count_relative_basis_is_exact():
    for n in (1, 2, 3):
        for q in range(7):
            expected = count_relative_basis(S2, n, q)
            if expected <= 4000:
                assert relative_chains(S2, n, max(q, 1)).dim(q) == expected


def test_full_chains_and_filtration_shape():
    cx, filt = full_chains(S2, 4)
    assert cx.dim(0) == 1 and cx.dim(2) == 2  # basepoint degeneracy + the cell
    assert set(filt) == {0, 1, 2}
    assert filt[0][2] == filt[1][2] and filt[1][2] < filt[2][2]


# ---------------------------------------------------------------------------
# induced maps

def test_diagonal_is_a_chain_map():
    c1 = relative_chains(S2, 1, 5)
    c2 = relative_chains(S2, 2, 5)
    diag = induced_map(delta(1, 1), S2, c1, c2, range(6))
    for q in range(1, 6):
        assert c2.d(q).compose(diag[q]) == diag[q - 1].compose(c1.d(q))


def test_induced_rejects_non_surjective():
    c1 = relative_chains(S2, 1, 4)
    c2 = relative_chains(S2, 2, 4)
    with pytest.raises(InvalidInput):
        induced_map(SetMap(1, 2, (1,)), S2, c2, c1, range(4))


def test_induced_contravariant_functoriality_on_surjections():
    # chains(a o b) == chains(b) o chains(a) for duplications and swaps
    c1 = relative_chains(S2, 1, 5)
    c2 = relative_chains(S2, 2, 5)
    c3 = relative_chains(S2, 3, 5)
    a = delta(1, 1)              # [2] -> [1]
    b = delta(2, 2)              # [3] -> [2]
    comp = a.compose(b)          # [3] -> [1]  (hits X -> X^3)
    m_ab = induced_map(comp, S2, c1, c3, range(6))
    m_a = induced_map(a, S2, c1, c2, range(6))
    m_b = induced_map(b, S2, c2, c3, range(6))
    for q in range(6):
        assert m_ab[q] == m_b[q].compose(m_a[q])


def test_swap_involution_and_chain_map():
    c2 = relative_chains(S2, 2, 5)
    sw = induced_map(transposition(2, 1, 2), S2, c2, c2, range(6))
    for q in range(6):
        assert sw[q].compose(sw[q]) == Matrix.identity(c2.dim(q))
    for q in range(1, 6):
        assert c2.d(q).compose(sw[q]) == sw[q - 1].compose(c2.d(q))


def test_induced_differential_squares_to_zero():
    c1 = relative_chains(S2, 1, 5)
    c2 = relative_chains(S2, 2, 5)
    c3 = relative_chains(S2, 3, 5)
    f1 = induced_dmorphism_map(cobar_differential(1), S2, c1, c2, range(6))
    f2 = induced_dmorphism_map(cobar_differential(2), S2, c2, c3, range(6))
    for q in range(6):
        assert f2[q].compose(f1[q]).is_zero()


# ---------------------------------------------------------------------------
# the shuffle map

def _ez_table(space, p, q, top):
    cp = relative_chains(space, p, top)
    cq = relative_chains(space, q, top)
    cpq = relative_chains(space, p + q, top)
    return cp, cq, cpq


def test_ez_unit_is_coordinate_insertion():
    # a degree-0 (x) degree-q pair on absolute chains inserts the basepoint
    n1 = power(S2, 1)
    base0 = n1.cells(0)
    cell2 = n1.cells(2)[0]
    x = (Simplex(identity_eta(0), base0[0][0].cell),)
    terms = ez_on_cells(x, cell2)
    assert len(terms) == 1
    sign, comps = terms[0]
    assert sign == 1
    assert comps[0].eta == (0, 0, 0)  # fully degenerate insertion
    assert comps[1] == cell2[0]


def test_ez_is_a_chain_map():
    cp, cq, cpq = _ez_table(S2, 1, 1, 5)
    for a in (2,):
        for b in (2, 3):
            for xa in cp.bases.get(a, []):
                for yb in cq.bases.get(b, []):
                    image = {}
                    for sign, comps in ez_on_cells(xa, yb):
                        j = cpq.index[a + b].get(comps)
                        if j is not None:
                            image[j] = image.get(j, 0) + sign
                    image = {j: Fraction(c) for j, c in image.items() if c}
                    lhs = cpq.d(a + b).apply(image)
                    rhs = {}
                    for i, c in cp.d(a).columns[cp.index[a][xa]].items():
                        for sign, comps in ez_on_cells(cp.bases[a - 1][i], yb):
                            j = cpq.index[a + b - 1].get(comps)
                            if j is not None:
                                rhs[j] = rhs.get(j, Fraction(0)) + c * sign
                    for i, c in cq.d(b).columns[cq.index[b][yb]].items():
                        for sign, comps in ez_on_cells(xa, cq.bases[b - 1][i]):
                            j = cpq.index[a + b - 1].get(comps)
                            if j is not None:
                                rhs[j] = rhs.get(j, Fraction(0)) + Fraction(
                                    (-1) ** a
                                ) * c * sign
                    rhs = {j: c for j, c in rhs.items() if c}
                    assert lhs == rhs


def test_ez_commutativity_square():
    """EZ after the Koszul switch equals the coordinate swap after EZ."""
    top = 5
    c1 = relative_chains(S2, 1, top)
    c2 = relative_chains(S2, 2, top)
    sw = induced_map(transposition(2, 1, 2), S2, c2, c2, range(top + 1))
    for a in (2,):
        for b in (2, 3):
            if a + b > top:
                continue
            for xa in c1.bases.get(a, []):
                for yb in c1.bases.get(b, []):
                    left: dict[int, Fraction] = {}
                    for sign, comps in ez_on_cells(yb, xa):
                        j = c2.index[a + b].get(comps)
                        if j is not None:
                            left[j] = left.get(j, Fraction(0)) + Fraction(
                                (-1) ** (a * b)
                            ) * sign
                    image: dict[int, Fraction] = {}
                    for sign, comps in ez_on_cells(xa, yb):
                        j = c2.index[a + b].get(comps)
                        if j is not None:
                            image[j] = image.get(j, Fraction(0)) + Fraction(sign)
                    right = sw[a + b].apply(image)
                    assert {k: v for k, v in left.items() if v} == right


def test_ez_associativity():
    c1 = relative_chains(S2, 1, 5)
    x = c1.bases[2][0]
    left = {}
    for s1, m in ez_on_cells(x, x):
        for s2, mm in ez_on_cells(m, x):
            left[mm] = left.get(mm, 0) + s1 * s2
    right = {}
    for s1, m in ez_on_cells(x, x):
        for s2, mm in ez_on_cells(x, m):
            right[mm] = right.get(mm, 0) + s1 * s2
    assert {k: v for k, v in left.items() if v} == {
        k: v for k, v in right.items() if v
    }
    # and both agree with the flat multi-shuffle
    multi = {}
    for s, m in ez_multi([x, x, x]):
        multi[m] = multi.get(m, 0) + s
    assert left == {k: v for k, v in multi.items() if v}


def test_ez_equivariance():
    """The coordinate action intertwines the Koszul-signed tensor action
    through the shuffle map (tested where the signs are visible)."""
    top = 6
    c1 = relative_chains(S3, 1, top)
    c2 = relative_chains(S3, 2, top)
    sw = induced_map(transposition(2, 1, 2), S3, c2, c2, range(top + 1))
    x = c1.bases[3][0]
    y = c1.bases[3][0]
    a, b = 3, 3
    image: dict[int, Fraction] = {}
    for sign, comps in ez_on_cells(x, y):
        j = c2.index[a + b].get(comps)
        if j is not None:
            image[j] = image.get(j, Fraction(0)) + Fraction(sign)
    geo = sw[a + b].apply(image)
    koszul: dict[int, Fraction] = {}
    for sign, comps in ez_on_cells(y, x):
        j = c2.index[a + b].get(comps)
        if j is not None:
            koszul[j] = koszul.get(j, Fraction(0)) + Fraction((-1) ** (a * b)) * sign
    assert geo == {k: v for k, v in koszul.items() if v}


def test_ez_quasi_isomorphism_through_degree_five():
    """H(C(X) (x) C(X)) = H(C(X^2)) for the sphere, absolute normalized chains."""
    from cobarlie.dgl import tensor_power_complex

    top = 5
    n1 = power(S2, 1)
    n2 = power(S2, 2)
    c1 = normalized_chains(n1, top)
    c2 = normalized_chains(n2, top)
    t2 = tensor_power_complex(c1, 2, top)
    # compare homology ranks and check the induced map is an isomorphism
    for q in range(top + 1):
        h_t = homology(t2, q)
        h_g = homology(c2, q)
        assert h_t.rank == h_g.rank
        images = []
        for rep in h_t.representatives:
            vec: dict[int, Fraction] = {}
            for j, coeff in rep.items():
                word = t2.bases[q][j]
                parts = [c1.bases[d][i] for d, i in word]
                for sign, comps in ez_multi(parts):
                    k = c2.index[q].get(comps)
                    if k is not None:
                        vec[k] = vec.get(k, Fraction(0)) + coeff * sign
            cc = h_g.class_coordinates({k: v for k, v in vec.items() if v})
            assert cc is not None
            images.append(cc)
        from cobarlie.homalg import rank_of

        assert rank_of(images) == h_g.rank


# ---------------------------------------------------------------------------
# expressions and JSON

def test_expression_parser():
    assert space_from_expression("S2").name() == "S2"
    assert space_from_expression("S2 v S2").name() == "S2 v S2"
    assert isinstance(space_from_expression("S2 x S3"), TupleSpace)
    with pytest.raises(InvalidInput):
        space_from_expression("S1")
    with pytest.raises(InvalidInput):
        space_from_expression("S2 y S2")
    with pytest.raises(InvalidInput):
        space_from_expression("(S2 x S2) v S2")  # wedge needs cell models


def test_json_round_trip():
    W = wedge(S2, S3)
    data = space_to_json(W)
    back = space_from_json(data)
    for q in range(5):
        assert homology_ranks(normalized_chains(back, 4), range(5)) == homology_ranks(
            normalized_chains(W, 4), range(5)
        )
    assert load_space(json.dumps(data)).name() == data["name"]


def test_json_rejects_bad_data():
    with pytest.raises(InvalidInput):
        space_from_json({"vertices": 2, "cells": []})
    with pytest.raises(InvalidInput):
        space_from_json(
            {
                "vertices": 1,
                "cells": [
                    {"id": "e", "dim": 2, "faces": [{"degeneracies": [0], "cell": "missing"}] * 3}
                ],
            }
        )
