from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import grid_pair, posets
from nmu.classify import (
    DEGREE_BOUND,
    TECHNICAL_CONDITION,
    TYPE_I,
    TYPE_II,
    UNDETERMINED,
    classify_component,
    classify_N2,
    classify_N2_doubleprime,
    classify_N2_prime,
    cylinder_params,
    diamond_type,
    embed_convex_cylinder,
    embeds_without_splitting,
    iter_embeddings,
    maximal_branch_chains,
    technical_condition,
    typeI_bound_check,
)
from nmu.cylinder import canonical_cover_pair, goes_around, is_degenerate
from nmu.oracle import enumerate_posets
from nmu.poset import (
    Diamond,
    Poset,
    antichain_poset,
    chain_poset,
    claw_poset,
    diamond_with_chains,
    find_diamonds,
    grid_poset,
)
from nmu.reduction import SplitMap, most_reduced
from nmu.sorting import ChainCover, CoverPair, nmu_check, pair_holds

SPLIT_DIAMOND = Poset(6, [(1, 2), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)])  # 4-diamond, minimum split into 3


def _check_embedding(Q, emb):
    assert not is_degenerate(emb.k, emb.n)
    cells = [emb.assign[e] for e in Q.elements]
    assert len(set(cells)) == Q.n
    # order isomorphism onto the window
    for u in Q.elements:
        for v in Q.elements:
            assert Q.leq(u, v) == emb.window.poset.leq(emb.window_id(u), emb.window_id(v))


# ---------------------------------------------------------------- embeddings


def test_square_embeds_planar():
    D = grid_poset(2, 2)
    emb = embed_convex_cylinder(D)
    _check_embedding(D, emb)
    (d,) = find_diamonds(D)
    assert not emb.diamond_goes_around(d)


def test_claw_does_not_embed():
    assert embed_convex_cylinder(claw_poset()) is None


def test_grid_embeds_as_rectangle():
    G = grid_poset(3, 4)
    emb = embed_convex_cylinder(G)
    _check_embedding(G, emb)
    rows = {emb.assign[e][0] for e in G.elements}
    cols = {emb.assign[e][1] for e in G.elements}
    assert len(rows) * len(cols) == 12
    # no smaller cylinder in the search order admits the grid
    for k, n in cylinder_params(12):
        if (n, k) >= (emb.n, emb.k):
            break
        assert next(iter_embeddings(G, [(k, n)]), None) is None


def test_embedding_search_order_is_by_n_then_k():
    ps = cylinder_params(4)
    assert ps == sorted(ps, key=lambda kn: (kn[1], kn[0]))
    assert all(not is_degenerate(k, n) for k, n in ps)


@given(posets(max_n=7))
def test_embeddings_are_order_isomorphisms(P):
    for C, _ in [P.induced(c) for c in P.components()]:
        for i, emb in enumerate(iter_embeddings(C)):
            _check_embedding(C, emb)
            if i > 5:
                break


# ---------------------------------------------------------------- technical condition


def test_tc_trivial_when_unsplit():
    for P in (grid_poset(3, 3), grid_poset(2, 4)):
        red = most_reduced(P)
        for emb in iter_embeddings(red.reduced):
            assert technical_condition(red.split, emb).ok


def test_tc_violation_on_planar_split_diamond():
    red = most_reduced(SPLIT_DIAMOND)
    assert sorted(red.split.s.values()) == [1, 1, 1, 3]
    reports = []
    for emb in iter_embeddings(red.reduced):
        (d,) = find_diamonds(red.reduced)
        reports.append((emb.diamond_goes_around(d), technical_condition(red.split, emb)))
    planar = [r for around, r in reports if not around]
    around = [r for around, r in reports if around]
    assert planar and all(not r.ok for r in planar)
    v = planar[0].violations[0]
    assert v.s_values == {"w": 3, "x": 1, "y": 1, "z": 1}
    # a diamond that goes around is exempt
    assert around and all(r.ok and r.exempt == 1 for r in around)


def test_split_diamond_is_in_n2_through_an_around_embedding():
    c = classify_N2(SPLIT_DIAMOND)
    assert c.in_n2
    comp = c.components[0]
    (d,) = find_diamonds(comp.reduction.reduced)
    assert comp.embedding.diamond_goes_around(d)
    assert nmu_check(SPLIT_DIAMOND, c.witness).holds


def test_disabling_technical_condition_is_wrong():
    P = Poset(6, [(1, 5), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)])
    assert not classify_N2(P, variants=False).in_n2
    assert classify_N2(P, variants=False, technical=False).in_n2
    assert classify_N2(P).obstruction.kind == TECHNICAL_CONDITION


# ---------------------------------------------------------------- diamond types


def test_grid_square_is_type_one():
    G, pair = grid_pair(2, 2)
    (d,) = find_diamonds(G)
    assert diamond_type(pair, d) == TYPE_I
    assert diamond_type(pair.swapped(), d) == TYPE_I


def test_around_diamond_is_type_two():
    from nmu.cylinder import window_poset

    w = window_poset(2, 4, [(1, -1), (1, 0), (0, 1), (1, 1)])
    (d,) = find_diamonds(w.poset)
    assert goes_around(w, d)
    assert diamond_type(canonical_cover_pair(w), d) == TYPE_II


def test_all_red_diamond_undetermined():
    D = grid_poset(2, 2)
    (d,) = find_diamonds(D)
    red = ChainCover([d.chain_a, d.chain_b[1:2]])
    blue = ChainCover([(e,) for e in D.elements])
    assert diamond_type(CoverPair(red, blue), d) == UNDETERMINED


def test_type_one_bound_examples():
    assert typeI_bound_check(Diamond(1, 5, (1, 2, 3, 4, 5), (1, 6, 7, 8, 5)))
    d = find_diamonds(diamond_with_chains(5, 5, bottom=2, top=1))[0]
    assert (len(d.bottom), len(d.top)) == (2, 1) and typeI_bound_check(d)
    d = find_diamonds(diamond_with_chains(5, 5, bottom=3))[0]
    assert not typeI_bound_check(d)


@pytest.mark.parametrize("bottom,top", [(2, 2), (3, 0), (0, 3)])
def test_type_one_bound_versus_classifier(bottom, top):
    P = diamond_with_chains(5, 5, bottom, top)
    d = next(d for d in find_diamonds(P) if len(d.chain_a) == 5)
    c = classify_N2(P, variants=False)
    assert c.in_n2  # either a Type I colouring or one going around
    kinds = {diamond_type(c.witness, d)}
    assert kinds == ({TYPE_I} if typeI_bound_check(d) else {TYPE_II})


# ---------------------------------------------------------------- branch chains


def _identity_split(Q):
    return SplitMap(Q, {e: (e,) for e in Q.elements})


def test_branch_chains_of_square_and_chain():
    G, pair = grid_pair(2, 2)
    assert maximal_branch_chains(_identity_split(G), pair) == []
    C = chain_poset(2)
    whole = ChainCover([(1, 2)])
    assert maximal_branch_chains(_identity_split(C), CoverPair(whole, whole)) == [(1, 2)]


def test_branch_chain_from_pendant_pipe():
    # square 1 < 2, 3 < 4 with a 2-element pipe 5 < 6 hanging below the side element 2
    P = Poset(6, [(1, 2), (1, 3), (2, 4), (3, 4), (5, 6), (6, 2)])
    c = classify_N2(P)
    comp = c.components[0]
    split = comp.reduction.split
    assert split.image_chain[5] == (5, 6)
    chains = maximal_branch_chains(split, comp.embedding.cover_pair())
    assert chains == [(5, 2)]


# ---------------------------------------------------------------- classification


def test_small_connected_posets_all_in():
    for cp in enumerate_posets(3, connected_only=True):
        assert classify_N2(cp.poset).in_n2


def test_claw_rejected():
    c = classify_N2(claw_poset())
    assert not c.in_n2 and c.obstruction.kind == DEGREE_BOUND
    assert c.witness is None


def test_grid_in_all_classes():
    G = grid_poset(3, 4)
    c = classify_N2(G)
    assert c.in_n2 and c.in_n2_prime and c.in_n2_doubleprime
    assert pair_holds(G, c.witness)


def test_prime_examples():
    assert not classify_N2_prime(chain_poset(4))
    # trees: every reduced tree has a leaf
    assert not classify_N2_prime(Poset(5, [(1, 3), (2, 3), (3, 4), (3, 5)]))
    assert classify_N2_prime(grid_poset(2, 2))


def test_doubleprime_examples():
    assert classify_N2_doubleprime(grid_poset(3, 4))
    assert classify_N2_doubleprime(chain_poset(4))
    assert not classify_N2_doubleprime(diamond_with_chains(3, 3, bottom=1))


def test_doubleprime_needs_more_than_an_embedding():
    # convex in Cyl_{2,4}, but there a row and a column always meet twice
    P = Poset(5, [(1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)])
    assert embeds_without_splitting(P)
    assert classify_N2(P).in_n2
    assert not classify_N2_doubleprime(P)


def test_witness_soundness_up_to_seven():
    for cp in enumerate_posets(7, connected_only=True):
        c = classify_N2(cp.poset, variants=False)
        if c.in_n2:
            assert nmu_check(cp.poset, c.witness).holds
        else:
            assert c.obstruction is not None


def test_type_two_diamonds_go_around():
    for cp in enumerate_posets(6, connected_only=True):
        c = classify_N2(cp.poset, variants=False)
        for comp in c.components:
            if not comp.in_n2:
                continue
            pair = comp.embedding.cover_pair()
            for d in find_diamonds(comp.reduction.reduced):
                t = diamond_type(pair, d)
                assert t != UNDETERMINED
                if t == TYPE_II:
                    assert comp.embedding.diamond_goes_around(d)


@settings(max_examples=60)
@given(posets(max_n=7), st.data())
def test_isomorphism_invariance(P, data):
    perm = data.draw(st.permutations(list(P.elements)))
    Q = P.relabel({e: perm[e - 1] for e in P.elements})
    a, b = classify_N2(P), classify_N2(Q)
    assert (a.in_n2, a.in_n2_prime, a.in_n2_doubleprime) == (b.in_n2, b.in_n2_prime, b.in_n2_doubleprime)


@settings(max_examples=40)
@given(posets(max_n=4), posets(max_n=4))
def test_component_multiplicativity(P, Q):
    union = Poset(P.n + Q.n, list(P.covers) + [(u + P.n, v + P.n) for u, v in Q.covers])
    assert classify_N2(union).in_n2 == (classify_N2(P).in_n2 and classify_N2(Q).in_n2)
    c = classify_N2(union)
    if c.in_n2:
        assert nmu_check(union, c.witness).holds


def test_antichain_in_n2():
    c = classify_N2(antichain_poset(3))
    assert c.in_n2 and len(c.components) == 3


def test_component_classification_keeps_ids():
    P = Poset(7, [(5, 6), (6, 7), (1, 2)])
    c = classify_N2(P)
    assert c.in_n2
    assert sorted(e for ch in c.witness.c1.chains for e in ch) == list(P.elements)
    r = classify_component(chain_poset(3))
    assert r.in_n2 and r.pair.c1 == ChainCover([(1, 2, 3)])
