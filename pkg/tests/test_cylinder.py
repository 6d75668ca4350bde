from __future__ import annotations

from itertools import product

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nmu.cylinder import (
    CylCoord,
    brute_force_goes_around,
    canon,
    canonical_cover_pair,
    convex_windows,
    cyl_canonical,
    cyl_covers,
    cyl_leq,
    fits_fundamental_domain,
    goes_around,
    is_degenerate,
    lift_chain,
    rectangle_cells,
    window_poset,
)
from nmu.errors import BadParamsError, NotConvexError
from nmu.poset import Diamond, find_diamonds, grid_columns, grid_poset, grid_rows
from nmu.sorting import ZERO_ONE, nmu_check

PARAMS = [(k, n) for n in range(2, 8) for k in range(1, n)]


def leq_by_wide_scan(k, n, a, b, width=40):
    """Independent order test: try every shift of ``b`` in a wide range."""
    return any(a[0] <= b[0] - t * k and a[1] <= b[1] + t * (n - k) for t in range(-width, width + 1))


def test_canonical_examples():
    assert cyl_canonical(3, 4, 3, 0) == CylCoord(3, 4, 0, 1)
    assert cyl_canonical(3, 4, 1, 1).cell == (1, 1)
    assert cyl_canonical(2, 5, -2, 7).cell == (0, 4)
    with pytest.raises(BadParamsError):
        cyl_canonical(4, 4, 0, 0)
    with pytest.raises(BadParamsError):
        cyl_canonical(0, 3, 0, 0)


@given(st.sampled_from(PARAMS), st.integers(-30, 30), st.integers(-30, 30), st.integers(-5, 5))
def test_canonical_is_class_invariant(kn, i, j, t):
    k, n = kn
    c = canon(k, n, i, j)
    assert 0 <= c[0] < k
    assert canon(k, n, i - t * k, j + t * (n - k)) == c
    # c is obtained from (i, j) by an integral number of applications of the relation
    assert (i - c[0]) % k == 0 and (c[1] - j) * k == (i - c[0]) * (n - k)


def test_leq_examples():
    assert cyl_leq(3, 4, (2, 0), (0, 1))
    assert not cyl_leq(3, 4, (0, 1), (2, 0))
    assert cyl_leq(3, 4, (1, 1), (1, 1))


@pytest.mark.parametrize("k,n", PARAMS)
def test_leq_matches_wide_scan_and_is_partial_order(k, n):
    cells = [(i, j) for i in range(k) for j in range(-3, 4)]
    rel = {(a, b): cyl_leq(k, n, a, b) for a in cells for b in cells}
    for (a, b), v in rel.items():
        assert v == leq_by_wide_scan(k, n, a, b)
    for a in cells:
        assert rel[a, a]
    for a, b in product(cells, cells):
        if a != b and rel[a, b]:
            assert not rel[b, a]
    for a, b, c in product(cells[:10], cells, cells):
        if rel[a, b] and rel[b, c]:
            assert rel[a, c]


def test_covers_examples():
    up_i, up_j = cyl_covers(3, 4, (2, 0))
    assert {up_i.cell, up_j.cell} == {(0, 1), (2, 1)}
    assert {c.cell for c in cyl_covers(3, 4, (0, 0))} == {(1, 0), (0, 1)}


@pytest.mark.parametrize("k,n", PARAMS)
def test_covers_are_strictly_above(k, n):
    for a in [(i, j) for i in range(k) for j in range(-2, 3)]:
        for c in cyl_covers(k, n, a):
            assert cyl_leq(k, n, a, c.cell) and not cyl_leq(k, n, c.cell, a)


# ---------------------------------------------------------------- windows


def test_full_rectangle_in_degenerate_cylinder_is_a_chain():
    w = window_poset(3, 4, rectangle_cells(3, 4, 3, 4))
    assert len(w) == 12
    # Cyl_{3,4} is totally ordered: the 12 classes form a 12-chain, not a grid
    assert is_degenerate(3, 4) and w.poset.is_chain()


def test_rectangle_window_is_the_grid():
    for k, n, r, c in [(3, 7, 3, 4), (3, 8, 3, 4), (4, 9, 3, 4), (2, 5, 2, 3)]:
        w = window_poset(k, n, rectangle_cells(k, n, r, c))
        G = grid_poset(r, c)
        assert nx.is_isomorphic(nx.DiGraph(sorted(w.poset.covers)), nx.DiGraph(sorted(G.covers)))
        pair = canonical_cover_pair(w)
        assert sorted(len(ch) for ch in pair.c1.chains) == [c] * r
        assert sorted(len(ch) for ch in pair.c2.chains) == [r] * c


def test_rectangle_pair_is_rows_and_columns():
    w = window_poset(3, 7, rectangle_cells(3, 7, 3, 4))
    # cell (r, c) is element r*4 + c + 1 because cells are sorted lexicographically
    pair = canonical_cover_pair(w)
    assert pair.c1.chains == tuple(sorted(grid_rows(3, 4)))
    assert pair.c2.chains == tuple(sorted(grid_columns(3, 4)))


def test_single_cell_window():
    w = window_poset(2, 4, [(0, 0)])
    pair = canonical_cover_pair(w)
    assert pair.c1 == pair.c2 and pair.c1.chains == ((1,),)


def test_rectangle_minus_interior_cell_not_convex():
    cells = [c for c in rectangle_cells(3, 7, 3, 3) if c != (1, 1)]
    with pytest.raises(NotConvexError) as exc:
        window_poset(3, 7, cells)
    a, mid, b = exc.value.witness
    assert mid == (1, 1)


def test_window_rejects_bad_cells():
    with pytest.raises(BadParamsError):
        window_poset(2, 4, [(2, 0)])  # not canonical
    with pytest.raises(BadParamsError):
        window_poset(2, 4, [(0, 0), (0, 0)])


@pytest.mark.parametrize("k,n", [(k, n) for n in range(2, 7) for k in range(1, n)])
def test_window_covers_are_unit_steps_when_nondegenerate(k, n):
    for w in convex_windows(k, n, 6):
        steps = set()
        for a in w.cells:
            for c in cyl_covers(k, n, a):
                if c.cell in w.cells:
                    steps.add((w.element_of(a), w.element_of(c.cell)))
        if is_degenerate(k, n):
            assert w.poset.covers <= steps
        else:
            assert w.poset.covers == steps


@pytest.mark.parametrize("k,n", [(k, n) for n in range(2, 7) for k in range(1, n)])
def test_small_windows_are_non_messing_up(k, n):
    for w in convex_windows(k, n, 8 if n <= 5 else 6):
        pair = canonical_cover_pair(w)
        assert nmu_check(w.poset, pair, ZERO_ONE).holds, (k, n, w.cells)


# ---------------------------------------------------------------- going around


def test_three_four_example_goes_around():
    cells = [canon(3, 4, *c) for c in [(0, 1), (1, 1), (1, 0), (2, 0)]]
    w = window_poset(3, 4, cells)
    e = w.element_of
    # the lattice-step square: (1,0) -> (2,0) -> (3,0)=(0,1) -> (1,1), and (1,0) -> (1,1)
    d = Diamond(e((1, 0)), e((1, 1)), (e((1, 0)), e((2, 0)), e((0, 1)), e((1, 1))), (e((1, 0)), e((1, 1))))
    assert goes_around(w, d)
    assert brute_force_goes_around(w, d)


def test_genuine_diamond_going_around():
    cells = [(1, -1), (1, 0), (0, 1), (1, 1)]
    w = window_poset(2, 4, cells)
    (d,) = find_diamonds(w.poset)
    assert goes_around(w, d) and brute_force_goes_around(w, d)


@pytest.mark.parametrize("k,n", [(k, n) for n in range(4, 8) for k in range(2, n - 1)])
def test_fundamental_domain_rectangles_never_go_around(k, n):
    for r in range(2, k + 1):
        for c in range(2, n - k + 1):
            assert fits_fundamental_domain(k, n, r, c)
            w = window_poset(k, n, rectangle_cells(k, n, r, c))
            ds = find_diamonds(w.poset)
            assert len(ds) == (r - 1) * (c - 1)
            assert not any(goes_around(w, d) for d in ds)


@pytest.mark.parametrize("k,n", [(k, n) for n in range(4, 7) for k in range(2, n - 1)])
def test_goes_around_matches_bounded_search(k, n):
    for w in convex_windows(k, n, 7):
        for d in find_diamonds(w.poset):
            assert goes_around(w, d) == brute_force_goes_around(w, d)


def test_lift_rejects_non_steps():
    with pytest.raises(ValueError):
        lift_chain(2, 4, [(0, 0), (1, 1)])
