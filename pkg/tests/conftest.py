from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from nmu.poset import Poset, grid_columns, grid_poset, grid_rows, poset_from_relation
from nmu.sorting import ChainCover, CoverPair


@st.composite
def posets(draw, min_n: int = 1, max_n: int = 6):
    """Random naturally labelled posets: a random relation on i < j, transitively reduced."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    P = poset_from_relation(n, chosen)
    # scramble ids so nothing relies on natural labelling
    perm = draw(st.permutations(list(range(1, n + 1))))
    return P.relabel({e: perm[e - 1] for e in P.elements})


def grid_pair(rows: int, cols: int) -> tuple[Poset, CoverPair]:
    return grid_poset(rows, cols), CoverPair(ChainCover(grid_rows(rows, cols)), ChainCover(grid_columns(rows, cols)))


def random_labeling(P: Poset, rng: random.Random, values: int | None = None) -> dict[int, int]:
    hi = values or P.n
    return {e: rng.randint(1, hi) for e in P.elements}


@pytest.fixture
def rng():
    return random.Random(20240611)
