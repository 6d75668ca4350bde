"""Splitting elements into chains and contracting pipes back.

A *pipe edge* is a cover ``u < v`` where ``v`` is the only upper cover of
``u`` and ``u`` the only lower cover of ``v``.  These are exactly the edges a
split creates, so contracting every maximal run of pipe edges undoes all
splits at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping

from .errors import InvalidCoverError
from .poset import Chain, Poset
from .sorting import ChainCover, CoverPair, edge_coverage, validate_chain_cover, ChainCoverError


@dataclass(frozen=True)
class SplitMap:
    """How the elements of ``base`` expand into chains of a larger poset.

    ``image_chain[x]`` lists, least first, the elements that ``x`` splits
    into; ``s[x]`` is its length.
    """

    base: Poset
    image_chain: Mapping[int, Chain]

    @property
    def s(self) -> dict[int, int]:
        return {x: len(c) for x, c in self.image_chain.items()}

    def top(self, x: int) -> int:
        return self.image_chain[x][-1]

    def bottom(self, x: int) -> int:
        return self.image_chain[x][0]

    def preimage(self) -> dict[int, int]:
        return {e: x for x, c in self.image_chain.items() for e in c}


@dataclass(frozen=True)
class ReductionWitness:
    original: Poset
    reduced: Poset
    split: SplitMap


def split_element(Q: Poset, x: int, s: int) -> Poset:
    """Replace ``x`` by a chain ``x_1 < ... < x_s``.

    ``x_1`` keeps the id ``x``; ``x_2 .. x_s`` get ids ``n+1 .. n+s-1``.
    Upper covers of ``x`` move to ``x_s``, lower covers stay on ``x_1``.
    """
    if s < 1:
        raise ValueError("split size must be positive")
    if x not in Q.elements:
        raise ValueError(f"{x} is not an element")
    chain = [x] + list(range(Q.n + 1, Q.n + s))
    top = chain[-1]
    covers = [(top, v) if u == x else (u, v) for u, v in Q.covers]
    covers += list(zip(chain, chain[1:]))
    return Poset(Q.n + s - 1, covers)


def split_all(Q: Poset, sizes: Mapping[int, int]) -> tuple[Poset, SplitMap]:
    """Split every element of ``Q`` at once; returns the new poset and the split map."""
    image = {}
    nxt = Q.n + 1
    for x in Q.elements:
        s = sizes.get(x, 1)
        image[x] = (x,) + tuple(range(nxt, nxt + s - 1))
        nxt += s - 1
    covers = [(image[u][-1], image[v][0]) for u, v in Q.covers]
    for c in image.values():
        covers += list(zip(c, c[1:]))
    return Poset(nxt - 1, covers), SplitMap(Q, image)


def pipe_edges(P: Poset) -> list[tuple[int, int]]:
    return [
        (u, v)
        for u, v in P.edges()
        if P.upper_covers(u) == (v,) and P.lower_covers(v) == (u,)
    ]


def pipes(P: Poset) -> list[Chain]:
    """Maximal pipes (including single elements), ordered by their least id."""
    nxt = dict(pipe_edges(P))
    prev = {v: u for u, v in nxt.items()}
    out = []
    for e in P.elements:
        if e in prev:
            continue
        c = [e]
        while c[-1] in nxt:
            c.append(nxt[c[-1]])
        out.append(tuple(c))
    out.sort(key=min)
    return out


def contract(P: Poset, blocks: list[Chain]) -> ReductionWitness:
    """Contract each block (a run of consecutive pipe edges) to one element.

    Block ``i`` becomes element ``i + 1`` of the reduced poset.
    """
    owner = {e: i + 1 for i, b in enumerate(blocks) for e in b}
    covers = set()
    for u, v in P.covers:
        a, b = owner[u], owner[v]
        if a != b:
            covers.add((a, b))
    reduced = Poset(len(blocks), covers)
    split = SplitMap(reduced, {i + 1: tuple(b) for i, b in enumerate(blocks)})
    return ReductionWitness(P, reduced, split)


def most_reduced(P: Poset) -> ReductionWitness:
    return contract(P, pipes(P))


def partial_reductions(P: Poset, limit: int = 4096) -> Iterator[ReductionWitness]:
    """Reductions obtained by cutting maximal pipes into consecutive segments.

    The most reduced poset (no cuts) comes first and ``P`` itself (every cut)
    last.  At most ``limit`` reductions are produced.
    """
    full = pipes(P)
    options = []
    for pipe in full:
        gaps = len(pipe) - 1
        options.append([tuple((mask >> g) & 1 for g in range(gaps)) for mask in range(1 << gaps)])
    count = 0
    for choice in product(*options):
        blocks = []
        for pipe, cuts in zip(full, choice):
            seg = [pipe[0]]
            for e, cut in zip(pipe[1:], cuts):
                if cut:
                    blocks.append(tuple(seg))
                    seg = [e]
                else:
                    seg.append(e)
            blocks.append(tuple(seg))
        blocks.sort(key=min)
        yield contract(P, blocks)
        count += 1
        if count >= limit:
            return


def contract_edge(P: Poset, edge: tuple[int, int]) -> Poset:
    """Merge the two ends of a single pipe edge; the merged element keeps the lower id."""
    u, v = edge
    if P.upper_covers(u) != (v,) or P.lower_covers(v) != (u,):
        raise ValueError(f"{edge} is not a pipe edge")
    remap = {}
    nid = 0
    for e in P.elements:
        if e == v:
            continue
        nid += 1
        remap[e] = nid
    remap[v] = remap[u]
    covers = {(remap[a], remap[b]) for a, b in P.covers if (a, b) != edge}
    return Poset(P.n - 1, covers)


def induced_coloring(reduced_pair: CoverPair, split: SplitMap, original: Poset | None = None) -> CoverPair:
    """Push a cover pair of the reduced poset up to the split poset.

    Every reduced chain becomes the concatenation of the image chains of its
    elements, so the edges inside an image chain are doubly coloured.
    """
    try:
        for C in reduced_pair.covers():
            validate_chain_cover(split.base, C)
    except ChainCoverError as exc:
        raise InvalidCoverError(str(exc)) from exc
    covers = []
    for C in reduced_pair.covers():
        chains = [tuple(e for x in chain for e in split.image_chain[x]) for chain in C.chains]
        covers.append(ChainCover(chains))
    out = CoverPair(*covers)
    if original is not None:
        try:
            for C in out.covers():
                validate_chain_cover(original, C)
        except ChainCoverError as exc:
            raise InvalidCoverError(f"induced cover is invalid: {exc}") from exc
        if edge_coverage(split.base, reduced_pair) and not edge_coverage(original, out):
            raise InvalidCoverError("induced pair lost edge coverage")
    return out


def collapse_coloring(pair: CoverPair, split: SplitMap) -> CoverPair:
    """Inverse of :func:`induced_coloring` on pairs it produced."""
    pre = split.preimage()
    covers = []
    for C in pair.covers():
        chains = []
        for chain in C.chains:
            out: list[int] = []
            for e in chain:
                x = pre[e]
                if not out or out[-1] != x:
                    out.append(x)
            chains.append(tuple(out))
        covers.append(ChainCover(chains))
    return CoverPair(*covers)
