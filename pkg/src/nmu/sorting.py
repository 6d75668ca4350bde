"""Chain covers, chain sorting and the non-messing-up verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    ChainCoverError,
    InvalidCoverError,
    NotCoveringError,
    NotSaturatedError,
    OverlapError,
    SizeLimitError,
)
from .poset import Chain, Labeling, Poset, bits, mask_of

PERMUTATIONS = "permutations"
ZERO_ONE = "zero-one"
MODES = (PERMUTATIONS, ZERO_ONE)
PERMUTATION_LIMIT = 8

RED = "red"
BLUE = "blue"
DOUBLE = "double"


@dataclass(frozen=True)
class ChainCover:
    """Disjoint saturated chains, each listed from least to greatest element."""

    chains: tuple[Chain, ...]

    def __init__(self, chains: Iterable[Sequence[int]]):
        object.__setattr__(self, "chains", tuple(sorted(tuple(c) for c in chains)))

    def __iter__(self):
        return iter(self.chains)

    def __len__(self):
        return len(self.chains)

    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(e for c in self.chains for e in zip(c, c[1:]))

    def chain_of(self) -> dict[int, Chain]:
        return {e: c for c in self.chains for e in c}


@dataclass(frozen=True, eq=False)
class CoverPair:
    """Unordered pair of chain covers; ``c1`` is drawn red and ``c2`` blue."""

    c1: ChainCover
    c2: ChainCover

    def _key(self):
        return tuple(sorted((self.c1.chains, self.c2.chains)))

    def __eq__(self, other):
        if not isinstance(other, CoverPair):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def swapped(self) -> "CoverPair":
        return CoverPair(self.c2, self.c1)

    def covers(self) -> tuple[ChainCover, ChainCover]:
        return self.c1, self.c2

    def edge_colors(self) -> dict[tuple[int, int], str]:
        red, blue = self.c1.edges(), self.c2.edges()
        out = {}
        for e in red | blue:
            out[e] = DOUBLE if (e in red and e in blue) else (RED if e in red else BLUE)
        return out


def validate_chain_cover(P: Poset, C: ChainCover) -> None:
    """Raise a :class:`ChainCoverError` subclass unless ``C`` is a chain cover of ``P``."""
    seen: set[int] = set()
    for chain in C.chains:
        if not chain:
            raise NotSaturatedError("empty chain")
        for e in chain:
            if e not in P.elements:
                raise ChainCoverError(f"element {e} is not in the poset")
            if e in seen:
                raise OverlapError(f"element {e} lies in more than one chain")
            seen.add(e)
        for u, v in zip(chain, chain[1:]):
            if (u, v) not in P.covers:
                raise NotSaturatedError(f"step {u} -> {v} in chain {list(chain)} is not a cover relation", (u, v))
    missed = tuple(e for e in P.elements if e not in seen)
    if missed:
        raise NotCoveringError(f"elements {list(missed)} are in no chain", missed)


def is_chain_cover(P: Poset, C: ChainCover) -> bool:
    try:
        validate_chain_cover(P, C)
    except ChainCoverError:
        return False
    return True


def edge_coverage(P: Poset, pair: CoverPair) -> bool:
    return P.covers <= (pair.c1.edges() | pair.c2.edges())


def chain_sort(P: Poset, C: ChainCover, labeling: Labeling) -> dict:
    """Sort labels along each chain so that smaller elements get smaller labels."""
    out = dict(labeling)
    for chain in C.chains:
        values = sorted(labeling[e] for e in chain)
        for e, val in zip(chain, values):
            out[e] = val
    return out


def is_sorted_along(P: Poset, C: ChainCover, labeling: Labeling) -> bool:
    return all(labeling[u] <= labeling[v] for chain in C.chains for u, v in zip(chain, chain[1:]))


def _first_unsorted_edge(C: ChainCover, labeling: Labeling) -> Optional[tuple[int, int]]:
    for chain in C.chains:
        for u, v in zip(chain, chain[1:]):
            if labeling[u] > labeling[v]:
                return (u, v)
    return None


def double_sort(P: Poset, first: ChainCover, second: ChainCover, labeling: Labeling) -> dict:
    return chain_sort(P, second, chain_sort(P, first, labeling))


@dataclass(frozen=True)
class Counterexample:
    labeling: dict
    first: int  # index (1 or 2) of the cover sorted first and then found unsorted
    edge: tuple[int, int]
    result: dict = field(default_factory=dict)


@dataclass(frozen=True)
class NmuVerdict:
    holds: bool
    mode: str
    labelings_checked: int
    counterexample: Optional[Counterexample] = None
    reason: Optional[str] = None


def _validate_pair(P: Poset, pair: CoverPair) -> None:
    for C in pair.covers():
        try:
            validate_chain_cover(P, C)
        except ChainCoverError as exc:
            raise InvalidCoverError(str(exc)) from exc


def nmu_check(P: Poset, pair: CoverPair, mode: str = ZERO_ONE, force: bool = False) -> NmuVerdict:
    """Decide the non-messing-up property of ``pair`` on ``P`` by enumeration.

    ``zero-one`` runs over all ``2**n`` labelings with values in {0, 1};
    ``permutations`` runs over all ``n!`` bijections onto ``1..n``.  Labelings
    are visited in a fixed order and the first failure is reported.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    _validate_pair(P, pair)
    if not edge_coverage(P, pair):
        return NmuVerdict(False, mode, 0, None, "EdgeCoverage")
    if mode == PERMUTATIONS:
        if P.n > PERMUTATION_LIMIT and not force:
            raise SizeLimitError(f"permutation mode is limited to {PERMUTATION_LIMIT} elements (got {P.n})")
        return _check_permutations(P, pair)
    return _check_zero_one(P, pair)


def _check_permutations(P: Poset, pair: CoverPair) -> NmuVerdict:
    covers = pair.covers()
    checked = 0
    for i in (0, 1):
        first, second = covers[i], covers[1 - i]
        for perm in permutations(range(1, P.n + 1)):
            checked += 1
            lab = dict(zip(P.elements, perm))
            res = double_sort(P, first, second, lab)
            bad = _first_unsorted_edge(first, res)
            if bad is not None:
                return NmuVerdict(False, PERMUTATIONS, checked, Counterexample(lab, i + 1, bad, res))
    return NmuVerdict(True, PERMUTATIONS, checked)


class BitCover:
    """A chain cover compiled for {0,1}-labelings encoded as bit sets.

    Bit ``e`` set means element ``e`` carries label 1.  Sorting a chain moves
    its ones to the top of the chain.
    """

    __slots__ = ("chains", "masks", "tops")

    def __init__(self, C: ChainCover):
        self.chains = C.chains
        self.masks = [mask_of(c) for c in C.chains]
        self.tops = []
        for c in C.chains:
            table = [0]
            m = 0
            for e in reversed(c):
                m |= 1 << e
                table.append(m)
            self.tops.append(table)

    def sort(self, lab: int) -> int:
        out = 0
        for m, top in zip(self.masks, self.tops):
            out |= top[(lab & m).bit_count()]
        return out

    def is_sorted(self, lab: int) -> bool:
        for m, top in zip(self.masks, self.tops):
            part = lab & m
            if part != top[part.bit_count()]:
                return False
        return True

    def sorted_images(self):
        """Every labeling that is already sorted along this cover."""
        for parts in product(*self.tops):
            out = 0
            for p in parts:
                out |= p
            yield out


def _check_zero_one(P: Poset, pair: CoverPair) -> NmuVerdict:
    compiled = (BitCover(pair.c1), BitCover(pair.c2))
    checked = 0
    for i in (0, 1):
        first, second = compiled[i], compiled[1 - i]
        seen: set[int] = set()
        for raw in range(1 << P.n):
            checked += 1
            lab = raw << 1
            mid = first.sort(lab)
            if mid in seen:
                continue
            seen.add(mid)
            res = second.sort(mid)
            if not first.is_sorted(res):
                as_dict = {e: lab >> e & 1 for e in P.elements}
                res_dict = {e: res >> e & 1 for e in P.elements}
                bad = _first_unsorted_edge(pair.covers()[i], res_dict)
                return NmuVerdict(False, ZERO_ONE, checked, Counterexample(as_dict, i + 1, bad, res_dict))
    return NmuVerdict(True, ZERO_ONE, checked)


def pair_holds(P: Poset, pair: CoverPair) -> bool:
    """Fast decision of the non-messing-up property (no counterexample).

    Only labelings already sorted along the first cover are visited, since
    the first sort maps every labeling onto one of them and fixes them.
    Assumes both covers are valid; checks edge coverage.
    """
    if not edge_coverage(P, pair):
        return False
    return compiled_pair_holds(BitCover(pair.c1), BitCover(pair.c2))


def compiled_pair_holds(b1: BitCover, b2: BitCover) -> bool:
    for first, second in ((b1, b2), (b2, b1)):
        for lab in first.sorted_images():
            if not first.is_sorted(second.sort(lab)):
                return False
    return True


def restrict_cover(C: ChainCover, subset: Iterable[int]) -> list[Chain]:
    """Chains of ``C`` cut down to ``subset``, split wherever a chain leaves it."""
    keep = set(subset)
    out = []
    for chain in C.chains:
        run: list[int] = []
        for e in chain:
            if e in keep:
                run.append(e)
            elif run:
                out.append(tuple(run))
                run = []
        if run:
            out.append(tuple(run))
    return out


def restrict_pair(P: Poset, pair: CoverPair, subset: Iterable[int]) -> tuple[Poset, CoverPair, tuple[int, ...]]:
    """Induced subposet on ``subset`` with the restricted cover pair, relabelled ``1..k``.

    The restricted fragments are re-validated against the subposet.
    """
    Q, ids = P.induced(subset)
    index = {e: i + 1 for i, e in enumerate(ids)}
    covers = []
    for C in pair.covers():
        frag = [tuple(index[e] for e in c) for c in restrict_cover(C, ids)]
        cover = ChainCover(frag)
        validate_chain_cover(Q, cover)
        covers.append(cover)
    return Q, CoverPair(*covers), ids


def labeling_from_sequence(P: Poset, values: Sequence) -> dict:
    if len(values) != P.n:
        raise ValueError(f"expected {P.n} labels, got {len(values)}")
    return dict(zip(P.elements, values))
