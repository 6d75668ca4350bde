"""Exhaustive enumeration and the definitional N2 decision.

Nothing here relies on the classification theorem: posets are enumerated up
to isomorphism, chain covers are enumerated outright, and membership is
decided by searching all cover pairs.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Optional

from .errors import SizeLimitError
from .poset import Poset, bits, is_linear_extension
from .sorting import (
    BitCover,
    ChainCover,
    CoverPair,
    chain_sort,
    compiled_pair_holds,
    nmu_check,
)

POSET_LIMIT = 8
COVER_LIMIT = 8
BRUTE_FORCE_LIMIT = 7

# ---------------------------------------------------------------- isomorphism


def _refined_colors(P: Poset) -> list[tuple]:
    """Isomorphism-invariant element colours (index 0 unused)."""
    colors: list = [None] + [
        (P.down_mask(e).bit_count(), P.up_mask(e).bit_count(), P.down_degree(e), P.up_degree(e))
        for e in P.elements
    ]
    for _ in range(3):
        ranks = {c: i for i, c in enumerate(sorted(set(colors[1:])))}
        new = [None]
        for e in P.elements:
            new.append(
                (
                    ranks[colors[e]],
                    tuple(sorted(ranks[colors[v]] for v in P.upper_covers(e))),
                    tuple(sorted(ranks[colors[u]] for u in P.lower_covers(e))),
                )
            )
        if len(set(new[1:])) == len(set(colors[1:])):
            break
        colors = new
    ranks = {c: i for i, c in enumerate(sorted(set(colors[1:])))}
    return [None] + [ranks[colors[e]] for e in P.elements]


def canonical_form(P: Poset) -> tuple[bytes, dict[int, int]]:
    """Minimal order-matrix encoding and the relabelling that achieves it.

    Candidate orderings are restricted to those sorting elements by a refined
    invariant colour, which keeps the minimum canonical while pruning most
    permutations.  Returns ``(key, perm)`` with ``perm`` mapping old ids to
    canonical ids.
    """
    n = P.n
    colors = _refined_colors(P)
    classes: dict[int, list[int]] = {}
    for e in P.elements:
        classes.setdefault(colors[e], []).append(e)
    groups = [classes[c] for c in sorted(classes)]
    best = None
    best_order = None
    for choice in product(*(permutations(g) for g in groups)):
        order = [e for part in choice for e in part]
        pos = {e: i for i, e in enumerate(order)}
        rows = []
        for e in order:
            row = 0
            for f in bits(P.up_mask(e)):
                row |= 1 << (n - 1 - pos[f])
            rows.append(row)
        if best is None or rows < best:
            best = rows
            best_order = order
    width = max(1, (n + 7) // 8)
    key = bytes([n]) + b"".join(r.to_bytes(width, "big") for r in (best or []))
    perm = {e: i + 1 for i, e in enumerate(best_order or [])}
    return key, perm


@dataclass(frozen=True)
class CanonicalPoset:
    poset: Poset
    canonical_key: bytes


def canonicalize(P: Poset) -> CanonicalPoset:
    key, perm = canonical_form(P)
    return CanonicalPoset(P.relabel(perm), key)


def enumerate_posets(max_n: int, connected_only: bool = False, force: bool = False) -> Iterator[CanonicalPoset]:
    """One representative per isomorphism class, for sizes ``1..max_n``.

    Size ``n`` posets are obtained from size ``n - 1`` ones by adding a new
    maximal element above some antichain.  Output is ordered by size, then key.
    """
    if max_n > POSET_LIMIT and not force:
        raise SizeLimitError(f"poset enumeration is limited to {POSET_LIMIT} elements (got {max_n})")
    level = [canonicalize(Poset(1, []))] if max_n >= 1 else []
    for n in range(1, max_n + 1):
        if n > 1:
            found: dict[bytes, CanonicalPoset] = {}
            for cp in level:
                P = cp.poset
                for lower in antichains(P):
                    Q = Poset(n, list(P.covers) + [(u, n) for u in lower])
                    c = canonicalize(Q)
                    found.setdefault(c.canonical_key, c)
            level = [found[k] for k in sorted(found)]
        for cp in level:
            if not connected_only or cp.poset.is_connected():
                yield cp


def antichains(P: Poset) -> Iterator[tuple[int, ...]]:
    """All antichains of ``P`` (including the empty one), as sorted tuples."""
    elems = list(P.elements)

    def rec(i: int, chosen: list[int], blocked: int):
        if i == len(elems):
            yield tuple(chosen)
            return
        e = elems[i]
        yield from rec(i + 1, chosen, blocked)
        if not blocked >> e & 1:
            chosen.append(e)
            yield from rec(i + 1, chosen, blocked | P.up_mask(e) | P.down_mask(e))
            chosen.pop()

    yield from rec(0, [], 0)


# ---------------------------------------------------------------- chain covers


def enumerate_chain_covers(P: Poset, force: bool = False) -> Iterator[ChainCover]:
    """Every partition of ``P`` into saturated chains.

    A cover is the same thing as a set of Hasse edges using at most one edge
    up and one edge down at each element; edges are decided in sorted order.
    """
    if P.n > COVER_LIMIT and not force:
        raise SizeLimitError(f"chain-cover enumeration is limited to {COVER_LIMIT} elements (got {P.n})")
    edges = P.edges()
    up_used = [False] * (P.n + 1)
    down_used = [False] * (P.n + 1)
    chosen: list[tuple[int, int]] = []

    def rec(i: int):
        if i == len(edges):
            yield _cover_from_edges(P, chosen)
            return
        u, v = edges[i]
        if not up_used[u] and not down_used[v]:
            up_used[u] = down_used[v] = True
            chosen.append((u, v))
            yield from rec(i + 1)
            chosen.pop()
            up_used[u] = down_used[v] = False
        yield from rec(i + 1)

    yield from rec(0)


def _cover_from_edges(P: Poset, edges: list[tuple[int, int]]) -> ChainCover:
    nxt = dict(edges)
    has_prev = {v for _, v in edges}
    chains = []
    for e in P.elements:
        if e in has_prev:
            continue
        c = [e]
        while c[-1] in nxt:
            c.append(nxt[c[-1]])
        chains.append(tuple(c))
    return ChainCover(chains)


def ordered_chain_covers(P: Poset, force: bool = False) -> list[ChainCover]:
    """Chain covers in search order: fewest chains first, then lexicographic."""
    return sorted(enumerate_chain_covers(P, force), key=lambda C: (len(C), C.chains))


def iter_cover_pairs(covers: list[ChainCover], P: Poset, require_coverage: bool = True) -> Iterator[CoverPair]:
    """Unordered pairs ``{covers[i], covers[j]}`` with ``i <= j``."""
    edge_index = {e: k for k, e in enumerate(P.edges())}
    full = (1 << len(edge_index)) - 1
    emask = [sum(1 << edge_index[e] for e in C.edges()) for C in covers]
    for i, C1 in enumerate(covers):
        for j in range(i, len(covers)):
            if require_coverage and (emask[i] | emask[j]) != full:
                continue
            yield CoverPair(C1, covers[j])


# ---------------------------------------------------------------- brute force


@dataclass(frozen=True)
class BruteForceResult:
    in_n2: bool
    witness: Optional[CoverPair]
    pairs_tested: int


def brute_force_N2(P: Poset, force: bool = False, predicate=None) -> BruteForceResult:
    """Search every unordered pair of chain covers for a non-messing-up pair.

    ``predicate``, when given, further filters candidate pairs (used by the
    exhaustive N2' / N2'' searches); the first passing pair is returned.
    """
    if P.n > BRUTE_FORCE_LIMIT and not force:
        raise SizeLimitError(f"brute force is limited to {BRUTE_FORCE_LIMIT} elements (got {P.n})")
    covers = ordered_chain_covers(P, force=True)
    compiled = {}
    tested = 0
    for pair in iter_cover_pairs(covers, P):
        if predicate is not None and not predicate(pair):
            continue
        tested += 1
        b1 = compiled.get(pair.c1) or compiled.setdefault(pair.c1, BitCover(pair.c1))
        b2 = compiled.get(pair.c2) or compiled.setdefault(pair.c2, BitCover(pair.c2))
        if compiled_pair_holds(b1, b2):
            return BruteForceResult(True, pair, tested)
    return BruteForceResult(False, None, tested)


def no_containment(pair: CoverPair) -> bool:
    """No chain of one cover lies inside a chain of the other."""
    for A, B in ((pair.c1, pair.c2), (pair.c2, pair.c1)):
        for a in A.chains:
            sa = set(a)
            if any(sa <= set(b) for b in B.chains):
                return False
    return True


def small_intersections(pair: CoverPair) -> bool:
    """Every red chain meets every blue chain in at most one element."""
    return all(len(set(a) & set(b)) <= 1 for a in pair.c1.chains for b in pair.c2.chains)


def brute_force_N2_prime(P: Poset, force: bool = False) -> BruteForceResult:
    return brute_force_N2(P, force, predicate=no_containment)


def brute_force_N2_doubleprime(P: Poset, force: bool = False) -> BruteForceResult:
    return brute_force_N2(P, force, predicate=small_intersections)


# ---------------------------------------------------------------- extension sampling


@dataclass
class ExtensionHistogram:
    poset: Poset
    pair: CoverPair
    counts: Counter = field(default_factory=Counter)
    trials: int = 0
    seed: Optional[int] = None
    exhaustive: bool = False

    def rows(self) -> list[tuple[tuple[int, ...], int, float]]:
        """``(rank sequence, count, frequency)`` sorted by rank sequence."""
        return [(ext, c, c / self.trials) for ext, c in sorted(self.counts.items())]


def _trial_rng(seed: int, trial: int) -> random.Random:
    # independent stream per trial, so any partition of trials gives the same result
    return random.Random(f"{seed}:{trial}")


def sample_extension_distribution(
    P: Poset, pair: CoverPair, trials: int, seed: int, exhaustive: bool = False
) -> ExtensionHistogram:
    """Histogram of linear extensions produced by double-sorting random labelings.

    Each trial labels ``P`` with a uniformly random bijection onto ``1..n``,
    sorts along ``c1`` then ``c2``, and records the rank sequence
    ``(label of element 1, ..., label of element n)``.  With ``exhaustive``
    every one of the ``n!`` labelings is used once instead.
    """
    verdict = nmu_check(P, pair)
    if not verdict.holds:
        from .errors import InvalidCoverError

        raise InvalidCoverError(f"cover pair does not have the non-messing-up property ({verdict.reason or 'counterexample found'})")
    hist = ExtensionHistogram(P, pair, seed=seed, exhaustive=exhaustive)
    if exhaustive:
        labelings = (dict(zip(P.elements, perm)) for perm in permutations(range(1, P.n + 1)))
    else:
        labelings = (_random_labeling(P, _trial_rng(seed, t)) for t in range(trials))
    for lab in labelings:
        res = chain_sort(P, pair.c2, chain_sort(P, pair.c1, lab))
        hist.counts[tuple(res[e] for e in P.elements)] += 1
        hist.trials += 1
    return hist


def _random_labeling(P: Poset, rng: random.Random) -> dict[int, int]:
    values = list(range(1, P.n + 1))
    rng.shuffle(values)
    return dict(zip(P.elements, values))


def histogram_is_valid(hist: ExtensionHistogram) -> bool:
    P = hist.poset
    return sum(hist.counts.values()) == hist.trials and all(
        is_linear_extension(P, dict(zip(P.elements, ext))) for ext in hist.counts
    )


# ---------------------------------------------------------------- cross-validation

COMPARE_LIMIT = 7


@dataclass
class CompareReport:
    records: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    def summary(self) -> dict:
        """Counts per size; contains no timing information, so it is reproducible byte for byte."""
        by_n: dict[int, dict[str, int]] = {}
        for r in self.records:
            row = by_n.setdefault(r.n, {"posets": 0, "n2": 0, "n2_prime": 0, "n2_doubleprime": 0, "mismatches": 0})
            row["posets"] += 1
            row["n2"] += r.n2
            row["n2_prime"] += r.n2_prime
            row["n2_doubleprime"] += r.n2_doubleprime
            row["mismatches"] += bool(r.mismatches)
        return {
            "by_size": {str(n): by_n[n] for n in sorted(by_n)},
            "total": len(self.records),
            "mismatches": [{"key": r.key, "covers": r.covers, "fields": r.mismatches} for r in self.mismatches],
        }


def compare_poset(P: Poset, key: str = "", brute: bool = True, technical: bool = True, timings: bool = False):
    """Classify one poset and, with ``brute``, check every verdict against exhaustive search."""
    from time import perf_counter

    from .classify import classify_N2
    from .records import pair_to_json, record_from_classification

    t0 = perf_counter()
    c = classify_N2(P, technical=technical)
    t1 = perf_counter()
    rec = record_from_classification(c, key)
    if brute:
        b = brute_force_N2(P, force=True)
        bp = brute_force_N2_prime(P, force=True).in_n2 if b.in_n2 else False
        bd = brute_force_N2_doubleprime(P, force=True).in_n2 if b.in_n2 else False
        rec.brute_force = {
            "n2": b.in_n2,
            "n2_prime": bp,
            "n2_doubleprime": bd,
            "witness": pair_to_json(b.witness) if b.witness is not None else None,
            "pairs_tested": b.pairs_tested,
        }
        rec.mismatches = [f for f, ours, theirs in (("n2", c.in_n2, b.in_n2), ("n2_prime", c.in_n2_prime, bp), ("n2_doubleprime", c.in_n2_doubleprime, bd)) if ours != theirs]
    if timings:
        rec.timings = {"classify_s": t1 - t0, "total_s": perf_counter() - t0}
    return rec


def _compare_task(args):
    P, key, brute, technical, timings = args
    return compare_poset(P, key, brute, technical, timings)


def oracle_compare(
    max_n: int,
    jobs: int = 1,
    connected_only: bool = False,
    brute: bool = True,
    technical: bool = True,
    timings: bool = False,
    force: bool = False,
) -> CompareReport:
    """Run the classifier (and brute force) on every poset up to ``max_n`` elements.

    Records come back in enumeration order whatever ``jobs`` is.
    """
    if max_n > COMPARE_LIMIT and not force:
        raise SizeLimitError(f"oracle comparison is limited to {COMPARE_LIMIT} elements (got {max_n})")
    tasks = [
        (cp.poset, cp.canonical_key.hex(), brute, technical, timings)
        for cp in enumerate_posets(max_n, connected_only, force=force)
    ]
    if jobs <= 1:
        records = [_compare_task(t) for t in tasks]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_compare_task, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
    report = CompareReport(records)
    report.mismatches = [r for r in records if r.mismatches]
    return report
