"""Deciding N2, N2' and N2'' through reductions and cylinder embeddings.

A connected poset is in N2 when some reduction of it embeds as a convex
window of a cylinder poset such that every four-element diamond that is
planar under the embedding satisfies

    max(s(bottom), s(top)) <= min(s(left), s(right))

where ``s`` counts how many elements each reduced element splits into.  The
witness cover pair is the row/column pair of the window pushed up through
the splits.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import chain as iter_chain
from typing import Iterator, Optional

from .cylinder import CylCoord, CylWindow, canon, canonical_cover_pair, goes_around, step_cells, window_poset
from .errors import InvariantViolation, NotConvexError
from .poset import Chain, Diamond, Poset, degree_bounds_ok, find_diamonds
from .reduction import ReductionWitness, SplitMap, induced_coloring, most_reduced, partial_reductions
from .sorting import ChainCover, CoverPair, pair_holds

log = logging.getLogger(__name__)

VERIFY_LIMIT = 16
RANK_LIMIT = 4096
FALLBACK_LIMIT = 256

TYPE_I = "TypeI"
TYPE_II = "TypeII"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Embedding:
    """Order isomorphism of a poset onto a convex window of ``Cyl_{k,n}``."""

    k: int
    n: int
    assign: dict[int, tuple[int, int]]
    window: CylWindow

    def coord(self, e: int) -> CylCoord:
        return CylCoord(self.k, self.n, *self.assign[e])

    def window_id(self, e: int) -> int:
        return self.window.cells.index(self.assign[e]) + 1

    def cover_pair(self) -> CoverPair:
        """The window's row/column pair expressed on the embedded poset's ids."""
        back = {self.window_id(e): e for e in self.assign}
        w_pair = canonical_cover_pair(self.window)
        covers = [ChainCover(tuple(back[x] for x in c) for c in C.chains) for C in w_pair.covers()]
        return CoverPair(*covers)

    def diamond_goes_around(self, d: Diamond) -> bool:
        wd = Diamond(
            self.window_id(d.x),
            self.window_id(d.y),
            tuple(self.window_id(e) for e in d.chain_a),
            tuple(self.window_id(e) for e in d.chain_b),
        )
        return goes_around(self.window, wd)


def _search_order(Q: Poset) -> list[tuple[int, int, bool]]:
    """BFS order of a connected poset as ``(element, parent, element_is_above_parent)``."""
    root = 1
    order = [(root, 0, False)]
    seen = {root}
    i = 0
    while i < len(order):
        p = order[i][0]
        i += 1
        for v in Q.upper_covers(p):
            if v not in seen:
                seen.add(v)
                order.append((v, p, True))
        for u in Q.lower_covers(p):
            if u not in seen:
                seen.add(u)
                order.append((u, p, False))
    return order


def _down_cells(k: int, n: int, c: tuple[int, int]) -> tuple[tuple[int, int], tuple[int, int]]:
    return canon(k, n, c[0] - 1, c[1]), canon(k, n, c[0], c[1] - 1)


def cylinder_params(size: int) -> list[tuple[int, int]]:
    """Non-degenerate ``(k, n)`` tried for a poset of ``size`` elements, by ``(n, k)``."""
    top = max(2, size)
    out = [(k, k + m) for k in range(2, top + 1) for m in range(2, top + 1)]
    return sorted(out, key=lambda kn: (kn[1], kn[0]))


def iter_embeddings(Q: Poset, params: Optional[list[tuple[int, int]]] = None) -> Iterator[Embedding]:
    """All embeddings of a connected poset with the first element at the origin.

    Cylinders are tried in order of ``(n, k)``; within one cylinder, cells are
    assigned in BFS order trying the i-step before the j-step.
    """
    if Q.n == 0:
        return
    if not Q.is_connected():
        raise ValueError("embedding search needs a connected poset")
    order = _search_order(Q)
    ups = {e: set(Q.upper_covers(e)) for e in Q.elements}
    downs = {e: set(Q.lower_covers(e)) for e in Q.elements}
    for k, n in params or cylinder_params(Q.n):
        cell: dict[int, tuple[int, int]] = {}
        used: dict[tuple[int, int], int] = {}

        def fits(x: int, c: tuple[int, int]) -> bool:
            if c in used:
                return False
            for side, expected in ((step_cells(k, n, c), ups[x]), (_down_cells(k, n, c), downs[x])):
                for nb in side:
                    z = used.get(nb)
                    if z is not None and z not in expected:
                        return False
            for y in ups[x]:
                if y in cell and cell[y] not in step_cells(k, n, c):
                    return False
            for y in downs[x]:
                if y in cell and c not in step_cells(k, n, cell[y]):
                    return False
            return True

        def rec(idx: int):
            if idx == len(order):
                try:
                    w = window_poset(k, n, list(used))
                except NotConvexError:
                    return
                yield Embedding(k, n, dict(cell), w)
                return
            x, p, above = order[idx]
            if idx == 0:
                options = [(0, 0)]
            elif above:
                options = step_cells(k, n, cell[p])
            else:
                options = _down_cells(k, n, cell[p])
            for c in options:
                if fits(x, c):
                    cell[x] = c
                    used[c] = x
                    yield from rec(idx + 1)
                    del cell[x]
                    del used[c]

        yield from rec(0)


def around_count(emb: Embedding, diamonds: list[Diamond]) -> int:
    return sum(emb.diamond_goes_around(d) for d in diamonds)


def ranked_embeddings(Q: Poset, per_cylinder: int = RANK_LIMIT) -> Iterator[Embedding]:
    """Embeddings cylinder by cylinder; within one cylinder, fewest wrapped diamonds first.

    Preferring planar placements keeps witnesses as close to the grid
    picture as possible (a lone square comes out as a unit square rather
    than wrapped around ``Cyl_{2,4}``).  At most ``per_cylinder`` embeddings
    per cylinder are ranked; the rest follow in search order.
    """
    diamonds = find_diamonds(Q)
    current: list[Embedding] = []
    key = None

    def flush():
        current.sort(key=lambda e: around_count(e, diamonds))  # stable: search order breaks ties
        yield from current

    for emb in iter_embeddings(Q):
        if (emb.k, emb.n) != key:
            yield from flush()
            current = []
            key = (emb.k, emb.n)
        if len(current) < per_cylinder:
            current.append(emb)
        else:
            yield emb
    yield from flush()


def embed_convex_cylinder(Q: Poset) -> Optional[Embedding]:
    """Preferred embedding (see :func:`ranked_embeddings`), or ``None`` if there is none."""
    return next(ranked_embeddings(Q), None)


# ---------------------------------------------------------------- technical condition


@dataclass(frozen=True)
class TCViolation:
    diamond: Diamond
    s_values: dict[str, int]


@dataclass(frozen=True)
class TCReport:
    violations: tuple[TCViolation, ...]
    checked: int
    exempt: int

    @property
    def ok(self) -> bool:
        return not self.violations


def technical_condition(split: SplitMap, emb: Embedding) -> TCReport:
    """Check ``max(s(w), s(z)) <= min(s(x), s(y))`` on every planar 4-element diamond."""
    s = split.s
    violations = []
    checked = exempt = 0
    for d in find_diamonds(split.base, four_element_only=True):
        if emb.diamond_goes_around(d):
            exempt += 1
            continue
        checked += 1
        w, z = d.x, d.y
        x, y = d.chain_a[1], d.chain_b[1]
        if max(s[w], s[z]) > min(s[x], s[y]):
            violations.append(TCViolation(d, {"w": s[w], "x": s[x], "y": s[y], "z": s[z]}))
    return TCReport(tuple(violations), checked, exempt)


# ---------------------------------------------------------------- diamond colourings


def _contained(chains: dict[int, Chain], part: tuple[int, ...]) -> bool:
    c = chains.get(part[0])
    return c is not None and set(part) <= set(c)


def diamond_type_matches(pair: CoverPair, d: Diamond) -> list[str]:
    """Every colouring pattern the diamond matches (possibly both, possibly none)."""
    out = []
    for red_cover, blue_cover in ((pair.c1, pair.c2), (pair.c2, pair.c1)):
        red, blue = red_cover.chain_of(), blue_cover.chain_of()
        a, b = d.chain_a, d.chain_b
        if (
            _contained(red, a[:-1])
            and _contained(blue, b[:-1])
            and _contained(red, b[1:])
            and _contained(blue, a[1:])
        ) and TYPE_I not in out:
            out.append(TYPE_I)
    for red_cover, blue_cover in ((pair.c1, pair.c2), (pair.c2, pair.c1)):
        red, blue = red_cover.chain_of(), blue_cover.chain_of()
        if _contained(red, d.chain_a) and _contained(blue, d.chain_b) and TYPE_II not in out:
            out.append(TYPE_II)
    return out


def diamond_type(pair: CoverPair, d: Diamond) -> str:
    matches = diamond_type_matches(pair, d)
    if len(matches) > 1:
        log.info("diamond %s matches both colouring patterns; reporting %s", d, matches[0])
    return matches[0] if matches else UNDETERMINED


def typeI_bound_check(d: Diamond) -> bool:
    return max(len(d.bottom), len(d.top)) < min(len(d.chain_a) - 2, len(d.chain_b) - 2)


def type_i_edges(Q: Poset, pair: CoverPair) -> set[tuple[int, int]]:
    out: set[tuple[int, int]] = set()
    for d in find_diamonds(Q):
        if diamond_type(pair, d) == TYPE_I:
            out |= d.edges()
    return out


def maximal_branch_chains(split: SplitMap, pair: CoverPair) -> list[Chain]:
    """Maximal saturated chains (two or more elements) of the reduced poset avoiding Type I diamond edges."""
    Q = split.base
    blocked = type_i_edges(Q, pair)
    free = [e for e in Q.edges() if e not in blocked]
    up: dict[int, list[int]] = {}
    has_down = set()
    for u, v in free:
        up.setdefault(u, []).append(v)
        has_down.add(v)
    out = []

    def walk(path: list[int]):
        nxt = up.get(path[-1], [])
        if not nxt:
            out.append(tuple(path))
            return
        for v in nxt:
            walk(path + [v])

    for u in sorted(up):
        if u not in has_down:
            walk([u])
    return out


# ---------------------------------------------------------------- classification


DEGREE_BOUND = "DegreeBound"
NO_EMBEDDING = "NoEmbedding"
TECHNICAL_CONDITION = "TechnicalCondition"
BRUTE_FORCE_COUNTEREXAMPLE = "BruteForceCounterexample"


@dataclass(frozen=True)
class Obstruction:
    kind: str
    detail: dict = field(default_factory=dict)


@dataclass
class ComponentResult:
    elements: tuple[int, ...]
    poset: Poset
    in_n2: bool
    reduction: Optional[ReductionWitness] = None
    embedding: Optional[Embedding] = None
    pair: Optional[CoverPair] = None
    obstruction: Optional[Obstruction] = None
    fallback_used: bool = False


@dataclass
class Classification:
    poset: Poset
    components: list[ComponentResult]
    in_n2: bool
    witness: Optional[CoverPair] = None
    obstruction: Optional[Obstruction] = None
    in_n2_prime: bool = False
    in_n2_doubleprime: bool = False


def _valid_options(red: ReductionWitness) -> Iterator[tuple[Embedding, TCReport]]:
    for emb in ranked_embeddings(red.reduced):
        yield emb, technical_condition(red.split, emb)


def classify_component(C: Poset, verify: bool = True, technical: bool = True) -> ComponentResult:
    """Classify a connected poset; ids in the result are those of ``C``.

    ``technical=False`` skips the technical condition.  That is deliberately
    wrong and only exists so the oracle comparison can be shown to catch it.
    """
    ids = tuple(C.elements)
    if not degree_bounds_ok(C):
        bad = [e for e in C.elements if C.up_degree(e) > 2 or C.down_degree(e) > 2]
        return ComponentResult(ids, C, False, obstruction=Obstruction(DEGREE_BOUND, {"elements": bad}))
    first_violation = None
    reductions = iter_chain([most_reduced(C)], _skip_first(partial_reductions(C, FALLBACK_LIMIT + 1)))
    for idx, red in enumerate(reductions):
        for emb, report in _valid_options(red):
            if technical and not report.ok:
                if first_violation is None:
                    first_violation = (red, emb, report)
                continue
            pair = induced_coloring(emb.cover_pair(), red.split, C)
            if verify and technical and C.n <= VERIFY_LIMIT and not pair_holds(C, pair):
                raise InvariantViolation(f"induced witness for {C} fails the non-messing-up check")
            if idx > 0:
                log.warning("fallback reduction changed the verdict for %s", C)
            return ComponentResult(ids, C, True, red, emb, pair, fallback_used=idx > 0)
    if first_violation is not None:
        red, emb, report = first_violation
        v = report.violations[0]
        detail = {
            "k": emb.k,
            "n": emb.n,
            "diamond": [v.diamond.x, v.diamond.chain_a[1], v.diamond.chain_b[1], v.diamond.y],
            "s": v.s_values,
        }
        return ComponentResult(ids, C, False, red, emb, obstruction=Obstruction(TECHNICAL_CONDITION, detail))
    return ComponentResult(ids, C, False, most_reduced(C), obstruction=Obstruction(NO_EMBEDDING))


def _skip_first(it):
    next(it, None)
    return it


def _lift_pair(pairs: list[tuple[CoverPair, tuple[int, ...]]]) -> CoverPair:
    covers = [[], []]
    for pair, ids in pairs:
        for side, C in enumerate(pair.covers()):
            covers[side].extend(tuple(ids[e - 1] for e in c) for c in C.chains)
    return CoverPair(ChainCover(covers[0]), ChainCover(covers[1]))


def split_components(P: Poset) -> list[tuple[Poset, tuple[int, ...]]]:
    return [P.induced(comp) for comp in P.components()]


def classify_N2(P: Poset, verify: bool = True, variants: bool = True, technical: bool = True) -> Classification:
    results = []
    lifted = []
    for C, ids in split_components(P):
        r = classify_component(C, verify, technical)
        r.elements = ids
        results.append(r)
        if r.in_n2:
            lifted.append((r.pair, ids))
    in_n2 = all(r.in_n2 for r in results)
    out = Classification(P, results, in_n2)
    if in_n2:
        out.witness = _lift_pair(lifted)
    else:
        out.obstruction = next(r.obstruction for r in results if not r.in_n2)
    if variants:
        out.in_n2_prime = in_n2 and all(_component_n2_prime(C) for C, _ in split_components(P))
        out.in_n2_doubleprime = classify_N2_doubleprime(P)
    return out


def _adjacency_ok(Q: Poset) -> bool:
    return all(len(Q.neighbours(e)) >= 2 for e in Q.elements)


def n2_prime_condition(split: SplitMap, pair: CoverPair) -> bool:
    """Every maximal branch chain has exactly two elements and every element has two neighbours."""
    if not _adjacency_ok(split.base):
        return False
    return all(len(c) == 2 for c in maximal_branch_chains(split, pair))


def _component_n2_prime(C: Poset) -> bool:
    red = most_reduced(C)
    if not degree_bounds_ok(C) or not _adjacency_ok(red.reduced):
        return False
    for emb, report in _valid_options(red):
        if report.ok and n2_prime_condition(red.split, emb.cover_pair()):
            return True
    return False


def classify_N2_prime(P: Poset) -> bool:
    if not classify_N2(P, variants=False).in_n2:
        return False
    return all(_component_n2_prime(C) for C, _ in split_components(P))


def embeds_without_splitting(P: Poset) -> bool:
    """Every component is itself a convex subposet of some cylinder poset."""
    return all(degree_bounds_ok(C) and embed_convex_cylinder(C) is not None for C, _ in split_components(P))


def _component_n2_doubleprime(C: Poset) -> bool:
    if not degree_bounds_ok(C):
        return False
    return any(_meets_at_most_once(emb.cover_pair()) for emb in iter_embeddings(C))


def _meets_at_most_once(pair: CoverPair) -> bool:
    return all(len(set(a) & set(b)) <= 1 for a in pair.c1.chains for b in pair.c2.chains)


def classify_N2_doubleprime(P: Poset) -> bool:
    """Some component-wise embedding (no splits) whose rows and columns meet at most once.

    Being a convex cylinder subposet is not enough on its own: when the
    window wraps around, a row and a column can meet twice (the five-element
    poset ``1, 2 < 3, 4 < 5`` in ``Cyl_{2,4}`` is the smallest case), and then
    no cover pair at all satisfies the intersection bound.
    """
    return all(_component_n2_doubleprime(C) for C, _ in split_components(P))
