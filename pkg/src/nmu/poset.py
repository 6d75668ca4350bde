"""Finite posets on dense element ids ``1..n``.

Order data is kept as integer bit sets: bit ``e`` of ``up_mask(x)`` is set iff
``x <= e``.  Bit 0 is never used.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import CycleError, DuplicateCoverError, NotBijectiveError, NotReducedError, PosetError

Chain = tuple[int, ...]
Labeling = Mapping[int, object]


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


class Poset:
    """Immutable finite poset given by its cover relations (Hasse diagram).

    Use :func:`build_poset` for validated construction from user input.
    """

    __slots__ = ("n", "covers", "_up", "_down", "_above", "_below", "_hash")

    def __init__(self, n: int, covers: Iterable[tuple[int, int]]):
        covers = frozenset((int(u), int(v)) for u, v in covers)
        for u, v in covers:
            if not (1 <= u <= n and 1 <= v <= n):
                raise PosetError(f"cover ({u}, {v}) references an element outside 1..{n}")
            if u == v:
                raise CycleError(f"self-loop on element {u}")
        up: list[list[int]] = [[] for _ in range(n + 1)]
        down: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in sorted(covers):
            up[u].append(v)
            down[v].append(u)
        order = _topological_order(n, up, down)
        above = [0] * (n + 1)
        for e in reversed(order):
            m = 1 << e
            for v in up[e]:
                m |= above[v]
            above[e] = m
        for u, v in covers:
            for w in up[u]:
                if w != v and above[w] >> v & 1:
                    raise NotReducedError(f"cover ({u}, {v}) is implied by ({u}, {w}) and {w} <= {v}")
        below = [0] * (n + 1)
        for e in range(1, n + 1):
            for f in bits(above[e]):
                below[f] |= 1 << e
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "covers", covers)
        object.__setattr__(self, "_up", tuple(tuple(x) for x in up))
        object.__setattr__(self, "_down", tuple(tuple(x) for x in down))
        object.__setattr__(self, "_above", tuple(above))
        object.__setattr__(self, "_below", tuple(below))
        object.__setattr__(self, "_hash", hash((n, covers)))

    def __setattr__(self, name, value):
        raise AttributeError("Poset is immutable")

    def __reduce__(self):
        return (Poset, (self.n, sorted(self.covers)))

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.n == other.n and self.covers == other.covers

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Poset(n={self.n}, covers={sorted(self.covers)})"

    def __len__(self):
        return self.n

    @property
    def elements(self) -> range:
        return range(1, self.n + 1)

    @property
    def all_mask(self) -> int:
        return ((1 << (self.n + 1)) - 1) ^ 1

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.covers)

    def upper_covers(self, e: int) -> tuple[int, ...]:
        return self._up[e]

    def lower_covers(self, e: int) -> tuple[int, ...]:
        return self._down[e]

    def up_mask(self, e: int) -> int:
        """Elements ``>= e`` as a bit set."""
        return self._above[e]

    def down_mask(self, e: int) -> int:
        """Elements ``<= e`` as a bit set."""
        return self._below[e]

    def leq(self, u: int, v: int) -> bool:
        return bool(self._above[u] >> v & 1)

    def lt(self, u: int, v: int) -> bool:
        return u != v and self.leq(u, v)

    def comparable(self, u: int, v: int) -> bool:
        return self.leq(u, v) or self.leq(v, u)

    def interval_mask(self, u: int, v: int) -> int:
        return self._above[u] & self._below[v]

    def neighbours(self, e: int) -> tuple[int, ...]:
        return self._up[e] + self._down[e]

    def relation(self) -> set[tuple[int, int]]:
        """All pairs ``(u, v)`` with ``u <= v`` (reflexive)."""
        return {(u, v) for u in self.elements for v in bits(self._above[u])}

    def components(self) -> list[tuple[int, ...]]:
        """Connected components of the Hasse diagram, each sorted, ordered by least element."""
        seen = 0
        out = []
        for e in self.elements:
            if seen >> e & 1:
                continue
            comp = [e]
            seen |= 1 << e
            stack = [e]
            while stack:
                x = stack.pop()
                for y in self.neighbours(x):
                    if not seen >> y & 1:
                        seen |= 1 << y
                        comp.append(y)
                        stack.append(y)
            out.append(tuple(sorted(comp)))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def induced(self, subset: Iterable[int]) -> tuple["Poset", tuple[int, ...]]:
        """Induced subposet on ``subset``, relabelled ``1..|subset|`` in increasing id order.

        Returns the subposet and the tuple of original ids (index ``i - 1`` holds
        the original id of new element ``i``).
        """
        ids = tuple(sorted(set(subset)))
        index = {e: i + 1 for i, e in enumerate(ids)}
        rel = [(index[u], index[v]) for u in ids for v in ids if u != v and self.leq(u, v)]
        return poset_from_relation(len(ids), rel), ids

    def relabel(self, perm: Mapping[int, int]) -> "Poset":
        """Image of this poset under the bijection ``perm`` (old id -> new id)."""
        return Poset(self.n, [(perm[u], perm[v]) for u, v in self.covers])

    def up_degree(self, e: int) -> int:
        return len(self._up[e])

    def down_degree(self, e: int) -> int:
        return len(self._down[e])

    def minimal_elements(self) -> list[int]:
        return [e for e in self.elements if not self._down[e]]

    def maximal_elements(self) -> list[int]:
        return [e for e in self.elements if not self._up[e]]

    def is_chain(self) -> bool:
        return all(len(self._up[e]) <= 1 and len(self._down[e]) <= 1 for e in self.elements) and self.is_connected()


def _topological_order(n: int, up: Sequence[Sequence[int]], down: Sequence[Sequence[int]]) -> list[int]:
    indeg = [len(down[e]) for e in range(n + 1)]
    ready = [e for e in range(1, n + 1) if indeg[e] == 0]
    order = []
    while ready:
        e = ready.pop()
        order.append(e)
        for v in up[e]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    if len(order) != n:
        stuck = sorted(e for e in range(1, n + 1) if indeg[e] > 0)
        raise CycleError(f"cover relations contain a cycle through elements {stuck}")
    return order


def build_poset(n: int, covers: Iterable[Sequence[int]]) -> Poset:
    """Validate user-supplied cover pairs and build the poset.

    Transitively implied pairs are rejected rather than dropped, since the
    edge set is what chain covers are coloured on.
    """
    if n < 0:
        raise PosetError("element count must be non-negative")
    seen = set()
    pairs = []
    for pair in covers:
        u, v = (int(t) for t in pair)
        if (u, v) in seen:
            raise DuplicateCoverError(f"cover ({u}, {v}) listed twice")
        seen.add((u, v))
        pairs.append((u, v))
    return Poset(n, pairs)


def transitive_reduction(n: int, relation: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    """Cover pairs of the order generated by ``relation`` (which must be acyclic)."""
    succ = [0] * (n + 1)
    for u, v in relation:
        if u != v:
            succ[u] |= 1 << v
    # transitive closure by repeated relaxation in a topological sweep
    changed = True
    while changed:
        changed = False
        for u in range(1, n + 1):
            m = succ[u]
            for v in bits(m):
                m |= succ[v]
            if m != succ[u]:
                if m >> u & 1:
                    raise CycleError(f"relation has a cycle through {u}")
                succ[u] = m
                changed = True
    covers = set()
    for u in range(1, n + 1):
        for v in bits(succ[u]):
            if not any(succ[w] >> v & 1 for w in bits(succ[u]) if w != v):
                covers.add((u, v))
    return covers


def poset_from_relation(n: int, relation: Iterable[tuple[int, int]]) -> Poset:
    return Poset(n, transitive_reduction(n, relation))


def chain_poset(n: int) -> Poset:
    return Poset(n, [(i, i + 1) for i in range(1, n)])


def antichain_poset(n: int) -> Poset:
    return Poset(n, [])


def grid_poset(rows: int, cols: int) -> Poset:
    """The product ``rows x cols`` of two chains.

    Cell ``(r, c)`` (0-based) is element ``r * cols + c + 1``; rows increase to
    the right, columns increase downward, matching a matrix layout.
    """
    covers = []
    for r in range(rows):
        for c in range(cols):
            e = r * cols + c + 1
            if c + 1 < cols:
                covers.append((e, e + 1))
            if r + 1 < rows:
                covers.append((e, e + cols))
    return Poset(rows * cols, covers)


def grid_rows(rows: int, cols: int) -> list[Chain]:
    return [tuple(r * cols + c + 1 for c in range(cols)) for r in range(rows)]


def grid_columns(rows: int, cols: int) -> list[Chain]:
    return [tuple(r * cols + c + 1 for r in range(rows)) for c in range(cols)]


def diamond_with_chains(a_len: int, b_len: int, bottom: int = 0, top: int = 0) -> Poset:
    """Diamond with sides of ``a_len`` and ``b_len`` elements (ends included), plus pendant chains.

    Numbering: the ``bottom`` chain is ``1..bottom``, then ``x``, the interior
    of side a, the interior of side b, ``y`` and finally the ``top`` chain.
    """
    if a_len < 3 or b_len < 3:
        raise ValueError("each side of a diamond needs at least 3 elements")
    x = bottom + 1
    a_inner = list(range(x + 1, x + a_len - 1))
    b_inner = list(range(x + a_len - 1, x + a_len + b_len - 3))
    y = x + a_len + b_len - 3
    n = y + top
    covers = [(e, e + 1) for e in range(1, bottom + 1)]
    for inner in (a_inner, b_inner):
        path = [x] + inner + [y]
        covers += list(zip(path, path[1:]))
    covers += [(e, e + 1) for e in range(y, n)]
    return Poset(n, covers)


def claw_poset() -> Poset:
    """One element covered by three maximal elements."""
    return Poset(4, [(1, 2), (1, 3), (1, 4)])


def is_convex(P: Poset, S: Iterable[int]) -> bool:
    m = mask_of(S)
    for x in bits(m):
        # everything strictly above x and below some member of S must be in S
        between = P.up_mask(x) & ~m
        for z in bits(between):
            if P.up_mask(z) & m:
                return False
    return True


def convex_hull(P: Poset, S: Iterable[int]) -> frozenset[int]:
    """Smallest convex set containing ``S``."""
    m = mask_of(S)
    ups = 0
    downs = 0
    for x in bits(m):
        ups |= P.up_mask(x)
        downs |= P.down_mask(x)
    return frozenset(bits(ups & downs))


def degree_bounds_ok(P: Poset) -> bool:
    return all(P.up_degree(e) <= 2 and P.down_degree(e) <= 2 for e in P.elements)


@dataclass(frozen=True)
class Diamond:
    """Two saturated chains from ``x`` to ``y`` meeting only at the ends.

    ``bottom`` lists the attached pendant chain below ``x`` from its least
    element upward, ``top`` the one above ``y``; both are empty when no such
    chain is attached.
    """

    x: int
    y: int
    chain_a: Chain
    chain_b: Chain
    bottom: Chain = ()
    top: Chain = ()

    @property
    def elements(self) -> frozenset[int]:
        return frozenset(self.chain_a) | frozenset(self.chain_b)

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for c in (self.chain_a, self.chain_b):
            out.update(zip(c, c[1:]))
        return out

    def is_four_element(self) -> bool:
        return len(self.chain_a) == 3 and len(self.chain_b) == 3


def _walk_up(P: Poset, start: int, inside: int) -> Chain:
    chain = [start]
    cur = start
    while True:
        nxt = [v for v in P.upper_covers(cur) if inside >> v & 1]
        if len(nxt) != 1:
            return tuple(chain)
        cur = nxt[0]
        chain.append(cur)


def pendant_below(P: Poset, x: int) -> Chain:
    """Chain hanging below ``x`` with no other elements or relations (least element first).

    If the chain below ``x`` runs into anything else (a branching or an element
    with further relations), there is no such chain and ``()`` is returned.
    """
    out = []
    cur = x
    while len(P.lower_covers(cur)) == 1:
        u = P.lower_covers(cur)[0]
        if P.upper_covers(u) != (cur,):
            break
        out.append(u)
        cur = u
    if out and P.lower_covers(cur):
        return ()
    return tuple(reversed(out))


def pendant_above(P: Poset, y: int) -> Chain:
    out = []
    cur = y
    while len(P.upper_covers(cur)) == 1:
        v = P.upper_covers(cur)[0]
        if P.lower_covers(v) != (cur,):
            break
        out.append(v)
        cur = v
    if out and P.upper_covers(cur):
        return ()
    return tuple(out)


def find_diamonds(P: Poset, four_element_only: bool = False) -> list[Diamond]:
    """All diamonds of ``P`` in order of ``(x, y)``.

    A diamond is determined by its endpoints: the interval ``[x, y]`` must be
    exactly two saturated chains sharing only ``x`` and ``y``.
    """
    out = []
    for x in P.elements:
        if P.up_degree(x) < 2:
            continue
        for y in bits(P.up_mask(x)):
            if y == x or P.down_degree(y) < 2:
                continue
            inside = P.interval_mask(x, y)
            size = inside.bit_count()
            if four_element_only and size != 4:
                continue
            ups = [v for v in P.upper_covers(x) if inside >> v & 1]
            downs = [u for u in P.lower_covers(y) if inside >> u & 1]
            if len(ups) != 2 or len(downs) != 2:
                continue
            chains = []
            for a1 in ups:
                c = _walk_up(P, a1, inside)
                chains.append((x,) + c)
            if any(c[-1] != y for c in chains):
                continue
            if len(chains[0]) + len(chains[1]) - 2 != size:
                continue
            interior_ok = all(
                len([v for v in P.upper_covers(e) if inside >> v & 1]) == 1
                and len([u for u in P.lower_covers(e) if inside >> u & 1]) == 1
                for c in chains
                for e in c[1:-1]
            )
            if not interior_ok:
                continue
            a, b = sorted(chains)
            out.append(Diamond(x, y, a, b, pendant_below(P, x), pendant_above(P, y)))
    return out


def linear_extensions(P: Poset) -> Iterator[dict[int, int]]:
    """Every linear extension as a labeling ``element -> rank`` (ranks ``1..n``).

    Order is lexicographic in the sequence of elements receiving ranks
    ``1, 2, ...``.
    """
    n = P.n
    indeg = [0] + [P.down_degree(e) for e in P.elements]
    seq: list[int] = []

    def rec():
        if len(seq) == n:
            yield {e: i + 1 for i, e in enumerate(seq)}
            return
        for e in P.elements:
            if indeg[e] == 0 and e not in placed:
                placed.add(e)
                seq.append(e)
                for v in P.upper_covers(e):
                    indeg[v] -= 1
                yield from rec()
                for v in P.upper_covers(e):
                    indeg[v] += 1
                seq.pop()
                placed.discard(e)

    placed: set[int] = set()
    yield from rec()


def is_linear_extension(P: Poset, labeling: Labeling) -> bool:
    values = [labeling[e] for e in P.elements] if set(labeling) == set(P.elements) else None
    if values is None or sorted(values) != list(range(1, P.n + 1)):
        raise NotBijectiveError("labeling is not a bijection onto 1..n")
    return all(labeling[u] < labeling[v] for u, v in P.covers)


def incomparable_pairs(P: Poset) -> Iterator[tuple[int, int]]:
    for u, v in combinations(P.elements, 2):
        if not P.comparable(u, v):
            yield u, v
