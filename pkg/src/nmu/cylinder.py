"""The cylinder poset ``Z^2 / (-k, n-k)Z`` and its finite convex windows.

Points are stored by their canonical representative ``(i, j)`` with
``0 <= i < k``.  When ``k == 1`` or ``n - k == 1`` the cylinder is totally
ordered (a copy of ``Z``); lattice unit steps are then not all cover
relations, so anything defined on covers goes through the window's poset.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import ceil, floor
from typing import Iterable, NamedTuple

from .errors import BadParamsError, NotConvexError
from .poset import Diamond, Poset, poset_from_relation
from .sorting import ChainCover, CoverPair

STEPS = ((1, 0), (0, 1))
I_STEP, J_STEP = STEPS


class CylCoord(NamedTuple):
    k: int
    n: int
    i: int
    j: int

    @property
    def cell(self) -> tuple[int, int]:
        return (self.i, self.j)


def check_params(k: int, n: int) -> None:
    if not (1 <= k < n):
        raise BadParamsError(f"cylinder parameters need 1 <= k < n (got k={k}, n={n})")


def is_degenerate(k: int, n: int) -> bool:
    return k == 1 or n - k == 1


def canon(k: int, n: int, i: int, j: int) -> tuple[int, int]:
    m = i // k
    return (i - m * k, j + m * (n - k))


def cyl_canonical(k: int, n: int, i: int, j: int) -> CylCoord:
    check_params(k, n)
    ci, cj = canon(k, n, i, j)
    return CylCoord(k, n, ci, cj)


def _shift_range(k: int, n: int, a: tuple[int, int], b: tuple[int, int]) -> range:
    """Integers ``t`` with ``a <= b + t(-k, n-k)`` componentwise."""
    lo = ceil((a[1] - b[1]) / (n - k))
    hi = floor((b[0] - a[0]) / k)
    return range(lo, hi + 1)


def leq_cells(k: int, n: int, a: tuple[int, int], b: tuple[int, int]) -> bool:
    r = _shift_range(k, n, a, b)
    return r.start < r.stop


def cyl_leq(k: int, n: int, a: CylCoord | tuple[int, int], b: CylCoord | tuple[int, int]) -> bool:
    """Whether some representative of ``b`` dominates ``a`` componentwise."""
    check_params(k, n)
    return leq_cells(k, n, _cell(a), _cell(b))


def _cell(c) -> tuple[int, int]:
    return c.cell if isinstance(c, CylCoord) else (c[0], c[1])


def step_cells(k: int, n: int, a: tuple[int, int]) -> tuple[tuple[int, int], tuple[int, int]]:
    return canon(k, n, a[0] + 1, a[1]), canon(k, n, a[0], a[1] + 1)


def cyl_covers(k: int, n: int, a: CylCoord | tuple[int, int]) -> tuple[CylCoord, CylCoord]:
    """Canonical forms of the two unit steps above ``a`` (i-step, then j-step)."""
    check_params(k, n)
    up_i, up_j = step_cells(k, n, _cell(a))
    return CylCoord(k, n, *up_i), CylCoord(k, n, *up_j)


@dataclass(frozen=True)
class CylWindow:
    """A finite convex set of cylinder points with its induced poset.

    Element ``e`` of ``poset`` is ``cells[e - 1]``; cells are sorted
    lexicographically by canonical coordinates.
    """

    k: int
    n: int
    cells: tuple[tuple[int, int], ...]
    poset: Poset

    def coord_of(self, e: int) -> CylCoord:
        return CylCoord(self.k, self.n, *self.cells[e - 1])

    def element_of(self, cell: tuple[int, int]) -> int:
        return self.cells.index(canon(self.k, self.n, *cell)) + 1

    def __len__(self):
        return len(self.cells)


def _between_cells(k: int, n: int, a: tuple[int, int], b: tuple[int, int]):
    """Canonical points ``c`` with ``a <= c <= b`` in the cylinder."""
    for t in _shift_range(k, n, a, b):
        top = (b[0] - t * k, b[1] + t * (n - k))
        for i in range(a[0], top[0] + 1):
            for j in range(a[1], top[1] + 1):
                yield canon(k, n, i, j)


def window_poset(k: int, n: int, cells: Iterable) -> CylWindow:
    """Build the window on ``cells``; raises :class:`NotConvexError` if not convex."""
    check_params(k, n)
    raw = [_cell(c) for c in cells]
    canonical = [canon(k, n, *c) for c in raw]
    if canonical != raw:
        raise BadParamsError("cells must be given by canonical representatives")
    if len(set(canonical)) != len(canonical):
        raise BadParamsError("cells must be distinct")
    ordered = tuple(sorted(canonical))
    members = set(ordered)
    rel = []
    for x, a in enumerate(ordered, 1):
        for y, b in enumerate(ordered, 1):
            if x != y and leq_cells(k, n, a, b):
                rel.append((x, y))
                for c in _between_cells(k, n, a, b):
                    if c not in members:
                        raise NotConvexError(
                            f"{c} lies between window cells {a} and {b} but is not in the window", (a, c, b)
                        )
    return CylWindow(k, n, ordered, poset_from_relation(len(ordered), rel))


def is_convex_cells(k: int, n: int, cells: Iterable[tuple[int, int]]) -> bool:
    try:
        window_poset(k, n, cells)
    except NotConvexError:
        return False
    return True


def _step_chains(w: CylWindow, step: tuple[int, int]) -> list[tuple[int, ...]]:
    nxt = {}
    for u, v in w.poset.covers:
        a = w.cells[u - 1]
        if canon(w.k, w.n, a[0] + step[0], a[1] + step[1]) == w.cells[v - 1]:
            nxt[u] = v
    starts = set(w.poset.elements) - set(nxt.values())
    chains = []
    for s in sorted(starts):
        c = [s]
        while c[-1] in nxt:
            c.append(nxt[c[-1]])
        chains.append(tuple(c))
    return chains


def canonical_cover_pair(w: CylWindow) -> CoverPair:
    """Rows (chains of j-steps) as ``c1`` and columns (chains of i-steps) as ``c2``.

    Only cover relations of the window are used, so in a degenerate cylinder
    the lattice steps that are not covers are left out.
    """
    return CoverPair(ChainCover(_step_chains(w, J_STEP)), ChainCover(_step_chains(w, I_STEP)))


def lift_chain(k: int, n: int, cells: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Lift a walk of unit steps to ``Z^2`` starting at the first cell."""
    out = [cells[0]]
    for nxt in cells[1:]:
        cur = out[-1]
        for di, dj in STEPS:
            if canon(k, n, cur[0] + di, cur[1] + dj) == nxt:
                out.append((cur[0] + di, cur[1] + dj))
                break
        else:
            raise ValueError(f"{canon(k, n, *cur)} -> {nxt} is not a unit step of Cyl_({k},{n})")
    return out


def goes_around(w: CylWindow, d: Diamond) -> bool:
    """Whether the diamond has no planar realisation by choice of preimages.

    Both chains are lifted from the same preimage of the minimum; the diamond
    is planar exactly when the two lifts of the maximum agree.
    """
    a = lift_chain(w.k, w.n, [w.cells[e - 1] for e in d.chain_a])
    b = lift_chain(w.k, w.n, [w.cells[e - 1] for e in d.chain_b])
    return a[-1] != b[-1]


def rectangle_cells(k: int, n: int, rows: int, cols: int, origin: tuple[int, int] = (0, 0)) -> list[tuple[int, int]]:
    return sorted({canon(k, n, origin[0] + r, origin[1] + c) for r in range(rows) for c in range(cols)})


def fits_fundamental_domain(k: int, n: int, rows: int, cols: int) -> bool:
    """A ``rows x cols`` rectangle has no identifications acting on it."""
    return rows <= k and cols <= n - k


def translate_cells(k: int, n: int, cells: Iterable[tuple[int, int]], di: int, dj: int) -> list[tuple[int, int]]:
    return sorted(canon(k, n, i + di, j + dj) for i, j in cells)


def normal_form(k: int, n: int, cells: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Representative of ``cells`` up to translation in the cylinder."""
    cells = list(cells)
    return min(tuple(translate_cells(k, n, cells, -i, -j)) for i, j in cells)


def connected_cell_sets(k: int, n: int, max_cells: int) -> list[tuple[tuple[int, int], ...]]:
    """Every set of at most ``max_cells`` points connected by unit steps, up to translation."""
    level = {normal_form(k, n, [(0, 0)])}
    out = sorted(level)
    for _ in range(max_cells - 1):
        nxt = set()
        for cells in level:
            members = set(cells)
            for i, j in cells:
                for di, dj in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                    c = canon(k, n, i + di, j + dj)
                    if c not in members:
                        nxt.add(normal_form(k, n, members | {c}))
        level = nxt
        out.extend(sorted(level))
    return out


def convex_windows(k: int, n: int, max_cells: int) -> list[CylWindow]:
    out = []
    for cells in connected_cell_sets(k, n, max_cells):
        try:
            out.append(window_poset(k, n, cells))
        except NotConvexError:
            pass
    return out


def brute_force_goes_around(w: CylWindow, d: Diamond, bound: int | None = None) -> bool:
    """Search preimage choices directly: is there none realising every diamond cover as a unit step?"""
    elems = sorted(d.elements)
    bound = len(elems) if bound is None else bound
    edges = d.edges()
    v = (-w.k, w.n - w.k)
    first = elems[0]
    rest = elems[1:]
    base = {e: w.cells[e - 1] for e in elems}
    for ts in product(range(-bound, bound + 1), repeat=len(rest)):
        lift = {first: base[first]}
        for e, t in zip(rest, ts):
            lift[e] = (base[e][0] + t * v[0], base[e][1] + t * v[1])
        if all((lift[y][0] - lift[x][0], lift[y][1] - lift[x][1]) in STEPS for x, y in edges):
            return False
    return True
