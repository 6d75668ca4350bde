"""Plain-text poset and cover-pair files.

Poset file::

    # comment
    poset grid3x4
    elements 12
    cover 1 2
    ...

Cover-pair file (two blocks separated by ``---``)::

    cover rows
    chain 1 2 3
    ---
    cover columns
    chain 1 4
    ...
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ChainCoverError, InvalidCoverError, NmuError, PosetError
from .poset import Poset, build_poset
from .sorting import ChainCover, CoverPair, validate_chain_cover


class ParseError(NmuError, ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class NamedPoset:
    name: str
    poset: Poset


@dataclass(frozen=True)
class NamedCover:
    name: str
    cover: ChainCover


def _tokens(text: str):
    for num, raw in enumerate(text.split("\n"), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield num, line.split()


def _ints(fields: list[str], num: int, source: str) -> list[int]:
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(fields)!r}", num, source) from None


def parse_poset(text: str, source: str = "<input>") -> NamedPoset:
    name = None
    n = None
    covers: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    last = 0
    for num, toks in _tokens(text):
        last = num
        head, rest = toks[0], toks[1:]
        if head == "poset":
            if name is not None:
                raise ParseError("duplicate 'poset' line", num, source)
            if len(rest) != 1:
                raise ParseError("expected 'poset <name>'", num, source)
            name = rest[0]
        elif head == "elements":
            if name is None:
                raise ParseError("'elements' before 'poset' header", num, source)
            if n is not None:
                raise ParseError("duplicate 'elements' line", num, source)
            if len(rest) != 1:
                raise ParseError("expected 'elements <n>'", num, source)
            (n,) = _ints(rest, num, source)
            if n < 0:
                raise ParseError("element count must be non-negative", num, source)
        elif head == "cover":
            if n is None:
                raise ParseError("'cover' before 'elements'", num, source)
            if len(rest) != 2:
                raise ParseError("expected 'cover <u> <v>'", num, source)
            u, v = _ints(rest, num, source)
            for e in (u, v):
                if not 1 <= e <= n:
                    raise ParseError(f"element {e} out of range 1..{n}", num, source)
            if (u, v) in seen:
                raise ParseError(f"cover {u} {v} already given on line {seen[u, v]}", num, source)
            seen[u, v] = num
            covers.append((u, v))
        else:
            raise ParseError(f"unknown directive {head!r}", num, source)
    if name is None or n is None:
        raise ParseError("missing 'poset' or 'elements' line", last or None, source)
    try:
        P = build_poset(n, covers)
    except PosetError as exc:
        raise ParseError(str(exc), None, source) from exc
    return NamedPoset(name, P)


def format_poset(P: Poset, name: str = "P") -> str:
    lines = [f"poset {name}", f"elements {P.n}"]
    lines += [f"cover {u} {v}" for u, v in P.edges()]
    return "\n".join(lines) + "\n"


def parse_cover_blocks(text: str, source: str = "<input>") -> list[NamedCover]:
    blocks: list[NamedCover] = []
    name = None
    chains: list[list[int]] = []

    def close():
        if name is not None:
            blocks.append(NamedCover(name, ChainCover(chains)))

    for num, toks in _tokens(text):
        head, rest = toks[0], toks[1:]
        if head == "---":
            if name is None:
                raise ParseError("'---' before any cover block", num, source)
            close()
            name, chains = None, []
        elif head == "cover":
            if name is not None:
                raise ParseError("blocks must be separated by '---'", num, source)
            if len(rest) != 1:
                raise ParseError("expected 'cover <name>'", num, source)
            name = rest[0]
        elif head == "chain":
            if name is None:
                raise ParseError("'chain' outside a cover block", num, source)
            if not rest:
                raise ParseError("empty chain", num, source)
            chains.append(_ints(rest, num, source))
        else:
            raise ParseError(f"unknown directive {head!r}", num, source)
    close()
    return blocks


def parse_cover_pair(text: str, P: Poset | None = None, source: str = "<input>") -> tuple[CoverPair, tuple[str, str]]:
    blocks = parse_cover_blocks(text, source)
    if len(blocks) != 2:
        raise ParseError(f"expected two cover blocks, found {len(blocks)}", None, source)
    if P is not None:
        for b in blocks:
            try:
                validate_chain_cover(P, b.cover)
            except ChainCoverError as exc:
                raise InvalidCoverError(f"cover {b.name!r}: {exc}") from exc
    return CoverPair(blocks[0].cover, blocks[1].cover), (blocks[0].name, blocks[1].name)


def format_cover(C: ChainCover, name: str) -> str:
    return "\n".join([f"cover {name}"] + ["chain " + " ".join(map(str, c)) for c in C.chains]) + "\n"


def format_cover_pair(pair: CoverPair, names: tuple[str, str] = ("c1", "c2")) -> str:
    return format_cover(pair.c1, names[0]) + "---\n" + format_cover(pair.c2, names[1])


def read_poset(path: str | Path) -> NamedPoset:
    path = Path(path)
    return parse_poset(path.read_text(encoding="utf-8"), str(path))


def write_poset(path: str | Path, P: Poset, name: str = "P") -> None:
    Path(path).write_text(format_poset(P, name), encoding="utf-8", newline="\n")
