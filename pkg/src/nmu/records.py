"""Machine-readable result records (one JSON object per poset)."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from .classify import Classification, Obstruction
from .poset import Poset
from .sorting import ChainCover, CoverPair

SCHEMA_VERSION = 1


def pair_to_json(pair: CoverPair) -> dict:
    return {"c1": [list(c) for c in pair.c1.chains], "c2": [list(c) for c in pair.c2.chains]}


def pair_from_json(obj: dict) -> CoverPair:
    return CoverPair(ChainCover(obj["c1"]), ChainCover(obj["c2"]))


def obstruction_to_json(o: Obstruction) -> dict:
    return {"kind": o.kind, "detail": o.detail}


@dataclass
class ResultRecord:
    key: str
    n: int
    covers: list[list[int]]
    n2: bool
    n2_prime: bool
    n2_doubleprime: bool
    name: Optional[str] = None
    witness: Optional[dict] = None
    embeddings: list[dict] = field(default_factory=list)
    obstruction: Optional[dict] = None
    brute_force: Optional[dict] = None
    mismatches: list[str] = field(default_factory=list)
    timings: Optional[dict] = None
    schema: int = SCHEMA_VERSION

    def poset(self) -> Poset:
        return Poset(self.n, [tuple(c) for c in self.covers])

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, obj: dict) -> "ResultRecord":
        return cls(**obj)

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        return cls.from_dict(json.loads(text))


def record_from_classification(c: Classification, key: str = "", name: str | None = None) -> ResultRecord:
    P = c.poset
    embeddings = []
    for comp in c.components:
        if comp.embedding is None or not comp.in_n2:
            continue
        emb = comp.embedding
        # cells are listed per reduced element; ``blocks`` says which original elements it stands for
        embeddings.append(
            {
                "k": emb.k,
                "n": emb.n,
                "cells": [list(emb.assign[x]) for x in sorted(emb.assign)],
                "blocks": [
                    [comp.elements[e - 1] for e in comp.reduction.split.image_chain[x]] for x in sorted(emb.assign)
                ],
                "fallback": comp.fallback_used,
            }
        )
    return ResultRecord(
        key=key,
        name=name,
        n=P.n,
        covers=[list(e) for e in P.edges()],
        n2=c.in_n2,
        n2_prime=c.in_n2_prime,
        n2_doubleprime=c.in_n2_doubleprime,
        witness=pair_to_json(c.witness) if c.witness is not None else None,
        embeddings=embeddings,
        obstruction=obstruction_to_json(c.obstruction) if c.obstruction is not None else None,
    )
