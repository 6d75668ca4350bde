#!/usr/bin/env python3
"""Check every witness the classifier produces for connected posets of a given size.

Beyond the brute-force range this is a soundness check only: each witness
pair must pass the zero-one verifier; rejections are counted, not checked.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter

from nmu.classify import classify_N2
from nmu.oracle import enumerate_posets
from nmu.sorting import ZERO_ONE, nmu_check


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8)
    a = ap.parse_args()
    kinds: Counter = Counter()
    bad = 0
    total = 0
    for cp in enumerate_posets(a.n, connected_only=True, force=True):
        if cp.poset.n != a.n:
            continue
        total += 1
        c = classify_N2(cp.poset, variants=False)
        if c.in_n2:
            kinds["in"] += 1
            if not nmu_check(cp.poset, c.witness, ZERO_ONE).holds:
                bad += 1
                print("unsound witness:", cp.poset.covers)
        else:
            kinds[c.obstruction.kind] += 1
    print(f"{total} connected posets on {a.n} elements: {dict(sorted(kinds.items()))}; {bad} unsound witnesses")
    return 4 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
