#!/usr/bin/env python3
"""Table for a diamond with two 5-element sides and pendant chains C (below) and D (above).

For each (|C|, |D|) it reports the Type I bound, whether exhaustive search
finds a pair colouring the diamond as Type I, and overall membership.
"""

from __future__ import annotations

import argparse
import sys

from nmu.classify import TYPE_I, classify_N2, diamond_type_matches, typeI_bound_check
from nmu.oracle import brute_force_N2
from nmu.poset import diamond_with_chains, find_diamonds


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--side", type=int, default=5, help="elements on each side of the diamond, ends included")
    ap.add_argument("--max-chain", type=int, default=3)
    a = ap.parse_args()
    print("C D  bound  type_I_pair  brute_n2  classifier_n2")
    status = 0
    for c in range(a.max_chain + 1):
        for d in range(a.max_chain + 1):
            P = diamond_with_chains(a.side, a.side, c, d)
            dia = next(x for x in find_diamonds(P) if len(x.chain_a) == a.side)
            t1 = brute_force_N2(P, force=True, predicate=lambda pair: TYPE_I in diamond_type_matches(pair, dia)).in_n2
            brute = brute_force_N2(P, force=True).in_n2
            ours = classify_N2(P).in_n2
            status |= brute != ours
            print(f"{c} {d}  {typeI_bound_check(dia)!s:5}  {t1!s:11}  {brute!s:8}  {ours}")
    return 4 if status else 0


if __name__ == "__main__":
    sys.exit(main())
