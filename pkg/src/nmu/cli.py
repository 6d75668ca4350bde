"""Command-line entry point: ``nmu <command> ...``.

Posets and covers can be given as files or as builtin specs:
``grid:RxC``, ``chain:N``, ``antichain:N``, ``claw`` for posets and
``rows`` / ``columns`` for the covers of a ``grid:RxC`` poset.

Exit codes: 0 ran to a verdict, 2 input error, 3 size guard, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .classify import classify_N2
from .errors import BadParamsError, ChainCoverError, InvariantViolation, NotBijectiveError, PosetError, SizeLimitError
from .formats import NamedPoset, ParseError, format_cover_pair, format_poset, parse_cover_blocks, parse_cover_pair, read_poset
from .oracle import (
    POSET_LIMIT,
    brute_force_N2,
    brute_force_N2_doubleprime,
    brute_force_N2_prime,
    canonical_form,
    compare_poset,
    oracle_compare,
    sample_extension_distribution,
)
from .poset import Poset, antichain_poset, chain_poset, claw_poset, grid_columns, grid_poset, grid_rows
from .records import ResultRecord, pair_to_json, record_from_classification
from .sorting import PERMUTATIONS, ZERO_ONE, ChainCover, CoverPair, chain_sort, nmu_check, validate_chain_cover

log = logging.getLogger("nmu")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SIZE = 3
EXIT_INVARIANT = 4

_GRID = re.compile(r"grid:(\d+)x(\d+)$")


# ----------------------------------------------------------------- inputs


def load_poset(spec: str) -> NamedPoset:
    m = _GRID.match(spec)
    if m:
        r, c = int(m.group(1)), int(m.group(2))
        return NamedPoset(f"grid{r}x{c}", grid_poset(r, c))
    for prefix, make in (("chain:", chain_poset), ("antichain:", antichain_poset)):
        if spec.startswith(prefix):
            try:
                size = int(spec[len(prefix):])
            except ValueError:
                raise ParseError(f"bad builtin poset {spec!r}") from None
            return NamedPoset(spec.replace(":", ""), make(size))
    if spec == "claw":
        return NamedPoset("claw", claw_poset())
    return read_poset(spec)


def _grid_shape(spec: str) -> Optional[tuple[int, int]]:
    m = _GRID.match(spec)
    return (int(m.group(1)), int(m.group(2))) if m else None


def load_cover(spec: str, poset_spec: str, P: Poset) -> tuple[str, ChainCover]:
    """A single cover: ``rows``/``columns`` for grids, ``FILE`` (first block) or ``FILE:NAME``."""
    shape = _grid_shape(poset_spec)
    if spec in ("rows", "columns"):
        if shape is None:
            raise ParseError(f"builtin cover {spec!r} needs a grid:RxC poset")
        chains = grid_rows(*shape) if spec == "rows" else grid_columns(*shape)
        cover = ChainCover(chains)
        name = spec
    else:
        path, _, wanted = spec.partition(":") if not Path(spec).exists() else (spec, "", "")
        blocks = parse_cover_blocks(Path(path).read_text(encoding="utf-8"), path)
        if not blocks:
            raise ParseError("no cover block found", None, path)
        if wanted:
            found = [b for b in blocks if b.name == wanted]
            if not found:
                raise ParseError(f"no cover named {wanted!r}", None, path)
            block = found[0]
        else:
            block = blocks[0]
        name, cover = block.name, block.cover
    validate_chain_cover(P, cover)
    return name, cover


def load_pair(spec: str, poset_spec: str, P: Poset) -> CoverPair:
    if spec == "grid" and _grid_shape(poset_spec):
        shape = _grid_shape(poset_spec)
        return CoverPair(ChainCover(grid_rows(*shape)), ChainCover(grid_columns(*shape)))
    pair, _ = parse_cover_pair(Path(spec).read_text(encoding="utf-8"), P, spec)
    return pair


def parse_labeling(text: str, P: Poset) -> dict[int, int]:
    values = [int(v) for v in re.split(r"[\s,;/]+", text.strip()) if v]
    if len(values) != P.n:
        raise ParseError(f"labeling has {len(values)} values, poset has {P.n} elements")
    return dict(zip(P.elements, values))


def _poset_key(P: Poset) -> str:
    return canonical_form(P)[0].hex() if P.n <= POSET_LIMIT else ""


# ----------------------------------------------------------------- output helpers


def _chains_text(C: ChainCover) -> str:
    return " | ".join("-".join(map(str, c)) for c in C.chains)


def _print_record(rec: ResultRecord, name: str) -> None:
    print(f"poset {name}: {rec.n} elements, {len(rec.covers)} covers")
    print(f"n2: {str(rec.n2).lower()}")
    print(f"n2_prime: {str(rec.n2_prime).lower()}")
    print(f"n2_doubleprime: {str(rec.n2_doubleprime).lower()}")
    w = rec.witness or (rec.brute_force or {}).get("witness")
    if w:
        print("witness:")
        for side in ("c1", "c2"):
            print(f"  {side}: " + " | ".join("-".join(map(str, c)) for c in w[side]))
    for emb in rec.embeddings:
        cells = ", ".join(f"{'+'.join(map(str, b))}->({i},{j})" for b, (i, j) in zip(emb["blocks"], emb["cells"]))
        print(f"embedding Cyl_{{{emb['k']},{emb['n']}}}: {cells}")
    if rec.obstruction:
        print(f"obstruction: {rec.obstruction['kind']} {json.dumps(rec.obstruction['detail'], sort_keys=True)}")
    for field_name in rec.mismatches:
        print(f"MISMATCH: {field_name}")


def _grid_text(labels: dict[int, int], shape: tuple[int, int]) -> str:
    rows, cols = shape
    width = max(len(str(v)) for v in labels.values())
    return "\n".join(
        " ".join(str(labels[r * cols + c + 1]).rjust(width) for c in range(cols)) for r in range(rows)
    )


def _labels_text(labels: dict[int, int], shape: Optional[tuple[int, int]]) -> str:
    if shape:
        return _grid_text(labels, shape)
    return " ".join(str(labels[e]) for e in sorted(labels))


# ----------------------------------------------------------------- commands


def cmd_classify(ns: argparse.Namespace) -> int:
    named = load_poset(ns.poset)
    P = named.poset
    key = _poset_key(P)
    if ns.force and P.n > 7:
        log.warning("size guard overridden for %d elements; brute force may take very long", P.n)
    if ns.mode == "theorem":
        rec = record_from_classification(classify_N2(P), key, named.name)
    elif ns.mode == "bruteforce":
        b = brute_force_N2(P, force=ns.force)
        rec = ResultRecord(
            key=key,
            name=named.name,
            n=P.n,
            covers=[list(e) for e in P.edges()],
            n2=b.in_n2,
            n2_prime=b.in_n2 and brute_force_N2_prime(P, ns.force).in_n2,
            n2_doubleprime=b.in_n2 and brute_force_N2_doubleprime(P, ns.force).in_n2,
            brute_force={"n2": b.in_n2, "witness": pair_to_json(b.witness) if b.witness else None, "pairs_tested": b.pairs_tested},
            obstruction=None if b.in_n2 else {"kind": "BruteForceCounterexample", "detail": {"pairs_tested": b.pairs_tested}},
        )
    else:
        if P.n > 7 and not ns.force:
            raise SizeLimitError(f"brute force is limited to 7 elements (got {P.n})")
        rec = compare_poset(P, key)
        rec.name = named.name
    if ns.json:
        print(rec.to_json())
    else:
        _print_record(rec, named.name)
    if rec.mismatches:
        log.error("classifier and brute force disagree on %s", ", ".join(rec.mismatches))
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    named = load_poset(ns.poset)
    P = named.poset
    pair = load_pair(ns.pair, ns.poset, P)
    mode = PERMUTATIONS if ns.labelings == "perms" else ZERO_ONE
    v = nmu_check(P, pair, mode=mode, force=ns.force)
    out = {
        "holds": v.holds,
        "mode": v.mode,
        "labelings_checked": v.labelings_checked,
        "reason": v.reason,
        "counterexample": None,
    }
    if v.counterexample is not None:
        ce = v.counterexample
        out["counterexample"] = {
            "labeling": [ce.labeling[e] for e in P.elements],
            "first": ce.first,
            "edge": list(ce.edge),
            "result": [ce.result[e] for e in P.elements] if ce.result else None,
        }
    if ns.json:
        print(json.dumps(out, sort_keys=True, separators=(",", ":")))
        return EXIT_OK
    print(f"holds: {str(v.holds).lower()} ({v.mode}, {v.labelings_checked} labelings)")
    if v.reason:
        print(f"reason: {v.reason}")
    if v.counterexample is not None:
        c = out["counterexample"]
        print("counterexample: (" + ",".join(map(str, c["labeling"])) + ")")
        print(f"  sort c{ce.first} then c{3 - ce.first}; edge {ce.edge[0]}<{ce.edge[1]} of c{ce.first} is no longer sorted")
        if c["result"]:
            print("  after both sorts: (" + ",".join(map(str, c["result"])) + ")")
    return EXIT_OK


def cmd_sort(ns: argparse.Namespace) -> int:
    named = load_poset(ns.poset)
    P = named.poset
    labels = parse_labeling(ns.labeling, P)
    if sorted(labels.values()) != sorted(set(labels.values())):
        log.info("labeling has repeated values")
    shape = _grid_shape(ns.poset)
    steps = [load_cover(ns.cover, ns.poset, P)]
    if ns.twice:
        steps.append(load_cover(ns.twice, ns.poset, P))
    stages = [("input", labels)]
    for name, C in steps:
        labels = chain_sort(P, C, labels)
        stages.append((f"after {name}-sort", labels))
    if ns.json:
        print(json.dumps({name: [lab[e] for e in P.elements] for name, lab in stages}, separators=(",", ":")))
        return EXIT_OK
    for i, (name, lab) in enumerate(stages):
        if i:
            print()
        print(f"{name}:")
        print(_labels_text(lab, shape))
    return EXIT_OK


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("NMU_JOBS", "1")))
    except ValueError:
        return 1


def _run_corpus(ns: argparse.Namespace, brute: bool) -> int:
    if ns.force:
        log.warning("size guard overridden (max-n %d); this may take very long", ns.max_n)
    report = oracle_compare(
        ns.max_n,
        jobs=ns.jobs,
        connected_only=ns.connected,
        brute=brute,
        timings=ns.timings,
        force=ns.force,
    )
    summary = json.dumps(report.summary(), indent=2, sort_keys=True) + "\n"
    if ns.out:
        out = Path(ns.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "records.jsonl", "w", encoding="utf-8", newline="\n") as fh:
            for rec in report.records:
                fh.write(rec.to_json() + "\n")
        (out / "summary.json").write_text(summary, encoding="utf-8", newline="\n")
    sys.stdout.write(summary)
    if report.mismatches:
        log.error("%d mismatches between classifier and brute force", len(report.mismatches))
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_enumerate(ns: argparse.Namespace) -> int:
    return _run_corpus(ns, brute=False)


def cmd_oracle(ns: argparse.Namespace) -> int:
    return _run_corpus(ns, brute=True)


def cmd_sample(ns: argparse.Namespace) -> int:
    named = load_poset(ns.poset)
    P = named.poset
    pair = load_pair(ns.pair, ns.poset, P)
    hist = sample_extension_distribution(P, pair, ns.trials, ns.seed, exhaustive=ns.exhaustive)
    fh = open(ns.out, "w", encoding="utf-8", newline="") if ns.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["extension", "count", "frequency"])
        for ext, count, freq in hist.rows():
            w.writerow([" ".join(map(str, ext)), count, repr(freq)])
    finally:
        if ns.out:
            fh.close()
    if ns.out:
        print(f"{len(hist.counts)} distinct extensions over {hist.trials} labelings -> {ns.out}")
    return EXIT_OK


def cmd_export(ns: argparse.Namespace) -> int:
    """Write a builtin poset (and for grids, its row/column pair) as files."""
    named = load_poset(ns.poset)
    text = format_poset(named.poset, named.name)
    if ns.out:
        Path(ns.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    if ns.pair_out:
        if not _grid_shape(ns.poset):
            raise ParseError("--pair-out is only available for grid:RxC posets")
        pair = load_pair("grid", ns.poset, named.poset)
        Path(ns.pair_out).write_text(format_cover_pair(pair, ("rows", "columns")), encoding="utf-8", newline="\n")
    return EXIT_OK


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nmu", description="Non-messing-up posets: classify, verify, sort, enumerate.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="decide N2, N2' and N2'' for one poset")
    c.add_argument("poset", help="poset file or builtin (grid:RxC, chain:N, antichain:N, claw)")
    c.add_argument("--mode", choices=["theorem", "bruteforce", "both"], default="theorem")
    c.add_argument("--json", action="store_true", help="print one JSON record")
    c.add_argument("--force", action="store_true", help="lift the brute-force size guard")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="check a cover pair for the non-messing-up property")
    v.add_argument("poset")
    v.add_argument("pair", help="cover-pair file, or 'grid' for rows/columns of a grid:RxC poset")
    v.add_argument("--labelings", choices=["perms", "zeroone"], default="zeroone")
    v.add_argument("--json", action="store_true")
    v.add_argument("--force", action="store_true", help="lift the permutation-mode size guard")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sort", help="sort a labeling along one cover (or two with --twice)")
    s.add_argument("poset")
    s.add_argument("cover", help="'rows'/'columns' for grids, FILE (first block) or FILE:NAME")
    s.add_argument("--labeling", required=True, help="labels of elements 1..n, separated by spaces, commas or '/'")
    s.add_argument("--twice", metavar="COVER", help="second cover to sort along afterwards")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sort)

    for name, func, helptext in (
        ("enumerate", cmd_enumerate, "classify every poset up to --max-n elements"),
        ("oracle", cmd_oracle, "classify and brute-force every poset up to --max-n elements"),
    ):
        e = sub.add_parser(name, help=helptext)
        e.add_argument("--max-n", type=int, required=True)
        e.add_argument("--connected", action="store_true", help="connected posets only")
        e.add_argument("--jobs", type=int, default=_default_jobs(), help="worker processes (default: $NMU_JOBS or 1)")
        e.add_argument("--out", help="directory for records.jsonl and summary.json")
        e.add_argument("--timings", action="store_true", help="add per-record timings (makes records non-reproducible)")
        e.add_argument("--force", action="store_true", help="lift the size guard")
        e.set_defaults(func=func)

    m = sub.add_parser("sample", help="histogram of linear extensions reached by double sorting")
    m.add_argument("poset")
    m.add_argument("pair")
    m.add_argument("--trials", type=int, default=10000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--exhaustive", action="store_true", help="use every labeling once instead of sampling")
    m.add_argument("--out", help="CSV output path (default: stdout)")
    m.set_defaults(func=cmd_sample)

    x = sub.add_parser("export", help="write a builtin poset as a poset file")
    x.add_argument("poset")
    x.add_argument("--out")
    x.add_argument("--pair-out", help="also write the row/column pair of a grid")
    x.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return ns.func(ns)
    except SizeLimitError as exc:
        print(f"error: {exc} (use --force to override)", file=sys.stderr)
        return EXIT_SIZE
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ParseError, PosetError, ChainCoverError, NotBijectiveError, BadParamsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
