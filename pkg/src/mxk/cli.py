"""Command-line entry point: ``mxk construct | check | towers | verify``."""

from __future__ import annotations

import argparse
import csv
import itertools
import re
import sys
from pathlib import Path

from . import io
from .config import CapExceeded
from .frame import BiasedGraph, blow_up, frame_circuits, frame_rank, rank_from_circuits
from .graphs import kostochka_family
from .linear import affine_geometry, coupled_example, crown, projective_geometry
from .matroid import bits, clique_matroid, eps, graphic
from .minors import MinorWitness, find_restriction, has_clique_minor, has_line_minor, is_b_clique, line_count
from .suites import SUITES, run_check, select
from .towers import Tower, clique_from_tower, count_w, enumerate_towers, find_tower, tower_census

EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 3


def _summary(M) -> str:
    return f"rank={M.r} size={len(M)} eps={eps(M)}"


def _complete_pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    return [tuple(int(x) for x in p.split("-")) for p in text.split(",") if p.strip()]


# ---------------------------------------------------------------- construct


def cmd_construct(args) -> int:
    kind = args.kind
    need = {
        "pg": ("rank", "q"), "ag": ("rank", "q"), "crown": ("n", "q", "t"),
        "dowling": ("n", "group"), "blowup": ("n", "group"), "coupled": ("n", "q"),
        "clique": ("t",), "kostochka-graph": ("t", "n"),
    }[kind]
    missing = [f"--{k}" for k in need if getattr(args, k) is None]
    if missing:
        raise SystemExit(f"construct {kind} needs {' '.join(missing)}")
    if kind == "pg":
        obj = projective_geometry(args.rank, args.q)
    elif kind == "ag":
        obj = affine_geometry(args.rank, args.q)
    elif kind == "crown":
        obj = crown(args.n, args.q, args.t)
    elif kind in ("dowling", "blowup"):
        pairs = _complete_pairs(args.n) if kind == "dowling" or not args.edges else _parse_pairs(args.edges)
        obj = blow_up((args.n, pairs), io.parse_group(args.group))
    elif kind == "coupled":
        obj = coupled_example(args.n, args.q)
    elif kind == "clique":
        obj = graphic(args.t, _complete_pairs(args.t))
    else:
        obj = kostochka_family(args.t, args.n)
    M = io.matroid_of(obj)
    text = io.dumps(obj)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    print(f"{kind}: {_summary(M)}", file=sys.stderr if not args.out else sys.stdout)
    return 0


# ---------------------------------------------------------------- check


def _frame_agreement(obj) -> tuple[bool, str]:
    if not isinstance(obj, BiasedGraph):
        raise SystemExit("frame-rank-agreement needs a biasedgraph file")
    ids = obj.edge_ids
    ranks = rank_from_circuits(ids, frame_circuits(obj))
    for m in range(1 << len(ids)):
        S = [ids[k] for k in bits(m)]
        if frame_rank(obj, S) != ranks[m]:
            return False, f"ranks differ on {S}"
    return True, f"all {1 << len(ids)} subsets agree"


def cmd_check(args) -> int:
    obj = io.read(args.path)
    M = io.matroid_of(obj)
    print(f"instance: {args.path} {_summary(M)}")
    witness: MinorWitness | None = None
    extra = ""
    try:
        if args.check == "line-minor":
            res = has_line_minor(M, args.k or 4)
            holds, witness = res.found, res.witness
        elif args.check == "clique-minor":
            res = has_clique_minor(M, args.t or 4)
            holds, witness = res.found, res.witness
        elif args.check == "restriction":
            if not args.target:
                raise SystemExit("restriction needs --target FILE")
            R = find_restriction(M, io.matroid_of(io.read(args.target)))
            holds = R is not None
            if R is not None:
                extra = "restriction map=[" + ",".join(f"({a},{b})" for a, b in sorted(R.mapping.items())) + "]"
        elif args.check == "kung-bound":
            ell = args.ell if args.ell is not None else line_count(M)
            bound = M.r if ell == 1 else (ell**M.r - 1) // (ell - 1)
            holds = eps(M) <= bound
            extra = f"ell={ell} eps={eps(M)} bound={bound}"
        elif args.check == "b-clique":
            if not args.basis:
                raise SystemExit("b-clique needs --basis ids")
            holds = is_b_clique(M, [int(x) for x in args.basis.split(",")])
        elif args.check == "frame-rank-agreement":
            holds, extra = _frame_agreement(obj)
        else:  # pragma: no cover - argparse restricts choices
            raise SystemExit(f"unknown check {args.check}")
    except CapExceeded as exc:
        print(f"result: inconclusive ({exc})")
        return EXIT_INCONCLUSIVE if args.strict else 0
    print(f"result: {'found' if holds else 'not found'}" if args.check in ("line-minor", "clique-minor", "restriction")
          else f"result: {'holds' if holds else 'fails'}")
    if extra:
        print(extra)
    if witness is not None:
        text = witness.to_text()
        print(f"witness: {text}")
        if args.witness_out:
            Path(args.witness_out).write_text(text + "\n")
    if args.expect:
        ok = holds == (args.expect == "present")
        print(f"status: {'pass' if ok else 'fail'}")
        return 0 if ok else EXIT_FAIL
    return 0


# ---------------------------------------------------------------- towers


def _read_tower(path: str) -> tuple[Tower, frozenset[int], frozenset[int]]:
    text = Path(path).read_text()
    T = io.loads(text)
    m = re.search(r"#\s*minor\s+contract=\[([^\]]*)\]\s+delete=\[([^\]]*)\]", text)
    if not m:
        return T, frozenset(), frozenset()

    def ids(s: str) -> frozenset[int]:
        return frozenset(int(x) for x in s.split(",") if x.strip())

    return T, ids(m.group(1)), ids(m.group(2))


def cmd_towers(args) -> int:
    M = io.matroid_of(io.read(args.path))
    try:
        if args.sub == "count":
            print(count_w(M, args.n))
        elif args.sub == "enumerate":
            towers = enumerate_towers(M, args.n)
            if args.out:
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                for k, T in enumerate(towers):
                    (out / f"tower-{k:05d}.txt").write_text(T.to_text())
            else:
                for T in towers:
                    print(" ".join(map(str, T.entries)))
            print(f"{len(towers)} towers", file=sys.stderr)
        elif args.sub == "census":
            w = csv.writer(sys.stdout)
            w.writerow(["i", "w_i", "w_next", "delta_i", "triples", "nexti", "epart", "wdelta", "overcount"])
            ell = args.ell if args.ell is not None else line_count(M)
            for i in range(1, args.n + 1):
                c = tower_census(M, i)
                w.writerow([i, c.w_n, c.w_next, c.delta, c.triple_count(), c.nexti_holds(),
                            c.epart_holds(), c.wdelta_holds(ell), c.overcount_holds(ell)])
        elif args.sub == "find":
            res = find_tower(M, args.t, ell=args.ell)
            for line in res.trace:
                print(line, file=sys.stderr)
            if res.tower is None:
                print(f"no {args.t}-tower found (route {res.route})")
                return EXIT_FAIL
            text = (f"# minor contract=[{','.join(map(str, sorted(res.contract)))}] "
                    f"delete=[{','.join(map(str, sorted(res.delete)))}]\n") + res.tower.to_text()
            if args.out:
                Path(args.out).write_text(text)
                print(f"wrote {args.out} (route {res.route}, hypothesis {'met' if res.hypothesis else 'not met'})")
            else:
                sys.stdout.write(text)
        elif args.sub == "exploit":
            if args.tower:
                T, C, D = _read_tower(args.tower)
            else:
                res = find_tower(M, args.t - 1, ell=args.ell)
                if res.tower is None:
                    print("no tower to exploit")
                    return EXIT_FAIL
                T, C, D = res.tower, res.contract, res.delete
            N = M.minor(sum(1 << c for c in C), sum(1 << d for d in D))
            res = clique_from_tower(N, T, args.t)
            print(f"result: {res.status} (branch {res.branch})")
            if res.witness is not None:
                wit = MinorWitness(res.witness.contract | C, res.witness.delete | D, res.witness.mapping)
                ok = wit.replay(M, clique_matroid(args.t))
                print(f"witness: {wit.to_text()}")
                print(f"replay: {'ok' if ok else 'FAILED'}")
                if args.out:
                    Path(args.out).write_text(wit.to_text() + "\n")
                return 0 if ok else EXIT_FAIL
            return EXIT_INCONCLUSIVE if args.strict else 0
    except CapExceeded as exc:
        print(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE if args.strict else 0
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    checks = select(args.suite, include_long=args.long)
    wdir = Path(args.witness_dir) if args.witness_dir else None
    results = [run_check(c, args.seed, wdir) for c in checks]
    results.sort(key=lambda r: (r.check.suite, r.check.check_id))
    stream = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        w = csv.writer(stream)
        w.writerow(["suite", "check-id", "claim", "status", "witness-file", "millis"])
        for r in results:
            w.writerow([r.check.suite, r.check.check_id, r.check.claim, r.outcome.status, r.witness_file, r.millis])
    finally:
        if args.csv:
            stream.close()
    for r in results:
        if r.outcome.status != "pass":
            print(f"{r.check.check_id}: {r.outcome.status}: {r.outcome.detail}", file=sys.stderr)
    fails = sum(r.outcome.status == "fail" for r in results)
    inconclusive = sum(r.outcome.status == "inconclusive" for r in results)
    print(f"{len(results)} checks: {len(results) - fails - inconclusive} pass, {fails} fail, "
          f"{inconclusive} inconclusive", file=sys.stderr)
    if fails:
        return EXIT_FAIL
    if inconclusive and args.strict:
        return EXIT_INCONCLUSIVE
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mxk", description="Matroid minors, frame matroids and towers.")
    p.add_argument("--seed", type=int, default=7, help="seed for randomized checks (default 7)")
    p.add_argument("--strict", action="store_true", help="treat inconclusive (cap) results as failures")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="write an instance file")
    c.add_argument("kind", choices=["pg", "ag", "crown", "dowling", "blowup", "coupled", "clique", "kostochka-graph"])
    for name in ("n", "q", "t", "rank"):
        c.add_argument(f"--{name}", type=int)
    c.add_argument("--group", help="cyclic3, Z2, klein or 'table 0,1;1,0'")
    c.add_argument("--edges", help="blowup base graph as 0-1,1-2,... (default complete)")
    c.add_argument("--out", "-o")
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("check", help="run one check on an instance file")
    k.add_argument("path")
    k.add_argument("check", choices=["line-minor", "clique-minor", "restriction", "kung-bound", "b-clique",
                                     "frame-rank-agreement"])
    k.add_argument("--k", type=int, help="line length for line-minor")
    k.add_argument("--t", type=int, help="clique order for clique-minor")
    k.add_argument("--ell", type=int)
    k.add_argument("--target", help="target instance for restriction")
    k.add_argument("--basis", help="comma separated element ids for b-clique")
    k.add_argument("--expect", choices=["present", "absent"], help="turn the answer into pass/fail")
    k.add_argument("--witness-out")
    k.set_defaults(func=cmd_check)

    t = sub.add_parser("towers", help="tower enumeration and extraction")
    t.add_argument("path")
    t.add_argument("sub", choices=["count", "enumerate", "census", "find", "exploit"])
    t.add_argument("--n", type=int, default=2)
    t.add_argument("--t", type=int, default=3)
    t.add_argument("--ell", type=int)
    t.add_argument("--tower", help="tower file for exploit")
    t.add_argument("--out", "-o")
    t.set_defaults(func=cmd_towers)

    v = sub.add_parser("verify", help="run verification suites and emit CSV")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--csv", help="write the CSV here instead of stdout")
    v.add_argument("--witness-dir", default="mxk-witnesses")
    v.add_argument("--long", action="store_true", help="include long-running optional checks")
    v.set_defaults(func=cmd_verify)
    return p


def _hoist_globals(argv: list[str]) -> list[str]:
    """Allow --seed/--strict after the subcommand as well as before it."""
    out, front = [], []
    it = iter(argv)
    for a in it:
        if a == "--strict":
            front.append(a)
        elif a == "--seed":
            front += [a, next(it, "7")]
        elif a.startswith("--seed="):
            front.append(a)
        else:
            out.append(a)
    return front + out


def main(argv: list[str] | None = None) -> int:
    argv = _hoist_globals(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE if args.strict else 0
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
