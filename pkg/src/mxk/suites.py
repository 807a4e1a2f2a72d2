"""Named verification suites run by ``mxk verify`` and by the acceptance tests."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Callable

from .algebra import largest_prime_power_at_most
from .config import CapExceeded
from .frame import (
    biased_minor,
    cycle_is_balanced,
    dowling,
    frame_circuits,
    frame_matroid,
    frame_rank,
    rank_from_circuits,
)
from .generators import random_biased_graph, random_simple_graph
from .graphs import (
    ALPHA,
    binary_identity_holds,
    crown_lower_bound,
    graph_clique_minor,
    is_clique_model,
    kostochka_edge_count,
    kostochka_family,
    thomason_alpha,
)
from .linear import affine_geometry, coupled_example, crown, crown_points, crown_size, projective_geometry
from .matroid import bits, clique_matroid, eps, graphic, to_mask
from .minors import find_restriction, has_clique_minor, has_line_minor, line_count
from .towers import (
    canonical_clique_tower,
    clique_from_tower,
    count_w,
    enumerate_towers,
    every_vertex_has_in_arc,
    find_tower,
    is_tower,
    joints_form_basis,
    joints_span_each_entry,
    members,
    path_to_clique,
    subset,
    tower_census,
    tower_digraph,
    tower_fact_violations,
    tower_tree_circuits,
    triangle_dichotomy_holds,
)


@dataclass
class Outcome:
    status: str  # "pass", "fail" or "inconclusive"
    detail: str = ""
    witness: str | None = None


@dataclass(frozen=True)
class Check:
    suite: str
    check_id: str
    claim: str
    run: Callable[[random.Random], Outcome]
    long: bool = False


@dataclass
class Result:
    check: Check
    outcome: Outcome
    millis: int
    witness_file: str = ""


def _verdict(failures: list[str], ok_detail: str = "", witness: str | None = None) -> Outcome:
    if failures:
        shown = "; ".join(failures[:5])
        more = f" (+{len(failures) - 5} more)" if len(failures) > 5 else ""
        return Outcome("fail", shown + more, witness)
    return Outcome("pass", ok_detail, witness)


# ---------------------------------------------------------------- formulas


def crown_size_identity(rng: random.Random) -> Outcome:
    bad, count = [], 0
    for q in (2, 3, 4, 5, 7, 8, 9):
        for n in range(2, 9):
            for t in range(0, min(n, 4) + 1):
                if not t + 1 < n:
                    continue
                pts = crown_points(n, q, t)
                want = (n - t) * q**t + (q**t - 1) // (q - 1)
                count += 1
                if not (len(pts) == len(set(pts)) == want == crown_size(n, q, t)):
                    bad.append(f"crown({n},{q},{t}): {len(set(pts))} points, formula {want}")
    return _verdict(bad, f"{count} parameter triples")


def crown_bound_identity(rng: random.Random) -> Outcome:
    bad = []
    for ell in (2, 3, 4, 5):
        q = largest_prime_power_at_most(ell)
        for t in (4, 5, 6):
            for n in range(max(t - 3, 1), 9):
                if crown_lower_bound(ell, t, n) != crown_size(n, q, t - 3):
                    bad.append(f"ell={ell} t={t} n={n}")
    return _verdict(bad)


def binary_threshold_identity(rng: random.Random) -> Outcome:
    return _verdict([f"t={t}" for t in range(1, 11) if not binary_identity_holds(t)])


def alpha_constant(rng: random.Random) -> Outcome:
    a = thomason_alpha()
    return _verdict([] if abs(a - ALPHA) < 5e-4 else [f"solver gives {a}"], f"alpha = {a:.6f}")


def kostochka_counts(rng: random.Random) -> Outcome:
    bad = [
        f"t={t} n={n}"
        for t in range(3, 7)
        for n in range(t, 13)
        if len(kostochka_family(t, n).edges) != kostochka_edge_count(t, n)
    ]
    return _verdict(bad)


# ---------------------------------------------------------------- frame


def dowling_extremal(rng: random.Random) -> Outcome:
    bad = []
    for k in (1, 2, 3):
        ell = k + 1
        for r in range(1, 6):
            M = dowling(r, k)
            bound = r + (ell - 1) * comb(r, 2)
            if M.r != r or len(M) != bound or eps(M) != len(M):
                bad.append(f"DG({r},Z{k}): rank {M.r}, size {len(M)}, eps {eps(M)}, bound {bound}")
            elif r >= 2 and has_line_minor(M, ell + 2).found:
                bad.append(f"DG({r},Z{k}) has a U(2,{ell + 2})-minor")
    return _verdict(bad, "r <= 5, groups Z1, Z2, Z3")


def frame_oracle_agreement(rng: random.Random, cases: int = 200) -> Outcome:
    bad = []
    for case in range(cases):
        B = random_biased_graph(rng)
        ids = B.edge_ids
        ranks = rank_from_circuits(ids, frame_circuits(B))
        for m in range(1 << len(ids)):
            S = [ids[k] for k in bits(m)]
            if frame_rank(B, S) != ranks[m]:
                bad.append(f"case {case}: subset {S}")
                break
    return _verdict(bad, f"{cases} biased graphs, every subset")


MINOR_CASES = ("delete", "contract-nonloop", "contract-balanced-loop", "contract-unbalanced-loop")


def _pick_edge(B, case: str, rng: random.Random):
    ends = B.graph.ends()
    pool = []
    for i, (u, v) in ends.items():
        loop = u == v
        if case == "delete":
            pool.append(i)
        elif case == "contract-nonloop" and not loop:
            pool.append(i)
        elif loop and case.startswith("contract-"):
            bal = cycle_is_balanced(B, [i])
            if bal == (case == "contract-balanced-loop"):
                pool.append(i)
    return rng.choice(pool) if pool else None


def minor_commutation(rng: random.Random, cases: int = 200) -> Outcome:
    bad, done = [], {c: 0 for c in MINOR_CASES}
    for k in range(cases):
        case = MINOR_CASES[k % 4]
        while True:
            B = random_biased_graph(rng, loop_rate=0.4)
            e = _pick_edge(B, case, rng)
            if e is not None:
                break
        kind = "delete-edge" if case == "delete" else "contract-edge"
        small = biased_minor(B, kind, e)
        big = frame_matroid(B)
        idx = {lab: j for j, lab in enumerate(big.backend.labels)}
        mask = 1 << idx[e]
        lhs = big.minor(mask) if kind == "contract-edge" else big.minor(0, mask)
        rest = [i for i in B.edge_ids if i != e]
        for m in range(1 << len(rest)):
            S = [rest[j] for j in bits(m)]
            if lhs.rank_mask(to_mask(idx[s] for s in S)) != frame_rank(small, S):
                bad.append(f"{case} of edge {e} in case {k}: subset {S}")
                break
        done[case] += 1
    return _verdict(bad, ", ".join(f"{c}={n}" for c, n in done.items()))


# ---------------------------------------------------------------- towers


def tower_suite_matroids():
    return [
        ("Fano", projective_geometry(3, 2).handle()),
        ("M(K4)", clique_matroid(4)),
        ("M(K5)", clique_matroid(5)),
        ("DG(3,Z2)", dowling(3, 2)),
    ]


def tower_properties(rng: random.Random) -> Outcome:
    bad, total = [], 0
    for name, M in tower_suite_matroids():
        ell = line_count(M)
        for n in (1, 2, 3):
            towers = enumerate_towers(M, n)
            for T in towers:
                total += 1
                tag = f"{name} n={n} {T.entries}"
                if not is_tower(M, T):
                    bad.append(f"{tag}: not a tower")
                    continue
                if tower_fact_violations(M, T):
                    bad.append(f"{tag}: tower facts {tower_fact_violations(M, T)[:2]}")
                if not joints_span_each_entry(M, T):
                    bad.append(f"{tag}: joints fail to span")
                if not joints_form_basis(M, T):
                    bad.append(f"{tag}: joints not a basis of E(T)")
                if not triangle_dichotomy_holds(M, T):
                    bad.append(f"{tag}: triangle dichotomy")
                G = tower_digraph(M, T, check=False)
                if not every_vertex_has_in_arc(G):
                    bad.append(f"{tag}: vertex without in-arc")
                if not G.is_connected():
                    bad.append(f"{tag}: digraph not connected")
        for n in (1, 2):
            c = tower_census(M, n)
            if not c.overcount_holds(ell):
                bad.append(f"{name} n={n}: class larger than {ell}^{n}")
    return _verdict(bad, f"{total} towers on Fano, M(K4), M(K5), DG(3,Z2)")


def tower_counting(rng: random.Random) -> Outcome:
    bad, rows = [], []
    for name, M in tower_suite_matroids():
        ell = line_count(M)
        for i in (1, 2):
            c = tower_census(M, i)
            rows.append(f"{name}: w{i}={c.w_n} w{i + 1}={c.w_next} triples={c.triple_count()}")
            if not c.epart_holds():
                bad.append(f"{name} i={i}: A(x) and the classes do not partition the towers")
            if not c.nexti_holds():
                bad.append(f"{name} i={i}: w{i + 1}={c.w_next} but triple count {c.triple_count()}")
            if count_w(M, i + 1) != c.w_next:
                bad.append(f"{name} i={i}: count_w disagrees")
            if not c.wdelta_holds(ell):
                bad.append(f"{name} i={i}: sandwich fails (delta={c.delta}, w={c.w_n}, next={c.w_next})")
    return _verdict(bad, "; ".join(rows))


def extraction_pipeline(rng: random.Random) -> Outcome:
    bad, witness = [], None
    for s in range(1, 5):
        M, T = canonical_clique_tower(s)
        full = (1 << s) - 1
        if not is_tower(M, T):
            bad.append(f"s={s}: not a tower")
            continue
        G = tower_digraph(M, T)
        if not G.is_path(full):
            bad.append(f"s={s}: digraph {sorted(G.arcs)} is not a path")
        for k in range(2, s + 1):
            for S in range(1, 1 << (k - 1)):
                if G.is_tree(S | subset(k)):
                    try:
                        tower_tree_circuits(M, T, S, k)
                    except AssertionError as exc:
                        bad.append(f"s={s} S={members(S)} k={k}: {exc}")
        pc = path_to_clique(M, T, full)
        if not pc.verified:
            bad.append(f"s={s}: path_to_clique did not verify")
        res = clique_from_tower(M, T, s + 1)
        if res.status != "found" or res.branch != "path" or not res.witness.replay(M, clique_matroid(s + 1)):
            bad.append(f"s={s}: extraction gave {res.status}/{res.branch}")
        elif s == 4:
            witness = res.witness.to_text()
    return _verdict(bad, "s = 1..4", witness)


def find_tower_pg62(rng: random.Random) -> Outcome:
    P = projective_geometry(7, 2).handle()
    res = find_tower(P, 2, ell=2)
    if res.tower is None:
        return Outcome("fail", f"no tower ({res.route})")
    N = res.minor_of(P)
    ok = res.hypothesis and res.route == "density" and is_tower(N, res.tower).ok
    detail = f"route={res.route}, minor rank {N.r}, tower {res.tower.entries}"
    witness = f"contract={sorted(res.contract)} delete={sorted(res.delete)}\n" + res.tower.to_text()
    return Outcome("pass" if ok else "fail", detail, witness)


def find_tower_pg92(rng: random.Random) -> Outcome:
    P = projective_geometry(10, 2).handle()
    res = find_tower(P, 3, ell=2)
    if res.tower is None:
        return Outcome("fail", f"no tower ({res.route})")
    ok = is_tower(res.minor_of(P), res.tower).ok
    return Outcome("pass" if ok else "fail", f"route={res.route}")


# ---------------------------------------------------------------- minors


def crown_minors(rng: random.Random) -> Outcome:
    bad = []
    C41 = crown(4, 2, 1).handle()
    k4_minus = graphic(4, [e for e in itertools.combinations(range(4), 2) if e != (2, 3)])
    R = find_restriction(C41, k4_minus)
    if R is None:
        bad.append("crown(4,2,1): no M(K4-) restriction")
    if has_clique_minor(C41, 4).found:
        bad.append("crown(4,2,1) has an M(K4)-minor")
    if has_clique_minor(crown(5, 2, 2).handle(), 5).found:
        bad.append("crown(5,2,2) has an M(K5)-minor")
    wit = None
    if R is not None:
        wit = "restriction map=[" + ",".join(f"({a},{b})" for a, b in sorted(R.mapping.items())) + "]"
    return _verdict(bad, witness=wit)


def affine_clique(rng: random.Random) -> Outcome:
    A = affine_geometry(3, 3).handle()
    if len(A) != 9 or A.r != 3:
        return Outcome("fail", f"AG(2,3) has {len(A)} elements, rank {A.r}")
    return _verdict(["has an M(K4)-minor"] if has_clique_minor(A, 4).found else [])


def coupled_q3(rng: random.Random) -> Outcome:
    M = coupled_example(5, 3)
    bad = []
    if len(M) != 17 or M.r != 5:
        bad.append(f"{len(M)} elements, rank {M.r}")
    if has_line_minor(M, 5).found:
        bad.append("has a U(2,5)-minor")
    if has_clique_minor(M, 4).found:
        bad.append("has an M(K4)-minor")
    return _verdict(bad)


def graph_oracle(rng: random.Random, cases: int = 200) -> Outcome:
    bad = []
    for k in range(cases):
        G = random_simple_graph(rng, rng.randint(1, 8))
        for t in (3, 4, 5):
            a = graph_clique_minor(G, t)
            b = has_clique_minor(G.handle(), t).found if G.edges else False
            if a.found != b:
                bad.append(f"graph {k} t={t}: graph search {a.found}, matroid search {b}")
            if a.found and not is_clique_model(G, a.branch_sets):
                bad.append(f"graph {k} t={t}: invalid branch sets")
    for t, top in ((4, 9), (5, 10)):
        for n in range(t, top + 1):
            if graph_clique_minor(kostochka_family(t, n), t).found:
                bad.append(f"kostochka_family({t},{n}) has a K{t}-minor")
    return _verdict(bad, f"{cases} graphs, t = 3, 4, 5")


# ---------------------------------------------------------------- registry

CHECKS: tuple[Check, ...] = (
    Check("formulas", "crown-size", "crown point count (n-t)q^t + (q^t-1)/(q-1) [criterion 1]", crown_size_identity),
    Check("formulas", "crown-bound", "lower-bound expression equals the crown size [criterion 12]", crown_bound_identity),
    Check("formulas", "binary-threshold", "t^4/2 = 8 t^2 (t/4)^2 and the d_2 exponent stays below it [criterion 12]", binary_threshold_identity),
    Check("formulas", "alpha", "solver reproduces alpha = 0.319", alpha_constant),
    Check("formulas", "kostochka-edges", "edge count of the dense K_t-minor-free family", kostochka_counts),
    Check("frame", "dowling-extremal", "Dowling geometries are simple, extremal and U(2,l+2)-free [criterion 5]", dowling_extremal),
    Check("frame", "frame-oracle", "frame rank equals circuit-derived rank [criterion 6]", frame_oracle_agreement),
    Check("frame", "minor-commutation", "FM(B)/e = FM(B/e) and FM(B)\\e = FM(B\\e) [criterion 7]", minor_commutation),
    Check("towers", "tower-properties", "tower facts, joints, triangles, digraph, class sizes [criterion 8]", tower_properties),
    Check("towers", "tower-counting", "w_{i+1} equals the triple count; Delta sandwich [criterion 9]", tower_counting),
    Check("towers", "extraction", "canonical towers give verified clique restrictions [criterion 10]", extraction_pipeline),
    Check("towers", "find-tower-pg62", "density descent finds a 2-tower in PG(6,2) [criterion 11]", find_tower_pg62),
    Check("towers", "find-tower-pg92", "density descent finds a 3-tower in PG(9,2) (long)", find_tower_pg92, long=True),
    Check("minors", "crown-minors", "crown(4,2,1) has M(K4-) but no M(K4); crown(5,2,2) has no M(K5) [criterion 2]", crown_minors),
    Check("minors", "affine-clique", "AG(2,3) has no M(K4)-minor [criterion 3]", affine_clique),
    Check("minors", "coupled-q3", "coupled example: 17 elements, rank 5, no U(2,5), no M(K4) [criterion 4]", coupled_q3),
    Check("minors", "graph-oracle", "graph and matroid clique-minor searches agree [criterion 13]", graph_oracle),
)

SUITES = ("formulas", "frame", "towers", "minors")


def select(suite: str, include_long: bool = False) -> list[Check]:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    return [
        c for c in CHECKS
        if (suite == "all" or c.suite == suite) and (include_long or not c.long)
    ]


def check_by_id(check_id: str) -> Check:
    for c in CHECKS:
        if c.check_id == check_id:
            return c
    raise KeyError(check_id)


def run_check(check: Check, seed: int = 7, witness_dir: Path | None = None) -> Result:
    rng = random.Random(f"{seed}:{check.check_id}")
    start = time.perf_counter()
    try:
        outcome = check.run(rng)
    except CapExceeded as exc:
        outcome = Outcome("inconclusive", str(exc))
    millis = int((time.perf_counter() - start) * 1000)
    wfile = ""
    if outcome.witness and witness_dir is not None:
        witness_dir.mkdir(parents=True, exist_ok=True)
        path = witness_dir / f"{check.suite}-{check.check_id}.txt"
        path.write_text(outcome.witness if outcome.witness.endswith("\n") else outcome.witness + "\n")
        wfile = str(path)
    return Result(check, outcome, millis, wfile)
