"""Towers: verification, enumeration, the tower digraph and clique extraction.

A tower of order ``n`` stores one element per nonempty subset of ``[n]``.
Subsets are bitmasks with bit ``i-1`` standing for ``i``; ``entries[mask-1]``
is ``e_mask``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .config import check_cap
from .matroid import (
    MatroidHandle,
    as_handle,
    bits,
    clique_matroid,
    eps,
    is_circuit,
    is_independent,
    is_triangle,
    popcount,
    rank_functions_match,
    simple_minor,
    to_mask,
)
from .minors import MinorWitness, has_clique_minor, is_b_clique, line_count


def subset(*members: int) -> int:
    """Bitmask of a subset of [n] given by its (1-based) members."""
    return sum(1 << (i - 1) for i in members)


def members(mask: int) -> list[int]:
    return [i + 1 for i in bits(mask)]


@dataclass(frozen=True)
class Tower:
    n: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or len(self.entries) != (1 << self.n) - 1:
            raise ValueError(f"a tower of order {self.n} needs {(1 << self.n) - 1} entries")

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[int, int]) -> "Tower":
        missing = [m for m in range(1, 1 << n) if m not in mapping]
        if missing:
            raise ValueError(f"no entry for subsets {[members(m) for m in missing]}")
        return cls(n, tuple(mapping[m] for m in range(1, 1 << n)))

    def e(self, mask: int) -> int:
        return self.entries[mask - 1]

    def joint(self, i: int) -> int:
        return self.entries[(1 << (i - 1)) - 1]

    def joints_mask(self, X: int) -> int:
        """Element mask of J_X."""
        return to_mask(self.joint(i) for i in members(X))

    @property
    def elements(self) -> frozenset[int]:
        return frozenset(self.entries)

    @property
    def element_mask(self) -> int:
        return to_mask(self.entries)

    def lower(self) -> "Tower":
        return Tower(self.n - 1, self.entries[: (1 << (self.n - 1)) - 1])

    def upper(self) -> "Tower":
        return Tower(self.n - 1, self.entries[1 << (self.n - 1) :])

    def to_text(self) -> str:
        lines = [f"tower n={self.n}"]
        lines += [f"{m} {self.e(m)}" for m in range(1, 1 << self.n)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Tower":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        head = rows[0]
        if head[0] != "tower" or not head[1].startswith("n="):
            raise ValueError("expected header 'tower n=<n>'")
        n = int(head[1][2:])
        return cls.from_mapping(n, {int(a): int(b) for a, b in rows[1:]})


def assemble(T0: Tower, x: int, T1: Tower) -> Tower:
    """The tower with e_X = T0_X, e_{n} = x and e_{Xn} = T1_X."""
    return Tower(T0.n + 1, T0.entries + (x,) + T1.entries)


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class TowerCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_tower(M, T: Tower) -> TowerCheck:
    """Check the recursive definition, re-checking sub-towers in both M and M/e_n."""
    return _is_tower(as_handle(M), T)


def _is_tower(M: MatroidHandle, T: Tower) -> TowerCheck:
    gm = M.ground_mask
    for e in T.entries:
        if not gm >> e & 1:
            return TowerCheck(False, f"element {e} is not in the matroid")
    if T.n == 1:
        if M.is_loop(T.entries[0]):
            return TowerCheck(False, "n=1: e_1 is a loop")
        return TowerCheck(True)
    top = 1 << (T.n - 1)
    en = T.e(top)
    Mn = M.minor(1 << en)
    pairs = [(T.e(X), T.e(X | top)) for X in range(1, top)]
    for X, (a, b) in zip(range(1, top), pairs):
        if a == en or b == en or not Mn.parallel(a, b):
            return TowerCheck(False, f"condition 1 fails at X={members(X)}")
    if all(M.parallel(a, b) for a, b in pairs):
        return TowerCheck(False, "condition 2 fails: every pair is parallel in M")
    for name, sub in (("T0", T.lower()), ("T1", T.upper())):
        for where, N in (("M", M), ("M/e_n", Mn)):
            res = _is_tower(N, sub)
            if not res:
                return TowerCheck(False, f"condition 3 fails: {name} in {where}: {res.reason}")
    return TowerCheck(True)


def towers_equivalent(M, T: Tower, U: Tower) -> bool:
    if T.n != U.n:
        raise ValueError("towers of different order")
    M = as_handle(M)
    return all(M.parallel(a, b) for a, b in zip(T.entries, U.entries))


# ---------------------------------------------------------------- enumeration


def _line_keys(S: MatroidHandle, x: int) -> dict[int, int]:
    """For a simple S: element -> least element of its point in S/x (x itself excluded)."""
    keys: dict[int, int] = {}
    reps: list[int] = []
    for e in S.ground:
        if e == x:
            continue
        for r in reps:
            if S.rank_mask((1 << x) | (1 << e) | (1 << r)) == 2:
                keys[e] = r
                break
        else:
            reps.append(e)
            keys[e] = e
    return keys


@dataclass
class _Grouping:
    spanning: list[Tower] = field(default_factory=list)  # A(x): towers whose span contains x
    classes: list[list[Tower]] = field(default_factory=list)


def _group_by_contraction(S: MatroidHandle, towers: list[Tower], x: int) -> _Grouping:
    keys = _line_keys(S, x)
    out = _Grouping()
    index: dict[tuple, int] = {}
    for T in towers:
        m = T.element_mask
        if S.rank_mask(m | (1 << x)) == S.rank_mask(m):
            out.spanning.append(T)
            continue
        key = tuple(keys[e] for e in T.entries)
        if key not in index:
            index[key] = len(out.classes)
            out.classes.append([])
        out.classes[index[key]].append(T)
    return out


def _towers_of_simple(S: MatroidHandle, n: int) -> list[Tower]:
    level = [Tower(1, (p,)) for p in S.ground]
    for _ in range(1, n):
        nxt: list[Tower] = []
        for x in S.ground:
            for cls in _group_by_contraction(S, level, x).classes:
                for T0, T1 in itertools.permutations(cls, 2):
                    nxt.append(assemble(T0, x, T1))
        level = nxt
    return level


def enumerate_towers(M, n: int, cap: int | None = None) -> list[Tower]:
    """All n-towers of si(M) (one per equivalence class of n-towers of M)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_cap("towers", n, "tower order", cap)
    return _towers_of_simple(simple_minor(as_handle(M)), n)


def count_w(M, n: int, cap: int | None = None) -> int:
    M = as_handle(M)
    if n == 0:
        return M.r
    if n == 1:
        return eps(M)
    return len(enumerate_towers(M, n, cap))


def brute_force_towers(M, n: int) -> list[Tower]:
    """Towers of si(M) by filtering candidates with :func:`is_tower` only.

    Order 2 tries every ordered triple of elements; higher orders try every
    (x, T0, T1) with T0, T1 from the order below.
    """
    S = simple_minor(as_handle(M))
    if n == 1:
        return [Tower(1, (p,)) for p in S.ground if not S.is_loop(p)]
    if n == 2:
        out = []
        for a, b, c in itertools.product(S.ground, repeat=3):
            T = Tower(2, (a, b, c))
            if _is_tower(S, T):
                out.append(T)
        return out
    lower = brute_force_towers(S, n - 1)
    return [
        assemble(T0, x, T1)
        for x in S.ground
        for T0 in lower
        for T1 in lower
        if _is_tower(S, assemble(T0, x, T1))
    ]


# ---------------------------------------------------------------- digraph


@dataclass(frozen=True)
class TowerDigraph:
    n: int
    arcs: frozenset[tuple[int, int]]

    def induced(self, X: int) -> frozenset[tuple[int, int]]:
        vs = set(members(X))
        return frozenset((i, j) for i, j in self.arcs if i in vs and j in vs)

    def in_degree(self, v: int, X: int | None = None) -> int:
        arcs = self.arcs if X is None else self.induced(X)
        return sum(1 for _, j in arcs if j == v)

    def is_connected(self, X: int | None = None) -> bool:
        """Every vertex is reached from the least one along upward arcs."""
        X = (1 << self.n) - 1 if X is None else X
        vs = members(X)
        if not vs:
            return False
        arcs = self.induced(X)
        reach = {vs[0]}
        for v in vs[1:]:
            if any((u, v) in arcs for u in reach):
                reach.add(v)
        return len(reach) == len(vs)

    def is_path(self, X: int) -> bool:
        vs = members(X)
        return self.induced(X) == frozenset(zip(vs, vs[1:]))

    def is_tree(self, X: int) -> bool:
        vs = members(X)
        return all(self.in_degree(s, X) == 1 for s in vs[1:])


def tower_digraph(M, T: Tower, check: bool = True) -> TowerDigraph:
    M = as_handle(M)
    if check:
        res = is_tower(M, T)
        if not res:
            raise ValueError(f"not a tower: {res.reason}")
    arcs = frozenset(
        (i, j)
        for i, j in itertools.combinations(range(1, T.n + 1), 2)
        if is_triangle(M, T.joint(i), T.e(subset(i, j)), T.joint(j))
    )
    return TowerDigraph(T.n, arcs)


@dataclass(frozen=True)
class TreeCircuits:
    triangle: frozenset[int]
    joint_circuit: frozenset[int]


def tower_tree_circuits(M, T: Tower, S: int, k: int) -> TreeCircuits:
    """The circuits {e_S, e_Sk, e_k} and J_Sk + e_Sk for a tree Sk."""
    M = as_handle(M)
    if not S or max(members(S)) >= k or k > T.n:
        raise ValueError("need nonempty S with max(S) < k <= n")
    Sk = S | subset(k)
    G = tower_digraph(M, T, check=False)
    if not G.is_tree(Sk):
        raise ValueError(f"{members(Sk)} is not a tree of the tower")
    tri = frozenset({T.e(S), T.e(Sk), T.joint(k)})
    big = frozenset(bits(T.joints_mask(Sk) | (1 << T.e(Sk))))
    for C in (tri, big):
        if not is_circuit(M, C):
            raise AssertionError(f"{sorted(C)} is not a circuit")
    return TreeCircuits(tri, big)


@dataclass(frozen=True)
class PathClique:
    elements: frozenset[int]
    mapping: dict[int, int] = field(hash=False)  # edge index of M(K_{t+1}) -> element
    verified: bool = False


def path_to_clique(M, T: Tower, X: int) -> PathClique:
    """M(K_{|X|+1})-restriction from a set X inducing a path in the tower digraph.

    The edge between vertices i < j of K_{t+1} (vertices 1..t+1) is the
    interval [i, j-1] of positions in X, sent to e_{X(interval)}.
    """
    M = as_handle(M)
    G = tower_digraph(M, T, check=False)
    if not G.is_path(X):
        raise ValueError(f"{members(X)} does not induce a path")
    xs = members(X)
    t = len(xs)
    mapping = {}
    for idx, (a, b) in enumerate(itertools.combinations(range(t + 1), 2)):
        interval = subset(*(xs[p - 1] for p in range(a + 1, b + 1)))
        mapping[idx] = T.e(interval)
    target = clique_matroid(t + 1)
    ok = len(set(mapping.values())) == len(mapping) and rank_functions_match(target, M, mapping)
    return PathClique(frozenset(mapping.values()), mapping, ok)


def canonical_clique_tower(s: int) -> tuple[MatroidHandle, Tower]:
    """An s-tower in M(K_{s+1}) whose digraph is the path 1 -> 2 -> ... -> s.

    Vertices are 0..s and the interval [i, j] of [s] is the edge {i-1, j}.
    For a general subset A, e_A is the interval from min(A) to the end of the
    first run of consecutive members of A.
    """
    if not 1 <= s <= 5:
        raise ValueError("s must be between 1 and 5")
    M = clique_matroid(s + 1)
    edge_index = {e: k for k, e in enumerate(itertools.combinations(range(s + 1), 2))}
    mapping = {}
    for A in range(1, 1 << s):
        ms = members(A)
        end = ms[0]
        while end + 1 in ms:
            end += 1
        mapping[A] = edge_index[(ms[0] - 1, end)]
    T = Tower.from_mapping(s, mapping)
    res = is_tower(M, T)
    if not res:
        raise AssertionError(f"canonical tower check failed: {res.reason}")
    return M, T


# ---------------------------------------------------------------- structural checks


def tower_fact_violations(M, T: Tower) -> list[str]:
    """Check the five basic tower facts for every (X, k) with max(X) < k <= n."""
    M = as_handle(M)
    out = []
    n = T.n
    for k in range(1, n + 1):
        for X in range(0, 1 << (k - 1)):
            Xk = X | subset(k)
            ek = T.joint(k)
            eXk = T.e(Xk)
            J = T.joints_mask(Xk)
            if not is_independent(M, J):
                out.append(f"(i) X={members(X)} k={k}")
            side = to_mask(T.e(subset(i, k)) for i in members(X)) | (1 << ek)
            if not is_independent(M, side) or popcount(side) != len(members(X)) + 1:
                out.append(f"(ii) X={members(X)} k={k}")
            if M.rank_mask(J | (1 << eXk)) != M.rank_mask(J):
                out.append(f"(iii) X={members(X)} k={k}")
            if X:
                pair = (1 << T.e(X)) | (1 << ek)
                if M.rank_mask(pair | (1 << eXk)) != M.rank_mask(pair):
                    out.append(f"(iv) X={members(X)} k={k}")
                ik = to_mask(T.e(subset(i, k)) for i in members(X))
                if M.rank_mask(ik | (1 << eXk)) != M.rank_mask(ik):
                    out.append(f"(v) X={members(X)} k={k}")
    return out


def joints_span_each_entry(M, T: Tower) -> bool:
    M = as_handle(M)
    for X in range(1, 1 << T.n):
        J = T.joints_mask(X)
        if not is_independent(M, J) or M.rank_mask(J | (1 << T.e(X))) != M.rank_mask(J):
            return False
    return True


def joints_form_basis(M, T: Tower) -> bool:
    M = as_handle(M)
    J = T.joints_mask((1 << T.n) - 1)
    return M.rank_mask(T.element_mask) == T.n and is_independent(M, J) and popcount(J) == T.n


def triangle_dichotomy_holds(M, T: Tower) -> bool:
    """For each X and k > max(X): a triangle, or e_Xk parallel to e_X but not to e_k."""
    M = as_handle(M)
    for k in range(2, T.n + 1):
        for X in range(1, 1 << (k - 1)):
            a, b, c = T.e(X), T.e(X | subset(k)), T.joint(k)
            if is_triangle(M, a, b, c):
                continue
            if not (M.parallel(b, a) and not M.parallel(a, c)):
                return False
    return True


def every_vertex_has_in_arc(G: TowerDigraph) -> bool:
    return all(G.in_degree(k) >= 1 for k in range(2, G.n + 1))


# ---------------------------------------------------------------- census


@dataclass(frozen=True)
class ContractionCensus:
    x: int
    w_minor: int  # w_n(M/x)
    spanning: int  # |A_n(x)|
    class_sizes: tuple[int, ...]


@dataclass(frozen=True)
class TowerCensus:
    n: int
    w_n: int
    w_next: int
    delta: int
    per_x: tuple[ContractionCensus, ...]

    def epart_holds(self) -> bool:
        return all(self.w_n == c.spanning + sum(c.class_sizes) for c in self.per_x)

    def triple_count(self) -> int:
        return sum(s * (s - 1) for c in self.per_x for s in c.class_sizes)

    def nexti_holds(self) -> bool:
        return self.triple_count() == self.w_next

    def wdelta_holds(self, ell: int) -> bool:
        f = ell**self.n
        return self.delta - f * self.w_n <= self.w_next <= f * self.delta

    def overcount_holds(self, ell: int) -> bool:
        return all(s <= ell**self.n for c in self.per_x for s in c.class_sizes)

    def classes_match_minor_counts(self) -> bool:
        return all(len(c.class_sizes) == c.w_minor for c in self.per_x)


def tower_census(M, n: int, cap: int | None = None) -> TowerCensus:
    """w_n, w_{n+1}, Delta_n and, per x, |A_n(x)| and the class sizes in M/x."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_cap("towers", n + 1, "tower order", cap)
    S = simple_minor(as_handle(M))
    w_n = count_w(S, n)
    towers = _towers_of_simple(S, n)
    w_next = count_w(S, n + 1)
    per_x = []
    delta = 0
    for x in S.ground:
        Sx = S.minor(1 << x)
        wm = count_w(Sx, n)
        delta += w_n - wm
        g = _group_by_contraction(S, towers, x)
        per_x.append(ContractionCensus(x, wm, len(g.spanning), tuple(len(c) for c in g.classes)))
    return TowerCensus(n, w_n, w_next, delta, tuple(per_x))


# ---------------------------------------------------------------- constructive search


@dataclass(frozen=True)
class TowerSearch:
    tower: Tower | None
    contract: frozenset[int]
    delete: frozenset[int]
    route: str  # "density", "direct" or "none"
    hypothesis: bool
    ell: int
    trace: tuple[str, ...] = ()

    def minor_of(self, M) -> MatroidHandle:
        return as_handle(M).minor(to_mask(self.contract), to_mask(self.delete))


def _w(M: MatroidHandle, k: int) -> int:
    return count_w(M, k)


def _descend(N: MatroidHandle, k: int, beta: int, trace: list[str]) -> MatroidHandle:
    """Greedy single-element contractions, then deletions, keeping w_k > beta * w_{k-1}."""
    while True:
        for x in N.ground:
            cand = simple_minor(N.minor(1 << x))
            if _w(cand, k) > beta * _w(cand, k - 1):
                trace.append(f"contract {x}: rank {cand.r}, {len(cand)} points")
                N = cand
                break
        else:
            for x in N.ground:
                cand = N.minor(0, 1 << x)
                if _w(cand, k) > beta * _w(cand, k - 1):
                    trace.append(f"delete {x}: rank {cand.r}, {len(cand)} points")
                    N = cand
                    break
            else:
                return N


_PREFERENCE_SCAN = 5000


def find_tower(M, t: int, ell: int | None = None) -> TowerSearch:
    """Follow the density argument to a t-tower in a minor of M.

    When eps(M) > ell^C(t+1,2) r(M), descend through minors keeping
    w_k > beta_k w_{k-1} for k = 1..t-1, then read off a t-tower.  Otherwise
    fall back to enumerating t-towers of M itself.  ``ell`` must satisfy
    M in U(ell); it is computed by line-minor search if omitted.
    """
    M = as_handle(M)
    if t < 1:
        raise ValueError("t must be >= 1")
    check_cap("towers", t, "tower order")
    if ell is None:
        ell = max(line_count(M), 1)
    S = simple_minor(M)
    exponent = comb(t + 1, 2)
    hypothesis = ell >= 2 and len(S) > ell**exponent * S.r
    trace: list[str] = []

    def result(N: MatroidHandle, route: str) -> TowerSearch:
        towers = _towers_of_simple(N, t)
        if not towers:
            return TowerSearch(None, frozenset(), frozenset(), "none", hypothesis, ell, tuple(trace))
        # prefer a tower with a long pi-path, which extraction can use directly
        best = max(towers[:_PREFERENCE_SCAN], key=lambda T: longest_pi_path(N, T))
        C = N.contracted & ~M.contracted
        D = N.deleted & ~M.deleted & ~C
        return TowerSearch(best, frozenset(bits(C)), frozenset(bits(D)), route, hypothesis, ell, tuple(trace))

    if hypothesis:
        def c(k: int) -> int:
            return ell ** (exponent - comb(k, 2))

        N = S
        for k in range(1, t):
            beta = ell ** (k - 1) * (c(k + 1) + ell**k)
            trace.append(f"k={k}: need w_{k} > {beta} w_{k - 1}")
            N = _descend(N, k, beta, trace)
        return result(N, "density")
    trace.append("density hypothesis not met; enumerating directly")
    return result(S, "direct")


@dataclass(frozen=True)
class CliqueExtraction:
    status: str  # "found" or "inconclusive"
    branch: str
    witness: MinorWitness | None
    pi: dict[int, int] = field(hash=False)
    C: frozenset[int] = frozenset()
    L: frozenset[int] = frozenset()
    b_clique: bool | None = None


def pi_paths(G: TowerDigraph) -> tuple[dict[int, int], dict[int, list[int]]]:
    """pi(k) = least in-neighbour of k (1 if none) and the vertex sets of the pi-paths to 1."""
    pi = {1: 1}
    for k in range(2, G.n + 1):
        ins = [i for i, j in G.arcs if j == k]
        pi[k] = min(ins) if ins else 1
    paths = {}
    for k in range(1, G.n + 1):
        P, v = {k}, k
        while v != 1:
            v = pi[v]
            P.add(v)
        paths[k] = sorted(P)
    return pi, paths


def longest_pi_path(M, T: Tower) -> int:
    _, paths = pi_paths(tower_digraph(M, T, check=False))
    return max(len(P) for P in paths.values())


def clique_from_tower(M, T: Tower, t: int) -> CliqueExtraction:
    """Turn an n-tower into an M(K_t)-minor via a long pi-path or a B-clique."""
    M = as_handle(M)
    n = T.n
    pi, paths = pi_paths(tower_digraph(M, T))
    C = frozenset(pi[k] for k in range(1, n + 1))
    L = frozenset(range(1, n + 1)) - C
    for x in sorted(paths, key=lambda k: (-len(paths[k]), k)):
        P = paths[x]
        if len(P) >= t - 1:
            X = subset(*P[: t - 1])
            pc = path_to_clique(M, T, X)
            if pc.verified:
                keep = to_mask(pc.elements)
                wit = MinorWitness(frozenset(), frozenset(bits(M.ground_mask & ~keep)), dict(pc.mapping))
                return CliqueExtraction("found", "path", wit, pi, C, L)
    # B-clique branch: J_L frames a clique in M|E(T) / J_C
    JC = to_mask(T.joint(i) for i in C)
    JL = [T.joint(i) for i in sorted(L)]
    restricted = M.restrict(T.element_mask | JC)
    N = restricted.minor(JC)
    framed = [
        e for e in N.ground
        if any(
            N.rank_mask(s | (1 << e)) == N.rank_mask(s)
            for s in [0] + [1 << b for b in JL] + [(1 << a) | (1 << b) for a, b in itertools.combinations(JL, 2)]
        )
    ]
    R = N.restrict(to_mask(framed))
    bc = is_b_clique(R, JL) if JL else False
    res = has_clique_minor(R, t) if R.r >= t - 1 else None
    if res is not None and res.found:
        inner = res.witness
        contract = frozenset(bits(JC)) | inner.contract
        delete = frozenset(bits(M.ground_mask & ~to_mask(contract) & ~to_mask(inner.mapping.values())))
        wit = MinorWitness(contract, delete, dict(inner.mapping))
        return CliqueExtraction("found", "b-clique", wit, pi, C, L, bc)
    return CliqueExtraction("inconclusive", "b-clique", None, pi, C, L, bc)
