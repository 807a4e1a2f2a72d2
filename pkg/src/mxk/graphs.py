"""Simple graphs, exhaustive K_t-minor search and the density-bound bookkeeping."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import largest_prime_power_at_most
from .config import check_cap
from .matroid import MatroidHandle, graphic


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) leaves the vertex range 0..{self.n - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def make(cls, n: int, edges) -> "SimpleGraph":
        return cls(n, frozenset(tuple(e) for e in edges))

    def neighbours(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def handle(self) -> MatroidHandle:
        return graphic(self.n, self.sorted_edges())

    def to_text(self) -> str:
        return f"graph vertices={self.n}\n" + "".join(f"{u} {v}\n" for u, v in self.sorted_edges())

    @classmethod
    def from_text(cls, text: str) -> "SimpleGraph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or rows[0][0] != "graph" or not rows[0][1].startswith("vertices="):
            raise ValueError("expected header 'graph vertices=<n>'")
        n = int(rows[0][1].split("=", 1)[1])
        return cls.make(n, [(int(a), int(b)) for a, b in rows[1:]])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.make(n, itertools.combinations(range(n), 2))


def petersen() -> SimpleGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph.make(10, outer + spokes + inner)


# ---------------------------------------------------------------- clique minors


@dataclass(frozen=True)
class CliqueModel:
    found: bool
    branch_sets: tuple[frozenset[int], ...] = ()

    def __bool__(self) -> bool:
        return self.found


def is_clique_model(G: SimpleGraph, branch_sets) -> bool:
    """Disjoint, connected, pairwise adjacent vertex sets."""
    adj = G.neighbours()
    sets = [set(b) for b in branch_sets]
    if any(not b for b in sets):
        return False
    if sum(len(b) for b in sets) != len(set().union(*sets)):
        return False
    for b in sets:
        start = next(iter(b))
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()] & b:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != b:
            return False
    return all(any(adj[u] & b for u in a) for a, b in itertools.combinations(sets, 2))


def graph_clique_minor(G: SimpleGraph, t: int, cap: int | None = None) -> CliqueModel:
    """Exhaustive K_t-minor test by contraction and deletion.

    A vertex of degree below t-1 cannot be a branch set alone, so it is either
    deleted or contracted into a neighbour.  Otherwise an edge is contracted
    or deleted.  Failed states are memoized.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    check_cap("graph", G.n, "vertex count", cap)
    if t == 1:
        return CliqueModel(G.n > 0, (frozenset({0}),) if G.n else ())
    need = t * (t - 1) // 2
    failed: set[frozenset] = set()

    def search(adj: dict[frozenset, frozenset]) -> tuple[frozenset, ...] | None:
        if len(adj) < t or sum(len(v) for v in adj.values()) // 2 < need:
            return None
        key = frozenset((v, nb) for v, nb in adj.items())
        if key in failed:
            return None
        found = _search_step(adj)
        if found is None:
            failed.add(key)
        return found

    def _search_step(adj):
        # a t-clique among the current branch sets finishes the search
        heavy = [v for v in adj if len(adj[v]) >= t - 1]
        for combo in itertools.combinations(sorted(heavy, key=min), t):
            if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
                return combo
        low = next((v for v in sorted(adj, key=min) if len(adj[v]) < t - 1), None)
        if low is not None:
            options = [_delete_vertex(adj, low)] + [_contract(adj, low, w) for w in sorted(adj[low], key=min)]
        else:
            a = min(adj, key=min)
            b = min(adj[a], key=min)
            options = [_contract(adj, a, b), _delete_edge(adj, a, b)]
        for nxt in options:
            res = search(nxt)
            if res is not None:
                return res
        return None

    nbrs = G.neighbours()
    adj0 = {frozenset({v}): frozenset(frozenset({w}) for w in nbrs[v]) for v in range(G.n)}
    res = search(adj0)
    if res is None:
        return CliqueModel(False)
    return CliqueModel(True, tuple(sorted(res, key=min)))


def _delete_vertex(adj, v):
    return {u: nb - {v} for u, nb in adj.items() if u != v}


def _delete_edge(adj, a, b):
    out = dict(adj)
    out[a] = adj[a] - {b}
    out[b] = adj[b] - {a}
    return out


def _contract(adj, a, b):
    m = a | b
    nb = (adj[a] | adj[b]) - {a, b}
    out = {}
    for u, ns in adj.items():
        if u in (a, b):
            continue
        if a in ns or b in ns:
            ns = (ns - {a, b}) | {m}
        out[u] = ns
    out[m] = frozenset(nb)
    return out


# ---------------------------------------------------------------- families


def kostochka_family(t: int, n: int) -> SimpleGraph:
    """n - t + 2 copies of K_{t-1} sharing a common K_{t-2} (vertices 0..t-3)."""
    if not 3 <= t <= n:
        raise ValueError(f"need 3 <= t <= n, got t={t}, n={n}")
    core = range(t - 2)
    edges = list(itertools.combinations(core, 2))
    edges += [(c, v) for v in range(t - 2, n) for c in core]
    return SimpleGraph.make(n, edges)


def kostochka_edge_count(t: int, n: int) -> int:
    return (t - 2) * (t - 3) // 2 + (t - 2) * (n - t + 2)


def replicate_family(H: SimpleGraph, n: int) -> SimpleGraph:
    """floor(n/k) disjoint copies of H (k = |V(H)|) padded with isolated vertices."""
    k = H.n
    if k == 0 or n < k:
        raise ValueError("need n >= |V(H)| >= 1")
    edges = [(u + c * k, v + c * k) for c in range(n // k) for u, v in H.edges]
    return SimpleGraph.make(n, edges)


# ---------------------------------------------------------------- constants and thresholds

ALPHA = 0.319


def thomason_lambda(tol: float = 1e-15) -> float:
    """Root in (0, 1) of 1 - x + 2 x ln x = 0, found by bisection."""

    def f(x: float) -> float:
        return 1 - x + 2 * x * math.log(x)

    lo, hi = 0.1, 0.5  # f(0.1) > 0 > f(0.5); the other root is x = 1
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def thomason_alpha() -> float:
    """(1 - lambda) / (2 sqrt(ln(1/lambda))), which evaluates to 0.3190..."""
    lam = thomason_lambda()
    return (1 - lam) / (2 * math.sqrt(math.log(1 / lam)))


@dataclass(frozen=True)
class DensityBounds:
    t: int

    @property
    def lower(self) -> Fraction:
        return Fraction(self.t - 2)

    @property
    def upper(self) -> float:
        return 22 * self.t * math.sqrt(math.log(self.t)) if self.t > 1 else 0.0

    def d_ell(self, ell: int) -> Fraction | float:
        """Value used for d_ell(t): (t-1)/4 when ell <= 2, else the upper end of d(t)."""
        if ell <= 2:
            return Fraction(self.t - 1, 4)
        return self.upper


@dataclass(frozen=True)
class Threshold:
    """ell ** exponent, kept as the exponent to avoid overflow."""

    ell: int
    exponent: Fraction | float
    variant: str
    d_used: str = ""

    @property
    def log10(self) -> float:
        return float(self.exponent) * math.log10(self.ell) if self.ell > 1 else 0.0

    def exact(self) -> int | None:
        """The integer value when the exponent is an integer, else None."""
        if isinstance(self.exponent, Fraction) and self.exponent.denominator == 1:
            return self.ell ** int(self.exponent)
        return None

    def value(self) -> float:
        return self.ell ** float(self.exponent)


ABSOLUTE_CONSTANT = 8 * 22**2


def density_threshold(ell: int, t: int, variant: str = "general") -> Threshold:
    if ell < 1 or t < 1:
        raise ValueError("need ell >= 1 and t >= 1")
    if variant == "general":
        d = DensityBounds(t).d_ell(ell)
        used = "d_2(t) = (t-1)/4" if ell <= 2 else "upper bound 22 t sqrt(ln t)"
        if isinstance(d, Fraction):
            exp: Fraction | float = 8 * (ell - 1) ** 2 * t**2 * d**2
        else:
            exp = 8 * (ell - 1) ** 2 * t**2 * d * d
        return Threshold(ell, exp, variant, used)
    if variant == "binary":
        return Threshold(2, Fraction(t**4, 2), variant)
    if variant == "absolute":
        return Threshold(ell, ABSOLUTE_CONSTANT * (ell - 1) ** 2 * t**4 * math.log(t), variant)
    raise ValueError(f"unknown variant {variant!r}")


def binary_identity_holds(t: int) -> bool:
    """t^4 / 2 == 8 t^2 (t/4)^2, and the d_2 = (t-1)/4 exponent stays below it."""
    half = Fraction(t**4, 2)
    general = density_threshold(2, t, "general").exponent
    return half == 8 * t**2 * Fraction(t, 4) ** 2 and general <= half and density_threshold(2, t, "binary").exponent == half


def crown_lower_bound(ell: int, t: int, n: int) -> int:
    if t < 4:
        raise ValueError("t must be >= 4")
    q = largest_prime_power_at_most(ell)
    if q is None:
        raise ValueError(f"no prime power <= {ell}")
    p = q ** (t - 3)
    return p * n + ((p - 1) // (q - 1) - (t - 3) * p)
