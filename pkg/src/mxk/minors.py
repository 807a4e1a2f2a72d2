"""Minor and restriction searches that return replayable witnesses."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import comb

from .config import check_cap
from .matroid import (
    MatroidHandle,
    as_handle,
    bits,
    clique_matroid,
    covers,
    embed,
    flats_by_rank,
    greedy_basis,
    is_triangle,
    rank_functions_match,
    to_mask,
    uniform,
)


@dataclass(frozen=True)
class MinorWitness:
    """``M / contract \\ delete`` is isomorphic to the target via ``mapping`` (target -> M)."""

    contract: frozenset[int]
    delete: frozenset[int]
    mapping: dict[int, int] = field(hash=False)

    def apply(self, M) -> MatroidHandle:
        return as_handle(M).minor(to_mask(self.contract), to_mask(self.delete))

    def replay(self, M, target, max_size: int | None = None) -> bool:
        """Check the rank function of the target against the minor.

        Every subset is compared for targets of at most 12 elements; larger
        targets are compared on subsets up to ``max_size`` (default r + 1).
        """
        N = as_handle(target)
        minor_ = self.apply(M)
        if sorted(self.mapping) != list(N.ground):
            return False
        if sorted(self.mapping.values()) != list(minor_.ground):
            return False
        if max_size is None and len(N) > 12:
            max_size = N.r + 1
        return rank_functions_match(N, minor_, self.mapping, max_size)

    def to_text(self) -> str:
        pairs = ",".join(f"({a},{b})" for a, b in sorted(self.mapping.items()))
        return (
            f"contract=[{','.join(map(str, sorted(self.contract)))}] "
            f"delete=[{','.join(map(str, sorted(self.delete)))}] map=[{pairs}]"
        )

    @classmethod
    def from_text(cls, text: str) -> "MinorWitness":
        m = re.fullmatch(r"\s*contract=\[([^\]]*)\]\s+delete=\[([^\]]*)\]\s+map=\[(.*)\]\s*", text)
        if not m:
            raise ValueError(f"malformed witness: {text!r}")

        def ids(s: str) -> frozenset[int]:
            return frozenset(int(x) for x in s.split(",") if x.strip())

        pairs = re.findall(r"\((-?\d+),(-?\d+)\)", m.group(3))
        return cls(ids(m.group(1)), ids(m.group(2)), {int(a): int(b) for a, b in pairs})


@dataclass(frozen=True)
class SearchResult:
    found: bool
    witness: MinorWitness | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.found


def _witness(M: MatroidHandle, contract: int, keep: list[int], target_ids: list[int]) -> MinorWitness:
    keep_mask = to_mask(keep)
    delete = M.ground_mask & ~contract & ~keep_mask
    return MinorWitness(frozenset(bits(contract)), frozenset(bits(delete)), dict(zip(target_ids, keep)))


def _search_caps(M: MatroidHandle, cap_elements: int | None = None) -> None:
    check_cap("minor_elements", len(M), "ground set size", cap_elements)
    check_cap("minor_rank", M.r, "rank")


def _points(M: MatroidHandle, flat: int) -> list[int]:
    """Least element of each point of ``M / flat``."""
    return [(c & ~flat & -(c & ~flat)).bit_length() - 1 for c in covers(M, flat)]


# ---------------------------------------------------------------- lines


def _long_line(M: MatroidHandle, flat: int, k: int) -> list[int] | None:
    """First k points (by id) on a line of M/flat carrying at least k points."""
    pts = _points(M, flat)
    if len(pts) < k:
        return None
    base = M.rank_mask(flat)
    seen_lines: set[tuple[int, int]] = set()
    for i, a in enumerate(pts):
        for b in pts[i + 1 :]:
            if (a, b) in seen_lines:
                continue
            two = flat | (1 << a) | (1 << b)
            on = [p for p in pts if p in (a, b) or M.rank_mask(two | (1 << p)) == base + 2]
            for x, y in itertools.combinations(on, 2):
                seen_lines.add((x, y))
            if len(on) >= k:
                return on[:k]
    return None


def has_line_minor(M, k: int) -> SearchResult:
    """Decide whether M has a U_{2,k}-minor.

    Existence is settled on the flats of corank 2 (M/F has rank 2, so it is a
    k-point line iff it has k points).  A witness is then taken with the
    smallest contraction rank that still exposes a k-point line.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    M = as_handle(M)
    _search_caps(M)
    r = M.r
    if r < 2:
        return SearchResult(False, note="rank below 2")
    exists = False
    for rank, F in flats_by_rank(M, r - 2):
        if rank == r - 2 and len(covers(M, F)) >= k:
            exists = True
            break
    if not exists:
        return SearchResult(False)
    target = list(range(k))
    for rank, F in flats_by_rank(M, r - 2):
        line = _long_line(M, F, k)
        if line is not None:
            return SearchResult(True, _witness(M, greedy_basis(M, F), line, target))
    raise AssertionError("corank-2 flat with k points but no line found")  # pragma: no cover


def line_witness_target(k: int) -> MatroidHandle:
    return uniform(2, k)


# ---------------------------------------------------------------- cliques


def _clique_in_contraction(M: MatroidHandle, flat: int, t: int) -> tuple[list[int], dict] | None:
    """Search ``M / flat`` for an M(K_t)-restriction built on a star basis.

    Picks independent points b_1..b_{t-1} and, for each pair, a third point
    x_ij on the line through b_i and b_j so that every x_ij, x_ik, x_jk is a
    triangle.  Such a restriction is framed by the b's with every pair in a
    triangle and the x's of lower rank, which forces M(K_t).
    """
    pts = _points(M, flat)
    need = comb(t, 2)
    if len(pts) < need:
        return None
    base = M.rank_mask(flat)
    P = len(pts)
    bit = [1 << p for p in pts]

    # line membership between points
    line_of: dict[tuple[int, int], tuple[int, ...]] = {}
    for i in range(P):
        for j in range(i + 1, P):
            if (i, j) in line_of:
                continue
            two = flat | bit[i] | bit[j]
            on = tuple(p for p in range(P) if p in (i, j) or M.rank_mask(two | bit[p]) == base + 2)
            for a, b in itertools.combinations(on, 2):
                line_of[(a, b)] = on

    def line(i: int, j: int) -> tuple[int, ...]:
        return line_of[(i, j) if i < j else (j, i)]

    # prune points lying on fewer than t-2 triangles, repeatedly
    alive = set(range(P))
    changed = True
    while changed:
        changed = False
        for x in sorted(alive):
            lines_through = {line(x, y) for y in alive if y != x}
            tri = sum(comb(len([p for p in L if p in alive]) - 1, 2) for L in lines_through)
            if tri < t - 2:
                alive.discard(x)
                changed = True
    if len(alive) < need:
        return None
    order = sorted(alive)

    def independent(idx: list[int]) -> bool:
        return M.rank_mask(flat | to_mask(pts[i] for i in idx)) == base + len(idx)

    def tri(a: int, b: int, c: int) -> bool:
        return M.rank_mask(flat | bit[a] | bit[b] | bit[c]) == base + 2

    B: list[int] = []
    X: dict[tuple[int, int], int] = {}

    def assign(j: int, i: int) -> bool:
        # choose x_ij for i < j, then continue with i + 1
        if i == j:
            return extend(j + 1)
        bi, bj = B[i], B[j]
        for x in line(bi, bj):
            if x in (bi, bj) or x not in alive:
                continue
            if any(not tri(X[(k, i)], X[(k, j)], x) for k in range(i)):
                continue
            X[(i, j)] = x
            if assign(j, i + 1):
                return True
            del X[(i, j)]
        return False

    def extend(j: int) -> bool:
        if j == t - 1:
            return True
        start = order.index(B[-1]) + 1 if B else 0
        for b in order[start:]:
            B.append(b)
            if independent(B) and assign(j, 0):
                return True
            B.pop()
        return False

    if not extend(0):
        return None
    keep = [pts[b] for b in B] + [pts[X[(i, j)]] for i, j in itertools.combinations(range(t - 1), 2)]
    # target M(K_t) edges in lexicographic order: (0,i) <-> b_i, (i,j) <-> x_ij
    edge_index = {e: n for n, e in enumerate(itertools.combinations(range(t), 2))}
    mapping = {}
    for i in range(t - 1):
        mapping[edge_index[(0, i + 1)]] = pts[B[i]]
    for i, j in itertools.combinations(range(t - 1), 2):
        mapping[edge_index[(i + 1, j + 1)]] = pts[X[(i, j)]]
    return keep, mapping


def has_clique_minor(M, t: int, cap_elements: int | None = None) -> SearchResult:
    """Decide whether M has an M(K_t)-minor, returning a witness when it does.

    Contraction flats are tried by increasing rank, each flat once, and flats
    whose contraction has fewer than C(t,2) points are not expanded (a
    contraction never gains points).
    """
    M = as_handle(M)
    if t < 2:
        raise ValueError("t must be >= 2")
    _search_caps(M, cap_elements)
    r = M.r
    if r < t - 1:
        return SearchResult(False, note="rank too small")
    need = comb(t, 2)
    if t == 2:
        nl = next((e for e in M.ground if not M.is_loop(e)), None)
        if nl is None:
            return SearchResult(False)
        return SearchResult(True, _witness(M, 0, [nl], [0]))

    def prune(F: int) -> bool:
        return len(covers(M, F)) < need

    for rank, F in flats_by_rank(M, r - (t - 1), prune=prune):
        found = _clique_in_contraction(M, F, t)
        if found is not None:
            keep, mapping = found
            C = greedy_basis(M, F)
            delete = M.ground_mask & ~C & ~to_mask(keep)
            return SearchResult(True, MinorWitness(frozenset(bits(C)), frozenset(bits(delete)), mapping))
    return SearchResult(False)


# ---------------------------------------------------------------- restrictions


@dataclass(frozen=True)
class Restriction:
    elements: frozenset[int]
    mapping: dict[int, int] = field(hash=False)  # target element -> M element


def find_restriction(M, N, cap: int | None = None) -> Restriction | None:
    M, N = as_handle(M), as_handle(N)
    check_cap("iso", len(N), "target size", cap)
    check_cap("minor_elements", len(M), "ground set size")
    if len(N) > len(M):
        return None
    phi = embed(N, M, exact=False)
    if phi is None:
        return None
    return Restriction(frozenset(phi.values()), phi)


def has_minor(M, N) -> SearchResult:
    """Generic N-minor test: contract a flat of rank r(M) - r(N), then look for an N-restriction."""
    M, N = as_handle(M), as_handle(N)
    _search_caps(M)
    if N.r > M.r or len(N) > len(M):
        return SearchResult(False)
    for rank, F in flats_by_rank(M, M.r - N.r):
        if rank != M.r - N.r:
            continue
        C = greedy_basis(M, F)
        res = find_restriction(M.minor(C), N)
        if res is not None:
            delete = M.ground_mask & ~C & ~to_mask(res.elements)
            return SearchResult(True, MinorWitness(frozenset(bits(C)), frozenset(bits(delete)), res.mapping))
    return SearchResult(False)


def is_b_clique(M, B) -> bool:
    """B is a basis, frames M (each element spanned by <= 2 of B), and each pair of B is in a triangle."""
    M = as_handle(M)
    B = sorted(set(B))
    bm = to_mask(B)
    if bm & ~M.ground_mask:
        return False
    if M.rank_mask(bm) != len(B) or len(B) != M.r:
        return False
    spans = [0] + [1 << b for b in B] + [(1 << a) | (1 << b) for a, b in itertools.combinations(B, 2)]
    for e in M.ground:
        if not any(M.rank_mask(s | (1 << e)) == M.rank_mask(s) for s in spans):
            return False
    for a, b in itertools.combinations(B, 2):
        if not any(is_triangle(M, a, b, e) for e in M.ground):
            return False
    return True


def clique_target(t: int) -> MatroidHandle:
    return clique_matroid(t)


def line_count(M) -> int:
    """Least l such that M has no U_{2,l+2}-minor."""
    M = as_handle(M)
    ell = 0
    while has_line_minor(M, ell + 2).found:
        ell += 1
    return ell


