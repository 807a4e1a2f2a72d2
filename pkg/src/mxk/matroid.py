"""Matroid handles over bitmask rank oracles.

A :class:`MatroidHandle` is a backend (anything exposing ``size`` and a
``rank(mask)`` over its full element set) together with masks of contracted
and deleted elements.  Element ids are backend indices ``0..size-1``; subsets
are passed around internally as Python ints used as bitmasks.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .config import check_cap

_MEMO_LIMIT = 2_000_000


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Backend:
    """Base class for rank providers; subclasses implement ``_rank``."""

    size: int = 0
    labels: tuple = ()

    def __init__(self) -> None:
        self._memo: dict[int, int] = {}

    def rank(self, mask: int) -> int:
        memo = self._memo
        r = memo.get(mask)
        if r is None:
            r = self._rank(mask)
            if len(memo) >= _MEMO_LIMIT:
                memo.clear()
            memo[mask] = r
        return r

    def _rank(self, mask: int) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def label(self, e: int):
        return self.labels[e] if self.labels else e


class UniformBackend(Backend):
    def __init__(self, r: int, n: int) -> None:
        super().__init__()
        if not 0 <= r <= n:
            raise ValueError("uniform matroid needs 0 <= r <= n")
        self.r, self.size = r, n
        self.labels = tuple(range(n))

    def _rank(self, mask: int) -> int:
        return min(self.r, popcount(mask))


class GraphicBackend(Backend):
    """Cycle matroid of a multigraph; ``edges[i] = (u, v)``, loops allowed."""

    def __init__(self, n_vertices: int, edges: Sequence[tuple[int, int]]) -> None:
        super().__init__()
        self.n_vertices = n_vertices
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        for u, v in self.edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
        self.size = len(self.edges)
        self.labels = tuple(range(self.size))

    def _rank(self, mask: int) -> int:
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != root:
                parent[x], x = root, parent[x]
            return root

        r = 0
        for i in bits(mask):
            u, v = self.edges[i]
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                r += 1
        return r


class HandleBackend(Backend):
    """Freezes a minor into a standalone backend (elements renumbered 0..k-1)."""

    def __init__(self, handle: "MatroidHandle") -> None:
        super().__init__()
        self.handle = handle
        self.elements = handle.ground
        self.size = len(self.elements)
        self.labels = tuple(handle.backend.label(e) for e in self.elements)

    def _rank(self, mask: int) -> int:
        elems = self.elements
        return self.handle.rank_mask(to_mask(elems[i] for i in bits(mask)))


class SumBackend(Backend):
    def __init__(self, left: Backend, right: Backend) -> None:
        super().__init__()
        self.left, self.right = left, right
        self.size = left.size + right.size
        self._low = (1 << left.size) - 1
        self.labels = tuple(("L", left.label(i)) for i in range(left.size)) + tuple(
            ("R", right.label(i)) for i in range(right.size)
        )

    def _rank(self, mask: int) -> int:
        return self.left.rank(mask & self._low) + self.right.rank(mask >> self.left.size)


@dataclass(frozen=True, eq=False)
class MatroidHandle:
    """A minor ``backend / contracted \\ deleted`` with a memoized rank oracle."""

    backend: Backend
    contracted: int = 0
    deleted: int = 0

    def __post_init__(self) -> None:
        if self.contracted & self.deleted:
            raise ValueError("contracted and deleted sets overlap")
        object.__setattr__(self, "_rc", self.backend.rank(self.contracted))

    @property
    def full_mask(self) -> int:
        return (1 << self.backend.size) - 1

    @property
    def ground_mask(self) -> int:
        return self.full_mask & ~(self.contracted | self.deleted)

    @property
    def ground(self) -> tuple[int, ...]:
        return tuple(bits(self.ground_mask))

    def __len__(self) -> int:
        return popcount(self.ground_mask)

    def rank_mask(self, mask: int) -> int:
        return self.backend.rank(mask | self.contracted) - self._rc

    def _check(self, mask: int) -> None:
        stray = mask & ~self.ground_mask
        if stray:
            raise ValueError(f"elements {list(bits(stray))} are not in the ground set")

    def rank(self, S: Iterable[int] = ()) -> int:
        mask = S if isinstance(S, int) else to_mask(S)
        self._check(mask)
        return self.rank_mask(mask)

    @property
    def r(self) -> int:
        return self.rank_mask(self.ground_mask)

    def closure_mask(self, mask: int) -> int:
        base = self.rank_mask(mask)
        out = mask
        for x in bits(self.ground_mask & ~mask):
            if self.rank_mask(mask | (1 << x)) == base:
                out |= 1 << x
        return out

    def closure(self, S: Iterable[int]) -> frozenset[int]:
        mask = to_mask(S)
        self._check(mask)
        return frozenset(bits(self.closure_mask(mask)))

    def is_loop(self, e: int) -> bool:
        return self.rank_mask(1 << e) == 0

    def parallel(self, a: int, b: int) -> bool:
        """``a`` and ``b`` are nonloops spanning a single point (equal counts)."""
        if self.is_loop(a) or self.is_loop(b):
            return False
        return a == b or self.rank_mask((1 << a) | (1 << b)) == 1

    def minor(self, C: Iterable[int] | int = 0, D: Iterable[int] | int = 0) -> "MatroidHandle":
        cm = C if isinstance(C, int) else to_mask(C)
        dm = D if isinstance(D, int) else to_mask(D)
        if cm & dm:
            raise ValueError("contraction and deletion sets overlap")
        self._check(cm | dm)
        return MatroidHandle(self.backend, self.contracted | cm, self.deleted | dm)

    def restrict(self, S: Iterable[int] | int) -> "MatroidHandle":
        mask = S if isinstance(S, int) else to_mask(S)
        self._check(mask)
        return self.minor(0, self.ground_mask & ~mask)

    def label(self, e: int):
        return self.backend.label(e)

    def freeze(self) -> "MatroidHandle":
        """Renumber the ground set to ``0..len-1`` on a fresh backend."""
        return MatroidHandle(HandleBackend(self))

    def __repr__(self) -> str:
        return f"MatroidHandle(|E|={len(self)}, r={self.r}, backend={type(self.backend).__name__})"


def as_handle(obj) -> MatroidHandle:
    if isinstance(obj, MatroidHandle):
        return obj
    if hasattr(obj, "handle"):
        return obj.handle()
    raise TypeError(f"cannot treat {type(obj).__name__} as a matroid")


def uniform(r: int, n: int) -> MatroidHandle:
    return MatroidHandle(UniformBackend(r, n))


def free_matroid(n: int) -> MatroidHandle:
    return uniform(n, n)


def graphic(n_vertices: int, edges: Sequence[tuple[int, int]]) -> MatroidHandle:
    return MatroidHandle(GraphicBackend(n_vertices, edges))


def complete_graph_edges(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def clique_matroid(t: int) -> MatroidHandle:
    """M(K_t) with edges in lexicographic order ``(0,1), (0,2), ...``."""
    return graphic(t, complete_graph_edges(t))


def rank_of(M, S: Iterable[int]) -> int:
    return as_handle(M).rank(S)


def closure_of(M, S: Iterable[int]) -> frozenset[int]:
    return as_handle(M).closure(S)


def minor(M, C: Iterable[int] = (), D: Iterable[int] = ()) -> MatroidHandle:
    return as_handle(M).minor(C, D)


@dataclass(frozen=True)
class SimplificationReport:
    points: tuple[tuple[int, ...], ...]
    loops: tuple[int, ...]
    representative: tuple[int, ...]

    @property
    def eps(self) -> int:
        return len(self.points)

    def class_of(self) -> dict[int, int]:
        """Element -> representative of its parallel class."""
        return {e: cls[0] for cls in self.points for e in cls}


def simplify(M) -> SimplificationReport:
    M = as_handle(M)
    reps: list[int] = []
    classes: list[list[int]] = []
    loops: list[int] = []
    for e in M.ground:
        if M.rank_mask(1 << e) == 0:
            loops.append(e)
            continue
        for i, rep in enumerate(reps):
            if M.rank_mask((1 << rep) | (1 << e)) == 1:
                classes[i].append(e)
                break
        else:
            reps.append(e)
            classes.append([e])
    return SimplificationReport(tuple(map(tuple, classes)), tuple(loops), tuple(reps))


def eps(M) -> int:
    return simplify(M).eps


def simple_minor(M) -> MatroidHandle:
    """si(M): delete loops and every non-representative of a parallel class."""
    M = as_handle(M)
    rep = to_mask(simplify(M).representative)
    return M.minor(0, M.ground_mask & ~rep)


def greedy_basis(M, mask: int | None = None) -> int:
    """Lexicographically least basis of ``mask`` (id order greedy)."""
    M = as_handle(M)
    if mask is None:
        mask = M.ground_mask
    B, r = 0, 0
    for e in bits(mask):
        if M.rank_mask(B | (1 << e)) > r:
            B |= 1 << e
            r += 1
    return B


def circuits_up_to(M, k: int) -> list[frozenset[int]]:
    """All circuits of size at most ``k``, sorted by size then elements."""
    if k < 1:
        raise ValueError("k must be >= 1")
    M = as_handle(M)
    ground = M.ground
    found: list[tuple[int, ...]] = []

    def is_circuit(members: tuple[int, ...], mask: int) -> bool:
        return all(M.rank_mask(mask & ~(1 << y)) == len(members) - 1 for y in members)

    # every circuit minus its largest element is independent, so grow
    # independent sets in increasing order and test each one-element extension
    def grow(members: tuple[int, ...], mask: int, start: int) -> None:
        for idx in range(start, len(ground)):
            x = ground[idx]
            nm = mask | (1 << x)
            cand = members + (x,)
            if M.rank_mask(nm) < len(cand):
                if is_circuit(cand, nm):
                    found.append(cand)
            elif len(cand) < k:
                grow(cand, nm, idx + 1)

    grow((), 0, 0)
    found.sort(key=lambda c: (len(c), c))
    return [frozenset(c) for c in found]


def direct_sum(M, N) -> MatroidHandle:
    """Ground set of ``M`` (renumbered first) followed by that of ``N``."""
    left = as_handle(M).freeze().backend
    right = as_handle(N).freeze().backend
    return MatroidHandle(SumBackend(left, right))


def is_independent(M: MatroidHandle, mask: int) -> bool:
    return M.rank_mask(mask) == popcount(mask)


def is_triangle(M: MatroidHandle, a: int, b: int, c: int) -> bool:
    """Three distinct elements forming a 3-element circuit."""
    if len({a, b, c}) < 3:
        return False
    m = (1 << a) | (1 << b) | (1 << c)
    if M.rank_mask(m) != 2:
        return False
    return all(M.rank_mask(m & ~(1 << y)) == 2 for y in (a, b, c))


def is_circuit(M: MatroidHandle, S: Iterable[int]) -> bool:
    members = sorted(set(S))
    mask = to_mask(members)
    if not members or M.rank_mask(mask) != len(members) - 1:
        return False
    return all(M.rank_mask(mask & ~(1 << y)) == len(members) - 1 for y in members)


# ---------------------------------------------------------------- flats


def covers(M: MatroidHandle, flat: int) -> list[int]:
    """Flats covering ``flat``; one per point of ``M / flat``, least element first."""
    base = M.rank_mask(flat)
    reps: list[int] = []
    out: list[int] = []
    for e in bits(M.ground_mask & ~flat):
        bit = 1 << e
        for i, rep in enumerate(reps):
            if M.rank_mask(flat | (1 << rep) | bit) == base + 1:
                out[i] |= bit
                break
        else:
            reps.append(e)
            out.append(flat | bit)
    return out


def flats_by_rank(M, max_rank: int | None = None, prune=None) -> Iterator[tuple[int, int]]:
    """Yield ``(rank, flat_mask)`` level by level, each flat once.

    ``prune(flat)`` returning true stops expansion above that flat.
    """
    M = as_handle(M)
    if max_rank is None:
        max_rank = M.r
    level = [M.closure_mask(0)]
    for r in range(max_rank + 1):
        nxt: set[int] = set()
        for F in sorted(level):
            yield r, F
            if r < max_rank and not (prune and prune(F)):
                nxt.update(covers(M, F))
        level = list(nxt)
        if not level:
            return


# ---------------------------------------------------------------- isomorphism


def _circuit_profile(M: MatroidHandle):
    circuits = circuits_up_to(M, M.r + 1) if len(M) else []
    overall = Counter(len(c) for c in circuits)
    per: dict[int, Counter] = {e: Counter() for e in M.ground}
    for c in circuits:
        for e in c:
            per[e][len(c)] += 1
    return overall, per


def _dominates(big: Counter, small: Counter) -> bool:
    return all(big.get(k, 0) >= v for k, v in small.items())


def embed(N: MatroidHandle, M: MatroidHandle, exact: bool) -> dict[int, int] | None:
    """Injective map ground(N) -> ground(M) with r_M(phi S) = r_N(S) for all S.

    With ``exact`` the map must be onto, giving an isomorphism.  Rank equality
    is checked on every subset of at most r(N)+1 mapped elements, which pins
    down the independent sets of the image.
    """
    if len(N) > len(M) or (exact and (len(N) != len(M) or N.r != M.r)):
        return None
    if N.r > M.r:
        return None
    _, perN = _circuit_profile(N)
    _, perM = _circuit_profile(M)
    if exact:
        if sorted(map(lambda c: sorted(c.items()), perN.values())) != sorted(
            map(lambda c: sorted(c.items()), perM.values())
        ):
            return None
    order = sorted(N.ground, key=lambda e: (-sum(perN[e].values()), e))
    # place elements that close circuits with already placed ones early
    placed: list[int] = []
    remaining = list(order)
    while remaining:
        best = max(
            remaining,
            key=lambda e: (N.rank_mask(to_mask(placed)) - N.rank_mask(to_mask(placed) | (1 << e)), -order.index(e)),
        )
        placed.append(best)
        remaining.remove(best)
    order = placed
    rN = N.r
    mapped_n: list[int] = []
    mapped_m: list[int] = []
    used = 0

    def compatible(y: int, x: int) -> bool:
        if exact:
            return perN[y] == perM[x]
        return _dominates(perM[x], perN[y])

    def consistent(y: int, x: int) -> bool:
        k = len(mapped_n)
        for size in range(0, min(k, rN) + 1):
            for idx in itertools.combinations(range(k), size):
                sn = (1 << y) | to_mask(mapped_n[i] for i in idx)
                sm = (1 << x) | to_mask(mapped_m[i] for i in idx)
                if N.rank_mask(sn) != M.rank_mask(sm):
                    return False
        return True

    def search(pos: int) -> bool:
        nonlocal used
        if pos == len(order):
            return True
        y = order[pos]
        for x in M.ground:
            if used >> x & 1 or not compatible(y, x):
                continue
            if not consistent(y, x):
                continue
            mapped_n.append(y)
            mapped_m.append(x)
            used |= 1 << x
            if search(pos + 1):
                return True
            mapped_n.pop()
            mapped_m.pop()
            used &= ~(1 << x)
        return False

    if not search(0):
        return None
    return dict(zip(mapped_n, mapped_m))


def is_isomorphic(M, N, cap: int | None = None) -> tuple[bool, dict[int, int] | None]:
    """Return ``(True, phi)`` with ``phi`` mapping ground(M) onto ground(N), or ``(False, None)``."""
    M, N = as_handle(M), as_handle(N)
    check_cap("iso", max(len(M), len(N)), "ground set size", cap)
    phi = embed(M, N, exact=True)
    if phi is None:
        return False, None
    return True, phi


def rank_functions_match(M: MatroidHandle, N: MatroidHandle, phi: dict[int, int], max_size: int | None = None) -> bool:
    """Compare r_M(S) with r_N(phi(S)) over subsets of ground(M) (optionally size-bounded)."""
    ground = M.ground
    top = len(ground) if max_size is None else min(max_size, len(ground))
    for size in range(top + 1):
        for S in itertools.combinations(ground, size):
            if M.rank_mask(to_mask(S)) != N.rank_mask(to_mask(phi[e] for e in S)):
                return False
    return True
