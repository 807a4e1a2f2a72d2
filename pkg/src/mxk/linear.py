"""GF(q)-represented matroids and the explicit constructions built from them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Field, field_make
from .config import check_cap
from .matroid import Backend, MatroidHandle, as_handle, bits


class LinearBackend(Backend):
    """Rank by Gaussian elimination; GF(2) columns are packed into ints."""

    def __init__(self, lm: "LinearMatroid") -> None:
        super().__init__()
        self.lm = lm
        self.size = len(lm.columns)
        self.labels = tuple(range(self.size))
        F = lm.field
        if F.q == 2:
            self._packed = [sum(b << i for i, b in enumerate(col)) for col in lm.columns]
        else:
            self._mul, self._add, self._neg, self._inv = F.mul_table, F.add_table, F.neg_table, F.inv_table

    def _rank(self, mask: int) -> int:
        if self.lm.field.q == 2:
            return self._rank_gf2(mask)
        return self._rank_table(mask)

    def _rank_gf2(self, mask: int) -> int:
        basis: list[int] = []  # kept with distinct leading bits
        for i in bits(mask):
            v = self._packed[i]
            for b in basis:
                v = min(v, v ^ b)
            if v:
                basis.append(v)
                basis.sort(reverse=True)
        return len(basis)

    def _rank_table(self, mask: int) -> int:
        mul, add, neg, inv = self._mul, self._add, self._neg, self._inv
        rows: list[tuple[int, list[int]]] = []  # (pivot, normalized vector)
        cols = self.lm.columns
        for i in bits(mask):
            v = list(cols[i])
            for piv, b in rows:
                c = v[piv]
                if c:
                    nc = neg[c]
                    mrow = mul[nc]
                    v = [add[x][mrow[y]] for x, y in zip(v, b)]
            piv = next((j for j, x in enumerate(v) if x), None)
            if piv is not None:
                s = mul[inv[v[piv]]]
                rows.append((piv, [s[x] for x in v]))
        return len(rows)


@dataclass(eq=False)
class LinearMatroid:
    field: Field
    nrows: int
    columns: tuple[tuple[int, ...], ...]
    name: str = ""
    _handle: MatroidHandle | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.columns = tuple(tuple(int(x) for x in c) for c in self.columns)
        for c in self.columns:
            if len(c) != self.nrows:
                raise ValueError(f"column {c} does not have {self.nrows} entries")
            if any(not 0 <= x < self.field.q for x in c):
                raise ValueError(f"column {c} has entries outside GF({self.field.q})")

    def handle(self) -> MatroidHandle:
        if self._handle is None:
            self._handle = MatroidHandle(LinearBackend(self))
        return self._handle

    def __len__(self) -> int:
        return len(self.columns)

    @property
    def rank(self) -> int:
        return self.handle().r


def linear_matroid(q: int | Field, columns: Sequence[Sequence[int]], nrows: int | None = None, name: str = "", cap: int | None = None) -> LinearMatroid:
    F = q if isinstance(q, Field) else field_make(q)
    columns = tuple(tuple(c) for c in columns)
    check_cap("columns", len(columns), "column count", cap)
    if nrows is None:
        if not columns:
            raise ValueError("nrows is required for an empty column list")
        nrows = len(columns[0])
    return LinearMatroid(F, nrows, columns, name)


def _canonical_projective(F: Field, n: int) -> list[tuple[int, ...]]:
    """All nonzero vectors of GF(q)^n with first nonzero coordinate 1, in lex order."""
    out = []
    for lead in range(n):
        for tail in itertools.product(range(F.q), repeat=n - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return out


def normalize(F: Field, v: Sequence[int]) -> tuple[int, ...]:
    lead = next(x for x in v if x)
    s = F.inv(lead)
    return tuple(F.mul(s, x) for x in v)


def projective_geometry(n: int, q: int, cap: int | None = None) -> LinearMatroid:
    if n < 1:
        raise ValueError("rank must be >= 1")
    F = field_make(q)
    check_cap("columns", (q**n - 1) // (q - 1), "PG size", cap)
    return LinearMatroid(F, n, tuple(_canonical_projective(F, n)), f"PG({n - 1},{q})")


def affine_geometry(n: int, q: int, cap: int | None = None) -> LinearMatroid:
    if n < 1:
        raise ValueError("rank must be >= 1")
    F = field_make(q)
    check_cap("columns", q ** (n - 1), "AG size", cap)
    cols = tuple((1,) + v for v in itertools.product(range(q), repeat=n - 1))
    return LinearMatroid(F, n, cols, f"AG({n - 1},{q})")


def crown_size(n: int, q: int, t: int) -> int:
    return (n - t) * q**t + (q**t - 1) // (q - 1)


def crown_points(n: int, q: int | Field, t: int) -> list[tuple[int, ...]]:
    """Points of cl(B0) followed by cl(B0 + e) - cl(B0) for each e outside B0.

    B is the standard basis and B0 its first ``t`` vectors.  Each point is
    given by its canonical representative.
    """
    if not 0 <= t <= n:
        raise ValueError(f"crown needs 0 <= t <= n, got t={t}, n={n}")
    F = q if isinstance(q, Field) else field_make(q)
    pts = [v + (0,) * (n - t) for v in _canonical_projective(F, t)] if t else []
    for e in range(t, n):
        for head in itertools.product(range(F.q), repeat=t):
            v = [0] * n
            v[:t] = head
            v[e] = 1
            pts.append(normalize(F, v))
    return pts


def crown(n: int, q: int, t: int, cap: int | None = None) -> LinearMatroid:
    if not 0 <= t <= n:
        raise ValueError(f"crown needs 0 <= t <= n, got t={t}, n={n}")
    check_cap("columns", crown_size(n, q, t), "crown size", cap)
    F = field_make(q)
    return LinearMatroid(F, n, tuple(crown_points(n, F, t)), f"crown({n},{q},{t})")


def graphic_clique_rep(t: int, q: int = 2) -> LinearMatroid:
    """Columns e_i - e_j (i < j) in GF(q)^(t-1), with vertex t-1 as the zero vector."""
    if t < 2:
        raise ValueError("t must be >= 2")
    F = field_make(q)
    cols = []
    for i, j in itertools.combinations(range(t), 2):
        v = [0] * (t - 1)
        v[i] = 1
        if j < t - 1:
            v[j] = F.neg(1)
        cols.append(tuple(v))
    return LinearMatroid(F, t - 1, tuple(cols), f"M(K_{t}) over GF({q})")


def _to_first_unit(F: Field, columns: list[list[int]], p: int) -> list[list[int]]:
    """Row operations turning column ``p`` into e_1 (applied to every column)."""
    cols = [list(c) for c in columns]
    piv = next((i for i, x in enumerate(cols[p]) if x), None)
    if piv is None:
        raise ValueError(f"basepoint {p} is a loop")
    for c in cols:
        c[0], c[piv] = c[piv], c[0]
    s = F.inv(cols[p][0])
    for c in cols:
        c[0] = F.mul(s, c[0])
    for i in range(1, len(cols[p])):
        f = cols[p][i]
        if f:
            for c in cols:
                c[i] = F.sub(c[i], F.mul(f, c[0]))
    return cols


def parallel_connection(M: LinearMatroid, N: LinearMatroid, p: int, q: int) -> LinearMatroid:
    """Glue ``N`` to ``M`` identifying column ``q`` of ``N`` with column ``p`` of ``M``.

    Elements of ``M`` keep their ids; those of ``N`` other than ``q`` follow in order.
    """
    if M.field.q != N.field.q:
        raise ValueError(f"incompatible fields GF({M.field.q}) and GF({N.field.q})")
    F = M.field
    a, b = M.nrows, N.nrows
    mc = _to_first_unit(F, list(M.columns), p)
    nc = _to_first_unit(F, list(N.columns), q)
    cols = [tuple(c) + (0,) * (b - 1) for c in mc]
    for j, c in enumerate(nc):
        if j != q:
            cols.append((c[0],) + (0,) * (a - 1) + tuple(c[1:]))
    return LinearMatroid(F, a + b - 1, tuple(cols), f"P({M.name or 'M'},{N.name or 'N'})")


def coupled_example(n: int, q: int) -> MatroidHandle:
    """Parallel connection of (n-1)/(q-1) copies of AG(q-1,q) at one common point."""
    field_make(q)
    if n <= 1 or (n - 1) % (q - 1):
        raise ValueError(f"need n > 1 and n = 1 mod {q - 1}, got n={n}")
    if q == 2:
        # AG(1,2) is a single point, so the construction degenerates; the free
        # matroid of rank n has the required size n and no U_{2,4} or M(K_3) minor
        ident = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        return LinearMatroid(field_make(2), n, tuple(ident), f"coupled({n},2)").handle()
    copies = (n - 1) // (q - 1)
    piece = affine_geometry(q, q)
    out = piece
    for _ in range(copies - 1):
        out = parallel_connection(out, piece, 0, 0)
    out.name = f"coupled({n},{q})"
    return out.handle()


def coupled_size(n: int, q: int) -> int:
    return (n - 1) * (q ** (q - 1) - 1) // (q - 1) + 1


def as_linear(M) -> LinearMatroid | None:
    h = as_handle(M)
    if isinstance(h.backend, LinearBackend) and not (h.contracted or h.deleted):
        return h.backend.lm
    return None
