"""Finite fields GF(q) and finite groups, both as dense lookup tables.

Field elements are the integers ``0..q-1``; the base-``p`` digits of an index
are the coefficients of a polynomial over GF(p) (least significant digit is
the constant term), so ``0`` is zero and ``1`` is one.  Group elements are
likewise indices into a multiplication table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .config import check_cap


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    deg, rest = 0, q
    while rest % p == 0:
        rest //= p
        deg += 1
    return (p, deg) if rest == 1 else None


def is_prime_power(q: int) -> bool:
    return _prime_power(q) is not None


def largest_prime_power_at_most(n: int) -> int:
    for q in range(n, 1, -1):
        if is_prime_power(q):
            return q
    raise ValueError(f"no prime power <= {n}")


# Polynomials over GF(p) are coefficient tuples, constant term first.

def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while True:
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            return a
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            rem = _poly_mod(list(poly), divisor, p)
            if not any(rem):
                return False
    return True


def least_irreducible(p: int, deg: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree ``deg``.

    Candidates are ordered by the integer whose base-``p`` digits are the
    non-leading coefficients, i.e. lexicographically from the x^(deg-1)
    coefficient down to the constant term.
    """
    if deg == 1:
        return (0, 1)
    for code in range(p**deg):
        low = [(code // p**i) % p for i in range(deg)]
        poly = tuple(low) + (1,)
        if _is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class Field:
    q: int
    p: int
    deg: int
    modulus: tuple[int, ...]
    add_table: tuple[tuple[int, ...], ...] = field(repr=False)
    mul_table: tuple[tuple[int, ...], ...] = field(repr=False)
    neg_table: tuple[int, ...] = field(repr=False)
    inv_table: tuple[int, ...] = field(repr=False)  # inv_table[0] == 0 by convention

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.inv_table[a]

    @property
    def elements(self) -> range:
        return range(self.q)

    def __str__(self) -> str:
        return f"GF({self.q})"


def field_make(q: int, cap: int | None = None) -> Field:
    """Build GF(q) from the least monic irreducible polynomial of its degree."""
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"q must be an integer >= 2, got {q!r}")
    pp = _prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    check_cap("field", q, "q", cap)
    p, deg = pp
    modulus = least_irreducible(p, deg)

    def digits(a: int) -> list[int]:
        return [(a // p**i) % p for i in range(deg)]

    def undigits(ds) -> int:
        return sum(d * p**i for i, d in enumerate(ds))

    add = tuple(
        tuple(undigits((x + y) % p for x, y in zip(digits(a), digits(b))) for b in range(q))
        for a in range(q)
    )
    neg = tuple(undigits((-x) % p for x in digits(a)) for a in range(q))

    def polymul(a: int, b: int) -> int:
        da, db = digits(a), digits(b)
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_mod(prod, modulus, p)
        rem = rem + [0] * (deg - len(rem))
        return undigits(rem[:deg])

    mul = tuple(tuple(polymul(a, b) for b in range(q)) for a in range(q))
    inv = [0] * q
    for a in range(1, q):
        row = mul[a]
        inv[a] = row.index(1)
    return Field(q, p, deg, modulus, add, mul, neg, tuple(inv))


def verify_field_axioms(F: Field) -> None:
    """Exhaustive check of the field axioms; raises ``AssertionError`` on failure."""
    q = F.q
    E = range(q)
    for a in E:
        assert F.add(a, 0) == a and F.mul(a, 1) == a, f"identity fails at {a}"
        assert F.add(a, F.neg(a)) == 0, f"additive inverse fails at {a}"
        if a:
            assert F.mul(a, F.inv(a)) == 1, f"multiplicative inverse fails at {a}"
        for b in E:
            assert F.add(a, b) == F.add(b, a), f"add not commutative at {a},{b}"
            assert F.mul(a, b) == F.mul(b, a), f"mul not commutative at {a},{b}"
            for c in E:
                assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c)), (a, b, c)
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)), (a, b, c)
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)), (a, b, c)


class GroupAxiomError(ValueError):
    pass


@dataclass(frozen=True)
class GroupTable:
    order: int
    op: tuple[tuple[int, ...], ...]
    id: int
    inv: tuple[int, ...]
    name: str = ""

    def mul(self, a: int, b: int) -> int:
        return self.op[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    @property
    def non_identity(self) -> int | None:
        """Least index that is not the identity (``None`` for the trivial group)."""
        return next((g for g in range(self.order) if g != self.id), None)

    def __str__(self) -> str:
        return self.name or f"group of order {self.order}"


def _check_group(table: tuple[tuple[int, ...], ...]) -> tuple[int, tuple[int, ...]]:
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise GroupAxiomError("group table must be a nonempty square table")
    for row in table:
        for v in row:
            if not (0 <= v < n):
                raise GroupAxiomError(f"entry {v} is not an element index")
    ident = None
    for e in range(n):
        if all(table[e][a] == a and table[a][e] == a for a in range(n)):
            ident = e
            break
    if ident is None:
        raise GroupAxiomError("no identity element")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise GroupAxiomError(f"associativity fails for triple ({a}, {b}, {c})")
    inv = []
    for a in range(n):
        found = [b for b in range(n) if table[a][b] == ident and table[b][a] == ident]
        if not found:
            raise GroupAxiomError(f"element {a} has no inverse")
        inv.append(found[0])
    return ident, tuple(inv)


def group_make(kind: str, data, cap: int | None = None) -> GroupTable:
    """Build a group.

    ``kind="cyclic"`` takes the order as ``data``; ``kind="explicit"`` takes a
    square multiplication table (any nested sequence of element indices).
    """
    if kind == "cyclic":
        k = int(data)
        if k < 1:
            raise ValueError("cyclic group order must be >= 1")
        check_cap("group", k, "group order", cap)
        table = tuple(tuple((a + b) % k for b in range(k)) for a in range(k))
        return GroupTable(k, table, 0, tuple((-a) % k for a in range(k)), f"Z{k}")
    if kind == "explicit":
        table = tuple(tuple(int(v) for v in row) for row in data)
        check_cap("group", len(table), "group order", cap)
        ident, inv = _check_group(table)
        return GroupTable(len(table), table, ident, inv, f"table{len(table)}")
    raise ValueError(f"unknown group kind {kind!r}")


def cyclic_group(k: int) -> GroupTable:
    return group_make("cyclic", k)


KLEIN_FOUR = ((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))


def verify_group_axioms(G: GroupTable) -> None:
    ident, inv = _check_group(G.op)
    if ident != G.id or inv != G.inv:
        raise GroupAxiomError("stored identity/inverse tables disagree with the operation")
