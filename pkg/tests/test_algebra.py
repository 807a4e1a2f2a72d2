import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem

from mxk.algebra import (
    KLEIN_FOUR,
    GroupAxiomError,
    cyclic_group,
    field_make,
    group_make,
    is_prime_power,
    largest_prime_power_at_most,
    least_irreducible,
    verify_field_axioms,
    verify_group_axioms,
)
from mxk.config import CapExceeded

FIELD_ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def _digits(a, p, deg):
    return [(a // p**i) % p for i in range(deg)]


def _sympy_mul(F, a, b):
    """Multiply two field elements with sympy's GF(p)[x] arithmetic."""
    p, deg = F.p, F.deg
    hi_first = lambda ds: [ZZ(x) for x in reversed(ds)]  # noqa: E731
    prod = gf_mul(hi_first(_digits(a, p, deg)), hi_first(_digits(b, p, deg)), p, ZZ)
    rem = gf_rem(prod, hi_first(list(F.modulus)), p, ZZ)
    coeffs = [int(c) for c in reversed(rem)]
    return sum(c * p**i for i, c in enumerate(coeffs))


@pytest.mark.parametrize("q", FIELD_ORDERS)
def test_multiplication_table_matches_sympy(q):
    F = field_make(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert F.mul(a, b) == _sympy_mul(F, a, b)


@pytest.mark.parametrize("q", FIELD_ORDERS)
def test_modulus_is_irreducible(q):
    F = field_make(q)
    assert gf_irreducible_p([ZZ(c) for c in reversed(F.modulus)], F.p, ZZ)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_field_axioms(q):
    verify_field_axioms(field_make(q))


def test_least_irreducible_examples():
    # x^2 + x + 1 over GF(2), x^3 + x + 1 over GF(2), x^2 + 1 over GF(3)
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)


def test_field_errors():
    with pytest.raises(ValueError):
        field_make(6)
    with pytest.raises(ValueError):
        field_make(1)
    with pytest.raises(CapExceeded):
        field_make(2048)
    with pytest.raises(ZeroDivisionError):
        field_make(5).inv(0)


def test_prime_power_helpers():
    assert [q for q in range(2, 30) if is_prime_power(q)] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]
    assert largest_prime_power_at_most(6) == 5
    assert largest_prime_power_at_most(3) == 3
    assert largest_prime_power_at_most(10) == 9
    with pytest.raises(ValueError):
        largest_prime_power_at_most(1)


@given(st.integers(1, 12), st.data())
def test_cyclic_group_is_addition_mod_k(k, data):
    G = cyclic_group(k)
    a, b, c = (data.draw(st.integers(0, k - 1)) for _ in range(3))
    assert G.mul(a, b) == (a + b) % k
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inverse(a)) == G.id


def test_klein_and_bad_tables():
    V = group_make("explicit", KLEIN_FOUR)
    verify_group_axioms(V)
    assert all(V.inverse(g) == g for g in range(4))
    assert V.non_identity == 1
    assert cyclic_group(1).non_identity is None
    with pytest.raises(GroupAxiomError, match="associativity"):
        group_make("explicit", [[0, 1, 2], [1, 0, 0], [2, 2, 1]])
    with pytest.raises(GroupAxiomError, match="identity"):
        group_make("explicit", [[1, 0], [0, 0]])
    with pytest.raises(GroupAxiomError):
        group_make("explicit", [[0, 1], [1]])
    with pytest.raises(ValueError):
        group_make("dihedral", 3)
