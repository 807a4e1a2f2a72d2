import pytest

from mxk.config import CapExceeded
from mxk.linear import (
    affine_geometry,
    as_linear,
    coupled_example,
    coupled_size,
    crown,
    crown_points,
    crown_size,
    graphic_clique_rep,
    linear_matroid,
    parallel_connection,
    projective_geometry,
)
from mxk.matroid import clique_matroid, eps, is_isomorphic, uniform
from mxk.minors import has_line_minor


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (4, 2), (3, 3), (3, 4), (2, 5), (4, 3)])
def test_projective_geometry_is_simple_with_gaussian_count(n, q):
    P = projective_geometry(n, q).handle()
    assert len(P) == (q**n - 1) // (q - 1)
    assert P.r == n and eps(P) == len(P)


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (2, 4), (4, 2)])
def test_affine_geometry(n, q):
    A = affine_geometry(n, q).handle()
    assert (len(A), A.r, eps(A)) == (q ** (n - 1), n, q ** (n - 1))


def test_pg_size_cap():
    with pytest.raises(CapExceeded):
        projective_geometry(12, 2)
    assert len(projective_geometry(12, 2, cap=5000)) == 4095


@pytest.mark.parametrize("n,q,t", [(5, 2, 2), (4, 2, 1), (5, 3, 1), (6, 2, 3), (4, 4, 2), (3, 2, 0)])
def test_crown_is_simple_rank_n(n, q, t):
    C = crown(n, q, t).handle()
    assert len(C) == crown_size(n, q, t) == (n - t) * q**t + (q**t - 1) // (q - 1)
    assert C.r == n and eps(C) == len(C)


def test_crown_points_are_canonical_and_distinct():
    pts = crown_points(6, 3, 2)
    assert len(pts) == len(set(pts))
    assert all(next(x for x in v if x) == 1 for v in pts)


def test_crown_parameter_errors():
    with pytest.raises(ValueError):
        crown(3, 2, 4)
    with pytest.raises(ValueError):
        crown(4, 6, 1)


@pytest.mark.parametrize("t,q", [(3, 2), (4, 2), (4, 3), (5, 5)])
def test_graphic_clique_rep_is_isomorphic_to_cycle_matroid(t, q):
    assert is_isomorphic(graphic_clique_rep(t, q), clique_matroid(t))[0]


def test_parallel_connection_glues_at_the_basepoint():
    A = affine_geometry(3, 3)
    one = linear_matroid(3, [(1,)])
    P = parallel_connection(one, A, 0, 0)
    assert is_isomorphic(P, A)[0]
    two = parallel_connection(A, A, 0, 0).handle()
    assert (len(two), two.r) == (17, 5)
    with pytest.raises(ValueError):
        parallel_connection(A, affine_geometry(3, 2), 0, 0)


def test_coupled_example():
    M = coupled_example(5, 3)
    assert (len(M), M.r) == (coupled_size(5, 3), 5) == (17, 5)
    assert not has_line_minor(M, 5).found
    assert has_line_minor(M, 4).found
    free = coupled_example(4, 2)
    assert is_isomorphic(free, uniform(4, 4))[0]
    with pytest.raises(ValueError):
        coupled_example(4, 3)


def test_as_linear():
    P = projective_geometry(3, 2)
    assert as_linear(P.handle()) is P
    assert as_linear(P.handle().minor({0})) is None


def test_column_validation():
    with pytest.raises(ValueError):
        linear_matroid(3, [(0, 3)])
    with pytest.raises(ValueError):
        linear_matroid(2, [(0, 1), (1,)])
