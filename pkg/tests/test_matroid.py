import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mxk.linear import linear_matroid, projective_geometry
from mxk.matroid import (
    bits,
    circuits_up_to,
    clique_matroid,
    closure_of,
    direct_sum,
    eps,
    graphic,
    is_isomorphic,
    rank_of,
    simple_minor,
    simplify,
    to_mask,
    uniform,
)
from mxk.frame import dowling


@st.composite
def multigraphs(draw, max_vertices=6, max_edges=9):
    n = draw(st.integers(1, max_vertices))
    m = draw(st.integers(0, max_edges))
    edges = [(draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))) for _ in range(m)]
    return n, edges


def _forest_rank(n, edges, subset):
    G = nx.MultiGraph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges[i] for i in subset)
    return n - nx.number_connected_components(G)


@given(multigraphs(), st.data())
def test_graphic_rank_matches_spanning_forest(g, data):
    n, edges = g
    M = graphic(n, edges)
    S = data.draw(st.sets(st.integers(0, max(len(edges) - 1, 0)), max_size=len(edges))) if edges else set()
    assert M.rank(S) == _forest_rank(n, edges, S)


def _span_rank(p, columns):
    """Rank over GF(p) as log_p of the number of distinct linear combinations."""
    if not columns:
        return 0
    span = {tuple(sum(c * v[i] for c, v in zip(coef, columns)) % p for i in range(len(columns[0])))
            for coef in itertools.product(range(p), repeat=len(columns))}
    r = 0
    while p**r < len(span):
        r += 1
    assert p**r == len(span)
    return r


@given(st.sampled_from([2, 3, 5]), st.data())
def test_linear_rank_matches_span_count(p, data):
    rows = data.draw(st.integers(1, 4))
    cols = data.draw(st.lists(st.tuples(*[st.integers(0, p - 1)] * rows), min_size=1, max_size=5))
    M = linear_matroid(p, cols, rows).handle()
    S = data.draw(st.sets(st.integers(0, len(cols) - 1)))
    assert M.rank(S) == _span_rank(p, [cols[i] for i in sorted(S)])


@given(st.integers(0, 8), st.data())
def test_uniform_rank(n, data):
    r = data.draw(st.integers(0, n))
    M = uniform(r, n)
    S = data.draw(st.sets(st.integers(0, n - 1))) if n else set()
    assert M.rank(S) == min(r, len(S))


def test_minor_rank_is_contraction_formula():
    M = clique_matroid(5)
    C, D = {0, 4}, {7}
    N = M.minor(C, D)
    for k in range(len(N.ground) + 1):
        for S in itertools.combinations(N.ground, k):
            assert N.rank(S) == M.rank(set(S) | C) - M.rank(C)
    with pytest.raises(ValueError):
        M.minor({1}, {1})
    with pytest.raises(ValueError):
        N.rank({0})


@given(st.data())
def test_rank_axioms_on_fano(data):
    F = projective_geometry(3, 2).handle()
    A = data.draw(st.sets(st.integers(0, 6)))
    B = data.draw(st.sets(st.integers(0, 6)))
    rA, rB = F.rank(A), F.rank(B)
    assert 0 <= rA <= len(A)
    assert F.rank(A | B) + F.rank(A & B) <= rA + rB
    if A <= B:
        assert rA <= rB


def test_fano_basics():
    F = projective_geometry(3, 2).handle()
    assert (len(F), F.r, eps(F)) == (7, 3, 7)
    triangles = [c for c in circuits_up_to(F, 3) if len(c) == 3]
    assert len(triangles) == 7
    assert all(len(closure_of(F, set(c))) == 3 for c in triangles)
    assert eps(F.minor({0})) == 3


def test_simplify_reports_classes_and_loops():
    M = graphic(3, [(0, 1), (0, 1), (1, 2), (2, 2), (0, 2)])
    rep = simplify(M)
    assert rep.loops == (3,)
    assert rep.points == ((0, 1), (2,), (4,))
    assert rep.class_of()[1] == 0
    S = simple_minor(M)
    assert S.ground == (0, 2, 4) and S.r == 2


def test_isomorphism():
    ok, phi = is_isomorphic(uniform(2, 4), dowling(2, 2))
    assert ok and sorted(phi) == [0, 1, 2, 3]
    assert not is_isomorphic(uniform(2, 4), direct_sum(graphic(3, [(0, 1), (1, 2), (0, 2)]), uniform(1, 1)))[0]
    ok, _ = is_isomorphic(clique_matroid(4), linear_matroid(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 0), (1, 0, 2), (0, 1, 2)]).handle())
    assert ok


def test_uniform_needs_r_at_most_n():
    with pytest.raises(ValueError):
        uniform(3, 2)


def test_masks_round_trip():
    assert list(bits(to_mask([5, 0, 3]))) == [0, 3, 5]
    assert rank_of(uniform(2, 3), [0, 1, 2]) == 2
