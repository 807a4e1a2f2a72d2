import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mxk.config import CapExceeded
from mxk.graphs import (
    ALPHA,
    DensityBounds,
    SimpleGraph,
    binary_identity_holds,
    complete_graph,
    crown_lower_bound,
    density_threshold,
    graph_clique_minor,
    is_clique_model,
    kostochka_edge_count,
    kostochka_family,
    petersen,
    replicate_family,
    thomason_alpha,
    thomason_lambda,
)
from mxk.linear import crown_size
from mxk.minors import has_clique_minor


def brute_force_clique_minor(G: SimpleGraph, t: int) -> bool:
    """Try every assignment of vertices to t branch sets or to 'unused'."""
    for labels in itertools.product(range(t + 1), repeat=G.n):
        sets = [{v for v in range(G.n) if labels[v] == k} for k in range(1, t + 1)]
        if all(sets) and is_clique_model(G, sets):
            return True
    return False


@st.composite
def small_graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph.make(n, chosen)


@given(small_graphs(), st.sampled_from([3, 4]))
def test_clique_minor_matches_exhaustive_labelling(G, t):
    res = graph_clique_minor(G, t)
    assert res.found == brute_force_clique_minor(G, t)
    if res.found:
        assert len(res.branch_sets) == t and is_clique_model(G, res.branch_sets)


@given(small_graphs(max_n=7), st.sampled_from([3, 4, 5]))
def test_clique_minor_matches_matroid_search(G, t):
    want = has_clique_minor(G.handle(), t).found if G.edges else False
    assert graph_clique_minor(G, t).found == want


def test_known_graphs():
    assert graph_clique_minor(complete_graph(5), 5)
    res = graph_clique_minor(petersen(), 5)
    assert res and is_clique_model(petersen(), res.branch_sets)
    assert not graph_clique_minor(petersen(), 6)
    k33 = SimpleGraph.make(6, [(a, b) for a in range(3) for b in range(3, 6)])
    assert graph_clique_minor(k33, 4) and not graph_clique_minor(k33, 5)
    assert graph_clique_minor(SimpleGraph.make(1, []), 1)
    with pytest.raises(CapExceeded):
        graph_clique_minor(complete_graph(13), 4)


@pytest.mark.parametrize("t,top", [(4, 9), (5, 10)])
def test_kostochka_family_is_minor_free(t, top):
    for n in range(t, top + 1):
        G = kostochka_family(t, n)
        assert G.n == n and len(G.edges) == kostochka_edge_count(t, n)
        assert not graph_clique_minor(G, t)
        assert graph_clique_minor(G, t - 1)


def test_kostochka_small_cases():
    # t = 3: a star, t = n: K_{t-1} plus a vertex joined to the core K_{t-2}
    assert kostochka_family(3, 6).edges == frozenset((0, v) for v in range(1, 6))
    G = kostochka_family(5, 5)
    assert len(G.edges) == 3 + 2 * 3 == 9
    with pytest.raises(ValueError):
        kostochka_family(5, 4)
    with pytest.raises(ValueError):
        kostochka_family(2, 4)


def test_replicate_family():
    G = replicate_family(complete_graph(3), 7)
    assert G.n == 7 and len(G.edges) == 6
    H = petersen()
    assert replicate_family(H, 10) == H
    assert not graph_clique_minor(replicate_family(kostochka_family(4, 5), 11), 4)
    with pytest.raises(ValueError):
        replicate_family(complete_graph(4), 3)


def test_graph_text_round_trip():
    G = petersen()
    assert SimpleGraph.from_text(G.to_text()) == G
    with pytest.raises(ValueError):
        SimpleGraph.make(2, [(0, 0)])
    with pytest.raises(ValueError):
        SimpleGraph.from_text("vertices=3\n")


def test_alpha_and_lambda():
    lam = thomason_lambda()
    assert abs(1 - lam + 2 * lam * math.log(lam)) < 1e-12
    assert 0.28 < lam < 0.29
    assert round(thomason_alpha(), 3) == ALPHA


def test_density_bounds():
    b = DensityBounds(6)
    assert b.lower == 4 and b.lower <= b.upper
    assert b.d_ell(2) == Fraction(5, 4)
    assert b.d_ell(3) == pytest.approx(22 * 6 * math.sqrt(math.log(6)))


@pytest.mark.parametrize("t", range(1, 11))
def test_binary_threshold_identity(t):
    assert binary_identity_holds(t)
    general = density_threshold(2, t, "general").exponent
    assert general == Fraction(t * t * (t - 1) ** 2, 2)


def test_threshold_values():
    assert density_threshold(2, 3, "binary").exponent == Fraction(81, 2)
    assert density_threshold(2, 2, "absolute").exponent == pytest.approx(3872 * 16 * math.log(2))
    thr = density_threshold(2, 3, "general")
    assert thr.exact() == 2**18 and thr.log10 == pytest.approx(18 * math.log10(2))
    assert density_threshold(3, 3, "general").exact() is None
    assert density_threshold(1, 5, "general").exponent == 0
    with pytest.raises(ValueError):
        density_threshold(2, 3, "other")


def test_crown_lower_bound():
    assert crown_lower_bound(2, 4, 6) == 11 == crown_size(6, 2, 1)
    assert crown_lower_bound(6, 4, 6) == 5 * 6 + (1 - 5)
    for ell, q in [(2, 2), (3, 3), (4, 4), (5, 5), (6, 5)]:
        for t in (4, 5, 6):
            for n in range(t - 3, 9):
                assert crown_lower_bound(ell, t, n) == crown_size(n, q, t - 3)
    with pytest.raises(ValueError):
        crown_lower_bound(2, 3, 5)
