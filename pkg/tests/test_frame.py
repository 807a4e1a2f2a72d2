import itertools
import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mxk.algebra import KLEIN_FOUR, cyclic_group, group_make
from mxk.frame import (
    all_cycles,
    biased_minor,
    blow_up,
    cycle_is_balanced,
    dowling,
    explicit_biased_graph,
    frame_circuits,
    frame_graphic_form,
    frame_matroid,
    frame_rank,
    gain_biased_graph,
    rank_from_circuits,
    theta_violations,
    to_explicit,
)
from mxk.generators import random_biased_graph
from mxk.matroid import bits, eps, is_isomorphic, to_mask, uniform


@pytest.mark.parametrize("n,k", [(1, 1), (2, 2), (3, 2), (3, 3), (4, 3), (4, 4), (3, 1), (5, 2)])
def test_dowling_size_rank_simple(n, k):
    D = dowling(n, k)
    assert len(D) == n + k * comb(n, 2)
    assert D.r == n and eps(D) == len(D)


def test_small_dowling_geometries():
    assert is_isomorphic(dowling(2, 2), uniform(2, 4))[0]
    assert is_isomorphic(dowling(1, 3), uniform(1, 1))[0]
    # the trivial group gives M(K_{n+1})
    from mxk.matroid import clique_matroid
    assert is_isomorphic(dowling(3, 1), clique_matroid(4))[0]


def test_klein_dowling():
    V = group_make("explicit", KLEIN_FOUR)
    D = dowling(3, V)
    assert (len(D), D.r, eps(D)) == (15, 3, 15)


def test_balance_by_gain_product():
    Z3 = cyclic_group(3)
    # triangle 0->1->2->0 with gains 1, 1, 1 is balanced (1+1+1 = 0 mod 3)
    B = gain_biased_graph(range(3), [(0, 0, 1, 1), (1, 1, 2, 1), (2, 2, 0, 1), (3, 0, 1, 2), (4, 2, 2, 0)], Z3)
    assert cycle_is_balanced(B, [0, 1, 2])
    assert not cycle_is_balanced(B, [3, 1, 2])
    assert not cycle_is_balanced(B, [0, 3])
    assert cycle_is_balanced(B, [4])
    with pytest.raises(ValueError):
        cycle_is_balanced(B, [0, 1])
    assert frame_rank(B, [0, 1, 2]) == 2
    assert frame_rank(B, [0, 1, 2, 3]) == 3
    assert frame_rank(B, [4]) == 0


def test_explicit_biased_graph_rank():
    B = explicit_biased_graph(range(2), [(0, 0, 1), (1, 0, 1), (2, 0, 0)], [[0, 1]])
    assert frame_rank(B, [0, 1]) == 1
    assert frame_rank(B, [2]) == 1
    assert frame_rank(B, [0, 1, 2]) == 2


@pytest.mark.parametrize("seed", range(25))
def test_frame_rank_matches_circuit_oracle(seed):
    B = random_biased_graph(random.Random(seed), max_vertices=5, max_edges=8)
    ids = B.edge_ids
    ranks = rank_from_circuits(ids, frame_circuits(B))
    for m in range(1 << len(ids)):
        assert frame_rank(B, [ids[k] for k in bits(m)]) == ranks[m]


@pytest.mark.parametrize("seed", range(10))
def test_gain_graphs_satisfy_theta_property(seed):
    B = random_biased_graph(random.Random(100 + seed), max_vertices=4, max_edges=7, explicit_rate=0)
    assert theta_violations(B) == []


def test_theta_violation_detected():
    # theta with three parallel edges where exactly two of its cycles are declared balanced
    B = explicit_biased_graph(range(2), [(0, 0, 1), (1, 0, 1), (2, 0, 1)], [[0, 1], [1, 2]])
    assert theta_violations(B) == [frozenset({0, 1, 2})]


def test_to_explicit_preserves_rank():
    B = random_biased_graph(random.Random(3), explicit_rate=0)
    E = to_explicit(B)
    ids = B.edge_ids
    for m in range(1 << len(ids)):
        S = [ids[k] for k in bits(m)]
        assert frame_rank(B, S) == frame_rank(E, S)


def _check_commutes(B, kind, e):
    small = biased_minor(B, kind, e)
    big = frame_matroid(B)
    idx = {lab: j for j, lab in enumerate(big.backend.labels)}
    mask = 1 << idx[e]
    lhs = big.minor(mask) if kind == "contract-edge" else big.minor(0, mask)
    rest = [i for i in B.edge_ids if i != e]
    for m in range(1 << len(rest)):
        S = [rest[j] for j in bits(m)]
        assert lhs.rank_mask(to_mask(idx[s] for s in S)) == frame_rank(small, S)


@given(st.integers(0, 10**6), st.sampled_from(["delete-edge", "contract-edge"]))
def test_minor_commutes_with_frame_matroid(seed, kind):
    rng = random.Random(seed)
    B = random_biased_graph(rng, max_vertices=5, max_edges=8, loop_rate=0.35)
    e = rng.choice(B.edge_ids)
    _check_commutes(B, kind, e)


def test_unbalanced_loop_contraction_cases():
    Z2 = cyclic_group(2)
    # two unbalanced loops at 0, an edge 0-1 and an unbalanced digon 1-2
    B = gain_biased_graph(
        range(3),
        [(0, 0, 0, 1), (1, 0, 0, 1), (2, 0, 1, 0), (3, 1, 2, 0), (4, 1, 2, 1)],
        Z2,
    )
    C = biased_minor(B, "contract-edge", 0)
    ends = C.graph.ends()
    assert ends[2] == (1, 1)  # the edge to vertex 1 becomes a loop there
    assert cycle_is_balanced(C, [1])  # the other loop at 0 becomes balanced
    assert not cycle_is_balanced(C, [2])
    _check_commutes(B, "contract-edge", 0)
    _check_commutes(to_explicit(B), "contract-edge", 0)


def test_delete_vertex_and_errors():
    D = blow_up((3, [(0, 1), (1, 2)]), cyclic_group(2))
    R = biased_minor(D, "delete-vertex", 1)
    assert R.graph.vertices == frozenset({0, 2})
    assert all(1 not in (u, v) for _, u, v in R.graph.edges)
    with pytest.raises(ValueError):
        biased_minor(D, "contract-edge", 99)
    with pytest.raises(ValueError):
        biased_minor(D, "squash", 0)


def test_blow_up_layout():
    B = blow_up((3, [(0, 1), (0, 2)]), cyclic_group(3))
    ends = B.graph.ends()
    assert [ends[v] for v in range(3)] == [(0, 0), (1, 1), (2, 2)]
    assert [B.gain.gain()[i] for i in range(3, 6)] == [0, 1, 2]
    assert all(ends[i] == (0, 1) for i in range(3, 6))
    with pytest.raises(ValueError):
        blow_up((2, [(0, 1), (1, 0)]), cyclic_group(2))


def test_all_cycles_counts():
    from mxk.frame import Multigraph
    K4 = Multigraph(frozenset(range(4)), tuple((i, a, b) for i, (a, b) in enumerate(itertools.combinations(range(4), 2))))
    assert len(all_cycles(K4)) == 7  # four triangles and three squares


def test_graphic_form():
    Z2 = cyclic_group(2)
    balanced = gain_biased_graph(range(3), [(0, 0, 1, 0), (1, 1, 2, 0), (2, 0, 2, 0)], Z2)
    assert frame_graphic_form(balanced).reason == "balanced"
    loops = gain_biased_graph(range(2), [(0, 0, 1, 0), (1, 0, 0, 1), (2, 1, 1, 1)], Z2)
    form = frame_graphic_form(loops)
    assert form.graphic
    from mxk.matroid import graphic
    G = form.graph
    order = {v: k for k, v in enumerate(sorted(G.vertices))}
    H = graphic(len(order), [(order[u], order[v]) for _, u, v in G.edges])
    assert is_isomorphic(H, frame_matroid(loops))[0]
    assert not frame_graphic_form(blow_up((3, [(0, 1), (1, 2), (0, 2)]), Z2)).graphic
