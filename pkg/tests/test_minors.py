import itertools

import pytest

from mxk.config import CapExceeded
from mxk.frame import dowling
from mxk.linear import affine_geometry, crown, projective_geometry
from mxk.matroid import clique_matroid, graphic, uniform
from mxk.minors import (
    MinorWitness,
    find_restriction,
    has_clique_minor,
    has_line_minor,
    has_minor,
    is_b_clique,
    line_count,
    line_witness_target,
)


def test_fano_lines():
    F = projective_geometry(3, 2).handle()
    res = has_line_minor(F, 3)
    assert res and res.witness.replay(F, line_witness_target(3))
    assert not has_line_minor(F, 4)
    assert line_count(F) == 2


@pytest.mark.parametrize("k,ell", [(2, 3), (3, 4)])
def test_dowling_lines(k, ell):
    D = dowling(3, k)
    assert line_count(D) == ell
    res = has_line_minor(D, ell + 1)
    assert res.witness.replay(D, uniform(2, ell + 1))
    assert not has_line_minor(D, ell + 2)


def test_pg_line_count():
    assert line_count(projective_geometry(3, 3)) == 3
    assert line_count(clique_matroid(5)) == 2


def test_clique_minor_witness_replays():
    K5 = clique_matroid(5)
    res = has_clique_minor(K5, 4)
    assert res and res.witness.replay(K5, clique_matroid(4))
    assert not res.witness.contract  # M(K4) is already a restriction
    assert not has_clique_minor(clique_matroid(4), 5)


def test_clique_in_projective_geometry():
    P = projective_geometry(4, 2).handle()
    res = has_clique_minor(P, 5)
    assert res.witness.replay(P, clique_matroid(5))


def test_no_clique_minors():
    assert not has_clique_minor(affine_geometry(3, 3), 4)
    assert not has_clique_minor(crown(4, 2, 1), 4)
    assert not has_clique_minor(uniform(3, 6), 4)


def test_clique_minor_small_t():
    assert has_clique_minor(uniform(1, 2), 2)
    assert not has_clique_minor(uniform(0, 2), 2)
    assert has_clique_minor(uniform(2, 3), 3)
    with pytest.raises(ValueError):
        has_clique_minor(uniform(2, 3), 1)


def test_search_caps():
    with pytest.raises(CapExceeded):
        has_clique_minor(projective_geometry(7, 2), 4)
    assert has_clique_minor(projective_geometry(7, 2), 4, cap_elements=200)


def test_witness_text_round_trip():
    w = MinorWitness(frozenset({3, 1}), frozenset({0}), {0: 2, 1: 4})
    text = w.to_text()
    assert text == "contract=[1,3] delete=[0] map=[(0,2),(1,4)]"
    assert MinorWitness.from_text(text) == w
    assert MinorWitness.from_text(text).mapping == w.mapping
    with pytest.raises(ValueError):
        MinorWitness.from_text("contract=1")


def test_bad_witness_does_not_replay():
    K4 = clique_matroid(4)
    w = MinorWitness(frozenset(), frozenset({5}), {i: i for i in range(5)})
    assert not w.replay(K4, uniform(2, 5))


def test_restriction_search():
    k4_minus = graphic(4, [e for e in itertools.combinations(range(4), 2) if e != (2, 3)])
    R = find_restriction(crown(4, 2, 1), k4_minus)
    assert R is not None and len(R.elements) == 5
    assert find_restriction(clique_matroid(4), uniform(2, 4)) is None


def test_generic_minor():
    res = has_minor(projective_geometry(3, 3), uniform(2, 4))
    assert res and res.witness.replay(projective_geometry(3, 3), uniform(2, 4))
    assert not has_minor(clique_matroid(5), uniform(2, 4))


def test_b_clique():
    assert is_b_clique(clique_matroid(4), [0, 1, 2])
    D = dowling(3, 2)
    assert is_b_clique(D, [0, 1, 2])
    assert not is_b_clique(D, [0, 1])
    assert not is_b_clique(uniform(3, 4), [0, 1, 2])
