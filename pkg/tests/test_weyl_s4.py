import numpy as np
import pytest
from hypothesis import given, strategies as st

from fccdct.weyl_s4 import (COXETER_RELATIONS, GENERATORS, IDENTITY, GroupElement,
                            canonical_index, default_group, generate_group, orbit,
                            relation_failures)

small = st.integers(-6, 6)
index3 = st.tuples(small, small, small)


def test_order_and_identity():
    g = generate_group()
    assert g.order == 24 == len(g)
    assert IDENTITY in g
    assert all(GroupElement.from_array(s) in g for s in GENERATORS)


def test_matrices_are_read_only_and_unimodular():
    mats = default_group().matrices
    assert mats.shape == (24, 3, 3)
    with pytest.raises(ValueError):
        mats[0, 0, 0] = 7
    dets = np.round(np.linalg.det(mats)).astype(int)
    assert sorted(set(dets)) == [-1, 1]
    assert (dets == 1).sum() == 12


def test_generators_are_involutions():
    for s in map(GroupElement.from_array, GENERATORS):
        assert s @ s == IDENTITY
        assert s.determinant() == -1


def test_coxeter_relations_hold():
    assert relation_failures(COXETER_RELATIONS) == []


def test_closure_under_products_and_inverses():
    g = default_group()
    els = list(g)
    for a in els:
        inv = np.rint(np.linalg.inv(a.matrix)).astype(int)
        assert GroupElement.from_array(inv) in g
        for b in els:
            assert a @ b in g


def test_not_closed_under_transpose():
    # the integer representation is not orthogonal
    g = default_group()
    assert any(w.transpose() not in g for w in g)


def test_max_order_guard():
    with pytest.raises(RuntimeError):
        generate_group(max_order=10)


def test_known_orbit_sizes():
    assert len(orbit((0, 0, 0))) == 1
    assert len(orbit((1, 0, 0))) == 4
    assert len(orbit((0, 1, 0))) == 6
    assert len(orbit((1, 1, 1))) == 24


@given(index3)
def test_orbit_is_invariant(k):
    o = orbit(k)
    for w in default_group():
        assert frozenset(w.act(x) for x in o) == o
    assert 24 % len(o) == 0


@given(index3)
def test_canonical_index_is_orbit_representative(k):
    c = canonical_index(k)
    assert c in orbit(k)
    for w in default_group():
        assert canonical_index(w.act(k)) == c
