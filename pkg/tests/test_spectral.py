import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fccdct.chebyshev import cheb_eval_uvw
from fccdct.errors import DegenerateNodes
from fccdct.spectral import (DEFAULT_PARAMS, SkewParams, child_params, common_zeros,
                             lattice_indices, rho, shift_vectors, sigma, skew_nodes, tau,
                             write_nodes_csv)
from fccdct.verify import set_distance


def test_params_parse_and_key():
    p = SkewParams.parse("1/8, 0, 3/8")
    assert p == DEFAULT_PARAMS
    assert p.key() == "1/8,0,3/8"
    assert SkewParams(1 / 3, 0, 0).key() == "1/3,0,0"
    with pytest.raises(ValueError):
        SkewParams.parse("1,2")


@given(st.floats(-2, 2, allow_nan=False), st.floats(-2, 2, allow_nan=False),
       st.floats(-2, 2, allow_nan=False))
def test_params_key_round_trips(r, s, t):
    p = SkewParams(r, s, t)
    assert SkewParams.parse(p.key()) == p


def test_auxiliary_functions_vanish_at_default():
    for f in (sigma, tau, rho):
        assert abs(f(*DEFAULT_PARAMS.as_tuple())) < 1e-15
    assert abs(sigma(0.0, 0.0, 0.0)) > 0.1


def test_lattice_indices_order():
    idx = lattice_indices(3)
    assert idx.shape == (27, 3)
    assert tuple(idx[1]) == (0, 0, 1) and tuple(idx[3]) == (0, 1, 0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 8])
def test_common_zeros(n):
    g = common_zeros(n)
    assert len(g) == n ** 3
    u, v, w = g.uvw.T
    for k in ((n, 0, 0), (0, n, 0), (0, 0, n)):
        assert np.max(np.abs(cheb_eval_uvw(k, u, v, w))) < 1e-10


@pytest.mark.parametrize("n", [1, 2, 5])
def test_skew_nodes_agree_with_common_zeros(n):
    assert set_distance(skew_nodes(n).uvw, common_zeros(n).uvw) < 1e-12


def test_node_grid_access():
    g = skew_nodes(2)
    idx, p, s = g[3]
    assert tuple(idx) == (0, 1, 1)
    assert p.on_torus()
    assert s.origin == p
    assert g.real_coords().shape == (8, 3)


def test_degenerate_params_are_rejected():
    with pytest.raises(DegenerateNodes):
        skew_nodes(2, SkewParams(0, 0, 0))


@pytest.mark.parametrize("n", [2, 4, 8])
def test_children_partition_parent(n):
    full = skew_nodes(n).uvw
    parts = np.concatenate([skew_nodes(n // 2, p).uvw for p in child_params(DEFAULT_PARAMS)])
    assert set_distance(full, parts) < 1e-12


def test_child_params_order():
    cps = child_params(DEFAULT_PARAMS)
    assert cps[0] == SkewParams(1 / 16, 0, 3 / 16)
    assert cps[1] == SkewParams(1 / 16, 0, 11 / 16)
    assert cps[7] == SkewParams(9 / 16, 0.5, 11 / 16)


def test_shift_vectors():
    pts = shift_vectors()
    assert len(pts) == 14
    assert (0, 0, 0) not in pts
    assert set(pts) == {tuple(-np.array(p)) for p in pts}


def test_nodes_csv(tmp_path):
    path = tmp_path / "z.csv"
    assert write_nodes_csv(skew_nodes(2), path) == 8
    lines = path.read_text().splitlines()
    assert lines[0] == "i,j,k,x,y,z" and len(lines) == 9
