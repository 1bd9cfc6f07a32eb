"""End-to-end acceptance checks, one test per requirement.

Each test records what it measured via ``record_property("measured", ...)``;
the terminal summary (see ``conftest.py``) prints one PASS/FAIL line per
check together with those numbers.
"""

import statistics
import subprocess
import sys
import time
import timeit

import numpy as np
import pytest

from fccdct.chebyshev import (TorusPoint, cheb_eval_uvw, compose_scaled, coords_from_uvw,
                              evaluate_combination, evaluate_indices, recurrence_product,
                              symmetrized_exponential)
from fccdct.spectral import (DEFAULT_PARAMS, SkewParams, child_params, common_zeros, rho,
                             sigma, skew_nodes, tau)
from fccdct.transform import (build_plan, dense_transform, factorization_residual, fast_apply,
                              inverse_apply, naive_apply)
from fccdct.verify import set_distance
from fccdct.weyl_s4 import default_group, generate_group, relation_failures

ACCEPTANCE_ORDER = [
    ("test_group_structure", "group: 24 elements, the four stated relations, < 1 s"),
    ("test_chebyshev_consistency", "power form vs orbit sum 1e-12; T_0 = 1; T_e_j = coordinates"),
    ("test_polynomial_identities", "invariance, recurrence, semigroup at 1e-11"),
    ("test_common_zeros", "n^3 common zeros, residual 1e-10, sigma=tau=rho=0 below 1e-15"),
    ("test_nesting", "eight half-size grids partition the full grid within 1e-12"),
    ("test_factorization", "radix-2 factorization residual below 1e-9, n = 2, 4, 8"),
    ("test_oracle_equivalence", "fast vs naive 1e-10; n = 16 sampled entries 1e-9"),
    ("test_round_trip", "inverse(forward(x)) = x to 1e-8"),
    ("test_scaling_separation", "fast ratio <= 16, naive ratio >= 40, speedup >= 5 at n = 16"),
    ("test_sparsity_report", "nnz(B_n)/n^3 grows at most 4x from n = 4 to 8"),
    ("test_pipeline_determinism", "sword n = 16 spectrum CSV byte-stable across runs/threads"),
]

# The relations exactly as written beside the generators: s_i^2 = 1,
# (s1 s2)^2 = 1, (s1 s3)^3 = 1, (s2 s3)^3 = 1.
STATED_RELATIONS = ((1, 1, 1), (2, 2, 1), (3, 3, 1), (1, 2, 2), (1, 3, 3), (2, 3, 3))

SEED = 20180101


def rel(a, b):
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def random_signal(rng, n):
    return rng.standard_normal(n ** 3) + 1j * rng.standard_normal(n ** 3)


@pytest.fixture(scope="module")
def plan16():
    return build_plan(16)


@pytest.fixture(scope="module")
def plans():
    return {n: build_plan(n) for n in (2, 4, 8)}


def test_group_structure(record_property):
    t0 = time.perf_counter()
    g = generate_group()
    failures = relation_failures(STATED_RELATIONS)
    elapsed = time.perf_counter() - t0
    record_property("measured", f"order={g.order}, failing relations (i,j,m)={failures}, "
                                f"{elapsed:.3f} s")
    assert g.order == 24
    assert elapsed < 1.0
    assert failures == [], "stated relations do not hold for the stated generators"


def test_chebyshev_consistency(record_property):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    theta = rng.random((100, 3))
    uvw = np.exp(2j * np.pi * theta)
    ks = rng.integers(-6, 7, size=(20, 3))
    err = max(float(np.max(np.abs(cheb_eval_uvw(k, *uvw.T) - symmetrized_exponential(k, theta))))
              for k in ks)
    t0_err = float(np.max(np.abs(cheb_eval_uvw((0, 0, 0), *uvw.T) - 1)))
    coord_err = 0.0
    for row in theta:
        p = TorusPoint(tuple(row)).to_uvw()
        s = coords_from_uvw(p)
        for e, c in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)), (s.x, s.y, s.z)):
            coord_err = max(coord_err, abs(cheb_eval_uvw(e, p) - c))
    elapsed = time.perf_counter() - t0
    record_property("measured", f"max diff {err:.2e}, |T_0-1| {t0_err:.1e}, "
                                f"T_e_j vs coords {coord_err:.1e}, {elapsed:.2f} s")
    assert err <= 1e-12
    assert t0_err <= 1e-15
    assert coord_err <= 1e-14
    assert elapsed < 5.0


def test_polynomial_identities(record_property):
    rng = np.random.default_rng(SEED + 1)
    theta = rng.random((20, 3))
    inv = 0.0
    for k in rng.integers(-5, 6, size=(10, 3)):
        base = symmetrized_exponential(k, theta)
        for w in default_group().matrices:
            inv = max(inv, float(np.max(np.abs(symmetrized_exponential(w @ k, theta) - base))))
    rec = 0.0
    for _ in range(20):
        k, l = rng.integers(-5, 6, size=(2, 3))
        lhs = symmetrized_exponential(k, theta) * symmetrized_exponential(l, theta)
        rec = max(rec, float(np.max(np.abs(lhs - evaluate_combination(recurrence_product(k, l),
                                                                        theta)))))
    pts = [TorusPoint(tuple(t)).to_uvw() for t in theta]
    semi = max(compose_scaled(k, l, j, pts)[1]
               for k in range(5) for l in range(5) for j in (1, 2, 3))
    record_property("measured", f"invariance {inv:.1e}, recurrence {rec:.1e}, "
                                f"semigroup {semi:.1e}")
    assert max(inv, rec, semi) <= 1e-11


def test_common_zeros(record_property):
    parts = []
    for n in (1, 2, 3, 4, 8):
        g = common_zeros(n)
        u, v, w = g.uvw.T
        res = max(float(np.max(np.abs(cheb_eval_uvw(k, u, v, w))))
                  for k in ((n, 0, 0), (0, n, 0), (0, 0, n)))
        parts.append(f"n={n}: {len(g)} nodes, {res:.1e}")
        assert len(g) == n ** 3
        assert res < 1e-10
    aux = max(abs(f(*DEFAULT_PARAMS.as_tuple())) for f in (sigma, tau, rho))
    record_property("measured", "; ".join(parts) + f"; aux {aux:.1e}")
    assert len(common_zeros(8)) == 512
    assert aux < 1e-15


def test_nesting(record_property):
    out = []
    for n in (2, 4, 8):
        full = skew_nodes(n).uvw
        halves = np.concatenate([skew_nodes(n // 2, p).uvw for p in child_params(DEFAULT_PARAMS)])
        d = set_distance(full, halves)
        out.append(d)
        assert d < 1e-12
    record_property("measured", "max gap " + ", ".join(f"{d:.1e}" for d in out))


def test_factorization(record_property):
    rng = np.random.default_rng(SEED + 2)
    param_sets = [DEFAULT_PARAMS] + [SkewParams(*rng.random(3)) for _ in range(2)]
    worst, t8 = 0.0, 0.0
    for p in param_sets:
        for n in (2, 4, 8):
            t0 = time.perf_counter()
            plan = build_plan(n, p, validate=False)
            res = factorization_residual(plan)
            if n == 8:
                t8 = max(t8, time.perf_counter() - t0)
            worst = max(worst, res)
    record_property("measured", f"params {[str(p) for p in param_sets[1:]]}, "
                                f"max residual {worst:.2e}, n=8 {t8:.2f} s")
    assert worst < 1e-9
    assert t8 < 120


def test_oracle_equivalence(plans, plan16, record_property):
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for n in (2, 4, 8):
        dense = dense_transform(n)
        for _ in range(10):
            s = random_signal(rng, n)
            worst = max(worst, rel(fast_apply(plans[n], s).data, naive_apply(dense, s).data))
    s = random_signal(rng, 16)
    spec = fast_apply(plan16, s).data
    nodes = skew_nodes(16)
    pick = rng.choice(16 ** 3, size=64, replace=False)
    idx = np.array([(a, b, c) for a in range(16) for b in range(16) for c in range(16)])
    direct = evaluate_indices(idx, nodes.theta[pick]) @ s
    abs_err = float(np.max(np.abs(spec[pick] - direct)))
    rel_err = abs_err / float(np.max(np.abs(direct)))
    record_property("measured", f"n<=8 rel {worst:.1e}; n=16 sampled: max abs {abs_err:.1e}, "
                                f"relative to max |entry| {rel_err:.1e}")
    assert worst <= 1e-10
    assert rel_err <= 1e-9


def test_round_trip(plans, record_property):
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for n in (2, 4, 8):
        for _ in range(5):
            s = random_signal(rng, n)
            worst = max(worst, rel(inverse_apply(plans[n], fast_apply(plans[n], s)).data, s))
    record_property("measured", f"max relative error {worst:.1e}")
    assert worst <= 1e-8


def _median_apply(fn, repeats=7):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return statistics.median(t / number for t in timer.repeat(repeats, number))


def test_scaling_separation(plans, plan16, record_property):
    t_start = time.perf_counter()
    rng = np.random.default_rng(SEED + 5)
    s8, s16 = random_signal(rng, 8), random_signal(rng, 16)
    d8, d16 = dense_transform(8), dense_transform(16)
    fast8 = _median_apply(lambda: fast_apply(plans[8], s8))
    fast16 = _median_apply(lambda: fast_apply(plan16, s16))
    naive8 = _median_apply(lambda: naive_apply(d8, s8))
    naive16 = _median_apply(lambda: naive_apply(d16, s16))
    total = time.perf_counter() - t_start
    record_property("measured", f"fast 8->16 x{fast16 / fast8:.1f}, naive 8->16 "
                                f"x{naive16 / naive8:.0f}, speedup at 16 x{naive16 / fast16:.0f}, "
                                f"{total:.0f} s")
    assert fast16 / fast8 <= 16
    assert naive16 / naive8 >= 40
    assert naive16 / fast16 >= 5
    assert total < 600


def test_sparsity_report(plans, record_property):
    ratios = {n: plans[n].nnz() / n ** 3 for n in (2, 4, 8)}
    growth = ratios[8] / ratios[4]
    record_property("measured", ", ".join(f"n={n}: {r:.2f}" for n, r in ratios.items())
                    + f"; growth 4->8 x{growth:.2f}")
    print("nnz(B_n)/n^3:", ratios)
    assert growth <= 4


def test_pipeline_determinism(tmp_path, record_property):
    from fccdct.voxel_io import save_grid, synthetic_sword
    src = tmp_path / "sword.raw"
    save_grid(synthetic_sword(16), src)
    cache = tmp_path / "cache"
    runs = [["--no-cache", "--threads", "1"],
            ["--cache-dir", str(cache), "--threads", "2"],
            ["--cache-dir", str(cache), "--threads", "4"]]
    blobs = []
    for i, extra in enumerate(runs):
        out = tmp_path / f"spec{i}.csv"
        subprocess.run([sys.executable, "-m", "fccdct.cli", "transform", "--input", str(src),
                        "--out", str(out), *extra], check=True, capture_output=True)
        blobs.append(out.read_bytes())
    same = all(b == blobs[0] for b in blobs)
    record_property("measured", f"{len(blobs)} runs (fresh, cached x2; 1/2/4 threads), "
                                f"{len(blobs[0])} bytes, identical={same}")
    assert same
