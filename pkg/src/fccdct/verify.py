"""Self-check suite: group, polynomial identities, nodes, factorization, round trips.

Every check is deterministic (fixed seeds) and reports its measured value
next to its tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial import cKDTree

from .chebyshev import (UVWPoint, cheb_eval_uvw, compose_scaled, evaluate_combination,
                        recurrence_product, symmetrized_exponential)
from .spectral import DEFAULT_PARAMS, child_params, common_zeros, sigma, rho, skew_nodes, tau
from .transform import (build_plan, dense_transform, factorization_residual, fast_apply,
                        inverse_apply, naive_apply)
from .weyl_s4 import COXETER_RELATIONS, default_group, generate_group, relation_failures

__all__ = ["Check", "run_suite", "set_distance"]


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


def _rel(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def _group_checks():
    g = generate_group()
    bad = len(relation_failures(COXETER_RELATIONS))
    mats = {m.tobytes() for m in g.matrices}
    closed = all((a @ b).tobytes() in mats for a in g.matrices for b in g.matrices)
    return [
        Check("group.order", g.order == 24, g.order, 24),
        Check("group.coxeter_relations", bad == 0, bad, 0),
        Check("group.closure", closed, float(closed), 1.0),
    ]


def _chebyshev_checks(rng):
    G = default_group()
    theta = rng.random((20, 3))
    uvw = np.exp(2j * np.pi * theta)
    ks = rng.integers(-4, 5, size=(20, 3))
    err = max(float(np.max(np.abs(symmetrized_exponential(k, theta)
                                  - cheb_eval_uvw(k, *uvw.T)))) for k in ks)
    inv = 0.0
    for k in itertools.product(range(-2, 3), repeat=3):
        base = symmetrized_exponential(k, theta)
        for w in G.matrices:
            inv = max(inv, float(np.max(np.abs(symmetrized_exponential(w @ k, theta) - base))))
    rec = 0.0
    for _ in range(20):
        k, l = rng.integers(-3, 4, size=(2, 3))
        comb = recurrence_product(k, l)
        lhs = symmetrized_exponential(k, theta) * symmetrized_exponential(l, theta)
        rec = max(rec, float(np.max(np.abs(lhs - evaluate_combination(comb, theta)))))
    pts = [UVWPoint(*row) for row in uvw]
    semi = max(compose_scaled(k, l, j, pts)[1]
               for k in (1, 2, 3) for l in (1, 2, 3) for j in (1, 2, 3))
    return [
        Check("chebyshev.power_form", err < 1e-12, err, 1e-12),
        Check("chebyshev.invariance", inv < 1e-11, inv, 1e-11),
        Check("chebyshev.recurrence", rec < 1e-11, rec, 1e-11),
        Check("chebyshev.semigroup", semi < 1e-11, semi, 1e-11),
    ]


def _node_checks(n_max):
    out = []
    z = max(abs(f(0.125, 0.0, 0.375)) for f in (sigma, tau, rho))
    out.append(Check("nodes.aux_zero", z < 1e-15, z, 1e-15))
    for n in (1, 2, 3, 4, 8):
        if n > n_max:
            continue
        g = common_zeros(n)
        u, v, w = g.uvw.T
        res = max(float(np.max(np.abs(cheb_eval_uvw(k, u, v, w))))
                  for k in ((n, 0, 0), (0, n, 0), (0, 0, n)))
        ok = len(g) == n ** 3 and res < 1e-10
        out.append(Check(f"nodes.zeros[n={n}]", ok, res, 1e-10, f"{len(g)} nodes"))
    for n in (2, 4, 8):
        if n > n_max:
            continue
        full = skew_nodes(n).uvw
        parts = np.concatenate([skew_nodes(n // 2, p).uvw
                                for p in child_params(DEFAULT_PARAMS)])
        d = set_distance(full, parts)
        out.append(Check(f"nodes.nesting[n={n}]", d < 1e-12, d, 1e-12))
    return out


def set_distance(a, b) -> float:
    """Largest per-coordinate gap of a nearest-neighbour bijection between point sets.

    Returns ``inf`` when the sizes differ or the matching is not one-to-one.
    """
    if a.shape != b.shape:
        return float("inf")
    ra = np.concatenate([a.real, a.imag], axis=1)
    rb = np.concatenate([b.real, b.imag], axis=1)
    _, idx = cKDTree(ra).query(rb)
    if len(np.unique(idx)) != len(idx):
        return float("inf")
    return float(np.max(np.abs(a[idx] - b)))


def _transform_checks(n_max, rng, tol, inject_fault):
    out = []
    sizes = [n for n in (2, 4, 8) if n <= n_max]
    for n in sizes:
        plan = build_plan(n, validate=False)
        dense = dense_transform(n)
        B = plan.basis_change
        if inject_fault and n == sizes[-1]:
            B = B.tolil(copy=True)
            B[0, 0] = B[0, 0] + 1e-3
            B = B.tocsr()
        res = factorization_residual(plan, dense, B)
        out.append(Check(f"transform.factorization[n={n}]", res < tol, res, tol))
        worst, rt = 0.0, 0.0
        for _ in range(5):
            s = rng.standard_normal(n ** 3) + 1j * rng.standard_normal(n ** 3)
            a = naive_apply(dense, s).data
            b = fast_apply(plan, s).data
            worst = max(worst, _rel(b, a))
            rt = max(rt, _rel(inverse_apply(plan, b).data, s))
        out.append(Check(f"transform.oracle[n={n}]", worst <= 1e-10, worst, 1e-10))
        out.append(Check(f"transform.round_trip[n={n}]", rt <= 1e-8, rt, 1e-8))
    return out


def run_suite(n_max: int = 8, tolerance: float = 1e-9, inject_fault: bool = False,
              seed: int = 20180101) -> dict:
    """Run every check; returns a JSON-serializable report."""
    rng = np.random.default_rng(seed)
    checks = _group_checks() + _chebyshev_checks(rng) + _node_checks(n_max)
    checks += _transform_checks(n_max, rng, tolerance, inject_fault)
    return {
        "n_max": n_max,
        "passed": all(c.passed for c in checks),
        "failed": [c.name for c in checks if not c.passed],
        "checks": [asdict(c) for c in checks],
    }
