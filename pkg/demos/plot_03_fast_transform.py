"""
Dense versus fast transform
===========================

A plan stores the radix-2x2x2 factorization: a permutation, eight half-size
transforms, a 2x2x2 kernel and a sparse basis change.  Applying it costs
O(n^3 log n) instead of the O(n^6) dense product.
"""

import tempfile
import timeit

import numpy as np

from fccdct.plan_cache import PlanCache
from fccdct.transform import (build_plan, dense_transform, fast_apply, inverse_apply,
                              naive_apply)

rng = np.random.default_rng(0)

for n in (2, 4, 8):
    plan = build_plan(n)
    print(f"n={n}: factorization residual {plan.residual:.1e}, "
          f"nnz(B)/n^3 = {plan.nnz() / n ** 3:.2f}")

###############################################################################
# Compare against the dense matrix on a random signal.

n = 8
plan = build_plan(n)
dense = dense_transform(n)
s = rng.standard_normal(n ** 3)
fast = fast_apply(plan, s).data
slow = naive_apply(dense, s).data
print("relative difference:", np.linalg.norm(fast - slow) / np.linalg.norm(slow))
print("round trip error:", np.abs(inverse_apply(plan, fast).data - s).max())

###############################################################################
# Timing.  Plans are expensive to build, cheap to apply, and can be cached.

t_fast = min(timeit.repeat(lambda: fast_apply(plan, s), number=100, repeat=3)) / 100
t_slow = min(timeit.repeat(lambda: naive_apply(dense, s), number=100, repeat=3)) / 100
print(f"apply: fast {t_fast * 1e6:.0f} us, dense {t_slow * 1e6:.0f} us")

with tempfile.TemporaryDirectory() as d:
    first = PlanCache(d)
    build_plan(n, cache=first)
    second = PlanCache(d)
    build_plan(n, cache=second)
    print("first build:", first.stats(), " second build:", second.stats())
