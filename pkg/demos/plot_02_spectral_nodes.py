"""
Spectral nodes and their nesting
================================

The transform samples at the n^3 common zeros of T_{n,0,0}, T_{0,n,0} and
T_{0,0,n}.  Halving the grid splits those nodes into eight shifted grids
of size n/2, which is what the fast algorithm exploits.
"""

import numpy as np

from fccdct.chebyshev import cheb_eval_uvw
from fccdct.spectral import DEFAULT_PARAMS, child_params, common_zeros, shift_vectors, skew_nodes
from fccdct.verify import set_distance

n = 8
zeros = common_zeros(n)
u, v, w = zeros.uvw.T
print(len(zeros), "nodes for n =", n)
print("largest |T_{n,0,0}| at the nodes:", np.abs(cheb_eval_uvw((n, 0, 0), u, v, w)).max())

###############################################################################
# Real coordinates of a few nodes.

xyz = zeros.real_coords()
print(np.round(xyz[:5], 4))
print("bounding box:", xyz.min(axis=0).round(3), xyz.max(axis=0).round(3))

###############################################################################
# The eight child grids, one per parity pattern of the node index.

pieces = [skew_nodes(n // 2, p) for p in child_params(DEFAULT_PARAMS)]
for p, g in zip(child_params(DEFAULT_PARAMS), pieces):
    print(f"  params {p}: {len(g)} nodes")
merged = np.concatenate([g.uvw for g in pieces])
print("distance between full grid and union of children:", set_distance(zeros.uvw, merged))

###############################################################################
# The 14 neighbour shifts induced by the degree-one polynomials.

print(np.array(shift_vectors()))
