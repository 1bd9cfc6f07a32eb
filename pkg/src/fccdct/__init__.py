"""Cosine transform on the face-centered cubic lattice.

The transform evaluates coefficient vectors on three-variable Chebyshev
polynomials (attached to the permutation group S4) at ``n^3`` spectral
nodes.  Both the dense ``O(n^6)`` product and a radix-2x2x2 factorization
with ``O(n^3 log n)`` application cost are provided.
"""

__version__ = "0.1.0"

from .errors import (DegenerateNodes, FCCError, IllConditioned, MalformedFile, MathError,
                     OddSize, SizeMismatch)
from .weyl_s4 import WeylGroup, canonical_index, default_group, generate_group, orbit
from .chebyshev import (SpectralPoint, TorusPoint, UVWPoint, cheb_eval_uvw, cheb_eval_xyz,
                        coords_from_uvw, real_coords, recurrence_product,
                        symmetrized_exponential)
from .spectral import (DEFAULT_PARAMS, NodeGrid, SkewParams, common_zeros, rho,
                       shift_vectors, sigma, skew_nodes, tau)
from .transform import (DenseTransform, SignalTensor, Spectrum, TransformPlan, basis_change,
                        build_plan, dense_transform, fast_apply, inverse_apply, naive_apply,
                        radix_permutation)
from .plan_cache import PlanCache
from .voxel_io import (VoxelGrid, export_geometry, export_spectrum, load_grid, save_grid,
                       synthetic_sword, z_transform)
