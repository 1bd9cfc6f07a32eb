"""Dense and fast FCC cosine transforms.

Layout conventions
------------------
Signals are coefficient vectors on the basis ``T_{j,k,p}``,
``0 <= j,k,p < n``; spectra are values at the nodes ``(i, l, q)``.  Both are
flattened lexicographically (last index fastest).  The transform matrix
maps signals to spectra, so its rows are nodes and its columns basis
polynomials: ``matrix[node, k] = T_k(node)``.  The transposed array
(``DenseTransform.polynomial_major``) has polynomials on the rows.

Fast algorithm
--------------
For ``n = 2m`` the transform factors as::

    DCT_n(r,s,t) = P_n . (+)_{i} DCT_m((r+i_r)/2, (s+i_s)/2, (t+i_t)/2)
                       . (DCT_2(r,s,t) kron I_{m^3}) . B_n(r,s,t)

Columns of ``(DCT_2 kron I) `` are indexed by ``(b, a)`` with ``b`` in
``{0,1}^3`` outer and ``a`` in ``{0..m-1}^3`` inner, i.e. the product basis
``T_a * T_{m b}``.  The basis change ``B_n`` is not known in closed form;
it is obtained by solving the factorization against the dense transform
column block by column block, then pruning entries below 1e-12.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .chebyshev import evaluate_box
from .errors import IllConditioned, MathError, OddSize, SizeMismatch
from .spectral import DEFAULT_PARAMS, SkewParams, child_params, lattice_indices, skew_nodes

__all__ = [
    "SignalTensor",
    "Spectrum",
    "DenseTransform",
    "TransformPlan",
    "dense_transform",
    "naive_apply",
    "radix_permutation",
    "basis_change",
    "build_plan",
    "fast_apply",
    "inverse_apply",
    "composed_factors",
    "factorization_residual",
    "plan_tree",
    "PRUNE_TOL",
    "COND_LIMIT",
]

log = logging.getLogger(__name__)

PRUNE_TOL = 1e-12
COND_LIMIT = 1e12
FACTOR_TOL = 1e-9
VALIDATE_MAX_N = 8
# columns of the dense transform materialized at once while solving for B
_CHUNK_ENTRIES = 1 << 22


@dataclass(eq=False)
class SignalTensor:
    n: int
    data: np.ndarray

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=complex).reshape(-1)
        if self.data.size != self.n ** 3:
            raise SizeMismatch(f"signal of size n={self.n} needs {self.n ** 3} "
                               f"values, got {self.data.size}")

    @classmethod
    def delta(cls, n: int) -> "SignalTensor":
        d = np.zeros(n ** 3, dtype=complex)
        d[0] = 1
        return cls(n, d)


@dataclass(eq=False)
class Spectrum:
    n: int
    params: SkewParams
    data: np.ndarray

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=complex).reshape(-1)
        if self.data.size != self.n ** 3:
            raise SizeMismatch(f"spectrum of size n={self.n} needs {self.n ** 3} "
                               f"values, got {self.data.size}")


@dataclass(eq=False)
class DenseTransform:
    n: int
    params: SkewParams
    matrix: np.ndarray

    @property
    def polynomial_major(self) -> np.ndarray:
        """Matrix with basis polynomials on the rows and nodes on the columns."""
        return self.matrix.T

    @cached_property
    def condition(self) -> float:
        return float(np.linalg.cond(self.matrix))


def dense_transform(n: int, params: SkewParams = DEFAULT_PARAMS) -> DenseTransform:
    """Explicit ``n^3 x n^3`` transform matrix.

    Raises
    ------
    DegenerateNodes
        Propagated from the node construction.
    """
    if n == 1:
        # T_0 = 1 at the single node
        return DenseTransform(1, params, np.ones((1, 1), dtype=complex))
    grid = skew_nodes(n, params)
    return DenseTransform(n, params, evaluate_box(n, grid.theta))


def _as_data(x, n=None) -> np.ndarray:
    data = x.data if isinstance(x, (SignalTensor, Spectrum)) else np.asarray(x)
    data = np.asarray(data, dtype=complex).reshape(-1)
    if n is not None and data.size != n ** 3:
        raise SizeMismatch(f"expected {n ** 3} values for n={n}, got {data.size}")
    if isinstance(x, (SignalTensor, Spectrum)) and n is not None and x.n != n:
        raise SizeMismatch(f"size n={x.n} does not match transform size n={n}")
    return data


def naive_apply(t: DenseTransform, s) -> Spectrum:
    """Matrix-vector product with the dense transform, Theta(n^6)."""
    return Spectrum(t.n, t.params, t.matrix @ _as_data(s, t.n))


def radix_permutation(n: int) -> np.ndarray:
    """Parent node index for each position of the concatenated child spectra.

    Position ``(i_r, i_s, i_t, k_r, k_s, k_t)`` (children outer, child node
    inner, both lexicographic) holds parent node
    ``(i_r + 2 k_r, i_s + 2 k_s, i_t + 2 k_t)``.
    """
    if n % 2:
        raise OddSize(f"radix-2 split needs an even size, got {n}")
    m = n // 2
    ic = lattice_indices(2)
    kc = lattice_indices(m)
    j = ic[:, None, :] + 2 * kc[None, :, :]             # (8, m^3, 3)
    j = j.reshape(-1, 3)
    return (j[:, 0] * n + j[:, 1]) * n + j[:, 2]


def _check_condition(factor: DenseTransform, label: str):
    if factor.n == 1:
        return
    c = factor.condition
    if not np.isfinite(c) or c > COND_LIMIT:
        raise IllConditioned(
            f"{label} DCT_{factor.n}({factor.params}) has condition number {c:.3g}",
            factor=label, condition=c)


def basis_change(n: int, params: SkewParams = DEFAULT_PARAMS, *, kernel=None,
                 children=None, dense=None) -> sp.csr_matrix:
    """Sparse ``B_n(r,s,t)`` solving the radix-2 factorization.

    Parameters
    ----------
    n : int
        Even transform size.
    kernel : DenseTransform, optional
        ``DCT_2(r,s,t)``; computed when omitted.
    children : list of DenseTransform, optional
        The eight ``DCT_m`` at the child parameters; computed when omitted.
    dense : DenseTransform, optional
        ``DCT_n(r,s,t)``.  When omitted its columns are evaluated in chunks,
        so the full matrix is never held in memory.

    Raises
    ------
    IllConditioned
        If a factor has condition number above 1e12.
    """
    if n % 2:
        raise OddSize(f"basis change needs an even size, got {n}")
    m = n // 2
    m3, N = m ** 3, n ** 3
    if kernel is None:
        kernel = dense_transform(2, params)
    if children is None:
        children = [dense_transform(m, p) for p in child_params(params)]
    _check_condition(kernel, "kernel")
    for idx, c in enumerate(children):
        _check_condition(c, f"child[{idx}]")

    perm = radix_permutation(n)
    kinv = np.linalg.inv(kernel.matrix)
    lus = [sla.lu_factor(c.matrix, check_finite=False) for c in children]
    grid = None if dense is not None else skew_nodes(n, params)

    rows, cols, vals = [], [], []
    step = max(1, _CHUNK_ENTRIES // (N * n * n))
    for a in range(0, n, step):
        b = min(n, a + step)
        if dense is not None:
            block = dense.matrix[:, a * n * n:b * n * n]
        else:
            block = evaluate_box(n, grid.theta, first=slice(a, b))
        y = block[perm].reshape(8, m3, -1)
        x = np.stack([sla.lu_solve(lu, y[i], check_finite=False)
                      for i, lu in enumerate(lus)])
        z = (kinv @ x.reshape(8, -1)).reshape(N, -1)
        r, c = np.nonzero(np.abs(z) >= PRUNE_TOL)
        rows.append(r)
        cols.append(c + a * n * n)
        vals.append(z[r, c])
    B = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(N, N))
    B.sort_indices()
    return B


def composed_factors(perm, kernel: DenseTransform, children, B) -> np.ndarray:
    """Dense product ``P . (+)DCT_m . (DCT_2 kron I) . B``."""
    m3 = children[0].matrix.shape[0]
    N = 8 * m3
    Pm = np.zeros((N, N))
    Pm[perm, np.arange(N)] = 1.0
    bd = sla.block_diag(*[c.matrix for c in children])
    kr = np.kron(kernel.matrix, np.eye(m3))
    Bd = B.toarray() if sp.issparse(B) else np.asarray(B)
    return Pm @ bd @ kr @ Bd


@dataclass(eq=False)
class TransformPlan:
    """Precomputed transform of one size and parameter set.

    ``kind`` is ``"direct"`` (dense matrix in ``dense``) or ``"radix2"``
    (``permutation``, ``base_kernel``, eight ``children`` and
    ``basis_change``).
    """

    n: int
    params: SkewParams
    kind: str
    dense: DenseTransform | None = None
    permutation: np.ndarray | None = None
    base_kernel: DenseTransform | None = None
    children: tuple = ()
    basis_change: sp.csr_matrix | None = None
    residual: float | None = None
    from_cache: bool = False
    _executor: object = field(default=None, repr=False)

    @property
    def executor(self) -> "_Executor":
        if self._executor is None:
            self._executor = _Executor(self)
        return self._executor

    def nnz(self) -> int:
        return 0 if self.basis_change is None else int(self.basis_change.nnz)

    def depth(self) -> int:
        return 0 if self.kind == "direct" else 1 + self.children[0].depth()


def plan_tree(plan: TransformPlan):
    """Yield every plan node, parents before children."""
    yield plan
    for c in plan.children:
        yield from plan_tree(c)


def factorization_residual(plan: TransformPlan, dense: DenseTransform | None = None,
                           B=None) -> float:
    """Max-entry residual of the composed factors against the dense transform."""
    if plan.kind != "radix2":
        return 0.0
    dense = dense_transform(plan.n, plan.params) if dense is None else dense
    kids = [dense_transform(c.n, c.params) if c.dense is None else c.dense
            for c in plan.children]
    B = plan.basis_change if B is None else B
    F = composed_factors(plan.permutation, plan.base_kernel, kids, B)
    return float(np.max(np.abs(F - dense.matrix)))


def build_plan(n: int, params: SkewParams = DEFAULT_PARAMS, cache=None, *,
               validate: bool = True, _dense: DenseTransform | None = None) -> TransformPlan:
    """Build (or load) the plan for ``DCT_n(params)``.

    Even sizes split recursively; odd sizes and ``n == 1`` are applied
    densely.  Newly built radix plans with ``n <= 8`` are checked against
    the dense transform.  With a :class:`~fccdct.plan_cache.PlanCache`,
    every node of the recursion tree is looked up and stored by
    ``(n, params)``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    rec = cache.load(n, params) if (cache is not None and n > 1) else None

    if n == 1 or n % 2:
        if rec is not None:
            dense = DenseTransform(n, params, rec.kernel)
        else:
            dense = _dense if _dense is not None else dense_transform(n, params)
            if cache is not None and n > 1:
                cache.save_direct(n, params, dense.matrix)
        return TransformPlan(n, params, "direct", dense=dense, from_cache=rec is not None)

    m = n // 2
    cps = child_params(params)
    if rec is not None:
        kernel = DenseTransform(2, params, rec.kernel)
        children = tuple(build_plan(m, p, cache, validate=validate) for p in cps)
        return TransformPlan(n, params, "radix2", permutation=rec.permutation,
                             base_kernel=kernel, children=children,
                             basis_change=rec.basis_change, from_cache=True)

    kernel = dense_transform(2, params)
    child_dense = [dense_transform(m, p) for p in cps]
    if validate and n <= VALIDATE_MAX_N and _dense is None:
        _dense = dense_transform(n, params)
    B = basis_change(n, params, kernel=kernel, children=child_dense, dense=_dense)
    perm = radix_permutation(n)
    residual = None
    if validate and n <= VALIDATE_MAX_N:
        F = composed_factors(perm, kernel, child_dense, B)
        residual = float(np.max(np.abs(F - _dense.matrix)))
        if residual > FACTOR_TOL:
            raise MathError(f"factorization residual {residual:.3g} for "
                            f"n={n}, params {params} exceeds {FACTOR_TOL:g}")
    del _dense
    children = tuple(build_plan(m, p, cache, validate=validate, _dense=cd)
                     for p, cd in zip(cps, child_dense))
    if cache is not None:
        cache.save_radix(n, params, kernel.matrix, B, perm)
    return TransformPlan(n, params, "radix2", permutation=perm, base_kernel=kernel,
                         children=children, basis_change=B, residual=residual)


class _Executor:
    """Level-by-level batched evaluation of a plan tree.

    All plans at one recursion depth share a size, so each level becomes one
    block-diagonal sparse product and one batched 8x8 kernel product; the
    permutations of all levels compose into a single gather.
    """

    def __init__(self, plan: TransformPlan):
        self.n = plan.n
        self.params = plan.params
        N = plan.n ** 3
        self.levels = []
        current = [plan]
        gather = np.arange(N)
        while current[0].kind == "radix2":
            size = current[0].n ** 3
            m3 = size // 8
            B = sp.block_diag([p.basis_change for p in current], format="csr")
            B.sort_indices()
            K = np.stack([p.base_kernel.matrix for p in current])
            offsets = (np.arange(len(current)) * size)[:, None]
            inv = np.argsort(current[0].permutation)
            g = (offsets + inv[None, :]).reshape(-1)
            gather = g[gather]
            self.levels.append({"B": B, "K": K, "m3": m3, "count": len(current)})
            current = [c for p in current for c in p.children]
        self.leaf_count = len(current)
        self.leaf_size = current[0].n ** 3
        if self.leaf_size == 1 and all(p.dense.matrix[0, 0] == 1 for p in current):
            self.leaf = None
        else:
            self.leaf = np.stack([p.dense.matrix for p in current])
        self.gather = gather
        self.scatter = np.argsort(gather)

    # --- helpers -----------------------------------------------------
    @staticmethod
    def _chunks(count, threads):
        threads = max(1, min(int(threads or 1), count))
        edges = np.linspace(0, count, threads + 1).astype(int)
        return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]

    def _run(self, fn, count, threads):
        chunks = self._chunks(count, threads)
        if len(chunks) == 1:
            fn(*chunks[0])
            return
        with ThreadPoolExecutor(max_workers=len(chunks)) as ex:
            list(ex.map(lambda ab: fn(*ab), chunks))

    # --- forward -----------------------------------------------------
    def forward(self, x: np.ndarray, threads=None) -> np.ndarray:
        v = np.array(x, dtype=complex, copy=True)
        for lev in self.levels:
            B, K, m3, count = lev["B"], lev["K"], lev["m3"], lev["count"]
            size = 8 * m3
            out = np.empty_like(v)

            def step(a, b, v=v, out=out, B=B, K=K, m3=m3, size=size):
                rows = slice(a * size, b * size)
                w = B[rows] @ v if (a, b) != (0, count) else B @ v
                w = w.reshape(b - a, 8, m3)
                out[rows] = np.matmul(K[a:b], w).reshape(-1)

            self._run(step, count, threads)
            v = out
        if self.leaf is not None:
            d = self.leaf_size
            out = np.empty_like(v)

            def leaf(a, b, v=v, out=out):
                rows = slice(a * d, b * d)
                out[rows] = np.matmul(self.leaf[a:b], v[rows].reshape(b - a, d, 1)).reshape(-1)

            self._run(leaf, self.leaf_count, threads)
            v = out
        return v[self.gather]

    # --- inverse -----------------------------------------------------
    @cached_property
    def _inverse_factors(self):
        kinv = [np.linalg.inv(lev["K"]) for lev in self.levels]
        lus = [spla.splu(lev["B"].tocsc()) for lev in self.levels]
        leaf = None if self.leaf is None else np.linalg.inv(self.leaf)
        return kinv, lus, leaf

    def inverse(self, y: np.ndarray) -> np.ndarray:
        kinv, lus, leaf_inv = self._inverse_factors
        v = np.asarray(y, dtype=complex)[self.scatter]
        if leaf_inv is not None:
            d = self.leaf_size
            v = np.matmul(leaf_inv, v.reshape(-1, d, 1)).reshape(-1)
        for lev, Ki, lu in zip(reversed(self.levels), reversed(kinv), reversed(lus)):
            w = np.matmul(Ki, v.reshape(lev["count"], 8, lev["m3"])).reshape(-1)
            v = lu.solve(w)
        return v


def fast_apply(plan: TransformPlan, s, threads: int | None = None) -> Spectrum:
    """Apply the factored transform; ``threads`` splits each level into chunks.

    The result does not depend on ``threads``: every chunk performs the same
    per-block arithmetic as the unsplit computation.
    """
    data = _as_data(s, plan.n)
    return Spectrum(plan.n, plan.params, plan.executor.forward(data, threads))


def inverse_apply(t, spec) -> SignalTensor:
    """Recover signal coefficients from a spectrum.

    ``t`` is a :class:`TransformPlan` (factors inverted one by one) or a
    :class:`DenseTransform` (dense solve).
    """
    if isinstance(t, DenseTransform):
        data = _as_data(spec, t.n)
        if t.n > 1:
            _check_condition(t, "dense")
        return SignalTensor(t.n, np.linalg.solve(t.matrix, data))
    data = _as_data(spec, t.n)
    return SignalTensor(t.n, t.executor.inverse(data))
