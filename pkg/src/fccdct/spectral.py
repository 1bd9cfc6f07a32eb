"""Spectral node sets of the FCC cosine transform.

For skew parameters ``(r, s, t)`` the size-``n`` transform samples at the
``n^3`` torus points with angles ``((r+i)/n, (s+j)/n, (t+k)/n)``.  At the
default ``(1/8, 0, 3/8)`` these are the common zeros of
``T_{n,0,0}, T_{0,n,0}, T_{0,0,n}``; in general they solve
``T_{n e_1} = sigma(r,s,t)``, ``T_{n e_2} = tau(r,s,t)``,
``T_{n e_3} = rho(r,s,t)``.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .chebyshev import SpectralPoint, UVWPoint, real_coords
from .errors import DegenerateNodes
from .weyl_s4 import WeylGroup, default_group, orbit

__all__ = [
    "SkewParams",
    "DEFAULT_PARAMS",
    "NodeGrid",
    "sigma",
    "tau",
    "rho",
    "common_zeros",
    "skew_nodes",
    "child_params",
    "shift_vectors",
    "lattice_indices",
    "write_nodes_csv",
]

_DEGENERATE_TOL = 1e-9


def _format_number(x: float) -> str:
    # exact rational when a small denominator reproduces the float
    f = Fraction(x).limit_denominator(1 << 20)
    if float(f) == x:
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return format(x, ".17g")


@dataclass(frozen=True)
class SkewParams:
    """Phase offsets ``(r, s, t)``, fractions of a period."""

    r: float
    s: float
    t: float

    def __post_init__(self):
        for name in ("r", "s", "t"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def parse(cls, text: str) -> "SkewParams":
        """Parse ``"1/8,0,3/8"`` or ``"0.125, 0, 0.375"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated values, got {text!r}")
        return cls(*(float(Fraction(p)) for p in parts))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r, self.s, self.t)

    def key(self) -> str:
        """Stable text key, exact rationals where representable."""
        return ",".join(_format_number(x) for x in self.as_tuple())

    def __str__(self):
        return self.key()


DEFAULT_PARAMS = SkewParams(0.125, 0.0, 0.375)


def _e(x):
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


def sigma(r, s, t):
    out = (_e(r) + _e(np.subtract(s, r)) + _e(np.negative(t)) + _e(np.subtract(t, s))) / 4
    return complex(out) if np.ndim(out) == 0 else out


def tau(r, s, t):
    r, s, t = (np.asarray(a, dtype=float) for a in (r, s, t))
    out = (_e(-s) + _e(s) + _e(r - t) + _e(s - r - t) + _e(t - r) + _e(r - s + t)) / 6
    return complex(out) if np.ndim(out) == 0 else out


def rho(r, s, t):
    r, s, t = (np.asarray(a, dtype=float) for a in (r, s, t))
    out = (_e(-r) + _e(r - s) + _e(s - t) + _e(t)) / 4
    return complex(out) if np.ndim(out) == 0 else out


def lattice_indices(n: int) -> np.ndarray:
    """All triples in ``{0..n-1}^3`` in lexicographic order, shape (n^3, 3)."""
    return np.array(list(itertools.product(range(n), repeat=3)), dtype=np.int64).reshape(-1, 3)


@dataclass(frozen=True, eq=False)
class NodeGrid:
    """``n^3`` spectral nodes in lexicographic ``(i, j, k)`` order.

    Attributes
    ----------
    index : ndarray, shape (N, 3)
    theta : ndarray, shape (N, 3)
        Angles ``(params + index) / n``.
    uvw : ndarray, shape (N, 3), complex
    xyz : ndarray, shape (N, 3), complex
        Values of the fundamental polynomials at each node.
    """

    n: int
    params: SkewParams
    index: np.ndarray
    theta: np.ndarray
    uvw: np.ndarray
    xyz: np.ndarray

    def __len__(self):
        return self.index.shape[0]

    def __getitem__(self, i):
        u, v, w = (complex(c) for c in self.uvw[i])
        x, y, z = (complex(c) for c in self.xyz[i])
        origin = UVWPoint(u, v, w)
        return tuple(int(c) for c in self.index[i]), origin, SpectralPoint(x, y, z, origin)

    def real_coords(self) -> np.ndarray:
        return real_coords(self.xyz)


def _coords(uvw: np.ndarray) -> np.ndarray:
    u, v, w = uvw[:, 0], uvw[:, 1], uvw[:, 2]
    x = (u + v / u + w / v + 1 / w) / 4
    y = (1 / v + v + u / w + v / (u * w) + w / u + u * w / v) / 6
    z = (1 / u + u / v + v / w + w) / 4
    return np.stack([x, y, z], axis=1)


def _check_distinct(xyz: np.ndarray, tol: float = _DEGENERATE_TOL):
    # torus points are always distinct; what matters is whether two of them
    # lie in one group orbit, i.e. share polynomial coordinates
    pts = np.concatenate([xyz.real, xyz.imag], axis=1)
    pairs = cKDTree(pts).query_pairs(tol, output_type="ndarray")
    if len(pairs):
        a, b = pairs[0]
        raise DegenerateNodes(
            f"{len(pairs)} coincident node pair(s), e.g. nodes {a} and {b}")


def skew_nodes(n: int, params: SkewParams = DEFAULT_PARAMS) -> NodeGrid:
    """Node grid of the skew transform of size ``n``.

    Raises
    ------
    DegenerateNodes
        If two nodes coincide within 1e-9.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    index = lattice_indices(n)
    theta = (index + np.array(params.as_tuple())) / n
    uvw = np.exp(2j * np.pi * theta)
    xyz = _coords(uvw)
    _check_distinct(xyz)
    return NodeGrid(n, params, index, theta, uvw, xyz)


def common_zeros(n: int) -> NodeGrid:
    """Common zeros of ``T_{n,0,0}, T_{0,n,0}, T_{0,0,n}``.

    Built from the roots of unity ``(w_{8n}^{1+8i}, w_n^j, w_{8n}^{3+8k})``
    rather than from the general skew formula.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    index = lattice_indices(n)
    i, j, k = index.T
    expo = np.stack([(1 + 8 * i) / (8 * n), j / n, (3 + 8 * k) / (8 * n)], axis=1)
    uvw = np.exp(2j * np.pi * expo)
    xyz = _coords(uvw)
    _check_distinct(xyz)
    return NodeGrid(n, DEFAULT_PARAMS, index, expo, uvw, xyz)


def child_params(params: SkewParams) -> list[SkewParams]:
    """Parameters of the eight half-size transforms, ordered by ``(i_r, i_s, i_t)``."""
    r, s, t = params.as_tuple()
    return [SkewParams((r + a) / 2, (s + b) / 2, (t + c) / 2)
            for a, b, c in itertools.product((0, 1), repeat=3)]


def shift_vectors(group: WeylGroup | None = None) -> list[tuple[int, int, int]]:
    """Union of the orbits of ``e_1, e_2, e_3``, sorted."""
    group = default_group() if group is None else group
    pts = set()
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        pts |= orbit(e, group)
    return sorted(pts)


def write_nodes_csv(grid: NodeGrid, path) -> int:
    """Write ``i,j,k,x,y,z`` rows with real coordinates; returns the row count."""
    rc = grid.real_coords()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "k", "x", "y", "z"])
        for idx, c in zip(grid.index, rc):
            w.writerow([*(int(a) for a in idx), *(repr(float(a)) for a in c)])
    return len(grid)
