"""Three-variable Chebyshev polynomials of the first kind attached to S4.

``T_k`` is evaluated in three equivalent ways:

* :func:`symmetrized_exponential` averages ``exp(2 pi i (w k) . theta)``
  over the 24 group matrices;
* :func:`cheb_eval_uvw` uses the explicit 24-monomial power form in
  ``u = e^{2 pi i theta_1}``, ``v``, ``w``;
* :func:`cheb_eval_xyz` evaluates at a point ``(x, y, z)`` of the
  polynomial coordinates, routed through the torus point it came from.

:func:`evaluate_box` is the vectorized workhorse used to fill transform
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .weyl_s4 import WeylGroup, canonical_index, default_group

__all__ = [
    "TorusPoint",
    "UVWPoint",
    "SpectralPoint",
    "OrbitCombination",
    "power_form_exponents",
    "symmetrized_exponential",
    "cheb_eval_uvw",
    "coords_from_uvw",
    "real_coords",
    "recurrence_product",
    "evaluate_combination",
    "compose_scaled",
    "cheb_eval_xyz",
    "evaluate_box",
    "evaluate_indices",
]

TWO_PI_I = 2j * np.pi
_WRAP_TOL = 1e-15


@dataclass(frozen=True)
class TorusPoint:
    """Angles ``theta`` in R^3/Z^3, stored in ``[0, 1)^3``."""

    theta: tuple[float, float, float]

    def __post_init__(self):
        t = []
        for x in self.theta:
            x = float(x) % 1.0
            if x > 1.0 - _WRAP_TOL:
                x = 0.0
            t.append(x)
        object.__setattr__(self, "theta", tuple(t))

    def to_uvw(self) -> "UVWPoint":
        u, v, w = (complex(np.exp(TWO_PI_I * x)) for x in self.theta)
        return UVWPoint(u, v, w)


@dataclass(frozen=True)
class UVWPoint:
    u: complex
    v: complex
    w: complex

    def on_torus(self, tol: float = 1e-12) -> bool:
        return all(abs(abs(c) - 1.0) <= tol for c in (self.u, self.v, self.w))

    def power(self, e: int) -> "UVWPoint":
        return UVWPoint(self.u ** e, self.v ** e, self.w ** e)

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w], dtype=complex)


@dataclass(frozen=True)
class SpectralPoint:
    """Values ``(x, y, z)`` of the three fundamental polynomials.

    ``origin`` is the torus point the coordinates were computed from, if
    known; polynomial evaluation at the point goes through it.
    """

    x: complex
    y: complex
    z: complex
    origin: UVWPoint | None = None

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=complex)


@dataclass(frozen=True)
class OrbitCombination:
    """A linear combination ``sum weight * T_index`` with canonical indices."""

    terms: tuple[tuple[tuple[int, int, int], Fraction], ...]

    def as_dict(self) -> dict:
        return dict(self.terms)

    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.terms), Fraction(0))


def power_form_exponents(k) -> np.ndarray:
    """Exponent vectors of the 24 monomials of ``T_k`` in ``(u, v, w)``.

    Transcribed term by term from the explicit power form; the rows are
    the orbit of ``k`` under the group, with multiplicity.
    """
    n, m, l = (int(x) for x in k)
    return np.array([
        (n, l + m, -l),
        (-n, l + m + n, -l),
        (n, m, l),
        (-n, m + n, l),
        (m + n, l, -l - m),
        (-m - n, l + m + n, -l - m),
        (l + m + n, -l, -m),
        (-l - m - n, m + n, -m),
        (l + m + n, -l - m, m),
        (-l - m - n, n, m),
        (m + n, -m, l + m),
        (-m - n, n, l + m),
        (l + m, -l, -m - n),
        (-l - m, m, -m - n),
        (m, l, -l - m - n),
        (-m, l + m, -l - m - n),
        (l, -l - m, -n),
        (-l, -m, -n),
        (-l, -m - n, n),
        (l, -l - m - n, n),
        (l + m, -l - m - n, m + n),
        (-l - m, -n, m + n),
        (m, -m - n, l + m + n),
        (-m, -n, l + m + n),
    ], dtype=np.int64)


def symmetrized_exponential(k, theta, group: WeylGroup | None = None):
    """Group average ``(1/|W|) sum_w exp(2 pi i (w k) . theta)``.

    ``theta`` may be a :class:`TorusPoint`, a length-3 vector, or an
    ``(..., 3)`` array of angle triples.
    """
    group = default_group() if group is None else group
    if isinstance(theta, TorusPoint):
        theta = theta.theta
    theta = np.asarray(theta, dtype=float)
    images = group.matrices @ np.asarray(k, dtype=np.int64)   # (24, 3)
    phases = theta @ images.T                                  # (..., 24)
    out = np.exp(TWO_PI_I * phases).mean(axis=-1)
    return complex(out) if out.ndim == 0 else out


def _monomials(u, v, w, exps):
    u, v, w = (np.asarray(c, dtype=complex) for c in (u, v, w))
    total = 0
    for a, b, c in exps:
        total = total + u ** int(a) * v ** int(b) * w ** int(c)
    return total


def cheb_eval_uvw(k, p, v=None, w=None):
    """Power-form value ``T_k(u, v, w)``.

    Call either as ``cheb_eval_uvw(k, UVWPoint)`` or with three (array)
    arguments ``cheb_eval_uvw(k, u, v, w)``.
    """
    if isinstance(p, UVWPoint):
        u, v, w = p.u, p.v, p.w
    else:
        u = p
    out = _monomials(u, v, w, power_form_exponents(k)) / 24
    return complex(out) if np.ndim(out) == 0 else out


def coords_from_uvw(p: UVWPoint) -> SpectralPoint:
    u, v, w = p.u, p.v, p.w
    x = (u + v / u + w / v + 1 / w) / 4
    y = (1 / v + v + u / w + v / (u * w) + w / u + u * w / v) / 6
    z = (1 / u + u / v + v / w + w) / 4
    return SpectralPoint(complex(x), complex(y), complex(z), origin=p)


def real_coords(s, tol: float = 1e-8) -> np.ndarray:
    """Real coordinates ``((x+z)/2, y, (x-z)/2i)`` of a torus-derived point.

    Accepts a :class:`SpectralPoint` or an ``(..., 3)`` complex array.
    Imaginary parts are dropped once checked; a residue above ``tol``
    means the input did not come from the torus.
    """
    if isinstance(s, SpectralPoint):
        xyz = s.as_array()
    else:
        xyz = np.asarray(s, dtype=complex)
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    out = np.stack([(x + z) / 2, y, (x - z) / 2j], axis=-1)
    resid = np.max(np.abs(out.imag)) if out.size else 0.0
    if resid > tol:
        raise ValueError(f"imaginary residue {resid:.3g} exceeds {tol:g}; "
                         "point does not lie on the torus image")
    return out.real.copy()


def recurrence_product(k, l, group: WeylGroup | None = None) -> OrbitCombination:
    """Expand ``T_k * T_l`` as ``(1/24) sum_w T_{k + w l}``, merged by orbit."""
    group = default_group() if group is None else group
    k = np.asarray(k, dtype=np.int64)
    images = group.matrices @ np.asarray(l, dtype=np.int64)
    weight = Fraction(1, group.order)
    merged: dict = {}
    for img in images:
        key = canonical_index(k + img, group)
        merged[key] = merged.get(key, Fraction(0)) + weight
    return OrbitCombination(tuple(sorted(merged.items(), reverse=True)))


def evaluate_combination(comb: OrbitCombination, theta, group=None):
    return sum(float(wt) * symmetrized_exponential(idx, theta, group)
               for idx, wt in comb.terms)


def cheb_eval_xyz(k, s: SpectralPoint):
    """``T_k`` at a point of the polynomial coordinates.

    The value is taken from the torus point stored on ``s``; points with no
    known origin are rejected rather than solved for.
    """
    if s.origin is None:
        raise ValueError("SpectralPoint has no originating (u, v, w) point")
    return cheb_eval_uvw(k, s.origin)


def compose_scaled(k_scalar: int, l_scalar: int, j: int, points=()):
    """Check ``T_{k l e_j} == T_{k e_j} o (T_{l e_1}, T_{l e_2}, T_{l e_3})``.

    Parameters
    ----------
    k_scalar, l_scalar : int
        Non-negative scale factors.
    j : int
        Axis, 1-based (1, 2 or 3).
    points : iterable of UVWPoint
        Torus points at which both sides are compared.

    Returns
    -------
    index : tuple
        The composite index ``k l e_j``.
    max_error : float
        Largest absolute discrepancy over ``points`` (0.0 if none given).
    """
    if k_scalar < 0 or l_scalar < 0:
        raise ValueError("scale factors must be non-negative")
    if j not in (1, 2, 3):
        raise ValueError("axis j must be 1, 2 or 3")
    e = [0, 0, 0]
    e[j - 1] = 1
    index = tuple(k_scalar * l_scalar * c for c in e)
    outer = tuple(k_scalar * c for c in e)
    err = 0.0
    for p in points:
        lhs = cheb_eval_uvw(index, p)
        # (T_{l e_1}, T_{l e_2}, T_{l e_3}) at p are the coordinates of p^l
        inner = coords_from_uvw(p.power(l_scalar))
        rhs = cheb_eval_xyz(outer, inner)
        err = max(err, abs(lhs - rhs))
    return index, err


def _axis_phases(theta, group):
    # per group element: phi = w^T theta, so (w k) . theta == k . phi
    theta = np.asarray(theta, dtype=float)
    return np.einsum("ni,gij->gnj", theta, group.matrices.astype(float))


def evaluate_box(n: int, theta, group: WeylGroup | None = None,
                 first=None) -> np.ndarray:
    """Values ``T_k(theta_i)`` for all ``k`` in ``{0..n-1}^3``.

    Parameters
    ----------
    n : int
        Box side; indices are ordered lexicographically (last fastest).
    theta : array_like, shape (N, 3)
        Angle triples.
    first : slice or array of int, optional
        Restrict the first index component, giving a column chunk.

    Returns
    -------
    ndarray, shape (N, len(first) * n * n)
    """
    group = default_group() if group is None else group
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    N = theta.shape[0]
    ks = np.arange(n)
    k0 = ks if first is None else ks[first]
    phis = _axis_phases(theta, group)                         # (24, N, 3)
    e0 = np.exp(TWO_PI_I * phis[:, :, 0, None] * k0)          # (24, N, a)
    e1 = np.exp(TWO_PI_I * phis[:, :, 1, None] * ks)
    e2 = np.exp(TWO_PI_I * phis[:, :, 2, None] * ks)
    e12 = (e1[:, :, :, None] * e2[:, :, None, :]).reshape(group.order, N, n * n)
    # sum over the group as a batched (a x 24) @ (24 x n^2) product per node
    out = np.matmul(e0.transpose(1, 2, 0), e12.transpose(1, 0, 2))
    out /= group.order
    return out.reshape(N, -1)


def evaluate_indices(indices, theta, group: WeylGroup | None = None) -> np.ndarray:
    """Values ``T_k(theta_i)`` for an explicit list of indices, shape (N, K)."""
    group = default_group() if group is None else group
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    indices = np.atleast_2d(np.asarray(indices, dtype=np.int64))
    out = np.zeros((theta.shape[0], indices.shape[0]), dtype=complex)
    for g in group.matrices:
        out += np.exp(TWO_PI_I * (theta @ (indices @ g.T).T))
    return out / group.order
