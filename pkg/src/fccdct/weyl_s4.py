"""The symmetric group S4 as 3x3 integer matrices, and its orbits on Z^3.

The three generators are reflections.  A group element ``w`` acts on an
index vector ``k`` by the matrix product ``w @ k``; the matching action on
torus angles is ``w.T @ theta``, so that ``(w k) . theta == k . (w.T theta)``.
With this convention the orbit of ``e1`` is
``{(1,0,0), (-1,1,0), (0,-1,1), (0,0,-1)}``, which are exactly the four
monomials ``u, v/u, w/v, 1/w`` of the first fundamental Chebyshev
coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "GENERATORS",
    "GroupElement",
    "WeylGroup",
    "MultiIndex",
    "generate_group",
    "default_group",
    "orbit",
    "canonical_index",
    "relation_failures",
    "COXETER_RELATIONS",
]

MultiIndex = tuple[int, int, int]

GENERATORS = (
    ((-1, 0, 0), (1, 1, 0), (0, 0, 1)),
    ((1, 1, 0), (0, -1, 0), (0, 1, 1)),
    ((1, 0, 0), (0, 1, 1), (0, 0, -1)),
)

_ORDER = 24

# (i, j, order of s_i s_j), 1-based; s_1 and s_3 commute, s_2 is the middle
# node of the A3 diagram for these matrices
COXETER_RELATIONS = ((1, 1, 1), (2, 2, 1), (3, 3, 1), (1, 3, 2), (1, 2, 3), (2, 3, 3))


@dataclass(frozen=True)
class GroupElement:
    """An integer 3x3 matrix stored as a nested tuple (hashable, exact)."""

    entries: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_array(cls, a) -> "GroupElement":
        a = np.asarray(a)
        return cls(tuple(tuple(int(x) for x in row) for row in a))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement.from_array(self.matrix @ other.matrix)

    def transpose(self) -> "GroupElement":
        return GroupElement(tuple(zip(*self.entries)))

    def determinant(self) -> int:
        return int(round(np.linalg.det(self.matrix)))

    def act(self, k) -> MultiIndex:
        """Image ``w @ k`` of an index vector."""
        k = tuple(int(x) for x in k)
        return tuple(sum(row[j] * k[j] for j in range(3)) for row in self.entries)


IDENTITY = GroupElement(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


@dataclass(frozen=True)
class WeylGroup:
    elements: tuple[GroupElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def matrices(self) -> np.ndarray:
        """All elements stacked into an ``(order, 3, 3)`` integer array."""
        a = np.array([g.entries for g in self.elements], dtype=np.int64)
        a.setflags(write=False)
        return a

    @property
    def generators(self) -> tuple[GroupElement, ...]:
        return tuple(GroupElement(g) for g in GENERATORS)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g) -> bool:
        if not isinstance(g, GroupElement):
            g = GroupElement.from_array(g)
        return g in set(self.elements)


def generate_group(generators=GENERATORS, max_order: int = _ORDER) -> WeylGroup:
    """Breadth-first closure of ``generators`` under matrix multiplication.

    Raises
    ------
    RuntimeError
        If more than ``max_order`` distinct matrices appear, which means
        the generators are not the expected reflections.
    """
    gens = [GroupElement(tuple(tuple(r) for r in g)) for g in generators]
    seen = {IDENTITY: None}
    ordered = [IDENTITY]
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g @ s
                if h not in seen:
                    seen[h] = None
                    ordered.append(h)
                    nxt.append(h)
                    if len(ordered) > max_order:
                        raise RuntimeError(
                            f"group closure exceeded {max_order} elements; "
                            "check the generator matrices")
        frontier = nxt
    return WeylGroup(tuple(ordered))


def relation_failures(relations=COXETER_RELATIONS, generators=GENERATORS):
    """Relations ``(s_i s_j)^k == I`` that do not hold, as ``(i, j, k)`` triples.

    For ``i == j`` the relation reads ``s_i^2 == I`` and ``k`` is ignored.
    """
    gens = [np.array(g, dtype=np.int64) for g in generators]
    eye = np.eye(3, dtype=np.int64)
    bad = []
    for i, j, k in relations:
        a = gens[i - 1] @ gens[i - 1] if i == j else np.linalg.matrix_power(
            gens[i - 1] @ gens[j - 1], k)
        if not np.array_equal(a, eye):
            bad.append((i, j, k))
    return bad


@lru_cache(maxsize=None)
def default_group() -> WeylGroup:
    """The 24-element group built from the three standard generators (cached)."""
    return generate_group()


def orbit(k, group: WeylGroup | None = None) -> frozenset[MultiIndex]:
    """Set of images ``w @ k`` over the group."""
    group = default_group() if group is None else group
    k = np.asarray(k, dtype=np.int64)
    images = group.matrices @ k
    return frozenset(tuple(int(x) for x in row) for row in images)


def canonical_index(k, group: WeylGroup | None = None) -> MultiIndex:
    """Lexicographically greatest member of the orbit of ``k``."""
    return max(orbit(k, group))
