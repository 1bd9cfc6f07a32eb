"""Voxel grids: file formats, the coefficient identification, and CSV exports.

Grid values are real and laid out lexicographically with the last index
fastest, the same order as transform coefficients, so the z-transform is a
plain reindexing followed by complexification.

Formats
-------
JSON grid::

    {"n": 4, "values": [64 floats], "metadata": {"key": "value"}}

Raw grid: the payload file holds ``n^3`` little-endian float64 values;
a sidecar ``<payload>.hdr`` holds JSON
``{"format": "fccdct-raw", "version": 1, "n": ..., "dtype": "<f8",
"metadata": {...}}``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MalformedFile, SizeMismatch
from .spectral import DEFAULT_PARAMS, NodeGrid, SkewParams, lattice_indices, shift_vectors
from .transform import SignalTensor, Spectrum
from .weyl_s4 import WeylGroup

__all__ = [
    "VoxelGrid",
    "z_transform",
    "grid_from_signal",
    "load_grid",
    "save_grid",
    "synthetic_sword",
    "export_spectrum",
    "load_spectrum",
    "export_geometry",
    "reference_spectrum",
    "SPECTRUM_COLUMNS",
]

SPECTRUM_COLUMNS = ["i", "j", "k", "x", "y", "z", "re", "im", "abs"]
RAW_HEADER_SUFFIX = ".hdr"


@dataclass(eq=False)
class VoxelGrid:
    n: int
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64).reshape(-1)
        if self.values.size != self.n ** 3:
            raise SizeMismatch(f"grid with n={self.n} needs {self.n ** 3} values, "
                               f"got {self.values.size}")
        self.metadata = {str(k): str(v) for k, v in self.metadata.items()}

    def cube(self) -> np.ndarray:
        return self.values.reshape(self.n, self.n, self.n)


def z_transform(g: VoxelGrid) -> SignalTensor:
    """Identify grid samples with coefficients of ``T_{j,k,p}``."""
    return SignalTensor(g.n, g.values.astype(complex))


def grid_from_signal(s: SignalTensor, metadata=None, tol: float = 1e-8) -> VoxelGrid:
    """Inverse of :func:`z_transform`; rejects imaginary parts above ``tol``."""
    data = np.asarray(s.data)
    if data.size and np.max(np.abs(data.imag)) > tol:
        raise ValueError(f"signal has imaginary part {np.max(np.abs(data.imag)):.3g} "
                         f"above {tol:g}; cannot store as a real grid")
    return VoxelGrid(s.n, data.real.copy(), dict(metadata or {}))


def _infer_format(path: Path, fmt):
    if fmt is not None:
        if fmt not in ("json", "raw"):
            raise ValueError(f"unknown grid format {fmt!r}")
        return fmt
    return "json" if path.suffix.lower() == ".json" else "raw"


def _check_n(n, path):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedFile(f"'n' must be a positive integer, got {n!r}", path=path)


def load_grid(path, fmt: str | None = None) -> VoxelGrid:
    """Read a grid written by :func:`save_grid` (format inferred from suffix)."""
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if fmt == "json":
        text = path.read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedFile(exc.msg, path=path, line=exc.lineno, offset=exc.pos) from None
        if not isinstance(doc, dict) or "n" not in doc or "values" not in doc:
            raise MalformedFile("expected an object with 'n' and 'values'", path=path, line=1)
        n = doc["n"]
        _check_n(n, path)
        values = doc["values"]
        if not isinstance(values, list):
            raise MalformedFile("'values' must be a list", path=path)
        if len(values) != n ** 3:
            raise SizeMismatch(f"{path}: header n={n} needs {n ** 3} values, "
                               f"got {len(values)}")
        try:
            arr = np.array(values, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise MalformedFile(f"non-numeric value: {exc}", path=path) from None
        return VoxelGrid(n, arr, doc.get("metadata") or {})

    hdr_path = path.with_name(path.name + RAW_HEADER_SUFFIX)
    try:
        header = json.loads(hdr_path.read_text())
    except json.JSONDecodeError as exc:
        raise MalformedFile(exc.msg, path=hdr_path, line=exc.lineno, offset=exc.pos) from None
    if header.get("format") != "fccdct-raw" or header.get("dtype", "<f8") != "<f8":
        raise MalformedFile("not an fccdct raw header", path=hdr_path, line=1)
    n = header.get("n")
    _check_n(n, hdr_path)
    payload = path.read_bytes()
    if len(payload) % 8:
        raise MalformedFile("payload length is not a multiple of 8 bytes",
                            path=path, offset=len(payload) - len(payload) % 8)
    if len(payload) // 8 != n ** 3:
        raise SizeMismatch(f"{path}: header n={n} needs {n ** 3} values, "
                           f"payload has {len(payload) // 8}")
    arr = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return VoxelGrid(n, arr, header.get("metadata") or {})


def save_grid(grid: VoxelGrid, path, fmt: str | None = None) -> Path:
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if fmt == "json":
        doc = {"n": grid.n, "values": [float(v) for v in grid.values],
               "metadata": grid.metadata}
        path.write_text(json.dumps(doc))
        return path
    path.write_bytes(grid.values.astype("<f8").tobytes())
    header = {"format": "fccdct-raw", "version": 1, "n": grid.n, "dtype": "<f8",
              "order": "lexicographic", "metadata": grid.metadata}
    path.with_name(path.name + RAW_HEADER_SUFFIX).write_text(json.dumps(header, indent=1))
    return path


def synthetic_sword(n: int) -> VoxelGrid:
    """Blocky sword along the first axis, values in {0, 1}.

    Recipe, with ``c = n // 2``, ``w = max(1, n // 8)`` and cross-section
    ``[c - w//2, c - w//2 + w)`` on the last two axes:

    * pommel: one slab at ``i = i0 = max(1, n // 16)``, cross-section
      widened by one voxel on every side;
    * grip: ``max(1, n // 8)`` slabs of the plain cross-section;
    * guard: ``max(1, n // 16)`` slabs spanning ``[c - n//4, c + n//4)`` on
      the second axis;
    * blade: ``round(0.7 n)`` slabs of the plain cross-section, clipped at
      the grid boundary.
    """
    if n < 8:
        raise ValueError(f"sword needs n >= 8, got {n}")
    cube = np.zeros((n, n, n))
    c, w = n // 2, max(1, n // 8)
    lo, hi = c - w // 2, c - w // 2 + w
    i0 = max(1, n // 16)
    cube[i0, lo - 1:hi + 1, lo - 1:hi + 1] = 1
    grip_end = i0 + 1 + max(1, n // 8)
    cube[i0 + 1:grip_end, lo:hi, lo:hi] = 1
    guard_end = grip_end + max(1, n // 16)
    cube[grip_end:guard_end, c - n // 4:c + n // 4, lo:hi] = 1
    blade_end = min(n, guard_end + round(0.7 * n))
    cube[guard_end:blade_end, lo:hi, lo:hi] = 1
    return VoxelGrid(n, cube.reshape(-1), {"object": "sword", "recipe": "v1"})


def _fmt(x: float) -> str:
    return repr(float(x))


def export_spectrum(spec: Spectrum, grid_nodes: NodeGrid, path) -> int:
    """Write one CSV row per node, lexicographic; returns the row count."""
    if grid_nodes.n != spec.n:
        raise SizeMismatch(f"spectrum n={spec.n} but node grid n={grid_nodes.n}")
    coords = grid_nodes.real_coords()
    data = spec.data
    mags = np.abs(data)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(SPECTRUM_COLUMNS)
        for idx, xyz, v, a in zip(grid_nodes.index, coords, data, mags):
            wr.writerow([*(int(c) for c in idx), *(_fmt(c) for c in xyz),
                         _fmt(v.real), _fmt(v.imag), _fmt(a)])
    return len(data)


def load_spectrum(path, params: SkewParams = DEFAULT_PARAMS) -> Spectrum:
    """Read a CSV written by :func:`export_spectrum`."""
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != SPECTRUM_COLUMNS:
        raise MalformedFile(f"expected header {','.join(SPECTRUM_COLUMNS)}", path=path, line=1)
    body = rows[1:]
    n = round(len(body) ** (1 / 3))
    if n < 1 or n ** 3 != len(body):
        raise SizeMismatch(f"{path}: {len(body)} rows is not a cube number")
    expected = lattice_indices(n)
    vals = np.empty(len(body), dtype=complex)
    for r, (row, idx) in enumerate(zip(body, expected)):
        try:
            ijk = tuple(int(c) for c in row[:3])
            vals[r] = complex(float(row[6]), float(row[7]))
        except (ValueError, IndexError) as exc:
            raise MalformedFile(str(exc), path=path, line=r + 2) from None
        if ijk != tuple(int(c) for c in idx):
            raise MalformedFile(f"row index {ijk} out of lexicographic order",
                                path=path, line=r + 2)
    return Spectrum(n, params, vals)


def export_geometry(group: WeylGroup | None, path) -> int:
    """Write the shift vectors as integer ``x,y,z`` rows; returns the row count."""
    pts = shift_vectors(group)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["x", "y", "z"])
        wr.writerows(pts)
    return len(pts)


def reference_spectrum(grid: VoxelGrid, transform) -> np.ndarray:
    """Apply a user-supplied cube transform (e.g. ``scipy.fft.dctn``) for comparison."""
    return np.asarray(transform(grid.cube()))
