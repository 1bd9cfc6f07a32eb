"""On-disk store for transform plans, one file per ``(n, r, s, t)``.

File layout, version 1 (all integers and floats little-endian)::

    offset  field
    0       magic            8 bytes  b"FCCPLAN\\0"
    8       version          u32      = 1
    12      n                u64
    20      r, s, t          3 x (u16 byte length + ASCII text), exact
                             rationals such as "1/8" or 17-digit decimals
    ..      kind             u8       0 = direct, 1 = radix2
    ..      kernel dim d     u64      d = n^3 (direct) or 8 (radix2)
    ..      kernel           d*d x (f64 re, f64 im), row-major, rows = nodes
    ..      B nnz            u64      0 for direct plans
    ..      B triplets       nnz x (u64 row, u64 col, f64 re, f64 im)
    ..      perm length      u64      0 for direct plans
    ..      permutation      u64 array
    end-4   crc32            u32 over every preceding byte

Only one level of the recursion tree lives in each file; children are
stored under their own keys.  Files that fail any check are reported,
ignored and rebuilt.
"""

from __future__ import annotations

import hashlib
import io
import logging
import os
import struct
import tempfile
import threading
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import MalformedFile
from .spectral import SkewParams

__all__ = ["PlanCache", "PlanRecord", "MAGIC", "VERSION", "encode_record", "decode_record"]

log = logging.getLogger(__name__)

MAGIC = b"FCCPLAN\0"
VERSION = 1
_TRIPLET = np.dtype([("row", "<u8"), ("col", "<u8"), ("re", "<f8"), ("im", "<f8")])


@dataclass
class PlanRecord:
    n: int
    params_key: str
    kind: str
    kernel: np.ndarray
    basis_change: sp.csr_matrix | None = None
    permutation: np.ndarray | None = None


def _complex_bytes(a: np.ndarray) -> bytes:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return a.view("<f8").tobytes()


def encode_record(rec: PlanRecord) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<IQ", VERSION, rec.n))
    for part in rec.params_key.split(","):
        b = part.encode("ascii")
        buf.write(struct.pack("<H", len(b)))
        buf.write(b)
    buf.write(struct.pack("<B", 0 if rec.kind == "direct" else 1))
    d = rec.kernel.shape[0]
    buf.write(struct.pack("<Q", d))
    buf.write(_complex_bytes(rec.kernel))
    if rec.basis_change is None:
        buf.write(struct.pack("<Q", 0))
    else:
        coo = rec.basis_change.tocoo()
        order = np.lexsort((coo.col, coo.row))
        trip = np.empty(coo.nnz, dtype=_TRIPLET)
        trip["row"] = coo.row[order]
        trip["col"] = coo.col[order]
        trip["re"] = coo.data.real[order]
        trip["im"] = coo.data.imag[order]
        buf.write(struct.pack("<Q", coo.nnz))
        buf.write(trip.tobytes())
    perm = np.zeros(0, dtype="<u8") if rec.permutation is None else rec.permutation.astype("<u8")
    buf.write(struct.pack("<Q", perm.size))
    buf.write(perm.tobytes())
    body = buf.getvalue()
    return body + struct.pack("<I", zlib.crc32(body))


class _Reader:
    def __init__(self, data: bytes, path):
        self.data, self.pos, self.path = data, 0, path

    def take(self, count: int) -> bytes:
        if self.pos + count > len(self.data):
            raise MalformedFile("truncated plan file", path=self.path, offset=self.pos)
        out = self.data[self.pos:self.pos + count]
        self.pos += count
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def decode_record(data: bytes, path=None) -> PlanRecord:
    if len(data) < 4 or zlib.crc32(data[:-4]) != struct.unpack("<I", data[-4:])[0]:
        raise MalformedFile("checksum mismatch", path=path, offset=max(0, len(data) - 4))
    rd = _Reader(data[:-4], path)
    if rd.take(8) != MAGIC:
        raise MalformedFile("bad magic", path=path, offset=0)
    version, n = rd.unpack("<IQ")
    if version != VERSION:
        raise MalformedFile(f"unsupported version {version}", path=path, offset=8)
    parts = []
    for _ in range(3):
        (length,) = rd.unpack("<H")
        parts.append(rd.take(length).decode("ascii"))
    (kind_code,) = rd.unpack("<B")
    if kind_code not in (0, 1):
        raise MalformedFile(f"unknown plan kind {kind_code}", path=path, offset=rd.pos - 1)
    (d,) = rd.unpack("<Q")
    kernel = np.frombuffer(rd.take(16 * d * d), dtype="<f8").view(np.complex128).reshape(d, d)
    (nnz,) = rd.unpack("<Q")
    trip = np.frombuffer(rd.take(_TRIPLET.itemsize * nnz), dtype=_TRIPLET)
    (plen,) = rd.unpack("<Q")
    perm = np.frombuffer(rd.take(8 * plen), dtype="<u8").astype(np.int64)
    if rd.pos != len(rd.data):
        raise MalformedFile("trailing bytes", path=path, offset=rd.pos)
    kind = "direct" if kind_code == 0 else "radix2"
    B = None
    if kind == "radix2":
        N = n ** 3
        B = sp.csr_matrix((trip["re"] + 1j * trip["im"],
                           (trip["row"].astype(np.int64), trip["col"].astype(np.int64))),
                          shape=(N, N))
        B.sort_indices()
    return PlanRecord(int(n), ",".join(parts), kind, kernel.copy(), B,
                      perm if kind == "radix2" else None)


class PlanCache:
    """Directory of plan files with hit/miss bookkeeping.

    Reads may happen concurrently; writes go through a lock and an atomic
    rename, so a reader never sees a partial file.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self.corrupt: list[Path] = []
        self._lock = threading.Lock()

    def path_for(self, n: int, params: SkewParams) -> Path:
        digest = hashlib.sha1(f"{n}|{params.key()}".encode()).hexdigest()[:16]
        return self.directory / f"plan-n{n}-{digest}.fccplan"

    def load(self, n: int, params: SkewParams) -> PlanRecord | None:
        path = self.path_for(n, params)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            self.misses += 1
            return None
        try:
            rec = decode_record(data, path)
            if rec.n != n or rec.params_key != params.key():
                raise MalformedFile(f"header key n={rec.n} ({rec.params_key}) does not "
                                    f"match n={n} ({params.key()})", path=path, offset=8)
        except MalformedFile as exc:
            log.warning("corrupted plan cache entry, rebuilding: %s", exc)
            self.corrupt.append(path)
            self.misses += 1
            return None
        self.hits += 1
        return rec

    def _write(self, path: Path, payload: bytes):
        with self._lock:
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(payload)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def save_direct(self, n: int, params: SkewParams, matrix: np.ndarray):
        rec = PlanRecord(n, params.key(), "direct", matrix)
        self._write(self.path_for(n, params), encode_record(rec))

    def save_radix(self, n: int, params: SkewParams, kernel: np.ndarray, B, perm):
        rec = PlanRecord(n, params.key(), "radix2", kernel, B, perm)
        self._write(self.path_for(n, params), encode_record(rec))

    def entries(self) -> list[Path]:
        return sorted(self.directory.glob("plan-n*.fccplan"))

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "corrupt": len(self.corrupt)}
