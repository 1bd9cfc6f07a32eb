import hashlib
import json

import numpy as np
import pytest
from scipy.fft import dctn

from fccdct.errors import MalformedFile, SizeMismatch
from fccdct.spectral import skew_nodes
from fccdct.transform import Spectrum, build_plan, fast_apply
from fccdct.voxel_io import (SPECTRUM_COLUMNS, VoxelGrid, export_geometry, export_spectrum,
                             grid_from_signal, load_grid, load_spectrum, reference_spectrum,
                             save_grid, synthetic_sword, z_transform)

# computed once from the recipe and frozen
SWORD16_SHA256 = "b9c230c138102612d6bbf78397e145e3de2501807b0b5111c9ce141f13644888"


def test_sword_is_frozen():
    g = synthetic_sword(16)
    assert hashlib.sha256(g.values.astype("<f8").tobytes()).hexdigest() == SWORD16_SHA256
    # pommel 4x4 + grip 2 x 2x2 + guard 8x2 + blade 11 x 2x2
    assert g.values.sum() == 16 + 8 + 16 + 44
    assert set(np.unique(g.values)) == {0.0, 1.0}
    with pytest.raises(ValueError):
        synthetic_sword(4)


@pytest.mark.parametrize("suffix", [".json", ".raw"])
def test_grid_round_trip(tmp_path, suffix, rng):
    g = VoxelGrid(3, rng.standard_normal(27), {"source": "test"})
    path = save_grid(g, tmp_path / f"g{suffix}")
    back = load_grid(path)
    assert back.n == 3 and back.metadata == {"source": "test"}
    np.testing.assert_array_equal(back.values, g.values)


def test_raw_header_sidecar(tmp_path):
    save_grid(VoxelGrid(2, np.arange(8.0)), tmp_path / "g.bin")
    hdr = json.loads((tmp_path / "g.bin.hdr").read_text())
    assert hdr["format"] == "fccdct-raw" and hdr["n"] == 2 and hdr["dtype"] == "<f8"
    assert (tmp_path / "g.bin").stat().st_size == 64


def test_json_size_mismatch(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"n": 2, "values": [0.0] * 7}))
    with pytest.raises(SizeMismatch):
        load_grid(p)


def test_json_syntax_error_has_location(tmp_path):
    p = tmp_path / "g.json"
    p.write_text('{"n": 2,\n "values": [1, 2,, 3]}')
    with pytest.raises(MalformedFile) as info:
        load_grid(p)
    assert info.value.line == 2


def test_raw_payload_mismatch(tmp_path):
    save_grid(VoxelGrid(2, np.zeros(8)), tmp_path / "g.bin")
    (tmp_path / "g.bin").write_bytes(b"\0" * 72)
    with pytest.raises(SizeMismatch):
        load_grid(tmp_path / "g.bin")
    (tmp_path / "g.bin").write_bytes(b"\0" * 13)
    with pytest.raises(MalformedFile):
        load_grid(tmp_path / "g.bin")


def test_z_transform_round_trip(rng):
    g = VoxelGrid(2, rng.standard_normal(8))
    s = z_transform(g)
    np.testing.assert_array_equal(grid_from_signal(s).values, g.values)
    s.data[0] += 1j
    with pytest.raises(ValueError):
        grid_from_signal(s)


def test_spectrum_csv_round_trip(tmp_path):
    g = synthetic_sword(8)
    spec = fast_apply(build_plan(8), z_transform(g))
    path = tmp_path / "s.csv"
    assert export_spectrum(spec, skew_nodes(8), path) == 512
    head = path.read_text().splitlines()[0]
    assert head == ",".join(SPECTRUM_COLUMNS)
    back = load_spectrum(path)
    np.testing.assert_array_equal(back.data, spec.data)


def test_spectrum_csv_rejects_shuffled_rows(tmp_path):
    spec = Spectrum(2, skew_nodes(2).params, np.arange(8, dtype=complex))
    path = tmp_path / "s.csv"
    export_spectrum(spec, skew_nodes(2), path)
    lines = path.read_text().splitlines()
    lines[1], lines[2] = lines[2], lines[1]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(MalformedFile) as info:
        load_spectrum(path)
    assert info.value.line == 2


def test_geometry_export(tmp_path):
    assert export_geometry(None, tmp_path / "geo.csv") == 14


def test_reference_hook():
    g = synthetic_sword(8)
    ref = reference_spectrum(g, lambda c: dctn(c, norm="ortho"))
    assert ref.shape == (8, 8, 8)
