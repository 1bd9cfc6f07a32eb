"""
Spectrum of a voxel object
==========================

A blocky sword on a 16^3 grid is identified with a coefficient array,
transformed, and written out as CSV.  For comparison the energy compaction
of the ordinary cubic DCT is printed alongside.
"""

import tempfile
from pathlib import Path

import numpy as np
from scipy.fft import dctn

from fccdct.spectral import skew_nodes
from fccdct.transform import build_plan, fast_apply
from fccdct.voxel_io import export_spectrum, reference_spectrum, synthetic_sword, z_transform

n = 16
sword = synthetic_sword(n)
print("occupied voxels:", int(sword.values.sum()), "of", n ** 3)

###############################################################################
# Building the n=16 plan takes a few seconds; with a PlanCache it is reused.

plan = build_plan(n)
spec = fast_apply(plan, z_transform(sword))
mag = np.sort(np.abs(spec.data))[::-1]
print("largest magnitudes:", np.round(mag[:5], 3))

###############################################################################
# Fraction of energy in the largest 10% of entries, FCC versus cubic DCT.

def top_fraction(values, frac=0.1):
    e = np.sort(np.abs(values.ravel()) ** 2)[::-1]
    return e[: int(frac * e.size)].sum() / e.sum()


cubic = reference_spectrum(sword, lambda c: dctn(c, norm="ortho"))
print(f"FCC: {top_fraction(spec.data):.3f}   cubic DCT: {top_fraction(cubic):.3f}")

with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "sword_spectrum.csv"
    export_spectrum(spec, skew_nodes(n), path)
    print(path.read_text().splitlines()[0])
    print(path.read_text().splitlines()[1])
