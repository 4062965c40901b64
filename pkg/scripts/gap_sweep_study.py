#!/usr/bin/env python3
"""Spectral-gap landscape: gap vs kernel scale for the smooth-jump family and
gap vs order for the power-law family (frequency-side), written as CSV.

Usage: python scripts/gap_sweep_study.py [outdir]
"""

import sys

import numpy as np

from fplab.grids import make_grid
from fplab.operators import DiscreteClassical, assemble
from fplab.spectra import eigen_spectrum, fourier_side_generator

outdir = sys.argv[1] if len(sys.argv) > 1 else "out/gap_sweep"
import os

os.makedirs(outdir, exist_ok=True)

rows = []
for eps in (0.8, 0.4, 0.2, 0.1):
    n = int(round(192.0 / eps)) + 1  # h = eps/8 at L = 12
    op = assemble(DiscreteClassical(eps=eps), make_grid(12.0, n))
    gap = eigen_spectrum(op).gap
    rows.append((eps, gap))
    print(f"smooth-jump eps={eps}: gap={gap:.6f}")
np.savetxt(os.path.join(outdir, "gap_vs_eps.csv"), rows, delimiter=",",
           header="eps,gap")

rows = []
for alpha in np.arange(0.4, 2.0, 0.2):
    gap = eigen_spectrum(fourier_side_generator(round(alpha, 2), 30.0, 1025)).gap
    rows.append((alpha, gap))
    print(f"power-law alpha={alpha:.1f}: gap={gap:.6f}")
np.savetxt(os.path.join(outdir, "gap_vs_alpha.csv"), rows, delimiter=",",
           header="alpha,gap")
print(f"wrote {outdir}/gap_vs_eps.csv and gap_vs_alpha.csv")
