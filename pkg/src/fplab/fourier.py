"""FFT with continuum normalization: fhat(xi) = int f(x) e^{-i x xi} dx."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .grids import Field, Grid1D


@dataclass(frozen=True)
class SpectralField:
    """Continuum-normalized Fourier data on an fftfreq-ordered xi grid."""

    xi_nodes: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    # carried so inverse_fourier can reconstruct the physical grid
    grid: Grid1D | None = None

    def __post_init__(self) -> None:
        xi = np.asarray(self.xi_nodes, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if xi.shape != v.shape:
            raise ValueError("xi_nodes and values must have equal length")
        object.__setattr__(self, "xi_nodes", xi)
        object.__setattr__(self, "values", v)


def _padded_size(n: int) -> int:
    # generous zero padding: at least 4x for clean linear convolutions downstream
    target = 4 * n
    size = 1
    while size < target:
        size *= 2
    return size


def fourier_transform(f: Field) -> SpectralField:
    """Forward transform with trapezoid-consistent weights and x_min phase shift."""
    grid = f.grid
    h = grid.h
    npad = _padded_size(grid.n)
    buf = np.zeros(npad)
    buf[: grid.n] = f.values
    xi = 2.0 * np.pi * np.fft.fftfreq(npad, d=h)
    # samples buf[j] live at x = x_min + j h
    fhat = h * np.fft.fft(buf) * np.exp(-1j * xi * (-grid.L))
    return SpectralField(xi_nodes=xi, values=fhat, grid=grid)


def inverse_fourier(g: SpectralField) -> Field:
    if g.grid is None:
        raise ValueError("spectral field lacks physical grid metadata")
    grid = g.grid
    h = grid.h
    npad = g.xi_nodes.size
    buf = np.fft.ifft(g.values * np.exp(1j * g.xi_nodes * (-grid.L))) / h
    return Field(grid, np.real(buf[: grid.n]))


def spectral_quadrature_weight(g: SpectralField) -> float:
    """d(xi) spacing of the spectral grid."""
    return float(abs(g.xi_nodes[1] - g.xi_nodes[0]))


def plancherel_l2(g: SpectralField) -> float:
    """||f||_{L^2} computed on the spectral side: (1/2pi) int |fhat|^2 dxi."""
    dxi = spectral_quadrature_weight(g)
    return float(np.sqrt(np.sum(np.abs(g.values) ** 2) * dxi / (2.0 * np.pi)))


def spectral_to_csv(g: SpectralField, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["xi", "re", "im"])
        for xi, v in zip(g.xi_nodes, g.values):
            writer.writerow([repr(float(xi)), repr(float(v.real)), repr(float(v.imag))])
