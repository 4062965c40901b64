"""Dense matrix discretizations of the confined diffusion generators.

Four families, all of the form  diffusion + d/dx (x f):

* Classical          : Laplacian diffusion.
* DiscreteClassical  : eps^-2 (k_eps * f - f) with a smooth rescaled kernel.
* Fractional         : compensated power-law jump integral (order alpha).
* DiscreteFractional : k_eps * f - ||k_eps||_L1 f with the plateau-truncated
                       power-law kernel, no eps^-2 prefactor.

Assembly is finite-volume on the trapezoid cells (half cells at the two
boundary nodes), so the trapezoid mass is conserved exactly.  The drift uses
an exponential-fitting interface flux that degenerates to the monotone upwind
flux when no local diffusion is available; all jump off-diagonals are >= 0,
making every full generator an M-matrix generator (positivity preserving).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
import scipy.linalg as sla

from .grids import Field, Grid1D, WeightSpec, weighted_norm
from .kernels import (
    Kernel,
    gaussian_reference_kernel,
    rescale,
    symbol_constant,
    truncated_fractional_kernel,
)
from .probes import probe_family


# ---------------------------------------------------------------------------
# model specifications


@dataclass(frozen=True)
class Classical:
    family: str = "classical"


@dataclass(frozen=True)
class DiscreteClassical:
    eps: float
    kernel: Kernel | None = None  # unrescaled smooth kernel; default Gaussian
    family: str = "discrete-classical"

    def __post_init__(self) -> None:
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.kernel is None:
            object.__setattr__(self, "kernel", gaussian_reference_kernel())
        if self.kernel.variant != "SmoothSymmetric":
            raise ValueError("DiscreteClassical requires a SmoothSymmetric kernel")


@dataclass(frozen=True)
class Fractional:
    alpha: float
    # kernel constant; None selects the exact-symbol normalization so the
    # generator's Fourier symbol is -|xi|^alpha and the Fourier steady-state
    # oracle exp(-|xi|^alpha/alpha) applies.  Use 1.0 for the raw kernel
    # |z|^(-1-alpha) (the limit of the truncated family).
    constant: float | None = None
    family: str = "fractional"

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 2.0):
            raise ValueError("alpha must be in (0,2)")
        if self.constant is None:
            object.__setattr__(self, "constant", symbol_constant(self.alpha))


@dataclass(frozen=True)
class DiscreteFractional:
    eps: float
    alpha: float
    family: str = "discrete-fractional"

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 2.0):
            raise ValueError("alpha must be in (0,2)")
        if not (0.0 < self.eps < 1.0):
            raise ValueError("eps must be in (0,1)")


ModelSpec = Union[Classical, DiscreteClassical, Fractional, DiscreteFractional]


# ---------------------------------------------------------------------------
# operator matrices


@dataclass(frozen=True)
class OperatorMatrix:
    grid: Grid1D
    entries: np.ndarray = field(repr=False)
    label: str = "full"
    conservation_defect: float = 0.0
    renorm_adjustment: float = 0.0
    jump_offdiag_min: float = 0.0

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (self.grid.n, self.grid.n):
            raise ValueError("entries shape must match grid")
        object.__setattr__(self, "entries", e)


def apply(m: OperatorMatrix, f: Field) -> Field:
    if f.grid != m.grid:
        raise ValueError("grid mismatch")
    return Field(f.grid, m.entries @ f.values)


def matrix_to_csv(m: OperatorMatrix, path: str) -> None:
    header = f"# grid L={m.grid.L} n={m.grid.n} label={m.label}"
    with open(path, "w") as fh:
        fh.write(header + "\n")
        np.savetxt(fh, m.entries, delimiter=",")


# ---------------------------------------------------------------------------
# building blocks


def _bernoulli(w: np.ndarray) -> np.ndarray:
    """B(w) = w/(e^w - 1), the exponential-fitting flux weight."""
    out = np.empty_like(w)
    small = np.abs(w) < 1e-8
    out[small] = 1.0 - 0.5 * w[small]
    ws = w[~small]
    out[~small] = ws / np.expm1(ws)
    return out


def _drift_diffusion_block(grid: Grid1D, diffusion: float) -> np.ndarray:
    """Conservative interface-flux discretization of
    diffusion * f'' + (x f)' on the trapezoid cells.

    diffusion > 0: exponential-fitting two-point flux (exact Gaussian-profile
    steady state for the Classical model); diffusion = 0: monotone upwind
    drift flux.  Zero flux through the outer interfaces."""
    n, h = grid.n, grid.h
    x = grid.nodes
    wq = grid.cell_sizes
    xm = 0.5 * (x[:-1] + x[1:])
    if diffusion > 0.0:
        w = h * xm / diffusion
        coef_left = diffusion * _bernoulli(w)        # multiplies f_i
        coef_right = diffusion * _bernoulli(-w)      # multiplies f_{i+1}
    else:
        coef_left = h * np.maximum(-xm, 0.0)
        coef_right = h * np.maximum(xm, 0.0)
    M = np.zeros((n, n))
    idx = np.arange(n - 1)
    # interface flux Phi_{i+1/2} = (coef_right f_{i+1} - coef_left f_i)/h
    # df_i/dt += Phi_{i+1/2}/wq_i ; df_{i+1}/dt -= Phi_{i+1/2}/wq_{i+1}
    np.add.at(M, (idx, idx + 1), coef_right / h / wq[idx])
    np.add.at(M, (idx, idx), -coef_left / h / wq[idx])
    np.add.at(M, (idx + 1, idx + 1), -coef_right / h / wq[idx + 1])
    np.add.at(M, (idx + 1, idx), coef_left / h / wq[idx + 1])
    return M


def _jump_block(grid: Grid1D, offset_weights: np.ndarray) -> tuple[np.ndarray, float]:
    """Toeplitz gain matrix from per-offset weights plus the censored killing
    diagonal that conserves the trapezoid-weighted mass exactly.

    offset_weights[j] is the integrated kernel mass at grid offset j >= 1.
    Returns (matrix, max weighted column-sum defect after renormalization)."""
    n = grid.n
    wq = grid.cell_sizes
    col = np.zeros(n)
    col[1:] = offset_weights[: n - 1]
    K = sla.toeplitz(col)
    np.fill_diagonal(K, 0.0)
    # boundary rows represent half cells: gains into them scale by wq_i/h
    K *= (wq / grid.h)[:, None]
    kill = (wq @ K) / wq
    M = K - np.diag(kill)
    defect = float(np.abs(wq @ M).max())
    return M, defect


def _finalize(grid: Grid1D, M: np.ndarray, label: str, jump_min: float) -> OperatorMatrix:
    """Column renormalization: zero the weighted column sums exactly and
    record the relative diagonal adjustment."""
    wq = grid.cell_sizes
    defect = wq @ M
    diag = np.diag(M).copy()
    adj = defect / wq
    scale = np.abs(diag).max()
    rel = float(np.abs(adj).max() / scale) if scale > 0 else 0.0
    M = M - np.diag(adj)
    final_defect = float(np.abs(wq @ M).max())
    return OperatorMatrix(
        grid=grid,
        entries=M,
        label=label,
        conservation_defect=final_defect,
        renorm_adjustment=rel,
        jump_offdiag_min=jump_min,
    )


def _power_cell_weights(grid: Grid1D, alpha: float, constant: float,
                        delta: float) -> np.ndarray:
    """Exact cell integrals of constant*|z|^(-1-alpha) for offsets j >= 1,
    zero inside the near-field radius delta."""
    n, h = grid.n, grid.h
    j = np.arange(1, n)
    lo = np.maximum(delta, (j - 0.5) * h)
    hi = np.maximum(delta, (j + 0.5) * h)
    return constant * (lo ** (-alpha) - hi ** (-alpha)) / alpha


def _truncated_cell_weights(grid: Grid1D, kern: Kernel) -> np.ndarray:
    """Exact cell integrals of the plateau-truncated power-law kernel."""
    alpha, eps = kern.alpha, kern.eps
    n, h = grid.n, grid.h
    j = np.arange(1, n)
    lo = (j - 0.5) * h
    hi = (j + 0.5) * h

    def antideriv(z: np.ndarray) -> np.ndarray:
        # integral of k_eps from 0 to z >= 0: plateau piece then power piece
        z = np.asarray(z, dtype=float)
        res = np.empty_like(z)
        small = z < eps
        res[small] = z[small] * eps ** (-1.0 - alpha)
        big = ~small
        zc = np.minimum(z[big], 1.0 / eps)
        res[big] = eps ** (-alpha) + (eps ** (-alpha) - zc ** (-alpha)) / alpha
        return res

    F = antideriv(np.concatenate(([0.0], hi)))
    Flo = antideriv(np.concatenate(([0.0], lo)))[1:]
    return F[1:] - Flo


def sampled_convolution_weights(model: DiscreteClassical, grid: Grid1D) -> tuple[float, np.ndarray]:
    """Per-offset quadrature weights of the rescaled smooth kernel, renormalized
    so the total offset sum equals the exact L1 norm.  Returns (w0, w[j>=1])."""
    h = grid.h
    if h > model.eps / 8.0 + 1e-12:
        raise ValueError(
            f"grid does not resolve the kernel: need h <= eps/8 = {model.eps / 8.0:.6g}, got h = {h:.6g}"
        )
    keps = rescale(model.kernel, model.eps)
    j = np.arange(1, grid.n)
    w = h * np.asarray(keps(j * h), dtype=float)
    w0 = h * float(keps(0.0))
    scale = keps.l1_norm / (w0 + 2.0 * w.sum())
    return w0 * scale, w * scale


def assemble(model: ModelSpec, grid: Grid1D) -> OperatorMatrix:
    """Assemble the dense generator matrix for a model on a grid."""
    h = grid.h
    if isinstance(model, Classical):
        M = _drift_diffusion_block(grid, diffusion=1.0)
        return _finalize(grid, M, "full:classical", jump_min=0.0)

    if isinstance(model, DiscreteClassical):
        w0, w = sampled_convolution_weights(model, grid)
        J, _ = _jump_block(grid, w)
        M = J / model.eps**2 + _drift_diffusion_block(grid, diffusion=0.0)
        return _finalize(grid, M, "full:discrete-classical", jump_min=float(w.min()))

    if isinstance(model, Fractional):
        delta = 2.0 * h
        c = float(model.constant)
        # near field: |z| <= delta collapses to a local diffusion by the
        # second-order Taylor step; combined with the drift in one
        # exponential-fitting flux block
        near_diffusion = c * delta ** (2.0 - model.alpha) / (2.0 - model.alpha)
        w = _power_cell_weights(grid, model.alpha, c, delta)
        J, _ = _jump_block(grid, w)
        M = J + _drift_diffusion_block(grid, diffusion=near_diffusion)
        return _finalize(grid, M, "full:fractional", jump_min=float(w.min()))

    if isinstance(model, DiscreteFractional):
        if h > model.eps / 2.0 + 1e-12:
            raise ValueError(
                f"grid does not resolve the plateau: need h <= eps/2 = {model.eps / 2.0:.6g}, got h = {h:.6g}"
            )
        kern = truncated_fractional_kernel(model.alpha, model.eps)
        w = _truncated_cell_weights(grid, kern)
        J, _ = _jump_block(grid, w)
        M = J + _drift_diffusion_block(grid, diffusion=0.0)
        return _finalize(grid, M, "full:discrete-fractional", jump_min=float(w.min()))

    raise TypeError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# probe-based operator distance


def operator_distance(
    m1: OperatorMatrix,
    m2: OperatorMatrix,
    source: WeightSpec,
    target: WeightSpec,
    probes: int = 64,
    seed: int = 0,
    oscillatory: int = 0,
) -> float:
    """max over seeded smooth probes of ||(M1-M2) f||_target / ||f||_source.

    A lower-bound proxy for the induced operator norm, used for convergence
    slopes.  ``oscillatory`` adds modulated probes whose frequency content
    saturates norms between Sobolev spaces of different orders."""
    if m1.grid != m2.grid:
        raise ValueError("same grid required")
    diff = m1.entries - m2.entries
    best = 0.0
    for f in probe_family(m1.grid, count=probes, seed=seed, oscillatory=oscillatory):
        num = weighted_norm(Field(m1.grid, diff @ f.values), target)
        den = weighted_norm(f, source)
        if den > 0:
            best = max(best, num / den)
    return best
