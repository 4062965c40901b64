import numpy as np
import pytest

from fplab.grids import WeightSpec, gaussian_density, make_grid, mass
from fplab.operators import Classical, DiscreteClassical, Fractional, assemble
from fplab.spectra import (
    eigen_spectrum,
    eigenvalues_to_csv,
    fourier_side_generator,
    gap_sweep,
    perturbation_certificate,
    projector_distance,
    spectral_projector,
)
from fplab.splitting import ClassicalSplitting


GRID = make_grid(12.0, 513)
OP = assemble(Classical(), GRID)


def test_eigen_spectrum_classical():
    rep = eigen_spectrum(OP, k_leading=4)
    assert rep.zero_residual <= 1e-8
    assert abs(rep.gap + 1.0) <= 3e-3
    assert rep.separation_count == 1  # only 0 lies right of -0.5


def test_eigen_spectrum_csv(tmp_path):
    rep = eigen_spectrum(OP)
    path = tmp_path / "ev.csv"
    eigenvalues_to_csv(rep, str(path))
    arr = np.loadtxt(path, delimiter=",", skiprows=1)
    assert arr.shape == (8, 2)


def test_fourier_side_gaps_uniform_in_order():
    for alpha in (0.6, 1.0, 1.8):
        rep = eigen_spectrum(fourier_side_generator(alpha, 30.0, 513))
        assert -1.2 <= rep.gap <= -0.8, (alpha, rep.gap)


def test_fourier_side_validation():
    with pytest.raises(ValueError):
        fourier_side_generator(2.0)


def test_gap_sweep_pass_logic():
    rep = gap_sweep(lambda e: assemble(DiscreteClassical(eps=e), make_grid(12.0, 961)),
                    [0.4, 0.2], gap_target=-0.5, reference_gap=-1.0)
    assert rep["pass"]
    assert all(r["continuity"] <= 0.05 for r in rep["rows"])
    bad = gap_sweep(lambda e: OP, [0.1], gap_target=-1.5)
    assert not bad["pass"]


def test_gap_sweep_refine_guard():
    rep = gap_sweep(
        lambda e: assemble(DiscreteClassical(eps=e), make_grid(12.0, 961)),
        [0.4],
        gap_target=-0.5,
        refine=lambda e: assemble(DiscreteClassical(eps=e), make_grid(12.0, 1921)),
    )
    assert rep["pass"]
    assert rep["rows"][0]["refine_shift"] <= 0.05


def test_projector_rank_one_and_mean_projection():
    rep = spectral_projector(OP, radius=0.5)
    assert rep.rank == 1
    assert rep.idempotency_defect <= 1e-8
    # the rank-1 projector maps f to mass(f) * equilibrium
    G = gaussian_density(GRID)
    for width in (0.8, 1.5, 2.5, 1.0, 3.0):
        f = gaussian_density(GRID, width, 0.5)
        out = rep.projector @ f.values
        target = mass(f) * G.values
        assert np.max(np.abs(out - target)) <= 1e-6


def test_projector_rank_two_with_larger_contour():
    rep = spectral_projector(OP, radius=1.5)
    assert rep.rank == 2


def test_projector_contour_crossing_error():
    # place the contour exactly on the first nonzero eigenvalue
    gap = eigen_spectrum(OP).gap
    with pytest.raises(ValueError, match="radius"):
        spectral_projector(OP, radius=abs(gap))


def test_projector_distance_self_is_zero():
    rep = spectral_projector(OP, radius=0.5)
    assert projector_distance(rep, rep, GRID) == 0.0


def test_perturbation_certificate_smooth_family():
    g = make_grid(12.0, 961)
    zs = [0.5 * np.exp(1j * 2 * np.pi * (k + 0.5) / 4) for k in range(4)]
    rep = perturbation_certificate(
        DiscreteClassical(eps=0.2), Classical(), g,
        ClassicalSplitting(M=10.0, R=4.0), zs, probes=8,
    )
    assert rep["pass"]
    assert rep["worst_norm"] < 1.0


def test_degenerate_zero_eigenvalue_detection():
    from fplab.operators import OperatorMatrix

    g = make_grid(2.0, 5)
    # two eigenvalues of equal minimal modulus near zero
    bad = OperatorMatrix(grid=g, entries=np.diag([0.0, -1e-12, -1.0, -2.0, -3.0]))
    with pytest.raises(ArithmeticError):
        eigen_spectrum(bad)
