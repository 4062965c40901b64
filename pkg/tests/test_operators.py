import numpy as np
import pytest
import scipy.linalg as sla

from fplab.grids import Field, WeightSpec, gaussian_density, make_grid, weighted_norm
from fplab.operators import (
    Classical,
    DiscreteClassical,
    DiscreteFractional,
    Fractional,
    apply,
    assemble,
    operator_distance,
    sampled_convolution_weights,
)
from fplab.probes import probe_family
from fplab.semigroup import fourier_steady_oracle


GRID = make_grid(12.0, 513)

MODELS = [
    (Classical(), GRID),
    (DiscreteClassical(eps=0.4), GRID),
    (Fractional(alpha=1.5), GRID),
    (Fractional(alpha=1.0, constant=1.0), GRID),
    (DiscreteFractional(eps=0.2, alpha=1.0), GRID),
]


@pytest.mark.parametrize("model,grid", MODELS, ids=lambda m: getattr(m, "family", ""))
def test_mass_conservation_columns(model, grid):
    op = assemble(model, grid)
    colsum = grid.cell_sizes @ op.entries
    assert np.max(np.abs(colsum)) <= 1e-12 * np.max(np.abs(op.entries))
    assert op.conservation_defect <= 1e-12 * np.max(np.abs(op.entries))


@pytest.mark.parametrize("model,grid", MODELS, ids=lambda m: getattr(m, "family", ""))
def test_apply_zero_and_linearity(model, grid):
    op = assemble(model, grid)
    zero = apply(op, Field(grid, np.zeros(grid.n)))
    assert np.max(np.abs(zero.values)) == 0.0
    f = gaussian_density(grid)
    g = Field(grid, np.sin(grid.nodes) * np.exp(-(grid.nodes**2) / 4))
    lhs = apply(op, Field(grid, 2.0 * f.values + g.values)).values
    rhs = 2.0 * apply(op, f).values + apply(op, g).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(rhs)))


@pytest.mark.parametrize("model,grid", MODELS, ids=lambda m: getattr(m, "family", ""))
def test_even_symmetry(model, grid):
    op = assemble(model, grid)
    f = Field(grid, np.exp(-(grid.nodes**2) / 3.0))
    out = apply(op, f).values
    assert np.max(np.abs(out - out[::-1])) <= 1e-11 * max(1.0, np.max(np.abs(out)))


@pytest.mark.parametrize("model,grid", MODELS, ids=lambda m: getattr(m, "family", ""))
def test_jump_offdiagonals_nonnegative(model, grid):
    op = assemble(model, grid)
    assert op.jump_offdiag_min >= -1e-14


def test_classical_annihilates_gaussian():
    op = assemble(Classical(), GRID)
    out = apply(op, gaussian_density(GRID))
    assert weighted_norm(out, WeightSpec(p=1)) <= 1e-6


def test_classical_spectrum_integer_ladder():
    op = assemble(Classical(), GRID)
    ev = np.sort(sla.eigvals(op.entries).real)[::-1][:4]
    assert np.max(np.abs(ev - np.array([0.0, -1.0, -2.0, -3.0]))) <= 3e-3


def test_fractional_annihilates_fourier_equilibrium():
    grid = make_grid(60.0, 2049)
    model = Fractional(alpha=1.5)
    op = assemble(model, grid)
    G = fourier_steady_oracle(model, grid)
    out = apply(op, G)
    assert weighted_norm(out, WeightSpec(p=1)) <= 5e-3


def test_sampled_convolution_weights_total_mass():
    model = DiscreteClassical(eps=0.4)
    w0, w = sampled_convolution_weights(model, GRID)
    total = w0 + 2.0 * np.sum(w)
    assert abs(total - model.kernel.l1_norm) <= 1e-12


def test_resolution_guards():
    coarse = make_grid(12.0, 65)
    with pytest.raises(ValueError):
        assemble(DiscreteClassical(eps=0.4), coarse)  # needs h <= eps/8
    with pytest.raises(ValueError):
        assemble(DiscreteFractional(eps=0.2, alpha=1.0), coarse)  # h <= eps/2
    with pytest.raises(ValueError):
        DiscreteFractional(eps=0.2, alpha=2.5)
    with pytest.raises(ValueError):
        DiscreteClassical(eps=-0.1)


def test_operator_distance_identical_is_zero():
    op = assemble(Classical(), GRID)
    d = operator_distance(op, op, WeightSpec(p=2, q=1, s=3), WeightSpec(p=2, q=1),
                          probes=8)
    assert d == 0.0


def test_operator_distance_smooth_family_shrinks():
    m0 = assemble(Classical(), make_grid(12.0, 961))
    g = m0.grid
    src, tgt = WeightSpec(p=2, q=1, s=3), WeightSpec(p=2, q=1)
    d_coarse = operator_distance(assemble(DiscreteClassical(eps=0.4), g), m0,
                                 src, tgt, probes=16)
    d_fine = operator_distance(assemble(DiscreteClassical(eps=0.2), g), m0,
                               src, tgt, probes=16)
    assert d_fine < d_coarse


def test_apply_grid_mismatch():
    op = assemble(Classical(), GRID)
    other = make_grid(12.0, 515)
    with pytest.raises(ValueError):
        apply(op, Field(other, np.zeros(other.n)))


def test_mass_conserved_on_probes():
    # weighted column sums vanishing means d/dt mass = 0 for any density
    op = assemble(DiscreteFractional(eps=0.2, alpha=1.2), GRID)
    for f in probe_family(GRID, count=8, seed=3):
        rate = float(GRID.cell_sizes @ (op.entries @ f.values))
        assert abs(rate) <= 1e-10
