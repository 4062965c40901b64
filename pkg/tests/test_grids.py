import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fplab.grids import (
    Field,
    Grid1D,
    WeightSpec,
    field_from_csv,
    field_to_csv,
    gaussian_density,
    make_grid,
    mass,
    weighted_norm,
)


GRID = make_grid(12.0, 513)


def test_grid_validation():
    with pytest.raises(ValueError):
        make_grid(-1.0, 513)
    with pytest.raises(ValueError):
        make_grid(12.0, 512)  # even node count
    with pytest.raises(ValueError):
        make_grid(12.0, 1)


def test_grid_geometry():
    g = make_grid(2.0, 5)
    assert g.h == 1.0
    assert np.allclose(g.nodes, [-2, -1, 0, 1, 2])
    assert np.allclose(g.cell_sizes, [0.5, 1, 1, 1, 0.5])
    assert 0.0 in g.nodes


def test_mass_zero_field():
    assert mass(Field(GRID, np.zeros(GRID.n))) == 0.0


def test_mass_box():
    # indicator of [-1, 1] aligned with the grid: integral 2 up to one cell
    v = (np.abs(GRID.nodes) <= 1.0).astype(float)
    assert abs(mass(Field(GRID, v)) - 2.0) <= GRID.h


def test_mass_exact_for_piecewise_linear():
    # trapezoid quadrature integrates hat functions with kinks on nodes exactly
    v = np.maximum(0.0, 1.0 - np.abs(GRID.nodes) / 6.0)  # kinks at 0, +-6 (nodes)
    assert abs(mass(Field(GRID, v)) - 6.0) <= 1e-12


def test_weighted_norm_gaussian_l1():
    f = gaussian_density(GRID)
    assert abs(weighted_norm(f, WeightSpec(p=1)) - 1.0) <= 1e-10


def test_weighted_norm_gaussian_l2():
    # closed form: the squared L2 norm of the standard normal density
    # is 1/(2 sqrt(pi))
    f = gaussian_density(GRID)
    target = (1.0 / (2.0 * np.sqrt(np.pi))) ** 0.5
    assert abs(weighted_norm(f, WeightSpec(p=2)) - target) <= 1e-8
    assert abs(target - 0.531126) <= 1e-6


def test_weighted_norm_gaussian_weighted_l1_quadrature_oracle():
    from scipy.integrate import quad

    f = gaussian_density(GRID)
    oracle, _ = quad(
        lambda x: np.sqrt(1 + x * x) * np.exp(-x * x / 2) / np.sqrt(2 * np.pi),
        -12.0, 12.0,
    )
    assert abs(weighted_norm(f, WeightSpec(p=1, q=1)) - oracle) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(st.floats(-50, 50), st.integers(0, 6))
def test_norm_absolute_homogeneity(c, order):
    v = np.exp(-GRID.nodes**2 / 2.0) * GRID.nodes**order
    f = Field(GRID, v)
    g = Field(GRID, c * v)
    for w in (WeightSpec(p=1), WeightSpec(p=2, q=1), WeightSpec(p=2, q=0, s=2)):
        assert abs(weighted_norm(g, w) - abs(c) * weighted_norm(f, w)) <= 1e-12 * (
            1.0 + abs(c) * weighted_norm(f, w)
        )


def test_field_validation():
    with pytest.raises(ValueError):
        Field(GRID, np.zeros(GRID.n - 1))
    with pytest.raises(ValueError):
        Field(GRID, np.full(GRID.n, np.nan))


def test_field_arithmetic_grid_mismatch():
    f = Field(GRID, np.zeros(GRID.n))
    g2 = make_grid(12.0, 515)
    with pytest.raises(ValueError):
        f + Field(g2, np.zeros(g2.n))


def test_weightspec_validation():
    with pytest.raises(ValueError):
        WeightSpec(p=3)
    with pytest.raises(ValueError):
        WeightSpec(p=2, q=-1.0)
    with pytest.raises(ValueError):
        WeightSpec(p=2, q=0, s=4)


def test_csv_roundtrip(tmp_path):
    f = gaussian_density(GRID)
    path = tmp_path / "f.csv"
    field_to_csv(f, str(path))
    g = field_from_csv(str(path))
    assert g.grid == GRID
    assert np.array_equal(g.values, f.values)
