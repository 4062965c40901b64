import numpy as np
import pytest

from fplab.kernels import (
    c_alpha,
    fourier_ratio_constant,
    gaussian_reference_kernel,
    khat,
    power_kernel_symbol_factor,
    rescale,
    symbol_constant,
    truncated_fractional_kernel,
    verify_moments,
)


K = gaussian_reference_kernel()


def test_reference_moments():
    rep = verify_moments(K)
    assert rep.zeroth_defect <= 1e-12
    assert rep.first_defect <= 1e-12
    assert rep.second_defect <= 1e-10


def test_rescale_preserves_mass_scales_second_moment():
    eps = 0.3
    keps = rescale(K, eps)
    rep = verify_moments(keps)
    assert rep.zeroth_defect <= 1e-12
    # second moment scales as eps^2 * 2
    assert abs(rep.second - 2.0 * eps**2) <= 1e-10
    with pytest.raises(ValueError):
        rescale(K, 0.0)


def test_khat_closed_form_and_at_zero():
    xi = np.linspace(0.0, 5.0, 11)
    assert np.allclose(khat(K, xi), np.exp(-(xi**2)), atol=1e-12)
    assert abs(khat(K, 0.0) - K.l1_norm) <= 1e-12


def test_khat_quadrature_matches_closed_form():
    # strip the recorded closed form and force the cosine quadrature
    import dataclasses

    kq = dataclasses.replace(K, profile_hat=None)
    xi = np.linspace(0.0, 4.0, 9)
    assert np.allclose(khat(kq, xi), np.exp(-(xi**2)), atol=1e-8)


def test_fourier_ratio_constant_gaussian():
    rc = fourier_ratio_constant(K)
    # the ratio xi^2 khat^2 / (1 - khat) for khat = e^{-xi^2} has sup 1,
    # approached as xi -> 0
    assert rc.value <= 1.0 + 1e-6
    assert rc.value >= 0.99
    assert rc.arg_max < 0.5


def test_truncated_kernel_shape_and_mass():
    alpha, eps = 1.0, 0.2
    k = truncated_fractional_kernel(alpha, eps)
    # plateau, power-law branch, support cut
    assert k(0.1) == pytest.approx(eps ** (-1 - alpha))
    assert k(0.5) == pytest.approx(0.5 ** (-1 - alpha))
    assert k(6.0) == 0.0
    z = np.linspace(-6.0, 6.0, 2_000_001)
    quad = float(np.trapezoid(k(z), z))
    assert abs(quad - k.l1_norm) / k.l1_norm <= 1e-4
    with pytest.raises(ValueError):
        truncated_fractional_kernel(2.5, 0.2)
    with pytest.raises(ValueError):
        truncated_fractional_kernel(1.0, 1.5)


def test_power_law_normalization_constants():
    # second-moment normalization: c_alpha = 2 - alpha in d = 1
    assert c_alpha(0.5) == 1.5
    assert c_alpha(1.5) == 0.5
    # symbol factor at alpha = 1 equals pi; symbol_constant is its inverse
    assert abs(power_kernel_symbol_factor(1.0) - np.pi) <= 1e-12
    assert abs(symbol_constant(1.0) - 1.0 / np.pi) <= 1e-12
    # the symbol of the raw kernel |z|^{-1-alpha}: quadrature check of
    # 2 int_0^inf (1 - cos(z)) z^{-1-alpha} dz = symbol factor
    for alpha in (0.6, 1.0, 1.4):
        z = np.linspace(1e-8, 2000.0, 4_000_001)
        val = 2.0 * np.trapezoid((1.0 - np.cos(z)) * z ** (-1.0 - alpha), z)
        assert abs(val - power_kernel_symbol_factor(alpha)) / val <= 2e-2
