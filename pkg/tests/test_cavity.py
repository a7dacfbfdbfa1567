import numpy as np
import pytest

from spincavity.cavity import (
    IDEAL,
    CavityParams,
    ScatterCoefficients,
    coefficients,
    cold_coefficients,
    hot_coefficients,
    scatter_operator,
    sz_of_mode,
)


def test_hot_equals_cold_at_zero_coupling():
    p = CavityParams(g=0.0, kappa_s=0.0, gamma=0.1)
    r, t = hot_coefficients(p)
    r0, t0 = cold_coefficients(p)
    assert r == pytest.approx(r0, abs=1e-15)
    assert t == pytest.approx(t0, abs=1e-15)


def test_hot_resonant_values_g1():
    # a = gamma/2 = 0.05, resonance: r = 1/1.05, t = -0.05/1.05
    p = CavityParams(g=1.0, kappa_s=0.0, gamma=0.1)
    r, t = hot_coefficients(p)
    assert r == pytest.approx(1.0 / 1.05, abs=1e-12)
    assert t == pytest.approx(-0.05 / 1.05, abs=1e-12)


def test_hot_resonant_values_g_half():
    # numerator 0.25, denominator 0.05 + 0.25 = 0.30
    p = CavityParams(g=0.5, kappa_s=0.0, gamma=0.1)
    r, t = hot_coefficients(p)
    assert r == pytest.approx(0.25 / 0.30, abs=1e-12)
    assert t == pytest.approx(-0.05 / 0.30, abs=1e-12)


def test_cold_resonant_lossless_is_ideal():
    p = CavityParams(g=1.0, kappa_s=0.0)
    r0, t0 = cold_coefficients(p)
    assert r0 == pytest.approx(0.0, abs=1e-15)
    assert t0 == pytest.approx(-1.0, abs=1e-15)


def test_cold_resonant_with_leakage():
    p = CavityParams(g=1.0, kappa_s=0.05)
    r0, t0 = cold_coefficients(p)
    assert r0 == pytest.approx(0.025 / 1.025, abs=1e-12)
    assert t0 == pytest.approx(-1.0 / 1.025, abs=1e-12)


def test_cold_detuned_energy_conservation():
    p = CavityParams(g=1.0, kappa_s=0.0, omega_minus_omega0=-1.0)
    r0, t0 = cold_coefficients(p)
    assert abs(r0) ** 2 + abs(t0) ** 2 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("detuning", np.linspace(-5.0, 5.0, 101))
def test_energy_conservation_grid(detuning):
    cold = CavityParams(g=1.0, kappa_s=0.0, omega_minus_omega0=detuning)
    r0, t0 = cold_coefficients(cold)
    assert abs(r0) ** 2 + abs(t0) ** 2 == pytest.approx(1.0, abs=1e-12)
    hot = CavityParams(g=1.0, kappa_s=0.0, gamma=0.0, omega_minus_omega0=detuning)
    r, t = hot_coefficients(hot)
    assert abs(r) ** 2 + abs(t) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_ideal_limit_convergence_in_g():
    g_grid = np.arange(0.1, 2.51, 0.1)
    r_errors, t_mags = [], []
    for g in g_grid:
        r, t = hot_coefficients(CavityParams(g=float(g), kappa_s=0.0, gamma=0.1))
        r_errors.append(abs(r - 1.0))
        t_mags.append(abs(t))
    assert all(b < a for a, b in zip(r_errors, r_errors[1:]))
    assert all(b < a for a, b in zip(t_mags, t_mags[1:]))
    r, t = hot_coefficients(CavityParams(g=100.0, kappa_s=0.0, gamma=0.1))
    assert abs(r - 1.0) < 1e-3
    assert abs(t) < 1e-3


def test_g_zero_reduction_exact_over_grid():
    for ks in (0.0, 0.05, 0.3):
        for dt in (-1.5, 0.0, 0.7):
            p = CavityParams(g=0.0, kappa_s=ks, gamma=0.1, omega_minus_omega0=dt)
            r, t = hot_coefficients(p)
            r0, t0 = cold_coefficients(p)
            assert abs(r - r0) < 1e-15
            assert abs(t - t0) < 1e-15


def test_singular_parameters_raise():
    with pytest.raises(ValueError, match="singular"):
        hot_coefficients(CavityParams(g=0.0, kappa_s=0.0, gamma=0.0))


def test_params_reject_negative_rates():
    with pytest.raises(ValueError, match="non-negative"):
        CavityParams(g=-1.0)


def test_sz_of_mode():
    assert sz_of_mode("R", "up") == 1
    assert sz_of_mode("L", "down") == 1
    assert sz_of_mode("L", "up") == -1
    assert sz_of_mode("R", "down") == -1
    with pytest.raises(ValueError):
        sz_of_mode("H", "up")


def _basis_index(pol, dir, spin):
    return pol * 4 + dir * 2 + spin


IDEAL_RULES = [
    # (pol_in, dir_in, spin, pol_out, dir_out, sign)
    (0, 0, 0, 1, 1, +1),
    (1, 0, 0, 1, 0, -1),
    (0, 1, 0, 0, 1, -1),
    (1, 1, 0, 0, 0, +1),
    (0, 0, 1, 0, 0, -1),
    (1, 0, 1, 0, 1, +1),
    (0, 1, 1, 1, 0, +1),
    (1, 1, 1, 1, 1, -1),
]


@pytest.mark.parametrize("rule", IDEAL_RULES)
def test_ideal_scatter_rule(rule):
    pol, dir, spn, pol_out, dir_out, sign = rule
    m = scatter_operator(IDEAL).matrix
    column = m[:, _basis_index(pol, dir, spn)]
    expected = np.zeros(8)
    expected[_basis_index(pol_out, dir_out, spn)] = sign
    np.testing.assert_allclose(column, expected, atol=1e-15)


def test_ideal_scatter_is_unitary_and_squares_to_signs():
    op = scatter_operator(IDEAL)
    assert op.is_unitary()
    square = op.matrix @ op.matrix
    assert np.allclose(np.abs(np.diag(square)), 1.0, atol=1e-12)
    np.testing.assert_allclose(square, np.diag(np.diag(square)), atol=1e-12)


def test_lossy_scatter_example():
    c = coefficients(CavityParams(g=1.0, kappa_s=0.0, gamma=0.1))
    m = scatter_operator(c).matrix
    column = m[:, _basis_index(0, 0, 0)]  # photon R moving up, spin up
    expected = np.zeros(8, dtype=complex)
    expected[_basis_index(1, 1, 0)] = 1.0 / 1.05       # reflected into L moving down
    expected[_basis_index(0, 0, 0)] = -0.05 / 1.05     # leaked through unchanged
    np.testing.assert_allclose(column, expected, atol=1e-9)


def test_lossy_scatter_singular_values_bounded():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        p = CavityParams(
            g=rng.uniform(0.0, 3.0),
            kappa_s=rng.uniform(0.0, 0.5),
            gamma=rng.uniform(0.0, 0.5),
            omega_minus_omega0=rng.uniform(-2.0, 2.0),
        )
        sv = np.linalg.svd(scatter_operator(coefficients(p)).matrix, compute_uv=False)
        assert sv.max() <= 1.0 + 1e-9


def test_scatter_preserves_photon_angular_momentum():
    # modes with sz=+1: (R,up), (L,down); with sz=-1: (L,up), (R,down)
    plus = [_basis_index(0, 0, s) for s in (0, 1)] + [_basis_index(1, 1, s) for s in (0, 1)]
    minus = [_basis_index(1, 0, s) for s in (0, 1)] + [_basis_index(0, 1, s) for s in (0, 1)]
    rng = np.random.default_rng(31)
    for _ in range(50):
        p = CavityParams(
            g=rng.uniform(0.0, 3.0),
            kappa_s=rng.uniform(0.0, 0.5),
            gamma=rng.uniform(0.0, 0.5),
            omega_minus_omega0=rng.uniform(-2.0, 2.0),
        )
        m = scatter_operator(coefficients(p)).matrix
        assert np.all(m[np.ix_(plus, minus)] == 0)
        assert np.all(m[np.ix_(minus, plus)] == 0)


def test_coefficients_invariant_enforced():
    with pytest.raises(ValueError, match="exceeds unit probability"):
        ScatterCoefficients(1.0, 1.0, 0.0, -1.0)
