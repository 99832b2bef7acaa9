import cmath
import math

import numpy as np
import pytest

from jcsim.analytics import (
    dressed_state,
    effective_rates,
    g1_weak_drive,
    g2_forward_zero_delay,
    g2_pure_state,
    g2_weak_drive,
    maxwell_bloch_amplitude,
    neoclassical_curve,
    pure_state_g2_params,
    resonance_fluorescence_ref,
    spectrum_weak_drive,
    squeezing_parameters,
    squeezing_variance,
    wtd_resonance_fluorescence,
)
from jcsim.params import from_ratios


def test_squeezing_parameters_frozen(weak_params):
    squeeze = squeezing_parameters(weak_params)
    # r = -(1/4) ln(1 - (2*0.05)^2), evaluated independently.
    assert squeeze.r == pytest.approx(0.002512583963375361, rel=1e-14)
    assert squeeze.r_approx == pytest.approx(0.0025, rel=1e-12)
    # drive phase pi/2: eta = -r e^{i pi} = +r
    assert squeeze.eta == pytest.approx(complex(squeeze.r), abs=1e-15)


def test_squeezing_critical_point(weak_params):
    for ratio in (0.5, 0.75):
        with pytest.raises(ValueError, match="critical point"):
            squeezing_parameters(weak_params.replace(drive=ratio * weak_params.g))
    squeeze = squeezing_parameters(weak_params.replace(drive=0.49 * weak_params.g))
    assert squeeze.r > 0.8


def test_quasienergies_frozen(weak_params):
    first = dressed_state(1, "U", weak_params)
    assert first.quasienergy == pytest.approx(0.992490585716335, rel=1e-14)
    second = dressed_state(2, "U", weak_params)
    assert second.quasienergy == pytest.approx(1.4035936468476577, rel=1e-14)
    # Matches the rounded reference value 1.4035934 to its printed digits.
    assert second.quasienergy == pytest.approx(1.4035934, abs=5e-7)
    assert dressed_state(2, "L", weak_params).quasienergy == pytest.approx(
        -second.quasienergy, rel=1e-14
    )
    assert dressed_state(0, "G", weak_params).quasienergy == 0.0


def test_dressed_state_displacement(weak_params):
    first = dressed_state(1, "U", weak_params)
    # -e^{i pi/2} q e^{4r} sqrt(1 - e^{-4r}) at q = e^{-3r}, frozen.
    assert first.displacement == pytest.approx(
        -0.10025157431478132j, abs=1e-12
    )
    mirrored = dressed_state(1, "L", weak_params)
    assert mirrored.displacement == pytest.approx(-first.displacement, abs=1e-12)


def test_dressed_state_atomic_mixing(weak_params):
    state = dressed_state(1, "U", weak_params)
    for pair in (state.atomic_mix_lower, state.atomic_mix_upper):
        assert abs(pair[0]) ** 2 + abs(pair[1]) ** 2 == pytest.approx(1.0, rel=1e-12)
    # The squeezing admixture is small at this drive.
    assert abs(state.atomic_mix_lower[1]) < 0.1


def test_weak_drive_amplitudes(weak_params):
    ratio = weak_params.drive / weak_params.g  # 0.05j at this preset
    ground = dressed_state(0, "G", weak_params)
    amplitudes = dict(
        ((atom, n), value) for atom, n, value in ground.weak_drive_amplitudes
    )
    assert amplitudes[(1, 0)] == pytest.approx(1.0, abs=1e-15)
    assert amplitudes[(2, 0)] == pytest.approx(1j * ratio, abs=1e-15)
    assert amplitudes[(1, 2)] == pytest.approx(ratio**2 / math.sqrt(2.0), abs=1e-15)
    upper = dressed_state(1, "U", weak_params)
    amplitudes = dict(
        ((atom, n), value) for atom, n, value in upper.weak_drive_amplitudes
    )
    assert amplitudes[(2, 0)] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)
    assert amplitudes[(1, 1)] == pytest.approx(1j / math.sqrt(2.0), abs=1e-15)
    assert amplitudes[(1, 0)] == pytest.approx(
        1j * np.conj(ratio) / math.sqrt(2.0), abs=1e-15
    )
    assert dressed_state(2, "U", weak_params).weak_drive_amplitudes is None


def test_dressed_state_argument_guards(weak_params):
    with pytest.raises(ValueError):
        dressed_state(1, "G", weak_params)
    with pytest.raises(ValueError):
        dressed_state(0, "U", weak_params)
    with pytest.raises(ValueError):
        dressed_state(1, "X", weak_params)


def test_effective_rates_values(weak_params):
    rates = effective_rates(weak_params)
    total = weak_params.kappa + weak_params.gamma / 2.0
    ratio = weak_params.drive_ratio
    assert rates.gamma_GG == pytest.approx(weak_params.gamma * ratio**2, rel=1e-12)
    assert rates.gamma_G_1U == pytest.approx(total * ratio**4, rel=1e-12)
    assert rates.gamma_G_1L == rates.gamma_G_1U
    assert rates.gamma_1U_G == pytest.approx(total, rel=1e-12)
    assert rates.gamma_1L_G == pytest.approx(total, rel=1e-12)
    assert rates.K1[("G", "1U")] == pytest.approx(
        -(weak_params.gamma / 2.0) * ratio**2, rel=1e-12
    )
    complex_ratio = weak_params.drive / weak_params.g
    assert rates.K2[("G", "1U")] == pytest.approx(
        total * np.conj(complex_ratio) ** 2, abs=1e-15
    )
    assert rates.K2[("1U", "G")] == pytest.approx(total * complex_ratio**2, abs=1e-15)
    assert rates.reduced_populations == {
        "G": 1.0,
        "1U": pytest.approx(ratio**4, rel=1e-12),
        "1L": pytest.approx(ratio**4, rel=1e-12),
    }
    assert rates.flags == ()


def test_effective_rates_scaling_and_regime(weak_params):
    base = effective_rates(weak_params)
    doubled = effective_rates(weak_params.replace(drive=2.0 * weak_params.drive))
    assert doubled.gamma_GG == pytest.approx(4.0 * base.gamma_GG, rel=1e-12)
    assert doubled.gamma_G_1U == pytest.approx(16.0 * base.gamma_G_1U, rel=1e-12)
    assert doubled.gamma_1U_G == base.gamma_1U_G
    strong = effective_rates(weak_params.replace(drive=0.3 * weak_params.g))
    assert strong.flags == ("regime",)


def test_squeezing_variance_minimum(weak_params):
    phase = cmath.phase(weak_params.drive)
    thetas = np.linspace(0.0, np.pi, 721)
    values = np.array([squeezing_variance(weak_params, t) for t in thetas])
    best = thetas[np.argmin(values)]
    assert abs(best - (phase + np.pi / 2.0) % np.pi) < 0.01
    assert values.min() == pytest.approx(-0.5 * 0.05**2, rel=1e-6)
    # -r/2 to leading order
    assert values.min() == pytest.approx(
        -squeezing_parameters(weak_params).r / 2.0, rel=0.01
    )
    assert squeezing_variance(weak_params, phase) == pytest.approx(
        0.5 * 0.05**2, rel=1e-12
    )


def test_g1_weak_drive_limits(weak_params):
    ratio = weak_params.drive_ratio
    start = g1_weak_drive(weak_params, 0.0)
    assert start == pytest.approx(ratio**2 + 2.0 * ratio**4, rel=1e-12)
    tail = g1_weak_drive(weak_params, 50.0)
    assert tail == pytest.approx(ratio**2, rel=1e-9)
    values = g1_weak_drive(weak_params, np.linspace(0.0, 1.0, 64))
    assert values.dtype == complex
    assert np.max(np.abs(values.imag)) == 0.0


def test_spectrum_weak_drive_shape(weak_params):
    ratio = weak_params.drive_ratio
    width = (weak_params.kappa + weak_params.gamma / 2.0) / 2.0
    omegas = np.linspace(-160.0, 160.0, 64001)
    density, weight = spectrum_weak_drive(weak_params, omegas)
    assert weight == pytest.approx(ratio**2, rel=1e-12)
    peaks = omegas[np.argsort(density)[-2:]]
    assert sorted(np.round(np.abs(peaks), 1)) == [100.0, 100.0]
    # Each squared Lorentzian integrates to (pi/2) width, so the incoherent
    # weight is 2 (|drive|/g)^4.
    assert np.trapezoid(density, omegas) == pytest.approx(
        2.0 * ratio**4, rel=1e-3
    )
    assert density[omegas == 0.0][0] < density.max() * 1e-5
    assert width == pytest.approx(1.0)


def test_g2_weak_drive_frozen(weak_params):
    assert g2_weak_drive(weak_params, 0.0) == pytest.approx(0.0, abs=1e-12)
    # Value at the first Rabi half-period g tau = pi, frozen independently.
    assert g2_weak_drive(weak_params, np.pi / weak_params.g) == pytest.approx(
        3.877246220033914, rel=1e-12
    )
    assert g2_weak_drive(weak_params, 40.0) == pytest.approx(1.0, rel=1e-8)


def test_g2_weak_drive_ignores_drive_strength(weak_params):
    taus = np.linspace(0.0, 0.5, 101)
    reference = g2_weak_drive(weak_params, taus)
    harder = g2_weak_drive(weak_params.replace(drive=5.0 * weak_params.drive), taus)
    np.testing.assert_allclose(harder, reference, atol=0)


def test_pure_state_g2_params(weak_params):
    derived = pure_state_g2_params(weak_params)
    # kappa = gamma/2 at this preset, so g' = g exactly.
    assert derived.g_prime == weak_params.g
    assert derived.C1 == pytest.approx(5000.0, rel=1e-12)
    assert derived.gamma_prime == pytest.approx(20002.0, rel=1e-12)
    assert not derived.overdamped
    heavy = pure_state_g2_params(weak_params.replace(g=1.0, gamma=8.0))
    assert heavy.overdamped
    assert heavy.g_prime == pytest.approx(math.sqrt(1.25), rel=1e-12)


def test_g2_pure_state_limits(weak_params):
    assert g2_pure_state(weak_params, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert g2_pure_state(weak_params, 40.0) == pytest.approx(1.0, rel=1e-8)


def test_g2_pure_state_continuous_at_critical_damping():
    # gamma = 8, kappa = 1 puts the critical point at g = 1.5.
    tau = np.linspace(0.0, 1.0, 11)
    under = g2_pure_state(
        from_ratios(1.5 + 1e-9, 4.0, 0.1, n_max=2), tau
    )
    over = g2_pure_state(from_ratios(1.5 - 1e-9, 4.0, 0.1, n_max=2), tau)
    np.testing.assert_allclose(under, over, atol=1e-6)


def test_forward_bunching_estimate(weak_params):
    assert g2_forward_zero_delay(weak_params) == pytest.approx(40000.0, rel=1e-12)
    with pytest.raises(ValueError, match="zero drive"):
        g2_forward_zero_delay(weak_params.replace(drive=0.0))


def test_resonance_fluorescence_ref_construction(weak_params):
    with pytest.raises(ValueError, match="exactly one"):
        resonance_fluorescence_ref(weak_params)
    with pytest.raises(ValueError, match="exactly one"):
        resonance_fluorescence_ref(weak_params, a_ss=0.1, Y=0.1)
    with pytest.raises(ValueError, match="gamma"):
        resonance_fluorescence_ref(weak_params.replace(gamma=0.0), Y=0.1)
    from_amplitude = resonance_fluorescence_ref(weak_params, a_ss=1e-3j)
    expected_y = 2.0 * math.sqrt(2.0) * weak_params.g * 1e-3 / weak_params.gamma
    assert from_amplitude.Y == pytest.approx(expected_y, rel=1e-12)
    from_y = resonance_fluorescence_ref(weak_params, Y=0.07)
    assert abs(from_y.drive_eff) == pytest.approx(
        weak_params.gamma * 0.07 / (2.0 * math.sqrt(2.0)), rel=1e-12
    )
    assert from_y.tau_av == pytest.approx(
        2.0 * (1.0 + 0.07**2) / (weak_params.gamma * 0.07**2), rel=1e-12
    )


def test_wtd_reference_normalization_and_mean():
    gamma = 2.0
    ref = resonance_fluorescence_ref(
        from_ratios(10.0, 1.0, 0.1, n_max=2), Y=0.5
    )
    taus = np.linspace(0.0, 100.0, 200001)
    w = wtd_resonance_fluorescence(ref, gamma, taus)
    assert w[0] == 0.0
    assert np.all(w >= 0.0)
    assert np.trapezoid(w, taus) == pytest.approx(1.0, abs=1e-6)
    # The stated mean 2(1+Y^2)/(gamma Y^2) is the exact first moment; at
    # Y = 0.5, gamma = 2 that is 5.
    assert ref.tau_av == pytest.approx(5.0, rel=1e-12)
    assert np.trapezoid(w * taus, taus) == pytest.approx(ref.tau_av, abs=1e-4)


def test_wtd_reference_continuous_across_oscillatory_threshold():
    params = from_ratios(10.0, 1.0, 0.1, n_max=2)
    taus = np.linspace(0.0, 20.0, 101)
    edge = 1.0 / math.sqrt(2.0)
    below = wtd_resonance_fluorescence(
        resonance_fluorescence_ref(params, Y=edge - 1e-5), params.gamma, taus
    )
    exact = wtd_resonance_fluorescence(
        resonance_fluorescence_ref(params, Y=edge), params.gamma, taus
    )
    above = wtd_resonance_fluorescence(
        resonance_fluorescence_ref(params, Y=edge + 1e-5), params.gamma, taus
    )
    np.testing.assert_allclose(below, exact, atol=1e-4)
    np.testing.assert_allclose(above, exact, atol=1e-4)


def test_neoclassical_curve_below_threshold():
    params = from_ratios(10.0, 1.0, 0.4, n_max=2)  # |drive| < g/2
    np.testing.assert_allclose(neoclassical_curve(params), [[0.0, 0.0]])


def test_neoclassical_curve_geometry():
    params = from_ratios(50.0 / 3.0, 1.0, 0.6, n_max=2)  # the fig5 numbers
    curve = neoclassical_curve(params, n_points=400)
    assert curve.shape == (800, 2)
    np.testing.assert_allclose(curve[0], [0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(curve[-1], [0.0, 0.0], atol=1e-12)
    assert curve[:, 0].max() == pytest.approx(3.0555555555555545, rel=1e-12)
    assert curve[:, 1].max() == pytest.approx(4.606423319938055, rel=1e-12)
    assert curve[:, 1].min() == pytest.approx(-4.606423319938055, rel=1e-12)
    # Mirror symmetric about the real axis.
    np.testing.assert_allclose(
        np.sort(curve[:, 1]), np.sort(-curve[:, 1]), atol=1e-12
    )
    assert np.all(np.abs(curve[:, 1]) <= params.g / 2.0 / params.kappa + 1e-12)


def test_maxwell_bloch_amplitude(weak_params):
    assert maxwell_bloch_amplitude(weak_params) == pytest.approx(5.0, rel=1e-12)
