import numpy as np
import pytest

import oracles
from jcsim.correlations import (
    default_omega_grid,
    default_tau_grid,
    first_order_correlation,
    intensity_correlation,
    optical_spectrum,
    waiting_time_distribution,
)
from jcsim.liouvillian import build_liouvillian
from jcsim.operators import build_operator_set, expectation
from jcsim.dynamics import steady_state


def test_default_tau_grid_policy(tiny8_params):
    taus = default_tau_grid(tiny8_params)
    spacing = 2.0 * np.pi / tiny8_params.g / 20.0
    assert taus[0] == 0.0
    np.testing.assert_allclose(np.diff(taus), spacing, rtol=1e-12)
    # Default horizon: ten polariton lifetimes.
    gamma2 = tiny8_params.kappa + tiny8_params.gamma / 2.0
    assert taus[-1] >= 10.0 / gamma2
    assert taus[-1] < 10.0 / gamma2 + 2.0 * spacing
    custom = default_tau_grid(tiny8_params, horizon=2.0)
    assert custom[-1] >= 2.0
    assert custom[-1] < 2.0 + 2.0 * spacing


def test_default_omega_grid_policy(tiny8_params):
    omegas = default_omega_grid(tiny8_params)
    assert 0.0 in omegas
    np.testing.assert_allclose(omegas, -omegas[::-1], atol=0)
    gamma2 = tiny8_params.kappa + tiny8_params.gamma / 2.0
    np.testing.assert_allclose(np.diff(omegas), 2.0 * np.pi * gamma2 / 10.0)
    assert omegas[-1] >= tiny8_params.g + 10.0 * gamma2
    with pytest.raises(ValueError, match="spacing"):
        default_omega_grid(tiny8_params, spacing=0.0)


def test_g1_starts_at_channel_population(tiny8_params):
    trace = first_order_correlation(tiny8_params)
    assert trace.kind == "g1"
    assert trace.channel == "side"
    assert trace.values[0].real == pytest.approx(trace.normalization, rel=1e-10)
    assert abs(trace.values[0].imag) < 1e-12
    ops = build_operator_set(tiny8_params)
    rho_ss = steady_state(build_liouvillian(tiny8_params, ops))
    assert trace.normalization == pytest.approx(
        expectation(ops.sp_sm, rho_ss, hermitian=True), rel=1e-9
    )


def test_g1_reaches_coherent_plateau(tiny8_params):
    trace = first_order_correlation(tiny8_params)
    ops = build_operator_set(tiny8_params)
    rho_ss = steady_state(build_liouvillian(tiny8_params, ops))
    assert trace.plateau == pytest.approx(
        abs(expectation(ops.sm, rho_ss)) ** 2, rel=1e-9
    )
    assert abs(trace.values[-1] - trace.plateau) < 1e-2 * trace.plateau


def test_g1_forward_channel(tiny8_params):
    trace = first_order_correlation(tiny8_params, channel="forward")
    assert trace.channel == "forward"
    ops = build_operator_set(tiny8_params)
    rho_ss = steady_state(build_liouvillian(tiny8_params, ops))
    assert trace.values[0].real == pytest.approx(
        expectation(ops.n_phot, rho_ss, hermitian=True), rel=1e-9
    )
    assert trace.plateau == pytest.approx(
        abs(expectation(ops.a, rho_ss)) ** 2, rel=1e-9
    )


def test_g2_basic_shape(tiny8_params):
    trace = intensity_correlation(tiny8_params)
    assert trace.kind == "g2"
    # One side-channel detection empties the two-state atom.
    assert trace.values[0] == pytest.approx(0.0, abs=1e-12)
    # The Rabi transient is gone at the default horizon; what remains is the
    # percent-level metastable tail relaxing at roughly gamma (drive/g)^2.
    assert abs(trace.values[-1] - 1.0) < 0.02
    assert np.isrealobj(trace.values)


def test_correlations_ignore_drive_phase(tiny8_params):
    taus = default_tau_grid(tiny8_params, horizon=2.0)
    reference = intensity_correlation(tiny8_params, taus=taus)
    rotated_params = tiny8_params.replace(
        drive=abs(tiny8_params.drive) * np.exp(1j * np.pi / 3.0)
    )
    rotated = intensity_correlation(rotated_params, taus=taus)
    np.testing.assert_allclose(rotated.values, reference.values, atol=1e-8)


def test_spectrum_integral_matches_population(tiny8_params):
    gamma2 = tiny8_params.kappa + tiny8_params.gamma / 2.0
    taus = default_tau_grid(tiny8_params, horizon=26.0 / gamma2)
    trace = first_order_correlation(tiny8_params, taus=taus)
    spectrum = optical_spectrum(trace)
    assert spectrum.integral_check == pytest.approx(trace.normalization, rel=2e-2)
    assert spectrum.coherent_weight == pytest.approx(trace.plateau, rel=1e-12)
    assert np.isrealobj(spectrum.incoherent_density)
    # Doublet peaks sit near +-g.
    peak = spectrum.omegas[np.argmax(spectrum.incoherent_density)]
    assert abs(abs(peak) - tiny8_params.g) < 1.0


def test_spectrum_requires_decayed_trace(tiny8_params):
    short = first_order_correlation(
        tiny8_params, taus=default_tau_grid(tiny8_params, horizon=2.0)
    )
    with pytest.raises(ValueError, match="extend the delay horizon"):
        optical_spectrum(short)


def test_spectrum_rejects_wrong_kind(tiny8_params):
    g2 = intensity_correlation(
        tiny8_params, taus=default_tau_grid(tiny8_params, horizon=2.0)
    )
    with pytest.raises(ValueError, match="first-order"):
        optical_spectrum(g2)


def test_waiting_times_start_empty(tiny8_params):
    trace = waiting_time_distribution(tiny8_params)
    assert trace.kind == "wtd"
    assert trace.values[0] == pytest.approx(0.0, abs=1e-12)
    assert np.all(trace.values >= -1e-12)
    assert trace.tail_mass >= 0.0


def test_waiting_times_against_resolvent_oracle(tiny8_params):
    # The resolvent route gives the exact normalization (one: the side sink
    # eventually drains everything) and the exact mean; the sampled route
    # must land close with its fitted tail correction.
    integral, mean = oracles.waiting_time_moments(tiny8_params)
    assert integral == pytest.approx(1.0, abs=1e-10)
    trace = waiting_time_distribution(tiny8_params)
    assert trace.integral == pytest.approx(1.0, abs=5e-3)
    assert trace.mean_waiting_time == pytest.approx(mean, rel=2e-2)


def test_waiting_times_need_side_decay(tiny8_params):
    with pytest.raises(ValueError, match="gamma"):
        waiting_time_distribution(tiny8_params.replace(gamma=0.0))
