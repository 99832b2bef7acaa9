"""Numeric-versus-analytic validation report.

Each criterion compares a full simulation against an independent closed
form, an invariant, or a brute-force small-system oracle, and returns a
CriterionResult with a verdict, a one-line summary and the measured
numbers.  ``run_criteria`` drives a selection of them while sharing the
expensive intermediates (steady states, correlation traces) across
criteria.

A failed check is reported, never raised: the report is the product.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import curve_fit

from . import qfunction
from .analytics import (
    g2_forward_zero_delay,
    g2_pure_state,
    g2_weak_drive,
    resonance_fluorescence_ref,
    squeezing_parameters,
    wtd_resonance_fluorescence,
)
from .correlations import (
    default_tau_grid,
    first_order_correlation,
    intensity_correlation,
    optical_spectrum,
    waiting_time_distribution,
)
from .dynamics import evolve, scaled_residual, steady_state, truncation_check
from .liouvillian import build_liouvillian
from .operators import build_operator_set, expectation, normal_ordered_variance
from .params import ModelParams
from .presets import list_presets, preset_config, preset_params, snapshot_times


@dataclass
class CriterionResult:
    name: str
    passed: bool
    details: str
    values: dict = field(default_factory=dict)


def _trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(rho1 - rho2))))


def _local_maxima(values: np.ndarray, include_ends: bool = True) -> np.ndarray:
    """Indices of discrete local maxima of a sampled curve."""
    indices = []
    if include_ends and values.size > 1 and values[0] >= values[1]:
        indices.append(0)
    for i in range(1, values.size - 1):
        if values[i] > values[i - 1] and values[i] >= values[i + 1]:
            indices.append(i)
    if include_ends and values.size > 1 and values[-1] > values[-2]:
        indices.append(values.size - 1)
    return np.asarray(indices, dtype=int)


def _inside_polygon(x: float, y: float, vertices: np.ndarray) -> bool:
    """Ray-casting point-in-polygon test; the polygon closes itself."""
    inside = False
    j = len(vertices) - 1
    for i in range(len(vertices)):
        xi, yi = vertices[i]
        xj, yj = vertices[j]
        if (yi > y) != (yj > y):
            crossing = xi + (y - yi) / (yj - yi) * (xj - xi)
            if x < crossing:
                inside = not inside
        j = i
    return inside


def _dense_generator(params: ModelParams) -> np.ndarray:
    """Dense master-equation generator assembled from first principles.

    Deliberately avoids the sparse builders: plain np.diag ladder matrix,
    np.kron products and the textbook commutator-plus-dissipator form, as
    the comparison target for the oracle criterion.
    """
    size = params.n_max + 1
    ladder = np.diag(np.sqrt(np.arange(1.0, size)), 1)
    a = np.kron(np.eye(2), ladder)
    sm = np.kron(np.array([[0.0, 0.0], [1.0, 0.0]]), np.eye(size))
    hamiltonian = (
        1j * params.g * (a.conj().T @ sm - a @ sm.conj().T)
        + params.drive * a.conj().T
        + np.conj(params.drive) * a
    )
    eye = np.eye(2 * size)
    generator = -1j * (
        np.kron(eye, hamiltonian) - np.kron(hamiltonian.T, eye)
    ).astype(complex)
    for op, rate in ((a, params.kappa), (sm, params.gamma / 2.0)):
        number = op.conj().T @ op
        generator += rate * (
            2.0 * np.kron(op.conj(), op)
            - np.kron(eye, number)
            - np.kron(number.T, eye)
        )
    return generator


class ValidationRun:
    """One validation session with memoized heavyweight intermediates."""

    def __init__(self, progress=None):
        self._memo = {}
        self._progress = progress if progress is not None else (lambda message: None)

    def _get(self, key, builder):
        if key not in self._memo:
            self._memo[key] = builder()
        return self._memo[key]

    # -- shared intermediates ------------------------------------------------

    def _steady(self, preset: str):
        def build():
            params, flags = preset_params(preset)
            ops = build_operator_set(params)
            superop = build_liouvillian(params, ops)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                rho = steady_state(superop)
            return params, flags, ops, superop, rho

        return self._get(("steady", preset), build)

    def _fig2_g1(self):
        # One long record serves both the envelope check (needs tau <= 10)
        # and the spectrum check (needs the envelope decayed to 1e-4).
        def build():
            params, _, _, _, _ = self._steady("fig2a")
            gamma2 = params.kappa + params.gamma / 2.0
            taus = default_tau_grid(params, horizon=26.0 / gamma2)
            return first_order_correlation(params, taus=taus)

        return self._get("fig2-g1", build)

    def _fig2_g2(self):
        def build():
            params, _, _, _, _ = self._steady("fig2a")
            taus = default_tau_grid(params, horizon=10.0 / params.kappa)
            return intensity_correlation(params, taus=taus)

        return self._get("fig2-g2", build)

    def _fig2d_g2(self):
        def build():
            params, _ = preset_params("fig2d")
            taus = default_tau_grid(params, horizon=10.0 / params.kappa)
            return intensity_correlation(params, taus=taus)

        return self._get("fig2d-g2", build)

    # -- criteria ------------------------------------------------------------

    def g1_envelope(self) -> CriterionResult:
        """Weak-drive first-order coherence against its closed-form envelope."""
        params, _, _, _, _ = self._steady("fig2a")
        trace = self._fig2_g1()
        ratio = abs(params.drive) / params.g
        gamma2 = params.kappa + params.gamma / 2.0
        plateau_ref = ratio**2
        amplitude = 2.0 * ratio**4

        window = trace.taus <= 10.0 / params.kappa + 1e-12
        taus = trace.taus[window]
        fluct = trace.values.real[window] - trace.plateau
        magnitude = np.abs(fluct)
        extrema = _local_maxima(magnitude)
        envelope = amplitude * (1.0 + gamma2 * taus / 2.0) * np.exp(-gamma2 * taus / 2.0)
        deviation = float(np.max(np.abs(magnitude[extrema] - envelope[extrema])))

        plateau_err = abs(trace.plateau - plateau_ref) / plateau_ref
        ok_plateau = plateau_err <= 0.02
        allowance = 0.10 * amplitude
        ok_envelope = deviation <= allowance
        return CriterionResult(
            name="g1_envelope",
            passed=bool(ok_plateau and ok_envelope),
            details=(
                f"plateau {trace.plateau:.6e} vs {plateau_ref:.6e} "
                f"({plateau_err:.2%}, tol 2%); envelope deviation at "
                f"{extrema.size} extrema {deviation:.3e} vs allowance "
                f"{allowance:.3e}"
            ),
            values={
                "plateau": float(trace.plateau),
                "plateau_rel_err": float(plateau_err),
                "envelope_deviation": deviation,
                "envelope_allowance": float(allowance),
            },
        )

    def g2_weak_drive_closed_forms(self) -> CriterionResult:
        """Weak-drive intensity correlation against the two closed forms."""
        params, _, _, _, _ = self._steady("fig2a")
        trace = self._fig2_g2()
        numeric = trace.values.real
        secular = g2_weak_drive(params, trace.taus)
        pure = g2_pure_state(params, trace.taus)
        window = params.g * trace.taus <= 100.0 + 1e-9

        dev_numeric = float(np.max(np.abs(numeric[window] - secular[window])))
        dev_forms = float(np.max(np.abs(secular[window] - pure[window])))
        zero_delay = float(numeric[0])
        end_dev = float(abs(numeric[-1] - 1.0))

        ok = (
            dev_numeric <= 0.05
            and zero_delay <= 0.02
            and end_dev <= 1e-3
            and dev_forms <= 0.05
        )
        return CriterionResult(
            name="g2_weak_drive_closed_forms",
            passed=bool(ok),
            details=(
                f"max|num - three-level| {dev_numeric:.3f} over g tau <= 100 "
                f"(tol 0.05); g2(0) = {zero_delay:.2e} (tol 0.02); "
                f"|g2 - 1| = {end_dev:.2e} at horizon (tol 1e-3); "
                f"max|three-level - two-quanta| {dev_forms:.3f} (tol 0.05)"
            ),
            values={
                "max_dev_numeric_vs_secular": dev_numeric,
                "max_dev_secular_vs_pure": dev_forms,
                "zero_delay": zero_delay,
                "horizon_deviation": end_dev,
            },
        )

    @staticmethod
    def _transform_peaks(trace):
        """|FT(g2 - 1)| peak locations above 15% of the tallest peak."""
        omegas = np.arange(20.0, 260.0 + 1e-9, 0.25)
        kernel = np.exp(1j * np.outer(omegas, trace.taus))
        transform = np.abs(
            np.trapezoid(kernel * (trace.values.real - 1.0), trace.taus, axis=1)
        )
        indices = _local_maxima(transform, include_ends=False)
        indices = indices[transform[indices] >= 0.15 * transform.max()]
        order = np.argsort(transform[indices])[::-1]
        return omegas[indices][order], transform[indices][order]

    def g2_spectral_splitting(self) -> CriterionResult:
        """Rabi splitting of the intensity-correlation transform with drive."""
        params, _, _, _, _ = self._steady("fig2a")
        g = params.g
        weak_locs, _ = self._transform_peaks(self._fig2_g2())
        strong_locs, _ = self._transform_peaks(self._fig2d_g2())

        ok_weak = weak_locs.size == 1 and abs(weak_locs[0] - g) <= 0.02 * g
        ok_strong = (
            strong_locs.size >= 2
            and min(strong_locs[:2]) < g < max(strong_locs[:2])
        )
        weak_text = ", ".join(f"{loc:.2f}" for loc in weak_locs)
        strong_text = ", ".join(f"{loc:.2f}" for loc in strong_locs)
        return CriterionResult(
            name="g2_spectral_splitting",
            passed=bool(ok_weak and ok_strong),
            details=(
                f"weak drive: peak(s) at [{weak_text}] (want one at g = {g:g} "
                f"within 2%); strong drive: peak(s) at [{strong_text}] "
                f"(want two bracketing g)"
            ),
            values={
                "weak_peaks": [float(loc) for loc in weak_locs],
                "strong_peaks": [float(loc) for loc in strong_locs],
            },
        )

    def steady_state_consistency(self) -> CriterionResult:
        """Nullspace steady state is a fixed point of the time evolution."""
        worst_distance = (0.0, "")
        worst_residual = (0.0, "")
        count = 0
        for preset in list_presets():
            self._progress(f"  steady-state consistency: {preset}")
            params, _, _, superop, rho = self._steady(preset)
            residual = scaled_residual(superop, rho)
            horizon = 20.0 / min(params.kappa, params.kappa + params.gamma / 2.0)
            final = evolve(superop, rho, [0.0, horizon]).states[-1]
            distance = _trace_distance(rho, final)
            if distance > worst_distance[0]:
                worst_distance = (distance, preset)
            if residual > worst_residual[0]:
                worst_residual = (residual, preset)
            count += 1
        ok = worst_distance[0] < 1e-6 and worst_residual[0] < 1e-10
        return CriterionResult(
            name="steady_state_consistency",
            passed=bool(ok),
            details=(
                f"{count} presets: max trace distance after t = 20 is "
                f"{worst_distance[0]:.2e} ({worst_distance[1]}, tol 1e-6); "
                f"max scaled residual {worst_residual[0]:.2e} "
                f"({worst_residual[1]}, tol 1e-10)"
            ),
            values={
                "max_trace_distance": worst_distance[0],
                "worst_distance_preset": worst_distance[1],
                "max_residual": worst_residual[0],
                "worst_residual_preset": worst_residual[1],
            },
        )

    def weak_drive_photon_number(self) -> CriterionResult:
        """Steady cavity photon number against the weak-drive value."""
        params, _, ops, _, rho = self._steady("fig2a")
        ratio = abs(params.drive) / params.g
        measured = expectation(ops.n_phot, rho, hermitian=True)
        target = 2.0 * ratio**4
        rel = abs(measured - target) / target
        return CriterionResult(
            name="weak_drive_photon_number",
            passed=bool(rel <= 0.05),
            details=(
                f"<n> = {measured:.4e} vs 2(|E|/g)^4 = {target:.4e} "
                f"({rel:.2%}, tol 5%)"
            ),
            values={"photon_number": float(measured), "target": float(target), "rel_err": float(rel)},
        )

    def squeezing_variance(self) -> CriterionResult:
        """Most negative atomic quadrature variance against -r/2."""
        params, _, ops, _, rho = self._steady("fig2a")
        theta = math.pi / 2.0 + math.atan2(params.drive.imag, params.drive.real)
        measured = normal_ordered_variance(ops, rho, theta)
        target = -squeezing_parameters(params).r / 2.0
        rel = abs(measured - target) / abs(target)
        return CriterionResult(
            name="squeezing_variance",
            passed=bool(rel <= 0.10),
            details=(
                f"variance at theta = pi/2 + arg(drive): {measured:.5e} vs "
                f"-r/2 = {target:.5e} ({rel:.2%}, tol 10%)"
            ),
            values={"variance": float(measured), "target": float(target), "rel_err": float(rel)},
        )

    def waiting_time_bound(self) -> CriterionResult:
        """Side-channel waiting times against the one-quantum reference."""
        params, _, ops, _, rho = self._steady("fig3")
        trace = self._get(
            ("wtd", "fig3"), lambda: waiting_time_distribution(params)
        )
        reference = resonance_fluorescence_ref(params, Y=0.07)
        formula = resonance_fluorescence_ref(
            params, a_ss=expectation(ops.a, rho)
        )
        gamma = params.gamma

        window = gamma * trace.taus <= 12.0 + 1e-9
        ref_values = wtd_resonance_fluorescence(reference, gamma, trace.taus[window])
        min_margin = float(np.min(trace.values.real[window] - ref_values))
        ok_bound = min_margin >= -1e-10

        y_err = abs(formula.Y - reference.Y) / reference.Y
        ok_provenance = y_err <= 0.03

        dense = np.linspace(0.0, 30.0 / gamma, 30001)
        peak_gt = float(gamma * dense[np.argmax(wtd_resonance_fluorescence(reference, gamma, dense))])
        ok_peak = abs(peak_gt - 12.0) <= 1.0

        params_i, _, ops_i, _, rho_i = self._steady("fig3-inset")
        trace_i = self._get(
            ("wtd", "fig3-inset"), lambda: waiting_time_distribution(params_i)
        )
        formula_i = resonance_fluorescence_ref(
            params_i, a_ss=expectation(ops_i.a, rho_i)
        )
        mean_err = abs(trace_i.mean_waiting_time - formula_i.tau_av) / formula_i.tau_av
        ok_mean = mean_err <= 0.10

        norm_err = abs(trace.integral - 1.0)
        ok_norm = norm_err <= 1e-3

        ok = ok_bound and ok_provenance and ok_peak and ok_mean and ok_norm
        return CriterionResult(
            name="waiting_time_bound",
            passed=bool(ok),
            details=(
                f"min(w - ref) = {min_margin:.2e} over gamma tau <= 12 "
                f"(>= 0); formula Y = {formula.Y:.4f} vs 0.07 ({y_err:.2%}, "
                f"tol 3%); reference peak at gamma tau = {peak_gt:.2f} "
                f"(12 +- 1); inset mean {trace_i.mean_waiting_time:.1f} vs "
                f"{formula_i.tau_av:.1f} ({mean_err:.2%}, tol 10%); "
                f"integral off by {norm_err:.1e} (tol 1e-3)"
            ),
            values={
                "min_margin": min_margin,
                "formula_Y": float(formula.Y),
                "reference_peak_gamma_tau": peak_gt,
                "inset_mean": float(trace_i.mean_waiting_time),
                "inset_mean_target": float(formula_i.tau_av),
                "integral_error": float(norm_err),
            },
        )

    def forward_bunching(self) -> CriterionResult:
        """Zero-delay bunching of the transmitted light, order of magnitude."""
        params, _, ops, _, rho = self._steady("fig2a")
        pair = expectation(
            ops.a_dag @ ops.a_dag @ ops.a @ ops.a, rho, hermitian=True
        )
        photon = expectation(ops.n_phot, rho, hermitian=True)
        measured = pair / photon**2
        target = g2_forward_zero_delay(params)
        factor = measured / target
        ok = 0.5 <= factor <= 2.0
        return CriterionResult(
            name="forward_bunching",
            passed=bool(ok),
            details=(
                f"forward g2(0) = {measured:.4g} vs 1/(2(|E|/g)^2)^2 = "
                f"{target:.4g} (factor {factor:.2f}, accept 0.5..2)"
            ),
            values={"g2_zero": float(measured), "target": float(target), "factor": float(factor)},
        )

    def fluorescence_spectrum_structure(self) -> CriterionResult:
        """Vacuum Rabi doublet position, width and coherent weight."""
        params, _, _, _, _ = self._steady("fig2a")
        g = params.g
        gamma2 = params.kappa + params.gamma / 2.0
        trace = self._fig2_g1()
        spectrum = optical_spectrum(trace)
        spacing = float(spectrum.omegas[1] - spectrum.omegas[0])

        peak_errs = []
        for sign in (1.0, -1.0):
            side = sign * spectrum.omegas > 0
            peak_omega = spectrum.omegas[side][
                np.argmax(spectrum.incoherent_density[side])
            ]
            peak_errs.append(abs(peak_omega - sign * g))
        ok_peaks = max(peak_errs) <= spacing + 1e-9

        fine = np.arange(g - 8.0, g + 8.0 + 1e-9, 0.05)
        fine_density = optical_spectrum(trace, omegas=fine).incoherent_density

        def model(omega, height, center, width):
            return height * (width**2 / (width**2 + (omega - center) ** 2)) ** 2

        popt, _ = curve_fit(
            model, fine, fine_density, p0=(fine_density.max(), g, 1.0)
        )
        width = abs(popt[2])
        width_target = gamma2 / 2.0
        width_err = abs(width - width_target) / width_target
        ok_width = width_err <= 0.05

        weight_target = (abs(params.drive) / g) ** 2
        weight_err = abs(spectrum.coherent_weight - weight_target) / weight_target
        ok_weight = weight_err <= 0.02

        ok = ok_peaks and ok_width and ok_weight
        return CriterionResult(
            name="fluorescence_spectrum_structure",
            passed=bool(ok),
            details=(
                f"doublet peaks off +-g by {max(peak_errs):.2f} (<= grid step "
                f"{spacing:.2f}); fitted width {width:.4f} vs {width_target:.1f} "
                f"({width_err:.2%}, tol 5%); coherent weight "
                f"{spectrum.coherent_weight:.5e} vs {weight_target:.1e} "
                f"({weight_err:.2%}, tol 2%)"
            ),
            values={
                "peak_offset": float(max(peak_errs)),
                "grid_step": spacing,
                "fitted_width": float(width),
                "width_rel_err": float(width_err),
                "coherent_weight": float(spectrum.coherent_weight),
                "coherent_weight_rel_err": float(weight_err),
            },
        )

    def steady_state_bimodality(self) -> CriterionResult:
        """Conjugate peak pair of the steady Q function above threshold."""
        found = None
        tried = []
        for n_max in range(100, 201, 5):
            self._progress(f"  bimodality: trying n_max = {n_max}")
            params, _ = preset_params("fig4-I-b", n_max=n_max)
            superop = build_liouvillian(params)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                rho = steady_state(superop)
            ok, top_two = truncation_check(rho, params)
            tried.append((n_max, top_two))
            if ok:
                found = (params, rho)
                break
        if found is None:
            report = ", ".join(f"{n}: {p:.1e}" for n, p in tried)
            return CriterionResult(
                name="steady_state_bimodality",
                passed=False,
                details=f"no cutoff up to 200 passes the truncation check ({report})",
                values={"tried": tried},
            )
        params, rho = found
        rho_c = qfunction.reduce_to_cavity(rho)
        x, y = qfunction.adequate_axes([rho_c], params)
        qgrid = qfunction.husimi_q(rho_c, x=x, y=y, params=params)
        cell = max(qgrid.spacing)
        peaks = qgrid.peaks
        ok_pair = (
            len(peaks) == 2
            and abs(peaks[0][0] - peaks[1][0]) <= cell
            and abs(peaks[0][1] + peaks[1][1]) <= cell
            and min(abs(peaks[0][1]), abs(peaks[1][1])) > cell
        )
        ok_reach = all(math.hypot(px, py) <= 10.0 + 1e-9 for px, py, _ in peaks)
        asymmetry = qfunction.mirror_asymmetry(qgrid)
        ok_mirror = asymmetry <= 1e-3
        peaks_text = "; ".join(
            f"({px:+.3f}, {py:+.3f}) h {height:.3g}" for px, py, height in peaks
        )
        ok = ok_pair and ok_reach and ok_mirror
        return CriterionResult(
            name="steady_state_bimodality",
            passed=bool(ok),
            details=(
                f"n_max = {params.n_max}; {len(peaks)} peak(s) above 10%: "
                f"[{peaks_text}] (want a conjugate off-axis pair); "
                f"|alpha| <= 10: {ok_reach}; mirror asymmetry {asymmetry:.1e} "
                f"(tol 1e-3)"
            ),
            values={
                "n_max": int(params.n_max),
                "peaks": [[float(v) for v in peak] for peak in peaks],
                "mirror_asymmetry": float(asymmetry),
            },
        )

    def transient_symmetry_breaking(self) -> CriterionResult:
        """Snapshot peaks stay inside the neoclassical curve, in mirror pairs."""
        params, _ = preset_params("fig5")
        times = snapshot_times(preset_config("fig5"), params.g)
        self._progress(f"  transients: {len(times)} snapshots up to gT = {times[-1] * params.g:g}")
        snapshots = self._get(
            "fig5-snapshots",
            lambda: qfunction.transient_snapshots(params, times),
        )
        failures = []
        for index, qgrid in enumerate(snapshots):
            if index == 0:
                continue
            cell = max(qgrid.spacing)
            peaks = qgrid.peaks
            top = max(height for _, _, height in peaks)
            for px, py, height in peaks:
                mirrored = any(
                    abs(qx - px) <= cell and abs(qy + py) <= cell
                    for qx, qy, _ in peaks
                )
                if not mirrored:
                    failures.append(
                        f"gT {times[index] * params.g:.3g}: peak ({px:.2f}, {py:.2f}) unmirrored"
                    )
                if height >= 0.5 * top:
                    offsets = (
                        (0.0, 0.0), (cell, 0.0), (-cell, 0.0), (0.0, cell),
                        (0.0, -cell), (cell, cell), (cell, -cell),
                        (-cell, cell), (-cell, -cell),
                    )
                    inside = any(
                        _inside_polygon(px + dx, py + dy, qgrid.curve)
                        for dx, dy in offsets
                    )
                    if not inside:
                        failures.append(
                            f"gT {times[index] * params.g:.3g}: dominant peak "
                            f"({px:.2f}, {py:.2f}) outside the curve"
                        )
        ok = not failures
        detail = (
            f"{len(snapshots) - 1} nonzero snapshots: mirrored peak sets and "
            f"dominant peaks inside the neoclassical curve (within one cell)"
            if ok
            else "; ".join(failures[:4])
        )
        return CriterionResult(
            name="transient_symmetry_breaking",
            passed=bool(ok),
            details=detail,
            values={"failures": failures},
        )

    def small_space_oracle(self) -> CriterionResult:
        """Sparse adaptive evolution against dense expm at random parameters."""
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(5):
            n_max = int(rng.integers(1, 5))
            g = float(10.0 ** rng.uniform(0.0, 1.3))
            gamma = float(rng.uniform(0.0, 3.0))
            drive = g * rng.uniform(0.05, 0.5) * np.exp(2j * math.pi * rng.uniform())
            params = ModelParams(g=g, gamma=gamma, drive=drive, n_max=n_max)
            dim = params.dim
            raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            rho0 = raw @ raw.conj().T
            rho0 /= np.trace(rho0).real

            superop = build_liouvillian(params)
            propagated = evolve(superop, rho0, [0.0, 1.0]).states[-1]
            brute = expm(_dense_generator(params)) @ rho0.reshape(-1, order="F")
            brute = brute.reshape((dim, dim), order="F")
            worst = max(worst, float(np.linalg.norm(propagated - brute)))
        ok = worst <= 1e-8
        return CriterionResult(
            name="small_space_oracle",
            passed=bool(ok),
            details=(
                f"5 random small systems: max Frobenius deviation {worst:.2e} "
                f"from dense expm at kappa t = 1 (tol 1e-8)"
            ),
            values={"max_frobenius_error": worst},
        )


_CRITERIA = (
    ("g1_envelope", ValidationRun.g1_envelope),
    ("g2_weak_drive_closed_forms", ValidationRun.g2_weak_drive_closed_forms),
    ("g2_spectral_splitting", ValidationRun.g2_spectral_splitting),
    ("steady_state_consistency", ValidationRun.steady_state_consistency),
    ("weak_drive_photon_number", ValidationRun.weak_drive_photon_number),
    ("squeezing_variance", ValidationRun.squeezing_variance),
    ("waiting_time_bound", ValidationRun.waiting_time_bound),
    ("forward_bunching", ValidationRun.forward_bunching),
    ("fluorescence_spectrum_structure", ValidationRun.fluorescence_spectrum_structure),
    ("steady_state_bimodality", ValidationRun.steady_state_bimodality),
    ("transient_symmetry_breaking", ValidationRun.transient_symmetry_breaking),
    ("small_space_oracle", ValidationRun.small_space_oracle),
)


def criterion_names() -> list[str]:
    return [name for name, _ in _CRITERIA]


def _select(names):
    if names is None:
        return list(_CRITERIA)
    chosen = []
    for token in names:
        if token.isdigit():
            index = int(token)
            if not 1 <= index <= len(_CRITERIA):
                raise ValueError(
                    f"criterion index {index} out of range 1..{len(_CRITERIA)}"
                )
            chosen.append(_CRITERIA[index - 1])
            continue
        for entry in _CRITERIA:
            if entry[0] == token:
                chosen.append(entry)
                break
        else:
            known = ", ".join(criterion_names())
            raise ValueError(f"unknown criterion {token!r}; known: {known}")
    return chosen


def run_criteria(names=None, progress=None) -> list[CriterionResult]:
    """Run the selected criteria (all by default), sharing intermediates.

    A criterion that raises is reported as failed with the error text; the
    report always completes.
    """
    run = ValidationRun(progress=progress)
    results = []
    for name, method in _select(names):
        run._progress(f"running {name} ...")
        try:
            results.append(method(run))
        except Exception as exc:  # noqa: BLE001 - keep the report complete
            results.append(
                CriterionResult(
                    name=name, passed=False, details=f"error: {exc}", values={}
                )
            )
    return results
