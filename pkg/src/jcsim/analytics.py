"""Closed-form results for the strongly coupled, weakly driven regime.

The driven Jaynes-Cummings ladder is organized by a drive-dependent degree
of squeezing r, with e^{-2r} = sqrt(1 - (2|drive|/g)^2). Everything here is
an explicit function of the model ratios: dressed-state data, the secular
transition rates between the ground state and the first excited doublet,
weak-drive correlation functions and the fluorescence spectrum, the
two-quanta pure-state intensity correlation, the resonance-fluorescence
waiting-time reference, and the neoclassical steady-state curve.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .params import ModelParams

# Above this degree of squeezing the displacement factors e^{4r} overflow
# any practical use; treat it as having hit the critical point.
R_CAP = 40.0
WEAK_DRIVE_MAX_RATIO = 0.25


@dataclass(frozen=True)
class SqueezingParams:
    """Degree of squeezing and squeeze argument induced by the drive."""

    r: float
    eta: complex
    r_approx: float


def squeezing_parameters(params: ModelParams) -> SqueezingParams:
    """Exact squeezing degree r, squeeze argument eta, and the small-drive
    approximation r ~ (|drive|/g)^2.

    Defined for |drive|/g < 1/2 only; at the critical drive the squeezing
    diverges.
    """
    ratio = params.drive_ratio
    if ratio >= 0.5:
        raise ValueError(f"critical point reached: |drive|/g = {ratio} >= 1/2")
    # r = -(1/4) ln(1 - (2 ratio)^2), exact
    r = -0.25 * math.log1p(-((2.0 * ratio) ** 2))
    if r > R_CAP:
        raise ValueError(
            f"critical point reached: squeezing {r:.1f} beyond the supported cap"
        )
    phase = cmath.phase(complex(params.drive)) if params.drive != 0 else 0.0
    return SqueezingParams(
        r=r,
        eta=-r * cmath.exp(2j * phase),
        r_approx=ratio**2,
    )


@dataclass(frozen=True)
class DressedStateInfo:
    """One dressed state of the driven ladder.

    quasienergy is in units of hbar*g; displacement is the coherent
    displacement of the field factor; the atomic amplitude pairs give the
    squeezing-dependent superpositions on (|1>_A, |2>_A); weak-drive
    amplitudes list (atom, fock, amplitude) triples of the lowest-order
    expansion in drive/g (available for the ground state and the first
    doublet).
    """

    n: int
    branch: str
    quasienergy: float
    displacement: complex
    atomic_mix_lower: tuple[complex, complex]
    atomic_mix_upper: tuple[complex, complex]
    weak_drive_amplitudes: tuple[tuple[int, int, complex], ...] | None


def dressed_state(n: int, branch: str, params: ModelParams) -> DressedStateInfo:
    """Quasienergy, displacement and composition of a dressed state.

    Parameters
    ----------
    n : int
        Excitation rank; 0 for the ground state, >= 1 for the doublets.
    branch : {"G", "U", "L"}
    params : ModelParams
    """
    if branch not in ("G", "U", "L"):
        raise ValueError(f"unknown branch {branch!r}")
    if branch == "G" and n != 0:
        raise ValueError("the ground state has rank n = 0")
    if branch in ("U", "L") and n < 1:
        raise ValueError("doublet states require n >= 1")
    squeeze = squeezing_parameters(params)
    r = squeeze.r
    phase = cmath.phase(complex(params.drive)) if params.drive != 0 else 0.0
    sign = {"G": 0.0, "U": 1.0, "L": -1.0}[branch]
    quasienergy = sign * math.exp(-3.0 * r) * math.sqrt(n) if n else 0.0
    # displacement alpha(E) = -e^{i arg} (E/(hbar g)) e^{4r} sqrt(1 - e^{-4r})
    displacement = (
        -cmath.exp(1j * phase)
        * quasienergy
        * math.exp(4.0 * r)
        * math.sqrt(-math.expm1(-4.0 * r))
    )
    plus = math.sqrt((1.0 + math.exp(-2.0 * r)) / 2.0)
    minus = math.sqrt((1.0 - math.exp(-2.0 * r)) / 2.0)
    # Amplitude pairs on (|1>_A, |2>_A) for the two atomic superpositions.
    mix_lower = (plus, 1j * cmath.exp(1j * phase) * minus)
    mix_upper = (-1j * cmath.exp(-1j * phase) * minus, plus)

    ratio = complex(params.drive) / params.g
    if branch == "G":
        weak = (
            (1, 0, 1.0 + 0j),
            (2, 0, 1j * ratio),
            (1, 2, ratio**2 / math.sqrt(2.0)),
        )
    elif n == 1:
        doublet_sign = 1j if branch == "U" else -1j
        weak = (
            (2, 0, 1.0 / math.sqrt(2.0) + 0j),
            (1, 1, doublet_sign / math.sqrt(2.0)),
            (1, 0, 1j * np.conj(ratio) / math.sqrt(2.0)),
        )
    else:
        weak = None
    return DressedStateInfo(
        n=n,
        branch=branch,
        quasienergy=quasienergy,
        displacement=displacement,
        atomic_mix_lower=mix_lower,
        atomic_mix_upper=mix_upper,
        weak_drive_amplitudes=weak,
    )


@dataclass(frozen=True)
class EffectiveRates:
    """Secular transition rates of the ground-plus-first-doublet model.

    Rates are in units of kappa and indexed (from, to) on the labels
    {"G", "1U", "1L"}; K1 and K2 are the coherence damping and coupling
    coefficients for the off-diagonal elements; reduced_populations is the
    unnormalized birth-death steady state.
    """

    gamma_GG: float
    gamma_G_1U: float
    gamma_G_1L: float
    gamma_1U_G: float
    gamma_1L_G: float
    K1: dict
    K2: dict
    reduced_populations: dict
    flags: tuple[str, ...] = ()


def effective_rates(
    params: ModelParams, weak_drive_max: float = WEAK_DRIVE_MAX_RATIO
) -> EffectiveRates:
    """Transition rates between the ground state and first excited doublet.

    The out-rates of the doublet equal kappa + gamma/2; the return rates
    are smaller by the factor (|drive|/g)^4. Outside the weak-drive window
    the values remain evaluable but carry a "regime" flag.
    """
    ratio = params.drive_ratio
    flags: tuple[str, ...] = ()
    if ratio > weak_drive_max:
        flags = ("regime",)
    total = params.kappa + params.gamma / 2.0
    complex_ratio = complex(params.drive) / params.g
    k1 = -(params.gamma / 2.0) * ratio**2
    k2_out = total * np.conj(complex_ratio) ** 2
    k2_in = total * complex_ratio**2
    return EffectiveRates(
        gamma_GG=params.gamma * ratio**2,
        gamma_G_1U=total * ratio**4,
        gamma_G_1L=total * ratio**4,
        gamma_1U_G=total,
        gamma_1L_G=total,
        K1={
            ("G", "1U"): k1,
            ("G", "1L"): k1,
            ("1U", "G"): k1,
            ("1L", "G"): k1,
        },
        K2={
            ("G", "1U"): k2_out,
            ("G", "1L"): k2_out,
            ("1U", "G"): k2_in,
            ("1L", "G"): k2_in,
        },
        reduced_populations={"G": 1.0, "1U": ratio**4, "1L": ratio**4},
        flags=flags,
    )


def squeezing_variance(params: ModelParams, theta: float) -> float:
    """Weak-drive normal-ordered variance of the atomic quadrature at
    local-oscillator phase theta: (1/2)(|drive|/g)^2 cos[2(theta - arg drive)].

    Most negative, -r/2 to leading order, at theta = pi/2 + arg drive.
    """
    phase = cmath.phase(complex(params.drive)) if params.drive != 0 else 0.0
    return 0.5 * params.drive_ratio**2 * math.cos(2.0 * (theta - phase))


def g1_weak_drive(params: ModelParams, tau) -> np.ndarray:
    """Weak-drive first-order coherence envelope of the atomic emission.

    Coherent plateau (|drive|/g)^2 plus a damped vacuum Rabi oscillation of
    amplitude 2(|drive|/g)^4 with the polariton decay rate (kappa+gamma/2)/2.
    """
    tau = np.asarray(tau, dtype=float)
    ratio = params.drive_ratio
    half_rate = (params.kappa + params.gamma / 2.0) / 2.0
    envelope = 2.0 * ratio**4 * np.exp(-half_rate * tau) * (1.0 + half_rate * tau)
    return (ratio**2 + envelope * np.cos(params.g * tau)).astype(complex)


def spectrum_weak_drive(params: ModelParams, omega) -> tuple[np.ndarray, float]:
    """Weak-drive fluorescence spectrum: squared-Lorentzian vacuum Rabi
    doublet plus the coherent delta weight (|drive|/g)^2.

    omega is the offset from the common resonance. The squared-Lorentzian
    halfwidth parameter is (kappa + gamma/2)/2.
    """
    omega = np.asarray(omega, dtype=float)
    ratio = params.drive_ratio
    width = (params.kappa + params.gamma / 2.0) / 2.0
    doublet = width**3 / (width**2 + (omega + params.g) ** 2) ** 2 + width**3 / (
        width**2 + (omega - params.g) ** 2
    ) ** 2
    return ratio**4 * (2.0 / np.pi) * doublet, ratio**2


def g2_weak_drive(params: ModelParams, tau) -> np.ndarray:
    """Weak-drive intensity correlation of the side-scattered light from the
    three-level secular model; independent of the drive amplitude.
    """
    tau = np.asarray(tau, dtype=float)
    total = params.kappa + params.gamma / 2.0
    return (
        1.0
        + np.exp(-total * tau)
        - 2.0 * np.exp(-0.5 * total * tau) * np.cos(params.g * tau)
    )


@dataclass(frozen=True)
class PureStateG2Params:
    """Derived rates of the two-quanta pure-state intensity correlation."""

    g_prime: float
    gamma_prime: float
    C1: float
    overdamped: bool


def pure_state_g2_params(params: ModelParams) -> PureStateG2Params:
    """Oscillation frequency g', cavity-enhanced emission rate gamma' and
    co-operativity C1 entering the pure-state correlation function."""
    discriminant = params.g**2 - 0.25 * (params.kappa - params.gamma / 2.0) ** 2
    c1 = params.g**2 / (params.kappa * params.gamma) if params.gamma > 0 else math.inf
    gamma_prime = (
        params.gamma * (1.0 + 2.0 * c1)
        if params.gamma > 0
        else 2.0 * params.g**2 / params.kappa
    )
    return PureStateG2Params(
        g_prime=math.sqrt(abs(discriminant)),
        gamma_prime=gamma_prime,
        C1=c1,
        overdamped=discriminant <= 0,
    )


def g2_pure_state(params: ModelParams, tau) -> np.ndarray:
    """Intensity correlation from the pure-state factorization in the
    two-quanta basis.

    The squared bracket damps at (kappa + gamma/2)/2 and oscillates at
    g' = sqrt(g^2 - (kappa - gamma/2)^2/4); the sine coefficient follows
    from the two-quanta amplitude equations,

        (kappa - gamma'/2)/(kappa + gamma'/2) * ((kappa + gamma/2)/2)/g',

    with gamma' = gamma(1 + 2 C1). For g <= |kappa - gamma/2|/2 the
    oscillation is continued with hyperbolic functions (overdamped branch).
    """
    tau = np.asarray(tau, dtype=float)
    derived = pure_state_g2_params(params)
    total = params.kappa + params.gamma / 2.0
    coefficient = (
        (params.kappa - derived.gamma_prime / 2.0)
        / (params.kappa + derived.gamma_prime / 2.0)
        * (0.5 * total)
        / derived.g_prime
    )
    if derived.overdamped:
        oscillation = np.cosh(derived.g_prime * tau) + coefficient * np.sinh(
            derived.g_prime * tau
        )
    else:
        oscillation = np.cos(derived.g_prime * tau) + coefficient * np.sin(
            derived.g_prime * tau
        )
    return (1.0 - np.exp(-0.5 * total * tau) * oscillation) ** 2


def g2_forward_zero_delay(params: ModelParams) -> float:
    """Zero-delay bunching estimate for the forward (transmitted) channel,
    (g/|drive|)^4 / 4; diverges as the drive is switched off."""
    if params.drive == 0:
        raise ValueError("forward bunching estimate undefined at zero drive")
    return 0.25 / params.drive_ratio**4


@dataclass(frozen=True)
class ResonanceFluorescenceRef:
    """Free-space resonance fluorescence reference driven at the effective
    amplitude g <a>_ss seen by the atom through the cavity."""

    Y: float
    drive_eff: complex
    tau_av: float


def resonance_fluorescence_ref(
    params: ModelParams, a_ss: complex | None = None, Y: float | None = None
) -> ResonanceFluorescenceRef:
    """Build the reference from the steady cavity amplitude or directly
    from the saturation parameter Y = 2 sqrt(2) |g <a>_ss| / gamma."""
    if (a_ss is None) == (Y is None):
        raise ValueError("provide exactly one of a_ss or Y")
    if params.gamma <= 0:
        raise ValueError("the reference needs gamma > 0")
    if Y is None:
        drive_eff = params.g * complex(a_ss)
        Y = 2.0 * math.sqrt(2.0) * abs(drive_eff) / params.gamma
    else:
        drive_eff = params.gamma * Y / (2.0 * math.sqrt(2.0)) + 0j
    if Y <= 0:
        raise ValueError("Y must be positive")
    return ResonanceFluorescenceRef(
        Y=Y,
        drive_eff=drive_eff,
        tau_av=2.0 * (1.0 + Y**2) / (params.gamma * Y**2),
    )


def wtd_resonance_fluorescence(
    ref: ResonanceFluorescenceRef, gamma: float, tau
) -> np.ndarray:
    """Waiting-time distribution of weakly driven resonance fluorescence.

    Physical branch, nonnegative and normalized to one:

        w(tau) = gamma e^{-gamma tau/2} Y^2/(1-2Y^2)
                 [cosh((gamma tau/2) sqrt(1-2Y^2)) - 1],  Y^2 < 1/2,

    continued with cosines for Y^2 >= 1/2. Mean 2(1+Y^2)/(gamma Y^2).
    """
    if ref.Y <= 0:
        raise ValueError("Y must be positive")
    tau = np.asarray(tau, dtype=float)
    y2 = ref.Y**2
    x = 0.5 * gamma * tau
    s = 1.0 - 2.0 * y2
    if abs(s) < 1e-6:
        # (cosh(x sqrt(s)) - 1)/s by its series; the direct quotient loses
        # all precision in this window and covers both branches.
        shape = x**2 / 2.0 + s * x**4 / 24.0 + s**2 * x**6 / 720.0
    elif s > 0:
        shape = (np.cosh(x * math.sqrt(s)) - 1.0) / s
    else:
        shape = (1.0 - np.cos(x * math.sqrt(-s))) / (-s)
    return gamma * y2 * np.exp(-x) * shape


def neoclassical_curve(params: ModelParams, n_points: int = 200) -> np.ndarray:
    """Closed neoclassical locus of semiclassical steady-state amplitudes.

    Returns an array of (x, y) vertices tracing the upper branch outward
    and the lower branch back, so consecutive vertices (including the
    implicit closing edge) bound the interior. Empty drive region
    (|drive| <= g/2) collapses to the single point (0, 0).
    """
    magnitude = abs(params.drive)
    threshold = params.g / 2.0
    if magnitude <= threshold:
        return np.array([[0.0, 0.0]])
    eps = np.linspace(threshold, magnitude, n_points)
    s2 = 1.0 - (threshold / eps) ** 2
    x = eps / params.kappa * s2
    y = threshold / params.kappa * np.sqrt(s2)
    upper = np.column_stack([x, y])
    lower = np.column_stack([x[::-1], -y[::-1]])
    return np.vstack([upper, lower])


def maxwell_bloch_amplitude(params: ModelParams) -> float:
    """Steady cavity amplitude |drive|/kappa without the atom."""
    return abs(params.drive) / params.kappa
