"""Independent slow-route references for the test suite.

Everything here is built from scratch on purpose: dense operators from
explicit matrix elements, the generator from the textbook Lindblad formula,
propagation by scipy's expm, Q values from the factorial series, waiting-time
moments from resolvent solves. The package must agree with these routes
without sharing any code with them.
"""

import math

import numpy as np
from scipy.linalg import expm


def dense_operators(n_max):
    """(a, sm) on the product space; atom slow, upper block |2>_A first."""
    size = n_max + 1
    ladder = np.diag(np.sqrt(np.arange(1.0, size)), 1)
    lower = np.array([[0.0, 0.0], [1.0, 0.0]])
    a = np.kron(np.eye(2), ladder).astype(complex)
    sm = np.kron(lower, np.eye(size)).astype(complex)
    return a, sm


def dense_hamiltonian(params):
    a, sm = dense_operators(params.n_max)
    coupling = 1j * params.g * (a.conj().T @ sm - a @ sm.conj().T)
    drive = params.drive * a.conj().T + np.conj(params.drive) * a
    return coupling + drive


def lindblad_rhs(params, rho):
    """d rho/dt evaluated directly on the matrix, no vectorization."""
    a, sm = dense_operators(params.n_max)
    h = dense_hamiltonian(params)

    def dissipator(c, rate):
        cd = c.conj().T
        return rate * (2.0 * c @ rho @ cd - cd @ c @ rho - rho @ cd @ c)

    return (
        -1j * (h @ rho - rho @ h)
        + dissipator(a, params.kappa)
        + dissipator(sm, params.gamma / 2.0)
    )


def dense_generator(params, conditioned=None):
    """Column-stacked generator matrix; optionally drop one recycling term."""
    dim = 2 * (params.n_max + 1)
    a, sm = dense_operators(params.n_max)
    h = dense_hamiltonian(params)
    eye = np.eye(dim, dtype=complex)

    def dissipator(c, rate):
        cdc = c.conj().T @ c
        return rate * (
            2.0 * np.kron(c.conj(), c) - np.kron(eye, cdc) - np.kron(cdc.T, eye)
        )

    gen = (
        -1j * (np.kron(eye, h) - np.kron(h.T, eye))
        + dissipator(a, params.kappa)
        + dissipator(sm, params.gamma / 2.0)
    )
    if conditioned == "side":
        gen = gen - params.gamma * np.kron(sm.conj(), sm)
    elif conditioned == "forward":
        gen = gen - 2.0 * params.kappa * np.kron(a.conj(), a)
    return gen


def propagate_expm(params, rho0, t, conditioned=None):
    """Exact propagation of any seed matrix by the matrix exponential."""
    rho0 = np.asarray(rho0, dtype=complex)
    gen = dense_generator(params, conditioned)
    v = expm(gen * t) @ rho0.reshape(-1, order="F")
    return v.reshape(rho0.shape, order="F")


def steady_state_dense(params):
    """Nullspace of the dense generator from its smallest singular vector."""
    gen = dense_generator(params)
    _, _, vh = np.linalg.svd(gen)
    dim = 2 * (params.n_max + 1)
    rho = vh[-1].conj().reshape((dim, dim), order="F")
    rho = (rho + rho.conj().T) / 2.0
    return rho / np.trace(rho).real


def waiting_time_moments(params):
    """(integral, mean) of the side-channel waiting times by resolvent solves.

    With p the trace row of sp sm, v the vectorized post-detection state and
    Lbar the no-side-emission generator,

        integral = -gamma p Lbar^{-1} v,   mean = gamma p Lbar^{-2} v / integral.
    """
    a, sm = dense_operators(params.n_max)
    rho_ss = steady_state_dense(params)
    sp_sm = sm.conj().T @ sm
    norm = np.trace(sp_sm @ rho_ss).real
    rho_c = sm @ rho_ss @ sm.conj().T / norm
    gen = dense_generator(params, conditioned="side")
    p = sp_sm.T.reshape(-1, order="F")  # p @ vec(X) = tr(sp_sm X)
    v = rho_c.reshape(-1, order="F")
    first = np.linalg.solve(gen, v)
    second = np.linalg.solve(gen, first)
    integral = -params.gamma * np.real(p @ first)
    mean = params.gamma * np.real(p @ second) / integral
    return integral, mean


def coherent_ket(beta, size):
    """Truncated coherent state |beta> in the Fock basis."""
    ket = np.array(
        [beta**n / math.sqrt(math.factorial(n)) for n in range(size)],
        dtype=complex,
    )
    return ket * math.exp(-0.5 * abs(beta) ** 2)


def q_direct(rho_c, alpha):
    """Q(alpha) = <alpha|rho|alpha>/pi from the factorial series."""
    weights = coherent_ket(alpha, rho_c.shape[0])
    return float(np.real(weights.conj() @ rho_c @ weights) / math.pi)


def random_density(rng, dim):
    """Ginibre-induced random density matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
