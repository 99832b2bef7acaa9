"""Lindblad generator and conditioned generators as sparse superoperators.

Density matrices are vectorized by column stacking, so that

    vec(A rho B) = (B^T kron A) vec(rho),

and a superoperator acts on vectors of length [2(N+1)]^2. The dynamics are
written in the frame rotating at the common resonance frequency omega0, where
the generator is time independent:

    H / hbar = i g (a_dag sm - a sp) + drive * a_dag + conj(drive) * a,
    d rho/dt = -i[H, rho] + kappa D[a] rho + (gamma/2) D[sm] rho,

with D[c] rho = 2 c rho c_dag - c_dag c rho - rho c_dag c. Correlation
functions computed here are rotating-frame envelopes; lab-frame results carry
an extra phase e^{-i omega0 tau} reattached at the output layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .operators import OperatorSet, build_operator_set
from .params import ModelParams

# Guard against accidentally huge superoperators; 2(N+1) above this limit
# would need tens of GiB for factorizations.
MAX_DIM = 4000


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Inverse of vec."""
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ValueError(f"length {v.size} is not a square")
    return v.reshape((dim, dim), order="F")


def trace_row(op) -> np.ndarray:
    """Row vector r with r @ vec(X) = tr(op X)."""
    dense = op.toarray() if sparse.issparse(op) else np.asarray(op)
    # tr(A X) = sum_ij A_ij X_ji = vec(A^T) . vec(X)
    return dense.reshape(-1, order="C")


@dataclass(frozen=True)
class Superoperator:
    """Sparse representation of a generator acting on vectorized states."""

    matrix: sparse.csr_matrix
    kind: str  # "full" or "conditioned"
    params: ModelParams = field(repr=False)
    channel: str | None = None
    flags: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        """Dimension 2(N+1) of the underlying matrix space."""
        return int(round(np.sqrt(self.matrix.shape[0])))


def _left(op) -> sparse.csr_matrix:
    """Superoperator for X -> op X."""
    n = op.shape[0]
    return sparse.kron(sparse.identity(n, dtype=complex, format="csr"), op, format="csr")


def _right(op) -> sparse.csr_matrix:
    """Superoperator for X -> X op."""
    n = op.shape[0]
    return sparse.kron(op.T, sparse.identity(n, dtype=complex, format="csr"), format="csr")


def _sandwich(op) -> sparse.csr_matrix:
    """Superoperator for X -> op X op_dag."""
    return sparse.kron(op.conj(), op, format="csr")


def _dissipator(op, rate: float) -> sparse.csr_matrix:
    cdc = (op.conj().T @ op).tocsr()
    return rate * (2.0 * _sandwich(op) - _left(cdc) - _right(cdc))


def build_liouvillian(params: ModelParams, ops: OperatorSet | None = None) -> Superoperator:
    """Assemble the full rotating-frame Lindblad generator.

    Parameters
    ----------
    params : ModelParams
    ops : OperatorSet, optional
        Reused when provided, rebuilt otherwise.

    Returns
    -------
    Superoperator
        kind="full"; trace preserving by construction.
    """
    if params.dim > MAX_DIM:
        raise ValueError(
            f"superoperator dimension {params.dim**2} exceeds the supported "
            f"budget ({MAX_DIM**2}); reduce n_max"
        )
    if ops is None:
        ops = build_operator_set(params)
    h = (
        1j * params.g * (ops.a_dag @ ops.sm - ops.a @ ops.sp)
        + params.drive * ops.a_dag
        + np.conj(params.drive) * ops.a
    ).tocsr()
    matrix = (
        -1j * (_left(h) - _right(h))
        + _dissipator(ops.a, params.kappa)
        + _dissipator(ops.sm, params.gamma / 2.0)
    )
    return Superoperator(matrix=matrix.tocsr(), kind="full", params=params)


def build_wtd_generator(params: ModelParams, channel: str = "side") -> Superoperator:
    """Generator conditioned on no emission into the chosen channel.

    Parameters
    ----------
    params : ModelParams
    channel : {"side", "forward"}
        "side" removes the atomic recycling term gamma sm . sp, describing
        evolution between side-scattered photon detections; "forward" removes
        the cavity recycling term 2 kappa a . a_dag instead (a symmetric
        extension, flagged as such).

    Returns
    -------
    Superoperator
        kind="conditioned"; trace decreasing on states populating the channel.
    """
    full = build_liouvillian(params)
    if channel == "side":
        if params.gamma <= 0:
            raise ValueError("side channel undefined for gamma = 0")
        ops = build_operator_set(params)
        matrix = full.matrix - params.gamma * _sandwich(ops.sm)
        flags: tuple[str, ...] = ()
    elif channel == "forward":
        ops = build_operator_set(params)
        matrix = full.matrix - 2.0 * params.kappa * _sandwich(ops.a)
        flags = ("extension",)
    else:
        raise ValueError(f"unknown channel {channel!r}")
    return Superoperator(
        matrix=matrix.tocsr(),
        kind="conditioned",
        params=params,
        channel=channel,
        flags=flags,
    )


def apply(superop: Superoperator, rho: np.ndarray) -> np.ndarray:
    """Time derivative d rho/dt = L rho, as an unvectorized matrix."""
    dim = superop.dim
    if rho.shape != (dim, dim):
        raise ValueError(f"dimension mismatch: rho {rho.shape} vs generator dim {dim}")
    return unvec(superop.matrix @ vec(rho), dim)
