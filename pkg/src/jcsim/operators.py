"""Operators and states on the truncated atom-field product space.

Basis convention, fixed once and used everywhere: the atom index is slow
and the field index fast, with the upper atomic state |2>_A first,

    index i = block * (N+1) + n,   block 0 -> |2>_A,  block 1 -> |1>_A,

so the space is ordered {|2>_A|0>_a, .., |2>_A|N>_a, |1>_A|0>_a, .., |1>_A|N>_a}.
Operators are kept sparse (CSR), states dense.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .params import ModelParams

HERMITICITY_TOL = 1e-12


def fock_annihilation(n_max: int) -> sparse.csr_matrix:
    """Annihilation operator on the (n_max+1)-dimensional Fock factor."""
    data = np.sqrt(np.arange(1, n_max + 1, dtype=float))
    return sparse.diags(data, offsets=1, format="csr").astype(complex)


def state_index(atom: int, n: int, n_max: int) -> int:
    """Index of the basis state |atom>_A |n>_a with atom in {1, 2}."""
    if atom not in (1, 2):
        raise ValueError(f"atom label must be 1 or 2, got {atom}")
    if not 0 <= n <= n_max:
        raise ValueError(f"Fock label {n} outside 0..{n_max}")
    block = 0 if atom == 2 else 1
    return block * (n_max + 1) + n


def index_state(i: int, n_max: int) -> tuple[int, int]:
    """Inverse of state_index: index -> (atom, n)."""
    size = n_max + 1
    if not 0 <= i < 2 * size:
        raise ValueError(f"index {i} outside the space of dimension {2 * size}")
    block, n = divmod(i, size)
    return (2 if block == 0 else 1, n)


def basis_ket(atom: int, n: int, n_max: int) -> np.ndarray:
    """Dense unit vector for |atom>_A |n>_a."""
    ket = np.zeros(2 * (n_max + 1), dtype=complex)
    ket[state_index(atom, n, n_max)] = 1.0
    return ket


def ground_product_state(n_max: int) -> np.ndarray:
    """Density matrix of the ground product state |1>_A |0>_a."""
    ket = basis_ket(1, 0, n_max)
    return np.outer(ket, ket.conj())


@dataclass(frozen=True)
class OperatorSet:
    """All model operators on the 2(N+1)-dimensional space, sparse CSR."""

    a: sparse.csr_matrix
    a_dag: sparse.csr_matrix
    sm: sparse.csr_matrix
    sp: sparse.csr_matrix
    n_phot: sparse.csr_matrix
    sp_sm: sparse.csr_matrix
    identity: sparse.csr_matrix
    params: ModelParams = field(repr=False)


def build_operator_set(params: ModelParams) -> OperatorSet:
    """Construct the operator algebra for the given truncation.

    Parameters
    ----------
    params : ModelParams

    Returns
    -------
    OperatorSet
        Field operators act as identity on the atom and vice versa;
        conjugate pairs are exact adjoints of each other.
    """
    n_max = params.n_max
    id_atom = sparse.identity(2, format="csr", dtype=complex)
    id_field = sparse.identity(n_max + 1, format="csr", dtype=complex)

    a_field = fock_annihilation(n_max)
    # Atomic lowering |1><2| in the block order (|2>_A, |1>_A).
    sm_atom = sparse.csr_matrix(np.array([[0, 0], [1, 0]], dtype=complex))

    a = sparse.kron(id_atom, a_field, format="csr")
    sm = sparse.kron(sm_atom, id_field, format="csr")
    a_dag = a.conj().T.tocsr()
    sp = sm.conj().T.tocsr()
    return OperatorSet(
        a=a,
        a_dag=a_dag,
        sm=sm,
        sp=sp,
        n_phot=(a_dag @ a).tocsr(),
        sp_sm=(sp @ sm).tocsr(),
        identity=sparse.kron(id_atom, id_field, format="csr"),
        params=params,
    )


def expectation(op, rho: np.ndarray, hermitian: bool = False):
    """Expectation value tr(rho op).

    Parameters
    ----------
    op : sparse or dense square matrix
    rho : ndarray
        Density matrix of matching dimension.
    hermitian : bool
        Declare op Hermitian; the real part is returned and the imaginary
        residue checked against 1e-10 (a warning reports any excess).

    Returns
    -------
    complex, or float when hermitian=True
    """
    if op.shape != rho.shape:
        raise ValueError(f"dimension mismatch: op {op.shape} vs rho {rho.shape}")
    if sparse.issparse(op):
        value = (op @ rho).diagonal().sum()
    else:
        value = np.trace(op @ rho)
    if hermitian:
        if abs(value.imag) >= 1e-10:
            warnings.warn(
                f"imaginary residue {value.imag:.3e} on a declared Hermitian "
                "observable",
                stacklevel=2,
            )
        return value.real
    return complex(value)


def check_state(rho: np.ndarray, atol_eig: float = 1e-10) -> None:
    """Validate the density-matrix invariants; raise ValueError on failure.

    Hermiticity is relative (Frobenius), trace must be 1, and eigenvalues
    may not dip below -atol_eig.
    """
    norm = np.linalg.norm(rho)
    if norm == 0:
        raise ValueError("zero matrix is not a state")
    herm_defect = np.linalg.norm(rho - rho.conj().T) / norm
    if herm_defect > HERMITICITY_TOL:
        raise ValueError(f"state not Hermitian: relative defect {herm_defect:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"state trace {tr!r} differs from 1")
    smallest = np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()
    if smallest < -atol_eig:
        raise ValueError(f"state has negative eigenvalue {smallest:.3e}")


def normal_ordered_variance(ops: OperatorSet, rho: np.ndarray, theta: float) -> float:
    """Normal-ordered variance of the atomic quadrature at local-oscillator
    phase theta.

    The quadrature is (e^{-i theta} sigma_- + e^{i theta} sigma_+)/2 with
    the mean subtracted; normal ordering places sigma_+ to the left, giving

        (1/2) Re[e^{-2 i theta} (<sm^2> - <sm>^2)] + (1/2)(<sp sm> - |<sm>|^2)

    where <sm^2> = 0 for a two-state atom.
    """
    mean_sm = expectation(ops.sm, rho)
    excite = expectation(ops.sp_sm, rho, hermitian=True)
    connected_sq = -(mean_sm**2)
    return 0.5 * (np.exp(-2j * theta) * connected_sq).real + 0.5 * (
        excite - abs(mean_sm) ** 2
    )
