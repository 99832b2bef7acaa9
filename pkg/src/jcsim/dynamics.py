"""Time evolution under a superoperator and Liouvillian steady states.

Evolution uses the adaptive eighth-order explicit Runge-Kutta integrator of
Hairer (scipy's DOP853) with dense output, stepping freely and interpolating
onto the requested grid so that long evolutions never store more than the
requested snapshots. Steady states come from a shift-inverted sparse
eigenvalue solve targeting the zero eigenvalue, with a direct bordered solve
(one row replaced by the trace constraint) as fallback.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.integrate import DOP853
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigs, splu

from .liouvillian import Superoperator, trace_row, unvec, vec
from .params import ModelParams

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10
RESIDUAL_TOL = 1e-10
TRUNCATION_TOL = 1e-6


class NumericalError(RuntimeError):
    """Raised when an integrator or linear-algebra routine fails."""


@dataclass(frozen=True)
class Trajectory:
    """States sampled on a time grid, with the tolerances that produced them."""

    times: np.ndarray
    states: list = field(repr=False)
    rtol: float
    atol: float
    trace_drift: float
    n_steps: int
    flags: tuple[str, ...] = ()


def _check_tolerances(rtol: float, atol: float) -> None:
    for name, value in (("rtol", rtol), ("atol", atol)):
        if not 0 < value <= 1e-2:
            raise ValueError(f"{name} must lie in (0, 1e-2], got {value}")


def _check_times(times: np.ndarray) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a nonempty 1-d grid")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly increasing")
    return times


def _propagate(matrix, y0, times, rtol, atol, max_step, collect):
    """Step DOP853 across [times[0], times[-1]], interpolating onto the grid.

    collect(index, y) is called once per grid point in order. Returns the
    number of accepted steps.
    """

    def rhs(t, y):
        return matrix @ y

    collect(0, y0)
    if times.size == 1:
        return 0
    solver = DOP853(
        rhs,
        times[0],
        y0,
        t_bound=times[-1],
        rtol=rtol,
        atol=atol,
        max_step=max_step,
    )
    next_index = 1
    n_steps = 0
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise NumericalError(
                f"integrator failed at t = {solver.t:.6g} with step size "
                f"{solver.step_size if solver.step_size else np.spacing(solver.t):.3e}"
                f": {message}"
            )
        n_steps += 1
        if next_index < times.size and times[next_index] <= solver.t:
            dense = solver.dense_output()
            while next_index < times.size and times[next_index] <= solver.t:
                collect(next_index, dense(times[next_index]))
                next_index += 1
    while next_index < times.size:  # t_bound landed exactly on the last step
        collect(next_index, solver.y)
        next_index += 1
    return n_steps


def _prepare_state(rho0, dim, symmetrize):
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (dim, dim):
        raise ValueError(f"state shape {rho0.shape} does not match dimension {dim}")
    if not symmetrize:
        return rho0
    correction = np.linalg.norm(rho0 - rho0.conj().T) / 2.0
    if correction > 1e-10:
        warnings.warn(
            f"input state symmetrized; Hermitian correction {correction:.3e}",
            stacklevel=3,
        )
    rho0 = (rho0 + rho0.conj().T) / 2.0
    tr = np.trace(rho0).real
    if abs(tr) > 0:
        rho0 = rho0 / tr
    return rho0


def evolve(
    superop: Superoperator,
    rho0: np.ndarray,
    times,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    symmetrize: bool = True,
    max_step: float = np.inf,
) -> Trajectory:
    """Evolve a density matrix, returning states at the requested times.

    Parameters
    ----------
    superop : Superoperator
        Full or conditioned generator.
    rho0 : ndarray
        State at times[0]. Symmetrized and renormalized unless
        symmetrize=False (used for non-Hermitian regression seeds).
    times : array_like
        Strictly increasing grid; the first entry is the initial time.
    rtol, atol : float
        Integrator tolerances, each in (0, 1e-2].
    max_step : float
        Optional cap on the internal step (used by convergence studies).

    Returns
    -------
    Trajectory
    """
    _check_tolerances(rtol, atol)
    times = _check_times(times)
    dim = superop.dim
    rho0 = _prepare_state(rho0, dim, symmetrize)
    states = [None] * times.size

    def collect(index, y):
        states[index] = unvec(y.copy(), dim)

    n_steps = _propagate(
        superop.matrix, vec(rho0), times, rtol, atol, max_step, collect
    )
    if superop.kind == "full" and symmetrize:
        traces = np.array([np.trace(s).real for s in states])
        trace_drift = float(np.max(np.abs(traces - 1.0)))
    else:
        trace_drift = float("nan")
    return Trajectory(
        times=times,
        states=states,
        rtol=rtol,
        atol=atol,
        trace_drift=trace_drift,
        n_steps=n_steps,
    )


def evolve_observables(
    superop: Superoperator,
    rho0: np.ndarray,
    times,
    observables,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    symmetrize: bool = False,
) -> np.ndarray:
    """Propagate once and record tr(op state) on the grid for each observable.

    Memory stays O(dim^2) regardless of the grid size, which matters for
    finely sampled correlation traces.

    Returns
    -------
    ndarray, shape (len(observables), len(times)), complex
    """
    _check_tolerances(rtol, atol)
    times = _check_times(times)
    dim = superop.dim
    rho0 = _prepare_state(rho0, dim, symmetrize)
    rows = np.vstack([trace_row(op) for op in observables])
    samples = np.empty((rows.shape[0], times.size), dtype=complex)

    def collect(index, y):
        samples[:, index] = rows @ y

    _propagate(superop.matrix, vec(rho0), times, rtol, atol, np.inf, collect)
    return samples


def _bordered_solve(matrix) -> np.ndarray:
    """Direct solve of L rho = 0 with row 0 replaced by the trace constraint."""
    dim2 = matrix.shape[0]
    dim = int(round(np.sqrt(dim2)))
    coo = matrix.tocoo()
    keep = coo.row != 0
    # Trace row: vec indices of the diagonal are i*(dim+1).
    trace_cols = np.arange(dim) * (dim + 1)
    rows = np.concatenate([coo.row[keep], np.zeros(dim, dtype=coo.row.dtype)])
    cols = np.concatenate([coo.col[keep], trace_cols])
    data = np.concatenate([coo.data[keep], np.ones(dim, dtype=complex)])
    bordered = sparse.csc_matrix((data, (rows, cols)), shape=matrix.shape)
    rhs = np.zeros(dim2, dtype=complex)
    rhs[0] = 1.0
    try:
        solution = splu(bordered).solve(rhs)
    except RuntimeError as exc:  # singular factorization
        raise NumericalError(f"bordered steady-state solve failed: {exc}") from exc
    return unvec(solution, dim)


def _normalize(rho: np.ndarray) -> np.ndarray:
    rho = (rho + rho.conj().T) / 2.0
    return rho / np.trace(rho).real


def scaled_residual(superop: Superoperator, rho: np.ndarray) -> float:
    """|L vec(rho)|_2 / |L|_inf, the scaled fixed-point residual."""
    norm = sparse.linalg.norm(superop.matrix, np.inf)
    return float(np.linalg.norm(superop.matrix @ vec(rho)) / norm)


def steady_state(
    superop: Superoperator,
    method: str = "auto",
    sigma: float = 1e-3,
) -> np.ndarray:
    """Unique steady state from the Liouvillian nullspace.

    Parameters
    ----------
    superop : Superoperator
        Must be a full (trace-preserving) generator.
    method : {"auto", "eigs", "direct"}
        "eigs" is the shift-inverted Arnoldi solve around zero, which also
        detects a degenerate nullspace; "direct" is the bordered linear
        solve; "auto" tries eigs and falls back to direct.
    sigma : float
        Shift for the eigenvalue targeting, slightly off zero so the
        factorized matrix is nonsingular.

    Returns
    -------
    ndarray
        Normalized Hermitian steady state, scaled residual below 1e-10.
    """
    if superop.kind != "full":
        raise ValueError("steady state requires the full generator")
    rho = None
    if method in ("auto", "eigs"):
        try:
            v0 = np.ones(superop.matrix.shape[0], dtype=complex)
            values, vectors = eigs(
                superop.matrix, k=2, sigma=sigma, which="LM", v0=v0
            )
            order = np.argsort(np.abs(values))
            slowest = abs(values[order[1]])
            if slowest < 1e-9:
                raise ValueError(
                    "degenerate nullspace: two eigenvalues at zero "
                    f"({values[order[0]]:.2e}, {values[order[1]]:.2e})"
                )
            if slowest < 1e-6:
                # A decay mode this slow is indistinguishable from the
                # nullspace after shift inversion, and mixing it in would
                # not raise the residual.  The bordered solve is exact.
                if method == "eigs":
                    raise NumericalError(
                        f"slowest decay rate {slowest:.2e} too close to zero "
                        "to separate from the nullspace; use method='direct'"
                    )
            elif abs(values[order[0]]) < 1e-6:
                rho = _normalize(unvec(vectors[:, order[0]], superop.dim))
        except (ArpackError, ArpackNoConvergence) as exc:
            if method == "eigs":
                raise NumericalError(f"shift-invert eigensolve failed: {exc}") from exc
    if rho is None or scaled_residual(superop, rho) >= RESIDUAL_TOL:
        if method == "eigs":
            raise NumericalError("shift-invert eigensolve missed the nullspace")
        rho = _normalize(_bordered_solve(superop.matrix))
    residual = scaled_residual(superop, rho)
    if residual >= RESIDUAL_TOL:
        raise NumericalError(
            f"steady-state residual {residual:.3e} above {RESIDUAL_TOL:.0e}"
        )
    ok, top_two = truncation_check(rho, superop.params)
    if not ok:
        warnings.warn(
            f"truncation suspect: top two Fock populations {top_two:.3e}; "
            f"re-run with n_max > {superop.params.n_max}",
            stacklevel=2,
        )
    return rho


def truncation_check(rho: np.ndarray, params: ModelParams) -> tuple[bool, float]:
    """Population of the two highest Fock levels, against the 1e-6 threshold."""
    size = params.n_max + 1
    populations = np.real(np.diag(rho))
    top_two = 0.0
    for block in (0, 1):
        offset = block * size
        top_two += populations[offset + size - 1] + populations[offset + size - 2]
    return bool(top_two < TRUNCATION_TOL), float(top_two)
