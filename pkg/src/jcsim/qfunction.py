"""Husimi Q distributions of the cavity field on phase-space grids.

Q(alpha) = <alpha| rho_c |alpha> / pi for the reduced cavity state rho_c.
The coherent-state overlaps are built by the factorial-free recurrence
c_0 = e^{-|alpha|^2/2}, c_{n+1} = c_n alpha / sqrt(n+1), which stays stable
at truncations of hundreds of photons.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter

from . import dynamics
from .analytics import neoclassical_curve
from .liouvillian import build_liouvillian
from .operators import ground_product_state
from .params import ModelParams

GRID_POINTS = 201
GRID_PADDING = 1.2
PEAK_THRESHOLD = 0.1


@dataclass(frozen=True)
class QGrid:
    """Sampled Q distribution with its peak list.

    values[iy, ix] corresponds to alpha = x[ix] + 1j*y[iy]; peaks are
    (x, y, height) triples after quadratic refinement; norm_check is the
    grid-summed integral of Q.
    """

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    spacing: tuple[float, float]
    peaks: tuple[tuple[float, float, float], ...]
    norm_check: float
    params: ModelParams | None = field(default=None, repr=False)
    curve: np.ndarray | None = field(default=None, repr=False)
    flags: tuple[str, ...] = ()


def reduce_to_cavity(rho: np.ndarray) -> np.ndarray:
    """Partial trace over the atom: the sum of the two atomic blocks."""
    dim = rho.shape[0]
    if rho.shape != (dim, dim) or dim % 2:
        raise ValueError(f"expected a square matrix of even dimension, got {rho.shape}")
    size = dim // 2
    return rho[:size, :size] + rho[size:, size:]


def default_axes(
    params: ModelParams, points: int = GRID_POINTS
) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric grid spanning 1.2x the free-cavity amplitude |drive|/kappa."""
    reach = GRID_PADDING * abs(params.drive) / params.kappa
    if reach == 0:
        reach = 3.0
    axis = np.linspace(-reach, reach, points)
    return axis, axis.copy()


def coverage_reach(rho_c: np.ndarray) -> float:
    """Smallest axis reach that captures the state, sqrt(<n> + 5 sigma_n)."""
    rho_c = np.asarray(rho_c)
    numbers = np.arange(rho_c.shape[0])
    populations = np.real(np.diag(rho_c))
    n_mean = float(populations @ numbers)
    n_var = max(float(populations @ numbers**2) - n_mean**2, 0.0)
    return float(np.sqrt(n_mean + 5.0 * np.sqrt(n_var)))


def adequate_axes(
    states, params: ModelParams, points: int = GRID_POINTS
) -> tuple[np.ndarray, np.ndarray]:
    """Default axes, widened when the given cavity states need more room."""
    reach = GRID_PADDING * abs(params.drive) / params.kappa
    if reach == 0:
        reach = 3.0
    needed = 1.02 * max(coverage_reach(state) for state in states)
    reach = max(reach, needed)
    axis = np.linspace(-reach, reach, points)
    return axis, axis.copy()


def _coherent_overlaps(alphas: np.ndarray, size: int) -> np.ndarray:
    """Matrix c[p, n] = <n|alpha_p> without explicit factorials."""
    c = np.empty((alphas.size, size), dtype=complex)
    c[:, 0] = np.exp(-0.5 * np.abs(alphas) ** 2)
    for n in range(size - 1):
        c[:, n + 1] = c[:, n] * alphas / np.sqrt(n + 1.0)
    return c


def _refine_peak(values: np.ndarray, iy: int, ix: int, x: np.ndarray, y: np.ndarray):
    """Quadratic refinement of a local maximum on its 3x3 neighborhood."""
    patch = values[iy - 1 : iy + 2, ix - 1 : ix + 2]
    dx = 0.5 * (patch[1, 0] - patch[1, 2])
    den_x = patch[1, 0] - 2.0 * patch[1, 1] + patch[1, 2]
    dy = 0.5 * (patch[0, 1] - patch[2, 1])
    den_y = patch[0, 1] - 2.0 * patch[1, 1] + patch[2, 1]
    off_x = np.clip(dx / den_x, -1.0, 1.0) if den_x < 0 else 0.0
    off_y = np.clip(dy / den_y, -1.0, 1.0) if den_y < 0 else 0.0
    height = patch[1, 1] - 0.5 * (dx * off_x + dy * off_y)
    hx = x[1] - x[0]
    hy = y[1] - y[0]
    return (float(x[ix] + off_x * hx), float(y[iy] + off_y * hy), float(height))


def find_peaks(qgrid_values, x, y, threshold: float = PEAK_THRESHOLD):
    """Interior 8-neighbor local maxima above threshold * global max."""
    values = np.asarray(qgrid_values)
    footprint = maximum_filter(values, size=3, mode="nearest")
    mask = (values >= footprint) & (values > threshold * values.max())
    mask[0, :] = mask[-1, :] = False
    mask[:, 0] = mask[:, -1] = False
    peaks = [
        _refine_peak(values, iy, ix, x, y) for iy, ix in zip(*np.nonzero(mask))
    ]
    peaks.sort(key=lambda p: -p[2])
    return tuple(peaks)


def husimi_q(
    rho_c: np.ndarray,
    x: np.ndarray | None = None,
    y: np.ndarray | None = None,
    params: ModelParams | None = None,
    flags: tuple[str, ...] = (),
) -> QGrid:
    """Evaluate Q on a cartesian grid and locate its peaks.

    Parameters
    ----------
    rho_c : ndarray
        Reduced cavity density matrix, (N+1) x (N+1).
    x, y : ndarray, optional
        Grid axes; default spans 1.2x the free-cavity amplitude (params
        required in that case).
    params : ModelParams, optional
        Attached to the output and used for the default axes.

    Raises
    ------
    ValueError
        When the grid cannot capture the state: the grid reach must satisfy
        max|alpha|^2 >= <n> + 5 sqrt(var n).
    """
    rho_c = np.asarray(rho_c, dtype=complex)
    size = rho_c.shape[0]
    if x is None or y is None:
        if params is None:
            raise ValueError("either axes or params must be given")
        x, y = default_axes(params)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    reach2 = max(np.max(np.abs(x)), np.max(np.abs(y))) ** 2
    needed = coverage_reach(rho_c) ** 2
    if reach2 < needed:
        raise ValueError(
            f"grid reach |alpha|^2 = {reach2:.1f} below the state support "
            f"{needed:.1f}; extend the axes to about +-{np.sqrt(needed):.1f}"
        )
    alphas = (x[None, :] + 1j * y[:, None]).ravel()
    overlaps = _coherent_overlaps(alphas, size)
    contracted = overlaps.conj() @ rho_c
    values = np.einsum("pn,pn->p", contracted, overlaps).real / np.pi
    values = values.reshape(y.size, x.size)
    spacing = (float(x[1] - x[0]), float(y[1] - y[0]))
    norm = float(values.sum() * spacing[0] * spacing[1])
    return QGrid(
        x=x,
        y=y,
        values=values,
        spacing=spacing,
        peaks=find_peaks(values, x, y),
        norm_check=norm,
        params=params,
        flags=flags,
    )


def steady_state_q(
    params: ModelParams,
    x: np.ndarray | None = None,
    y: np.ndarray | None = None,
) -> QGrid:
    """Q distribution of the steady cavity field."""
    superop = build_liouvillian(params)
    rho_ss = dynamics.steady_state(superop)
    rho_c = reduce_to_cavity(rho_ss)
    if x is None or y is None:
        x, y = adequate_axes([rho_c], params)
    return husimi_q(rho_c, x=x, y=y, params=params)


def transient_snapshots(
    params: ModelParams,
    times,
    x: np.ndarray | None = None,
    y: np.ndarray | None = None,
    rtol: float = dynamics.DEFAULT_RTOL,
    atol: float = dynamics.DEFAULT_ATOL,
) -> list[QGrid]:
    """Q snapshots of the evolution from the ground product state.

    Each snapshot carries the closed neoclassical curve for overlay.
    """
    superop = build_liouvillian(params)
    trajectory = dynamics.evolve(
        superop, ground_product_state(params.n_max), times, rtol=rtol, atol=atol
    )
    curve = neoclassical_curve(params)
    reduced = [reduce_to_cavity(state) for state in trajectory.states]
    if x is None or y is None:
        x, y = adequate_axes(reduced, params)
    snapshots = []
    for rho_c in reduced:
        qgrid = husimi_q(rho_c, x=x, y=y, params=params)
        snapshots.append(
            QGrid(
                x=qgrid.x,
                y=qgrid.y,
                values=qgrid.values,
                spacing=qgrid.spacing,
                peaks=qgrid.peaks,
                norm_check=qgrid.norm_check,
                params=params,
                curve=curve,
                flags=qgrid.flags,
            )
        )
    return snapshots


def mirror_asymmetry(qgrid: QGrid) -> float:
    """max |Q(x+iy) - Q(x-iy)| / max Q, the real-axis mirror defect."""
    return float(
        np.max(np.abs(qgrid.values - qgrid.values[::-1, :])) / qgrid.values.max()
    )


def write_qgrid_csv(qgrid: QGrid, path) -> None:
    """CSV serialization with columns x, y, Q, row-major over y then x."""
    with open(path, "w", newline="") as handle:
        handle.write("# jc-csv v1 task=qfunc schema=x,y,Q\n")
        writer = csv.writer(handle)
        writer.writerow(["x", "y", "Q"])
        for iy in range(qgrid.y.size):
            for ix in range(qgrid.x.size):
                writer.writerow(
                    [
                        f"{qgrid.x[ix]:.17g}",
                        f"{qgrid.y[iy]:.17g}",
                        f"{qgrid.values[iy, ix]:.17g}",
                    ]
                )


def qgrid_header(qgrid: QGrid) -> dict:
    """JSON-ready header describing the grid, parameters and peaks."""
    header = {
        "grid": {
            "x_min": float(qgrid.x[0]),
            "x_max": float(qgrid.x[-1]),
            "y_min": float(qgrid.y[0]),
            "y_max": float(qgrid.y[-1]),
            "spacing": list(qgrid.spacing),
            "points": [int(qgrid.x.size), int(qgrid.y.size)],
        },
        "peaks": [
            {"x": px, "y": py, "height": height} for px, py, height in qgrid.peaks
        ],
        "norm_check": qgrid.norm_check,
        "flags": list(qgrid.flags),
    }
    if qgrid.params is not None:
        p = qgrid.params
        header["params"] = {
            "g": p.g,
            "gamma": p.gamma,
            "drive_re": float(np.real(p.drive)),
            "drive_im": float(np.imag(p.drive)),
            "n_max": p.n_max,
            "kappa": p.kappa,
        }
    return header


def write_qgrid_json(qgrid: QGrid, path) -> None:
    with open(path, "w") as handle:
        json.dump(qgrid_header(qgrid), handle, indent=2, sort_keys=True)
        handle.write("\n")
