"""Optional static rendering of task outputs.

Kept apart from the compute path: nothing else imports this module, and
matplotlib is only required when --plot is requested.  Each renderer
reads back the CSV the task just wrote, so a plot can also be produced
later from saved artifacts.
"""

from __future__ import annotations

import json
import os

import numpy as np


def _pyplot():
    try:
        import matplotlib
    except ImportError:
        raise ValueError(
            "plot rendering needs matplotlib; install the [plot] extra"
        ) from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _read_csv(path):
    with open(path, encoding="utf-8") as handle:
        header = handle.readline()
        if not header.startswith("# jc-csv"):
            raise ValueError(f"{path} is not a jc CSV file")
        columns = handle.readline().strip().split(",")
        data = np.loadtxt(handle, delimiter=",", ndmin=2, dtype=str)
    return columns, data


def _columns(path, *names):
    columns, data = _read_csv(path)
    picked = []
    for name in names:
        picked.append(data[:, columns.index(name)].astype(float))
    return picked


def _line_plot(plt, path, x, series, xlabel, ylabel):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for values, label, style in series:
        ax.plot(x, values, style, label=label, linewidth=1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def _render_g1(plt, out_dir):
    tau, re, im, are, aim = _columns(
        os.path.join(out_dir, "g1.csv"), "tau", "re_g1", "im_g1", "analytic_re", "analytic_im"
    )
    path = os.path.join(out_dir, "g1.png")
    series = [(re, "Re numeric", "-"), (im, "Im numeric", "-")]
    if np.all(np.isfinite(are)):
        series += [(are, "Re weak drive", "--"), (aim, "Im weak drive", "--")]
    _line_plot(plt, path, tau, series, r"$\kappa\tau$", r"$g^{(1)}(\tau)$")
    return path


def _render_g2(plt, out_dir):
    tau, g2, secular, two_quanta = _columns(
        os.path.join(out_dir, "g2.csv"), "tau", "g2", "analytic_secular", "analytic_two_quanta"
    )
    path = os.path.join(out_dir, "g2.png")
    _line_plot(
        plt,
        path,
        tau,
        [
            (g2, "numeric", "-"),
            (secular, "three level", "--"),
            (two_quanta, "two quanta", ":"),
        ],
        r"$\kappa\tau$",
        r"$g^{(2)}(\tau)$",
    )
    return path


def _render_wtd(plt, out_dir):
    tau, w, reference = _columns(os.path.join(out_dir, "wtd.csv"), "tau", "w", "reference")
    path = os.path.join(out_dir, "wtd.png")
    _line_plot(
        plt,
        path,
        tau,
        [(w, "numeric", "-"), (reference, "one-quantum reference", "--")],
        r"$\kappa\tau$",
        r"$w(\tau)$",
    )
    return path


def _render_spectrum(plt, out_dir):
    omega, density, analytic = _columns(
        os.path.join(out_dir, "spectrum.csv"), "omega", "density", "analytic_density"
    )
    path = os.path.join(out_dir, "spectrum.png")
    _line_plot(
        plt,
        path,
        omega,
        [(density, "numeric", "-"), (analytic, "weak drive", "--")],
        r"$(\omega-\omega_0)/\kappa$",
        "incoherent density",
    )
    return path


def _render_evolve(plt, out_dir):
    t, n, pe = _columns(
        os.path.join(out_dir, "evolve.csv"), "t", "photon_number", "excited_population"
    )
    path = os.path.join(out_dir, "evolve.png")
    _line_plot(
        plt,
        path,
        t,
        [(n, r"$\langle a^\dagger a\rangle$", "-"), (pe, r"$\langle\sigma_+\sigma_-\rangle$", "--")],
        r"$\kappa t$",
        "expectation value",
    )
    return path


def _qfunc_panel(ax, x, y, values, curve):
    ax.pcolormesh(x, y, values, shading="nearest", cmap="magma")
    if curve is not None and len(curve) > 1:
        vertices = np.asarray(curve, dtype=float)
        ax.plot(vertices[:, 0], vertices[:, 1], "w-", linewidth=0.8)
    ax.set_aspect("equal")


def _load_qgrid_csv(path):
    columns, data = _read_csv(path)
    x = data[:, columns.index("x")].astype(float)
    y = data[:, columns.index("y")].astype(float)
    q = data[:, columns.index("Q")].astype(float)
    xs = np.unique(x)
    ys = np.unique(y)
    return xs, ys, q.reshape(ys.size, xs.size)


def _render_qfunc(plt, out_dir):
    with open(os.path.join(out_dir, "qfunc.json"), encoding="utf-8") as handle:
        meta = json.load(handle)
    summary = meta.get("summary", {})
    path = os.path.join(out_dir, "qfunc.png")
    if summary.get("mode") == "transient":
        snapshots = summary["snapshots"]
        count = len(snapshots)
        ncols = 4
        nrows = (count + ncols - 1) // ncols
        fig, axes = plt.subplots(
            nrows, ncols, figsize=(3.0 * ncols, 3.0 * nrows), squeeze=False
        )
        for index, header in enumerate(snapshots):
            ax = axes[index // ncols][index % ncols]
            xs, ys, values = _load_qgrid_csv(
                os.path.join(out_dir, f"qfunc_snapshot_{index:02d}.csv")
            )
            _qfunc_panel(ax, xs, ys, values, header.get("curve"))
            ax.set_title(f"gT = {header['g_time']:.3g}", fontsize=8)
        for index in range(count, nrows * ncols):
            axes[index // ncols][index % ncols].set_axis_off()
    else:
        fig, ax = plt.subplots(figsize=(5.0, 4.5))
        xs, ys, values = _load_qgrid_csv(os.path.join(out_dir, "qfunc.csv"))
        _qfunc_panel(ax, xs, ys, values, None)
        ax.set_xlabel(r"Re $\alpha$")
        ax.set_ylabel(r"Im $\alpha$")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
    return path


_RENDERERS = {
    "g1": _render_g1,
    "g2": _render_g2,
    "wtd": _render_wtd,
    "spectrum": _render_spectrum,
    "evolve": _render_evolve,
    "qfunc": _render_qfunc,
}


def render_task(task: str, out_dir: str):
    """Render the task's saved output; returns the PNG path or None."""
    renderer = _RENDERERS.get(task)
    if renderer is None:
        return None
    plt = _pyplot()
    return renderer(plt, out_dir)
