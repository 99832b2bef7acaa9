"""Command-line front end.

``jc <task>`` runs one scenario per process and writes ``<task>.csv``
plus ``<task>.json`` into the output directory.  The JSON metadata holds
the fully resolved configuration, so passing it back through ``--config``
reproduces the run; payload rows carry no wall-clock data and re-running
an identical configuration gives bit-identical CSV.

Only the standard library is imported at module level.  The numerical
stack is loaded inside the dispatcher, after JC_THREADS has been turned
into the usual BLAS/OpenMP thread-count variables.

Exit codes: 0 success, 1 domain error (bad config, parameters outside a
guard), 2 numerical failure (solver breakdown, or a truncation-suspect
flag under --strict).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

TASKS = ("steady", "g1", "spectrum", "g2", "wtd", "qfunc", "evolve", "validate")

_CONFIG_KEYS: dict[str, type] = {
    "g_over_kappa": float,
    "gamma_over_2kappa": float,
    "drive_over_g": float,
    "drive_phase": float,
    "n_max": int,
    "rtol": float,
    "atol": float,
    "tau_max": float,
    "channel": str,
    "omega_max": float,
    "omega_spacing": float,
    "t_max": float,
    "n_times": int,
    "snapshot_count": int,
    "snapshot_gt_max": float,
    "grid_points": int,
    "grid_reach": float,
    "criteria": str,
}

_DEFAULTS = {
    "g_over_kappa": 100.0,
    "gamma_over_2kappa": 1.0,
    "drive_over_g": 0.05,
    "drive_phase": math.pi / 2.0,
    "n_max": 30,
    "rtol": 1e-8,
    "atol": 1e-10,
    "channel": "side",
}

_THREAD_VARIABLES = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _configure_threads() -> None:
    value = os.environ.get("JC_THREADS")
    if value is None or value == "":
        return
    try:
        count = int(value)
    except ValueError:
        raise ValueError(f"JC_THREADS must be an integer, got {value!r}") from None
    if count < 1:
        raise ValueError(f"JC_THREADS must be positive, got {count}")
    for name in _THREAD_VARIABLES:
        os.environ[name] = str(count)


def _coerce(key: str, raw, source: str):
    if key not in _CONFIG_KEYS:
        known = ", ".join(sorted(_CONFIG_KEYS))
        raise ValueError(f"unknown config key {key!r} in {source}; known keys: {known}")
    kind = _CONFIG_KEYS[key]
    try:
        if kind is int:
            # Accept "150" and 150.0 but reject genuine fractions.
            as_float = float(raw)
            as_int = int(round(as_float))
            if as_float != as_int:
                raise ValueError
            return as_int
        if kind is float:
            return float(raw)
        return str(raw)
    except (TypeError, ValueError):
        raise ValueError(
            f"config key {key!r} in {source} expects {kind.__name__}, got {raw!r}"
        ) from None


def _parse_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(text)
        body = payload.get("config", payload)
        if not isinstance(body, dict):
            raise ValueError(f"config file {path} holds no mapping")
        return {key: _coerce(key, value, path) for key, value in body.items()}
    config = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        config[key.strip()] = _coerce(key.strip(), value.strip(), f"{path}:{lineno}")
    return config


def _parse_param_overrides(pairs) -> dict:
    config = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ValueError(f"--param expects key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        config[key.strip()] = _coerce(key.strip(), value.strip(), "--param")
    return config


def _resolve_preset_name(preset, panel):
    from .presets import canonical_name

    if preset is None:
        if panel:
            raise ValueError("--panel requires --preset fig4")
        return None
    name = preset
    if panel:
        base = preset.strip().replace("_", "-").lower()
        if not base.startswith("fig4"):
            raise ValueError("--panel only applies to the fig4 presets")
        name = f"fig4-{panel}"
    return canonical_name(name)


def resolve_config(args) -> tuple[dict, str | None, list[str]]:
    """Merge defaults, preset, config file and --param overrides.

    Precedence is command line over file over preset over defaults; the
    surrogate substitution for a zero atomic rate runs last.
    """
    from .presets import apply_surrogate, preset_config

    config = dict(_DEFAULTS)
    preset = _resolve_preset_name(args.preset, args.panel)
    if preset is not None:
        config.update(preset_config(preset))
    if args.config:
        config.update(_parse_config_file(args.config))
    config.update(_parse_param_overrides(args.param))
    config, flags = apply_surrogate(config)
    return config, preset, list(flags)


def _build_params(config):
    from .params import from_ratios

    return from_ratios(
        g_over_kappa=config["g_over_kappa"],
        gamma_over_2kappa=config["gamma_over_2kappa"],
        drive_over_g=config["drive_over_g"],
        drive_phase=config["drive_phase"],
        n_max=config["n_max"],
    )


def _format(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _write_csv(path, task: str, columns, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(f"# jc-csv v1 task={task} schema={','.join(columns)}\n")
        handle.write(",".join(columns) + "\n")
        for row in rows:
            handle.write(",".join(_format(value) for value in row) + "\n")


def _json_ready(value):
    if isinstance(value, dict):
        return {key: _json_ready(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(item) for item in value]
    if isinstance(value, complex):
        return {"re": float(value.real), "im": float(value.imag)}
    if hasattr(value, "item"):
        return value.item()
    return value


def _write_metadata(path, task, preset, config, flags, summary) -> None:
    from . import __version__

    payload = {
        "format": "jc-json v1",
        "tool": "jc",
        "version": __version__,
        "task": task,
        "preset": preset,
        "config": _json_ready(config),
        "flags": sorted(set(flags)),
        "summary": _json_ready(summary),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _emit(args, text: str) -> None:
    if not args.quiet:
        print(text)


def _tau_grid(config, params, default_horizon):
    from .correlations import default_tau_grid

    horizon = config.get("tau_max", default_horizon)
    return default_tau_grid(params, horizon=horizon)


def _run_steady(args, config, params, out_dir, flags):
    from .dynamics import scaled_residual, steady_state, truncation_check
    from .liouvillian import build_liouvillian
    from .operators import build_operator_set, expectation

    ops = build_operator_set(params)
    superop = build_liouvillian(params, ops)
    rho = steady_state(superop)
    residual = scaled_residual(superop, rho)
    ok, top_two = truncation_check(rho, params)
    named = {
        "photon_number": expectation(ops.n_phot, rho, hermitian=True),
        "excited_population": expectation(ops.sp_sm, rho, hermitian=True),
        "field_amplitude": expectation(ops.a, rho),
        "atomic_coherence": expectation(ops.sm, rho),
    }
    rows = [
        (name, complex(value).real, complex(value).imag)
        for name, value in named.items()
    ]
    _write_csv(os.path.join(out_dir, "steady.csv"), "steady", ("observable", "re", "im"), rows)
    summary = {
        "residual": residual,
        "trace": float(rho.trace().real),
        "truncation_top_two": top_two,
        "observables": named,
    }
    if not ok:
        flags.append("truncation-suspect")
    _emit(args, f"steady: <n> = {named['photon_number']:.6g}, residual = {residual:.3e}")
    return summary


def _run_g1(args, config, params, out_dir, flags):
    import numpy as np

    from .analytics import g1_weak_drive
    from .correlations import first_order_correlation

    channel = config["channel"]
    taus = _tau_grid(config, params, None)
    trace = first_order_correlation(params, taus=taus, channel=channel)
    if channel == "side":
        analytic = g1_weak_drive(params, trace.taus)
    else:
        analytic = np.full(trace.taus.size, np.nan, dtype=complex)
    rows = zip(
        trace.taus,
        trace.values.real,
        trace.values.imag,
        analytic.real,
        analytic.imag,
    )
    _write_csv(
        os.path.join(out_dir, "g1.csv"),
        "g1",
        ("tau", "re_g1", "im_g1", "analytic_re", "analytic_im"),
        rows,
    )
    flags.extend(trace.flags)
    summary = {
        "channel": channel,
        "plateau": trace.plateau,
        "n_points": int(trace.taus.size),
        "tau_max": float(trace.taus[-1]),
    }
    if channel == "side":
        deviation = float(np.max(np.abs(trace.values - analytic)))
        summary["max_deviation_from_weak_drive"] = deviation
        _emit(args, f"g1: plateau = {trace.plateau:.6g}, max deviation = {deviation:.3e}")
    else:
        _emit(args, f"g1: plateau = {trace.plateau:.6g} (forward channel)")
    return summary


def _spectrum_horizon(params) -> float:
    # The transform precondition wants the envelope below 1e-4 of its
    # peak; exp(-x)(1+x) = 1e-4 at x ~ 12.8, and x = (kappa+gamma/2)t/2.
    return 26.0 / (params.kappa + params.gamma / 2.0)


def _run_spectrum(args, config, params, out_dir, flags):
    import numpy as np

    from .analytics import spectrum_weak_drive
    from .correlations import (
        default_omega_grid,
        first_order_correlation,
        optical_spectrum,
    )

    taus = _tau_grid(config, params, _spectrum_horizon(params))
    trace = first_order_correlation(params, taus=taus, channel=config["channel"])
    omegas = None
    if "omega_max" in config or "omega_spacing" in config:
        omegas = default_omega_grid(
            params,
            span=config.get("omega_max"),
            spacing=config.get("omega_spacing"),
        )
    spectrum = optical_spectrum(trace, omegas=omegas)
    analytic, _ = spectrum_weak_drive(params, spectrum.omegas)
    rows = zip(spectrum.omegas, spectrum.incoherent_density, analytic)
    _write_csv(
        os.path.join(out_dir, "spectrum.csv"),
        "spectrum",
        ("omega", "density", "analytic_density"),
        rows,
    )
    flags.extend(spectrum.flags)
    positive = spectrum.omegas > 0
    peak_at = float(spectrum.omegas[positive][np.argmax(spectrum.incoherent_density[positive])])
    summary = {
        "coherent_weight": spectrum.coherent_weight,
        "integral_check": spectrum.integral_check,
        "peak_omega": peak_at,
        "n_points": int(spectrum.omegas.size),
    }
    _emit(
        args,
        f"spectrum: coherent weight = {spectrum.coherent_weight:.6g}, "
        f"positive-side peak at omega = {peak_at:.6g}",
    )
    return summary


def _run_g2(args, config, params, out_dir, flags):
    import numpy as np

    from .analytics import g2_pure_state, g2_weak_drive
    from .correlations import intensity_correlation

    channel = config["channel"]
    taus = _tau_grid(config, params, None)
    trace = intensity_correlation(params, taus=taus, channel=channel)
    secular = g2_weak_drive(params, trace.taus)
    two_quanta = g2_pure_state(params, trace.taus)
    rows = zip(trace.taus, trace.values.real, secular, two_quanta)
    _write_csv(
        os.path.join(out_dir, "g2.csv"),
        "g2",
        ("tau", "g2", "analytic_secular", "analytic_two_quanta"),
        rows,
    )
    flags.extend(trace.flags)
    summary = {
        "channel": channel,
        "zero_delay": float(trace.values.real[0]),
        "max_deviation_from_secular": float(np.max(np.abs(trace.values.real - secular))),
        "tau_max": float(trace.taus[-1]),
    }
    _emit(
        args,
        f"g2: g2(0) = {summary['zero_delay']:.6g}, "
        f"max deviation from closed form = {summary['max_deviation_from_secular']:.3e}",
    )
    return summary


def _run_wtd(args, config, params, out_dir, flags):
    from .analytics import resonance_fluorescence_ref, wtd_resonance_fluorescence
    from .correlations import waiting_time_distribution
    from .dynamics import steady_state
    from .liouvillian import build_liouvillian
    from .operators import build_operator_set, expectation

    taus = None
    if "tau_max" in config:
        from .correlations import default_tau_grid

        taus = default_tau_grid(params, tau_max=config["tau_max"])
    trace = waiting_time_distribution(params, taus=taus)
    ops = build_operator_set(params)
    rho = steady_state(build_liouvillian(params, ops))
    reference = resonance_fluorescence_ref(params, a_ss=expectation(ops.a, rho))
    ref_values = wtd_resonance_fluorescence(reference, params.gamma, trace.taus)
    rows = zip(trace.taus, trace.values.real, ref_values)
    _write_csv(
        os.path.join(out_dir, "wtd.csv"),
        "wtd",
        ("tau", "w", "reference"),
        rows,
    )
    flags.extend(trace.flags)
    summary = {
        "integral": trace.integral,
        "tail_mass": trace.tail_mass,
        "mean_waiting_time": trace.mean_waiting_time,
        "reference_Y": reference.Y,
        "reference_mean": reference.tau_av,
    }
    _emit(
        args,
        f"wtd: integral = {trace.integral:.6g}, mean = {trace.mean_waiting_time:.6g}, "
        f"Y = {reference.Y:.6g}",
    )
    return summary


def _qfunc_axes(config):
    import numpy as np

    if "grid_reach" not in config:
        return {}
    reach = float(config["grid_reach"])
    points = int(config.get("grid_points", 201))
    axis = np.linspace(-reach, reach, points)
    return {"x": axis, "y": axis.copy()}


def _run_qfunc(args, config, params, out_dir, flags):
    from . import qfunction
    from .presets import snapshot_times

    times = snapshot_times(config, params.g)
    axes = _qfunc_axes(config)
    if "grid_points" in config and "grid_reach" not in config:
        from .qfunction import default_axes

        x, y = default_axes(params, points=int(config["grid_points"]))
        axes = {"x": x, "y": y}
    if times is None:
        qgrid = qfunction.steady_state_q(params, **axes)
        qfunction.write_qgrid_csv(qgrid, os.path.join(out_dir, "qfunc.csv"))
        header = qfunction.qgrid_header(qgrid)
        flags.extend(qgrid.flags)
        summary = {
            "mode": "steady",
            "norm_check": qgrid.norm_check,
            "peaks": header["peaks"],
            "mirror_asymmetry": qfunction.mirror_asymmetry(qgrid),
        }
        _emit(args, f"qfunc: {len(qgrid.peaks)} peak(s), norm check = {qgrid.norm_check:.6g}")
        for px, py, height in qgrid.peaks:
            _emit(args, f"  peak at ({px:+.4g}, {py:+.4g}) height {height:.4g}")
    else:
        snapshots = qfunction.transient_snapshots(params, times, **axes)
        headers = []
        for index, qgrid in enumerate(snapshots):
            path = os.path.join(out_dir, f"qfunc_snapshot_{index:02d}.csv")
            qfunction.write_qgrid_csv(qgrid, path)
            header = qfunction.qgrid_header(qgrid)
            header["time"] = float(times[index])
            header["g_time"] = float(times[index] * params.g)
            headers.append(header)
            flags.extend(qgrid.flags)
        summary = {
            "mode": "transient",
            "times": [float(value) for value in times],
            "snapshots": headers,
        }
        _emit(args, f"qfunc: wrote {len(snapshots)} snapshots, gT up to {times[-1] * params.g:.4g}")
    return summary


def _run_evolve(args, config, params, out_dir, flags):
    import numpy as np

    from .dynamics import evolve_observables
    from .liouvillian import build_liouvillian
    from .operators import build_operator_set, ground_product_state

    t_max = float(config.get("t_max", 20.0))
    n_times = int(config.get("n_times", 201))
    if t_max <= 0.0 or n_times < 2:
        raise ValueError("evolve needs t_max > 0 and n_times >= 2")
    times = np.linspace(0.0, t_max, n_times)
    ops = build_operator_set(params)
    superop = build_liouvillian(params, ops)
    rho0 = ground_product_state(params.n_max)
    observables = (ops.identity, ops.n_phot, ops.sp_sm, ops.a, ops.sm)
    samples = evolve_observables(
        superop,
        rho0,
        times,
        observables,
        rtol=config["rtol"],
        atol=config["atol"],
    )
    rows = zip(
        times,
        samples[0].real,
        samples[1].real,
        samples[2].real,
        samples[3].real,
        samples[3].imag,
        samples[4].real,
        samples[4].imag,
    )
    _write_csv(
        os.path.join(out_dir, "evolve.csv"),
        "evolve",
        ("t", "trace", "photon_number", "excited_population", "re_a", "im_a", "re_sm", "im_sm"),
        rows,
    )
    summary = {
        "t_max": t_max,
        "n_times": n_times,
        "final_photon_number": float(samples[1].real[-1]),
        "final_trace_error": float(abs(samples[0][-1] - 1.0)),
    }
    _emit(
        args,
        f"evolve: <n>(t={t_max:g}) = {summary['final_photon_number']:.6g}, "
        f"trace error = {summary['final_trace_error']:.3e}",
    )
    return summary


def _run_validate(args, config, params, out_dir, flags):
    from .validation import run_criteria

    names = None
    if "criteria" in config:
        names = [token.strip() for token in config["criteria"].split(",") if token.strip()]
    results = run_criteria(names=names, progress=_emit_progress(args))
    for result in results:
        verdict = "PASS" if result.passed else "FAIL"
        print(f"{verdict} {result.name}: {result.details}")
    passed = sum(1 for result in results if result.passed)
    print(f"{passed}/{len(results)} criteria passed")
    summary = {
        "passed": passed,
        "total": len(results),
        "results": [
            {
                "name": result.name,
                "passed": result.passed,
                "details": result.details,
                "values": result.values,
            }
            for result in results
        ],
    }
    return summary


def _emit_progress(args):
    def progress(message: str) -> None:
        _emit(args, message)

    return progress


_RUNNERS = {
    "steady": _run_steady,
    "g1": _run_g1,
    "spectrum": _run_spectrum,
    "g2": _run_g2,
    "wtd": _run_wtd,
    "qfunc": _run_qfunc,
    "evolve": _run_evolve,
    "validate": _run_validate,
}


class _Parser(argparse.ArgumentParser):
    """Route usage errors through the domain-error exit code."""

    def error(self, message):
        raise ValueError(f"usage error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="jc",
        description="Driven Jaynes-Cummings steady states, correlations and phase-space scans.",
    )
    parser.add_argument("task", choices=TASKS, help="scenario to run")
    parser.add_argument("--preset", help="named parameter set, e.g. fig2a or fig4-I-b")
    parser.add_argument(
        "--panel", help="fig4 panel shorthand: `--preset fig4 --panel I-b`"
    )
    parser.add_argument(
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="config override, repeatable; highest precedence",
    )
    parser.add_argument("--config", help="key = value file, or metadata JSON from a previous run")
    parser.add_argument("--out", default=".", help="output directory (created if missing)")
    parser.add_argument(
        "--strict",
        action="store_true",
        help="treat a truncation-suspect flag as a numerical failure",
    )
    parser.add_argument("--plot", action="store_true", help="also render a static plot (needs matplotlib)")
    parser.add_argument("--quiet", action="store_true", help="suppress progress lines")
    return parser


def _dispatch(args) -> int:
    from .dynamics import NumericalError

    config, preset, flags = resolve_config(args)
    params = _build_params(config)
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    runner = _RUNNERS[args.task]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        summary = runner(args, config, params, out_dir, flags)
    for entry in caught:
        message = str(entry.message)
        flags.append(message)
        if not args.quiet:
            print(f"warning: {message}", file=sys.stderr)
    _write_metadata(
        os.path.join(out_dir, f"{args.task}.json"),
        args.task,
        preset,
        config,
        flags,
        summary,
    )
    if args.plot:
        from . import plotting

        path = plotting.render_task(args.task, out_dir)
        if path is not None:
            _emit(args, f"plot written to {path}")
    suspect = any("truncation suspect" in flag for flag in flags)
    if suspect and args.strict:
        raise NumericalError("truncation-suspect flag raised under --strict")
    return 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _configure_threads()
        from .dynamics import NumericalError
    except ValueError as exc:
        print(json.dumps({"error": str(exc), "kind": "domain"}), file=sys.stderr)
        return 1
    try:
        return _dispatch(args)
    except ValueError as exc:
        print(json.dumps({"error": str(exc), "kind": "domain"}), file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(json.dumps({"error": str(exc), "kind": "numerical"}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
