"""Named parameter sets for the standard strong-coupling scenarios.

Every preset is a flat mapping of typed keys.  ``g_over_kappa``,
``gamma_over_2kappa`` and ``drive_over_g`` fix the physics up to the
overall scale kappa = 1; ``n_max`` is a Fock cutoff known to pass the
truncation check for the tasks the preset was tuned for.  Presets with
``gamma_over_2kappa = 0`` are expanded with a tiny surrogate atomic rate
so the steady state stays unique; the substitution is reported through
the returned flags.

The bimodal scenarios (``fig4-*``) default to n_max = 150, which keeps a
steady-state solve around two minutes.  Fully converged tails there want
n_max = 200; pass ``--param n_max=200`` when the extra accuracy is worth
the wait.
"""

from __future__ import annotations

import math

from .params import ModelParams, from_ratios

# gamma/2kappa = 0 is replaced by this value (gamma = 1e-6 kappa).
SURROGATE_GAMMA_OVER_2KAPPA = 5e-7
SURROGATE_FLAG = "gamma->0 surrogate"

_WEAK = {
    "g_over_kappa": 100.0,
    "gamma_over_2kappa": 1.0,
    "drive_over_g": 0.05,
    "drive_phase": math.pi / 2.0,
    "n_max": 30,
}

# Row I holds |E0|/kappa = 10 at drive/g = 0.45, row II at 0.5.
_BIMODAL_ROWS = {
    "I": {"drive_over_g": 0.45, "g_over_kappa": 10.0 / 0.45},
    "II": {"drive_over_g": 0.5, "g_over_kappa": 20.0},
}
_BIMODAL_COLUMNS = {
    "a": 0.0,
    "b": 1.0,
    "c": 5.0 / 3.0,
    "d": 2.0,
}


def _weak(**overrides) -> dict:
    merged = dict(_WEAK)
    merged.update(overrides)
    return merged


def _bimodal(row: str, column: str) -> dict:
    merged = {
        "drive_phase": math.pi / 2.0,
        "n_max": 150,
        "gamma_over_2kappa": _BIMODAL_COLUMNS[column],
    }
    merged.update(_BIMODAL_ROWS[row])
    return merged


PRESETS: dict[str, dict] = {
    "fig2a": _weak(),
    "fig2b": _weak(),
    "fig2c": _weak(gamma_over_2kappa=0.0),
    "fig2d": _weak(drive_over_g=0.25),
    "fig3": _weak(n_max=25),
    "fig3-inset": _weak(g_over_kappa=8.0, gamma_over_2kappa=0.5, n_max=25),
    "fig5": {
        "g_over_kappa": 50.0 / 3.0,
        "gamma_over_2kappa": 1.0,
        "drive_over_g": 0.6,
        "drive_phase": math.pi / 2.0,
        "n_max": 120,
        "snapshot_count": 12,
        "snapshot_gt_max": 27.5,
    },
}
for _row in _BIMODAL_ROWS:
    for _column in _BIMODAL_COLUMNS:
        PRESETS[f"fig4-{_row}-{_column}"] = _bimodal(_row, _column)
del _row, _column


def canonical_name(name: str) -> str:
    """Resolve spelling variants (underscores, case) to the registry key."""
    candidate = name.strip().replace("_", "-").lower()
    candidate = candidate.replace("fig4-i-", "fig4-I-").replace("fig4-ii-", "fig4-II-")
    if candidate not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise ValueError(f"unknown preset {name!r}; known presets: {known}")
    return candidate


def preset_config(name: str) -> dict:
    """Copy of the raw preset mapping, before any surrogate substitution."""
    return dict(PRESETS[canonical_name(name)])


def apply_surrogate(config: dict) -> tuple[dict, tuple[str, ...]]:
    """Replace a zero atomic rate with the surrogate value.

    Returns the (possibly updated) config and the flags describing what
    was done.  The substitution keeps the nullspace simple; at 1e-6 kappa
    the surrogate is far below every other rate in the model.
    """
    if config.get("gamma_over_2kappa", None) == 0.0:
        updated = dict(config)
        updated["gamma_over_2kappa"] = SURROGATE_GAMMA_OVER_2KAPPA
        return updated, (SURROGATE_FLAG,)
    return config, ()


def preset_params(name: str, **overrides) -> tuple[ModelParams, tuple[str, ...]]:
    """ModelParams for a preset, with keyword overrides applied first.

    The surrogate substitution runs after the overrides, so an explicit
    ``gamma_over_2kappa=0.0`` override is also expanded.
    """
    config = preset_config(name)
    for key, value in overrides.items():
        if key not in config and key not in _WEAK:
            raise ValueError(f"unknown preset override {key!r}")
        config[key] = value
    config, flags = apply_surrogate(config)
    params = from_ratios(
        g_over_kappa=config["g_over_kappa"],
        gamma_over_2kappa=config["gamma_over_2kappa"],
        drive_over_g=config["drive_over_g"],
        drive_phase=config["drive_phase"],
        n_max=config["n_max"],
    )
    return params, flags


def snapshot_times(config: dict, g: float):
    """Evenly spaced snapshot times, in 1/kappa units, from a preset config.

    ``snapshot_gt_max`` is stated in units of g t; the grid includes both
    endpoints.  Returns None when the config does not request snapshots.
    """
    count = int(config.get("snapshot_count", 0))
    if count <= 0:
        return None
    if count == 1:
        return [0.0]
    gt_max = float(config["snapshot_gt_max"])
    step = gt_max / (count - 1)
    return [index * step / g for index in range(count)]


def list_presets() -> list[str]:
    return sorted(PRESETS)
