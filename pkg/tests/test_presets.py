import math

import pytest

from jcsim.liouvillian import MAX_DIM
from jcsim.presets import (
    SURROGATE_FLAG,
    apply_surrogate,
    canonical_name,
    list_presets,
    preset_config,
    preset_params,
    snapshot_times,
)


def test_registry_contents():
    names = list_presets()
    assert len(names) == 15
    assert names == sorted(names)
    for name in ("fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig3-inset", "fig5"):
        assert name in names
    for row in ("I", "II"):
        for column in "abcd":
            assert f"fig4-{row}-{column}" in names


@pytest.mark.parametrize(
    "variant, expected",
    [
        ("fig2a", "fig2a"),
        ("FIG3_INSET", "fig3-inset"),
        ("fig4_ii_b", "fig4-II-b"),
        ("fig4-i-a", "fig4-I-a"),
        (" fig5 ", "fig5"),
    ],
)
def test_canonical_name_variants(variant, expected):
    assert canonical_name(variant) == expected


def test_canonical_name_rejects_unknown():
    with pytest.raises(ValueError, match="known presets"):
        canonical_name("fig9")


def test_preset_config_returns_copies():
    config = preset_config("fig2a")
    config["n_max"] = 99
    assert preset_config("fig2a")["n_max"] == 30


def test_surrogate_substitution():
    params, flags = preset_params("fig2c")
    assert flags == (SURROGATE_FLAG,)
    assert params.gamma == pytest.approx(1e-6, rel=1e-12)
    untouched, flags = preset_params("fig2a")
    assert flags == ()
    assert untouched.gamma == pytest.approx(2.0, rel=1e-12)
    config, flags = apply_surrogate({"gamma_over_2kappa": 0.0})
    assert flags == (SURROGATE_FLAG,)
    assert config["gamma_over_2kappa"] > 0.0


def test_bimodal_rows_share_drive_amplitude():
    for row, expected_g in (("I", 200.0 / 9.0), ("II", 20.0)):
        for column, loss in (("a", 0.0), ("b", 1.0), ("c", 5.0 / 3.0), ("d", 2.0)):
            params, flags = preset_params(f"fig4-{row}-{column}")
            assert abs(params.drive) == pytest.approx(10.0, rel=1e-12)
            assert params.g == pytest.approx(expected_g, rel=1e-12)
            if column == "a":
                assert flags == (SURROGATE_FLAG,)
            else:
                assert params.loss_ratio == pytest.approx(loss, rel=1e-12)
            assert params.n_max == 150


def test_all_presets_build_valid_params():
    for name in list_presets():
        params, _ = preset_params(name)
        assert params.kappa == 1.0
        assert abs(params.drive.imag - abs(params.drive)) < 1e-12  # phase pi/2
        assert params.dim <= MAX_DIM


def test_overrides():
    params, _ = preset_params("fig2a", n_max=50)
    assert params.n_max == 50
    params, flags = preset_params("fig2a", gamma_over_2kappa=0.0)
    assert flags == (SURROGATE_FLAG,)
    with pytest.raises(ValueError, match="override"):
        preset_params("fig2a", coupling=3.0)


def test_snapshot_times_grid():
    config = preset_config("fig5")
    g = 50.0 / 3.0
    times = snapshot_times(config, g)
    assert len(times) == 12
    assert times[0] == 0.0
    assert times[-1] == pytest.approx(27.5 / g, rel=1e-12)
    spacing = times[-1] / 11.0
    for k, t in enumerate(times):
        assert t == pytest.approx(k * spacing, rel=1e-9, abs=1e-15)
    assert snapshot_times(preset_config("fig2a"), 100.0) is None


def test_snapshot_times_single_point():
    times = snapshot_times({"snapshot_count": 1, "snapshot_gt_max": 5.0}, 10.0)
    assert times == [0.0]
