import dataclasses
import io

import numpy as np
import pytest

from irsim.channel import ChannelRealization, SystemGeometry
from irsim.engine import (
    CurvePoint,
    ScenarioConfig,
    config_from_dict,
    run_sweep,
    run_trial,
    write_csv,
)
from irsim.errors import ConfigError, DegenerateTrialsError
from irsim.precoding import PrecoderSet
from irsim.rates import SnrPoint, tdma_report

GEOM = SystemGeometry(4, 2, 50, (50.0, 30.0), (10.0, 10.0), reference_distance_m=24.0)


def base_config(**overrides):
    kwargs = dict(
        geometry=GEOM,
        schemes=("RSMA", "IRS-RSMA"),
        snr_grid_db=(0.0, 10.0, 20.0),
        rsma_alpha_c=(0.9,),
        trials=8,
        master_seed=99,
    )
    kwargs.update(overrides)
    return ScenarioConfig(**kwargs)


def fixed_orthogonal_source():
    """Deterministic two-user block with orthogonal rows and no surface."""
    direct = np.array(
        [[1.0, 0.0, 0.0, 0.0], [0.0, 0.5, 0.0, 0.0]], dtype=complex
    )
    real = ChannelRealization(direct, None, np.ones(2), None)
    return lambda geom, rng: real


class TestTrialDeterminism:
    def test_same_indices_identical_reports(self):
        cfg = base_config()
        a = run_trial(cfg, 1, 3)
        b = run_trial(cfg, 1, 3)
        assert a.reports.keys() == b.reports.keys()
        for key in a.reports:
            assert a.reports[key].sum_rate == b.reports[key].sum_rate
            assert a.reports[key].common_rate == b.reports[key].common_rate

    def test_different_trials_differ(self):
        cfg = base_config()
        a = run_trial(cfg, 1, 3)
        b = run_trial(cfg, 1, 4)
        key = ("RSMA", 0.9)
        assert a.reports[key].sum_rate != b.reports[key].sum_rate

    def test_all_schemes_share_the_realization(self):
        cfg = base_config(
            schemes=("RSMA", "IRS-RSMA", "NOMA", "IRS-NOMA", "TDMA", "IRS-TDMA")
        )
        res = run_trial(cfg, 0, 0)
        assert len(set(res.scheme_digests.values())) == 1


class TestTrialAgainstDirectRecomputation:
    def test_tdma_orthogonal_matches_direct_oracle(self):
        geom = SystemGeometry(4, 2, 0, (50.0, 30.0), (10.0, 10.0))
        source = fixed_orthogonal_source()
        cfg = ScenarioConfig(
            geometry=geom,
            schemes=("TDMA",),
            snr_grid_db=(20.0,),
            trials=1,
            master_seed=5,
            tdma_mode="orthogonal",
            channel_source=source,
        )
        res = run_trial(cfg, 0, 0)
        report = res.reports[("TDMA", None)]
        rows = source(geom, None).direct
        # orthogonal rows make the normalized pinv columns the matched basis
        e1 = np.array([1.0, 0, 0, 0], dtype=complex)
        e2 = np.array([0, 1.0, 0, 0], dtype=complex)
        oracle = tdma_report(rows, PrecoderSet((e1, e2)), SnrPoint(20.0), "orthogonal")
        assert report.sum_rate == pytest.approx(oracle.sum_rate, abs=1e-12)

    def test_rsma_with_zero_common_power_degenerates_to_zf(self):
        geom = SystemGeometry(4, 2, 0, (50.0, 30.0), (10.0, 10.0))
        source = fixed_orthogonal_source()
        cfg = ScenarioConfig(
            geometry=geom,
            schemes=("RSMA",),
            snr_grid_db=(10.0,),
            rsma_alpha_c=(0.0,),
            trials=1,
            master_seed=5,
            channel_source=source,
        )
        report = run_trial(cfg, 0, 0).reports[("RSMA", 0.0)]
        p = 10.0
        expected = np.log2(1 + 0.5 * p * 1.0) + np.log2(1 + 0.5 * p * 0.25)
        assert report.common_rate == 0.0
        assert report.sum_rate == pytest.approx(expected, abs=1e-9)


class TestRedraws:
    def test_degenerate_rows_redraw_then_succeed(self):
        geom = SystemGeometry(4, 2, 0, (50.0, 30.0), (10.0, 10.0))
        good = fixed_orthogonal_source()
        bad_rows = np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]], dtype=complex)
        bad = ChannelRealization(bad_rows, None, np.ones(2), None)
        calls = {"n": 0}

        def source(g, rng):
            calls["n"] += 1
            return bad if calls["n"] == 1 else good(g, rng)

        cfg = ScenarioConfig(
            geometry=geom,
            schemes=("TDMA",),
            snr_grid_db=(10.0,),
            trials=1,
            master_seed=5,
            channel_source=source,
        )
        res = run_trial(cfg, 0, 0)
        assert res.redraws == 1

    def test_persistently_degenerate_aborts(self):
        geom = SystemGeometry(4, 2, 0, (50.0, 30.0), (10.0, 10.0))
        bad_rows = np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]], dtype=complex)
        bad = ChannelRealization(bad_rows, None, np.ones(2), None)
        cfg = ScenarioConfig(
            geometry=geom,
            schemes=("TDMA",),
            snr_grid_db=(10.0,),
            trials=1,
            master_seed=5,
            channel_source=lambda g, rng: bad,
        )
        with pytest.raises(DegenerateTrialsError):
            run_trial(cfg, 0, 0)


class TestSweep:
    def test_empty_grid_gives_empty_curves(self):
        cfg = base_config(snr_grid_db=())
        assert run_sweep(cfg) == []

    def test_deterministic_source_has_zero_stderr(self):
        geom = SystemGeometry(4, 2, 0, (50.0, 30.0), (10.0, 10.0))
        cfg = ScenarioConfig(
            geometry=geom,
            schemes=("TDMA",),
            snr_grid_db=(10.0,),
            trials=6,
            master_seed=5,
            channel_source=fixed_orthogonal_source(),
        )
        points = run_sweep(cfg)
        assert len(points) == 1
        assert points[0].stderr_bpcu == pytest.approx(0.0, abs=1e-12)
        single = run_trial(cfg, 0, 0).reports[("TDMA", None)].sum_rate
        assert points[0].mean_bpcu == pytest.approx(single, abs=1e-12)

    def test_worker_counts_agree_exactly(self):
        cfg = base_config(trials=12, schemes=("RSMA", "NOMA"))
        serial = run_sweep(cfg, workers=1)
        quad = run_sweep(cfg, workers=4)
        assert serial == quad

    def test_stderr_scales_like_inverse_sqrt_trials(self):
        # quick smoke; the 20-repeat version is an acceptance criterion
        geom = SystemGeometry(4, 2, 0, (50.0, 30.0), (10.0, 10.0))
        ratios = []
        for seed in range(6):
            small = ScenarioConfig(
                geometry=geom, schemes=("RSMA",), snr_grid_db=(10.0,),
                trials=500, master_seed=seed,
            )
            big = dataclasses.replace(small, trials=2000)
            se_small = run_sweep(small)[0].stderr_bpcu
            se_big = run_sweep(big)[0].stderr_bpcu
            ratios.append(se_small / se_big)
        mean_ratio = float(np.mean(ratios))
        assert abs(mean_ratio - 2.0) <= 0.6  # 2x within 30%

    def test_curves_keyed_per_alpha(self):
        cfg = base_config(rsma_alpha_c=(0.25, 0.75), trials=3)
        points = run_sweep(cfg)
        alphas = {p.alpha_c for p in points}
        assert alphas == {0.25, 0.75}

    def test_zero_csi_error_makes_variants_agree(self):
        # fig4-style run with the error knob off: both variant curves coincide
        cfg = base_config(
            schemes=("IRS-RSMA", "IRS-TDMA"),
            compare_perfect_csi=True,
            trials=25,
            snr_grid_db=(10.0, 30.0),
            metrics=("sum_rate",),
        )
        points = run_sweep(cfg)
        by_key = {(p.scheme, p.alpha_c, p.snr_db): p for p in points}
        for scheme in ("IRS-RSMA", "IRS-TDMA"):
            alpha = 0.9 if scheme == "IRS-RSMA" else None
            for snr in (10.0, 30.0):
                perfect = by_key[(f"{scheme}/perfect-csi", alpha, snr)]
                imperfect = by_key[(f"{scheme}/imperfect-csi", alpha, snr)]
                slack = 3 * max(perfect.stderr_bpcu, imperfect.stderr_bpcu, 1e-12)
                assert abs(perfect.mean_bpcu - imperfect.mean_bpcu) <= slack

    def test_zero_sic_error_removes_the_superposition_plateau(self):
        from irsim.channel import ImpairmentParams

        cfg = base_config(
            schemes=("NOMA",),
            snr_grid_db=(25.0, 40.0),
            trials=400,
            impairments=ImpairmentParams(sic_error_factor=0.0),
            metrics=("sum_rate",),
        )
        points = {p.snr_db: p.mean_bpcu for p in run_sweep(cfg, workers=2)}
        assert points[40.0] - points[25.0] > 2.0


class TestWriteCsv:
    def test_empty_curves_header_only(self):
        buf = io.BytesIO()
        assert write_csv([], buf) == 0
        assert buf.getvalue() == b"scheme,metric,alpha_c,snr_db,mean_bpcu,stderr_bpcu,trials\n"

    def test_single_record_two_lines(self):
        buf = io.BytesIO()
        point = CurvePoint("RSMA", "sum_rate", 0.5, 10.0, 1.234567, 0.01, 100)
        assert write_csv([point], buf) == 1
        lines = buf.getvalue().decode().splitlines()
        assert len(lines) == 2
        assert lines[1] == "RSMA,sum_rate,0.5,10,1.23457,0.01,100"

    def test_byte_identical_for_identical_sweeps(self):
        cfg = base_config(trials=5)
        a, b = io.BytesIO(), io.BytesIO()
        write_csv(run_sweep(cfg), a)
        write_csv(run_sweep(cfg), b)
        assert a.getvalue() == b.getvalue()

    def test_sorted_by_scheme_metric_alpha_snr(self):
        points = [
            CurvePoint("TDMA", "sum_rate", None, 10.0, 1.0, 0.0, 1),
            CurvePoint("RSMA", "sum_rate", 0.5, 10.0, 1.0, 0.0, 1),
            CurvePoint("RSMA", "sum_rate", 0.25, 10.0, 1.0, 0.0, 1),
            CurvePoint("RSMA", "sum_rate", 0.25, 0.0, 1.0, 0.0, 1),
        ]
        buf = io.BytesIO()
        write_csv(points, buf)
        rows = buf.getvalue().decode().splitlines()[1:]
        assert [r.split(",")[0] for r in rows] == ["RSMA", "RSMA", "RSMA", "TDMA"]
        assert rows[0].split(",")[2:4] == ["0.25", "0"]


class TestConfigSchema:
    def minimal_doc(self):
        return {
            "geometry": {
                "bs_antennas": 4,
                "users": 2,
                "irs_elements": 50,
                "user_distances_m": [50.0, 30.0],
                "irs_user_distances_m": [10.0, 10.0],
            },
            "schemes": ["RSMA"],
            "snr_grid_db": [0, 10],
        }

    def test_minimal_document_accepted(self):
        cfg = config_from_dict(self.minimal_doc())
        assert cfg.trials == 5000
        assert cfg.geometry.path_loss_exponent == 2.5

    def test_unknown_key_rejected(self):
        doc = self.minimal_doc()
        doc["snr_points"] = [0]
        with pytest.raises(ConfigError, match="snr_points"):
            config_from_dict(doc)

    def test_unknown_geometry_key_rejected(self):
        doc = self.minimal_doc()
        doc["geometry"]["antenna_gain"] = 3.0
        with pytest.raises(ConfigError, match="antenna_gain"):
            config_from_dict(doc)

    def test_unknown_scheme_named(self):
        doc = self.minimal_doc()
        doc["schemes"] = ["FDMA"]
        with pytest.raises(ConfigError, match="FDMA"):
            config_from_dict(doc)

    def test_decreasing_grid_rejected(self):
        doc = self.minimal_doc()
        doc["snr_grid_db"] = [10, 0]
        with pytest.raises(ConfigError, match="snr_grid_db"):
            config_from_dict(doc)

    def test_irs_scheme_needs_elements(self):
        doc = self.minimal_doc()
        doc["geometry"]["irs_elements"] = 0
        doc["schemes"] = ["IRS-RSMA"]
        with pytest.raises(ConfigError, match="irs_elements"):
            config_from_dict(doc)

    def test_noma_needs_weak_user_first(self):
        doc = self.minimal_doc()
        doc["schemes"] = ["NOMA"]
        doc["geometry"]["user_distances_m"] = [30.0, 50.0]
        with pytest.raises(ConfigError, match="user_distances_m"):
            config_from_dict(doc)

    def test_bad_trials_rejected(self):
        doc = self.minimal_doc()
        doc["trials"] = 0
        with pytest.raises(ConfigError, match="trials"):
            config_from_dict(doc)
