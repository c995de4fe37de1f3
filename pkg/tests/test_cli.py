import csv
import json
import subprocess
import sys

import pytest

from semcell.cli import (EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION, ConfigError,
                         main, parse_scenario_config, run_scenario)
from semcell.presets import PRESETS, expand_preset, table1_config


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=2))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestConfigParsing:
    def test_table1_round_trip(self):
        sc = parse_scenario_config(table1_config(), label="t")
        assert sc.scenario.params.num_users == 30
        assert sc.scenario.params.noise_density_w_per_hz == pytest.approx(
            10 ** (-17.4) * 1e-3, rel=1e-12)
        assert sc.scenario.cfg.m_th == 0.75
        assert sc.outage_hi == 30

    def test_missing_field_path_in_message(self):
        doc = table1_config()
        del doc["network"]["tx_power_w"]
        with pytest.raises(ConfigError, match="network.tx_power_w"):
            parse_scenario_config(doc)

    def test_bad_axis(self):
        doc = table1_config()
        doc["sweep"] = {"axis": "twist", "grid": [1.0, 2.0]}
        with pytest.raises(ConfigError, match="sweep.axis"):
            parse_scenario_config(doc)

    def test_non_increasing_grid(self):
        doc = table1_config()
        doc["sweep"] = {"axis": "radius_m", "grid": [100.0, 100.0, 200.0]}
        with pytest.raises(ConfigError, match="strictly increasing"):
            parse_scenario_config(doc)

    def test_m_th_grid_outside_fit(self):
        doc = table1_config()
        doc["sweep"] = {"axis": "m_th", "grid": [0.2, 0.5]}
        with pytest.raises(ConfigError, match="sweep.grid"):
            parse_scenario_config(doc)

    def test_both_noise_keys_rejected(self):
        doc = table1_config()
        doc["network"]["noise_density_w_per_hz"] = 1e-20
        with pytest.raises(ConfigError, match="noise density"):
            parse_scenario_config(doc)

    def test_counts_validated(self):
        doc = table1_config()
        doc["outage_counts"] = {"lo": 12, "hi": 4}
        with pytest.raises(ConfigError, match="outage_counts"):
            parse_scenario_config(doc)


class TestRunCommand:
    def test_run_writes_csv_and_manifest(self, tmp_path):
        doc = table1_config()
        doc["sweep"] = {"axis": "radius_m", "grid": [300.0, 600.0, 900.0]}
        cfg_path = write_config(tmp_path, doc)
        code = main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "out")])
        assert code == EXIT_OK
        rows = read_csv(tmp_path / "out" / "config.csv")
        assert len(rows) == 3
        assert list(rows[0].keys())[:4] == ["axis_value", "pi_h", "pi_b", "pi_s"]
        assert float(rows[0]["axis_value"]) == 300.0
        # outage grows with the radius
        assert float(rows[2]["pi_h"]) > float(rows[0]["pi_h"])
        manifest = json.loads((tmp_path / "out" / "config.manifest.json").read_text())
        assert manifest["kind"] == "semcell-manifest"
        assert manifest["derived"]["g_sem"] is None
        assert manifest["derived"]["snr_gap"] == pytest.approx(3.5322, abs=1e-4)

    def test_config_error_exit_code(self, tmp_path):
        doc = table1_config()
        doc["network"]["tx_power_w"] = -5.0
        cfg_path = write_config(tmp_path, doc)
        assert main(["run", "--config", str(cfg_path)]) == EXIT_CONFIG

    def test_missing_file_exit_code(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG

    def test_manifest_round_trip_bytes(self, tmp_path):
        doc = table1_config()
        doc["sweep"] = {"axis": "edge_snr_db", "start": 15.0, "stop": 45.0, "points": 7}
        doc["mc"] = {"samples": 70_000, "seed": 11}
        cfg_path = write_config(tmp_path, doc)
        first = tmp_path / "first"
        second = tmp_path / "second"
        assert main(["run", "--config", str(cfg_path), "--out", str(first)]) == EXIT_OK
        manifest = first / "config.manifest.json"
        assert main(["run", "--config", str(manifest), "--out", str(second)]) == EXIT_OK
        replay = second / "config.manifest.csv"
        original = (first / "config.csv").read_bytes()
        assert replay.read_bytes() == original

    def test_worker_count_does_not_change_bytes(self, tmp_path, monkeypatch):
        doc = table1_config()
        doc["sweep"] = {"axis": "radius_m", "grid": [400.0, 800.0]}
        doc["mc"] = {"samples": 80_000, "seed": 3}
        cfg_path = write_config(tmp_path, doc)
        outputs = []
        for workers in ("1", "4", "16"):
            monkeypatch.setenv("SEMCELL_THREADS", workers)
            out = tmp_path / f"w{workers}"
            assert main(["run", "--config", str(cfg_path), "--out", str(out)]) == EXIT_OK
            outputs.append((out / "config.csv").read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]

    def test_preset_expansion_runs(self, tmp_path):
        cfg_path = write_config(tmp_path, table1_config())
        out = tmp_path / "figs"
        code = main(["run", "--config", str(cfg_path), "--preset", "fig3",
                     "--out", str(out)])
        assert code == EXIT_OK
        files = sorted(p.name for p in out.glob("*.csv"))
        assert files == ["fig3_rout004.csv", "fig3_rout012.csv", "fig3_rout020.csv"]


class TestPresetDefinitions:
    def test_golden_parameters(self):
        base = table1_config()
        # the default scenario pins the standard constants
        assert base["network"]["noise_density_dbm_per_hz"] == -174.0
        assert base["network"]["total_bandwidth_hz"] == 2.0e7
        assert base["network"]["carrier_freq_hz"] == 2.4e9
        assert base["network"]["tx_power_w"] == 1.0
        assert base["network"]["pathloss_exp"] == 3.0
        assert base["network"]["num_users"] == 30
        assert base["similarity_fit"] == {"a1": 0.37, "a2": 0.98, "c1": 0.2525,
                                          "c2": -0.7895, "symbols_per_word": 5}
        assert base["rate"]["bit_symbols_per_word"] == 40
        assert base["rate"]["ber"] == 1e-3
        assert base["rate"]["similarity_threshold"] == 0.75
        assert base["rate"]["outage_rate_threshold"] == 0.04

        fig2 = dict(expand_preset(base, "fig2"))
        assert len(fig2) == 6
        m_ths = {parse_scenario_config(doc).scenario.cfg.m_th for doc in fig2.values()}
        assert m_ths == {0.6, 0.75, 0.9}
        modes = {parse_scenario_config(doc).scenario.cfg.use_capacity for doc in fig2.values()}
        assert modes == {True, False}

        fig4 = dict(expand_preset(base, "fig4"))
        for doc in fig4.values():
            sc = parse_scenario_config(doc)
            assert sc.scenario.params.pathloss_exp == 2.0
            assert sc.scenario.params.tx_power_w == 1e-3
            assert sc.outage_lo == 3
            assert sc.scenario.params.num_users in (10, 50)
            assert sc.scenario.cfg.r_out in (0.12, 0.16)

        fig5 = dict(expand_preset(base, "fig5"))
        assert {parse_scenario_config(doc).outage_lo for doc in fig5.values()} == {2, 4}
        for doc in fig5.values():
            assert parse_scenario_config(doc).scenario.cfg.r_out == 0.12

    def test_remaining_presets_golden(self):
        base = table1_config()
        fig3 = dict(expand_preset(base, "fig3"))
        assert {parse_scenario_config(doc).scenario.cfg.r_out
                for doc in fig3.values()} == {0.04, 0.12, 0.2}

        fig6 = dict(expand_preset(base, "fig6"))
        combos = {(parse_scenario_config(doc).scenario.cfg.m_th,
                   parse_scenario_config(doc).scenario.cfg.r_out)
                  for doc in fig6.values()}
        assert combos == {(0.75, 0.04), (0.9, 0.04), (0.75, 0.12)}
        for doc in fig6.values():
            assert parse_scenario_config(doc).sweep_axis == "radius_m"

        fig7 = dict(expand_preset(base, "fig7"))
        ranges = {(parse_scenario_config(doc).util_lo, parse_scenario_config(doc).util_hi)
                  for doc in fig7.values()}
        assert ranges == {(5, 10), (10, 20)}

    def test_all_presets_parse(self):
        base = table1_config()
        for name in PRESETS:
            for label, doc in expand_preset(base, name):
                sc = parse_scenario_config(doc, label=label)
                assert len(sc.grid) > 1

    def test_fig4_sweep_brackets_designed_radius(self, tmp_path):
        # the generalized-outage curve from the fig4 sweep must cross the
        # 1e-3 design target between the grid points surrounding the
        # closed-form radius
        from semcell import DesignTarget, radius_for_outage_threshold, thresholds

        base = table1_config()
        doc = dict(expand_preset(base, "fig4"))["fig4_L10_rout012_mth075"]
        sc = parse_scenario_config(doc, label="fig4_L10_rout012_mth075")
        thr = thresholds(sc.scenario.cfg, sc.scenario.fit)
        target = DesignTarget.for_outage_cap(1e-3, 3, 10)
        solution = radius_for_outage_threshold(target, thr, sc.scenario.params)

        csv_path, _ = run_scenario(sc, tmp_path)
        rows = read_csv(csv_path)
        radii = [float(row["axis_value"]) for row in rows]
        probs = [float(row["s_range"]) for row in rows]
        assert radii[0] < solution.radius < radii[-1]
        crossings = [i for i in range(len(rows) - 1)
                     if (probs[i] - 1e-3) * (probs[i + 1] - 1e-3) < 0.0]
        assert len(crossings) == 1
        i = crossings[0]
        assert radii[i] <= solution.radius <= radii[i + 1]


class TestValidateCommand:
    def test_validate_passes_on_sane_scenario(self, tmp_path):
        doc = table1_config()
        doc["network"]["num_users"] = 4
        doc["network"]["cell_radius_m"] = 900.0
        del doc["sweep"]
        doc["mc"] = {"samples": 120_000, "seed": 42}
        cfg_path = write_config(tmp_path, doc)
        assert main(["validate", "--config", str(cfg_path)]) == EXIT_OK

    def test_validate_catches_wrong_model(self, tmp_path, monkeypatch):
        # poison one closed form and the oracle must flag it
        import semcell.cli as cli_module

        doc = table1_config()
        doc["network"]["num_users"] = 4
        doc["network"]["cell_radius_m"] = 900.0
        del doc["sweep"]
        doc["mc"] = {"samples": 120_000, "seed": 42}
        cfg_path = write_config(tmp_path, doc)

        import semcell.outage

        true_fn = semcell.outage.user_outage_bit
        monkeypatch.setattr("semcell.outage.user_outage_bit",
                            lambda thr, params: min(1.0, 1.3 * true_fn(thr, params)))
        assert main(["validate", "--config", str(cfg_path)]) == EXIT_VALIDATION


class TestDesignCommands:
    def test_radius_json(self, tmp_path, capsys):
        doc = table1_config()
        doc["network"].update({"num_users": 10, "pathloss_exp": 2.0, "tx_power_w": 1e-3})
        doc["rate"]["outage_rate_threshold"] = 0.12
        cfg_path = write_config(tmp_path, doc)
        assert main(["design", "radius", "--config", str(cfg_path),
                     "--pth", "1e-3", "--ll", "3"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["method"] == "closed_form_a2"
        assert abs(payload["residual"]) <= 1e-9
        assert payload["radius_m"] > 0

    def test_radius_rejects_bad_count(self, tmp_path):
        cfg_path = write_config(tmp_path, table1_config())
        assert main(["design", "radius", "--config", str(cfg_path),
                     "--pth", "1e-3", "--ll", "99"]) == EXIT_CONFIG

    def test_util_json(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path, table1_config())
        assert main(["design", "util", "--config", str(cfg_path),
                     "--ll", "5", "--lu", "10"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["semantic_possible"] is True
        assert payload["level_attainable"] is True
        assert len(payload["solutions"]) == 3
        assert payload["best_radius_m"] == pytest.approx(
            min(s["radius_m"] for s in payload["solutions"]), rel=1e-12)


class TestSolverFailureExit:
    def test_solver_error_maps_to_exit_3(self, tmp_path, monkeypatch):
        import semcell.cli as cli_module
        from semcell import SolverError

        def boom(*args, **kwargs):
            raise SolverError("no bracket")

        monkeypatch.setattr(cli_module, "radius_for_outage_threshold", boom)
        cfg_path = write_config(tmp_path, table1_config())
        assert main(["design", "radius", "--config", str(cfg_path),
                     "--pth", "1e-3", "--ll", "3"]) == 3


class TestModuleEntryPoint:
    def test_python_dash_m(self, tmp_path):
        doc = table1_config()
        doc["sweep"] = {"axis": "radius_m", "grid": [250.0, 500.0]}
        cfg_path = write_config(tmp_path, doc)
        proc = subprocess.run(
            [sys.executable, "-m", "semcell", "run", "--config", str(cfg_path),
             "--out", str(tmp_path / "out")],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "out" / "config.csv").exists()

    def test_python_dash_m_config_error(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "semcell", "run", "--config",
             str(tmp_path / "missing.json")],
            capture_output=True, text=True)
        assert proc.returncode == 2
