#!/usr/bin/env python3
"""
End-to-end tests for the coherent_qec command-line tool.
"""

import io
import json

import numpy as np
import pandas as pd
import pytest

from analytic_channels import repetition_channel
from coherent_qec import main, parse_theta_range
from exceptions import ConfigError
from results_utils import ResultWriter


def reject_constant(token):
    raise ValueError(f"non-standard JSON constant {token}")


def strict_loads(text):
    return json.loads(text, parse_constant=reject_constant)


def run_json(capsys, *argv):
    code = main(list(argv))
    return code, strict_loads(capsys.readouterr().out)


class TestChannelCommand:

    def test_odd_afm_equals_repetition(self, capsys):
        code, document = run_json(capsys, "channel", "--variant", "afm", "--distance", "3", "--theta", "0.2")
        assert code == 0
        expected = repetition_channel(3, 0.2).to_dict()
        terms = document["channel"]["terms"]
        assert len(terms) == len(expected["terms"])
        for got, want in zip(terms, expected["terms"]):
            assert got["p"] == pytest.approx(want["p"], abs=1e-12)
            assert got["theta"] == pytest.approx(want["theta"], abs=1e-12)
        assert document["channel"]["infidelity"] == pytest.approx(expected["infidelity"])

    def test_out_of_domain_angle_exits_2(self, capsys):
        assert main(["channel", "--variant", "fm", "--theta", "2.0"]) == 2
        assert capsys.readouterr().out == ""

    def test_output_file(self, tmp_path):
        target = tmp_path / "out" / "channel.json"
        assert main(["--output", str(target), "channel", "--variant", "repetition", "--theta", "0.1"]) == 0
        document = json.loads(target.read_text())
        assert document["channel"]["metadata"]["constructor"] == "repetition"

    def test_unknown_variant_is_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["channel", "--variant", "toric", "--theta", "0.1"])
        assert excinfo.value.code == 2


class TestOracleCommand:

    def test_dump_branches(self, capsys):
        code, document = run_json(capsys, "oracle", "--variant", "repetition", "--theta", "0.37",
                                  "--dump-branches")
        assert code == 0
        assert len(document["branches"]) == 4
        assert sum(b["probability"] for b in document["branches"]) == pytest.approx(1.0)
        assert len(document["channel"]["terms"]) == 2

    def test_explicit_angles(self, capsys):
        code, document = run_json(capsys, "oracle", "--variant", "repetition", "--angles", "0.1,0.1,0.1")
        assert code == 0
        assert document["angles"] == pytest.approx([0.1, 0.1, 0.1])

    def test_bad_angles(self):
        assert main(["oracle", "--variant", "repetition", "--angles", "0.1,x,0.1"]) == 2


class TestSweepCommand:

    def test_zero_row_and_ordering(self, capsys):
        assert main(["sweep", "--thetas", "0:0.04:0.01", "--oracle-every", "2"]) == 0
        table = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert table["theta"].tolist() == pytest.approx([0.0, 0.01, 0.02, 0.03, 0.04])
        assert table.loc[0, ["fm", "afm", "swapped_plus", "swapped_minus"]].tolist() == [0.0] * 4
        assert (table["afm"] <= table["fm"]).all()
        assert table["oracle_deviation"].max() < 1e-9

    def test_theta_range(self):
        np.testing.assert_allclose(parse_theta_range("0:0.5:0.01")[[0, -1]], [0.0, 0.5])
        assert len(parse_theta_range("0:0.5:0.01")) == 51

    @pytest.mark.parametrize("text", ["0:1", "1:0:0.1", "0:1:0", "a:b:c"])
    def test_bad_theta_range(self, text):
        with pytest.raises(ConfigError):
            parse_theta_range(text)


class TestVerifyCommand:

    def test_distance_three_passes(self, capsys):
        code, document = run_json(capsys, "verify", "--distance", "3", "--trials", "20", "--seed", "7")
        assert code == 0
        assert document["passed"]
        assert document["max_deviation"] <= 1e-9
        names = {c["check"] for c in document["checks"]}
        assert {"oracle-repetition", "oracle-fm", "oracle-afm", "dfs-afm-d2"} <= names

    def test_even_distance_runs_afm_checks(self, capsys):
        code, document = run_json(capsys, "verify", "--distance", "2", "--trials", "5")
        assert code == 0
        assert document["passed"]
        assert [c["check"] for c in document["checks"]] == ["oracle-afm", "dfs-afm-d2"]


class TestResultWriter:

    def test_non_finite_values_become_null(self, tmp_path):
        target = tmp_path / "doc.json"
        ResultWriter(target).write_json({"deviation": float("inf"), "values": np.array([1.0, np.nan])})
        document = strict_loads(target.read_text())
        assert document == {"deviation": None, "values": [1.0, None]}


class TestExperimentCommands:

    def test_ghz_ramsey_is_reproducible(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["ramsey", "--kind", "ghz", "--qubits", "3", "--shots", "50", "--seed", "3"]
        assert main(["--output", str(first)] + argv) == 0
        assert main(["--output", str(second)] + argv) == 0
        assert first.read_bytes() == second.read_bytes()
        table = pd.read_csv(first)
        assert table["series"].unique().tolist() == ["ghz-fm-3"]
        assert table.loc[0, "value"] == pytest.approx(1.0)

    def test_logical_ramsey_from_config(self, tmp_path):
        config_path = tmp_path / "experiment.json"
        config_path.write_text(json.dumps({
            "code": {"variant": "afm"},
            "times_ms": [0.0, 50.0, 100.0],
            "shots": 4,
        }))
        target = tmp_path / "ramsey.csv"
        assert main(["--config", str(config_path), "--output", str(target), "ramsey"]) == 0
        table = pd.read_csv(target)
        assert sorted(table["series"].unique()) == ["afm-corrected", "afm-detected", "afm-raw"]
        assert "accept" in table.columns

    def test_fringe_rows(self, capsys):
        assert main(["fringe", "--variant", "afm", "--shots", "3", "--seed", "1"]) == 0
        table = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert sorted(table["series"].unique()) == ["row0", "row1", "row2"]
        assert "phase_rad" in table.columns

    def test_unknown_config_key_exits_2(self, tmp_path):
        config_path = tmp_path / "bad.json"
        config_path.write_text(json.dumps({"shotz": 10}))
        assert main(["--config", str(config_path), "ramsey"]) == 2

    def test_zero_workers_rejected(self):
        assert main(["--workers", "0", "channel", "--theta", "0.1"]) == 2


class TestFitCommand:

    def write_decay(self, path, series=("afm-corrected",)):
        times = np.linspace(0.0, 300.0, 11)
        frames = [pd.DataFrame({"time_ms": times, "value": 0.95 * np.exp(-0.004 * times),
                                "stderr": 0.01, "series": s}) for s in series]
        pd.concat(frames).to_csv(path, index=False)

    def test_exponential_fit(self, tmp_path, capsys):
        path = tmp_path / "ramsey.csv"
        self.write_decay(path)
        code, document = run_json(capsys, "fit", str(path), "--weighted")
        assert code == 0
        assert document["params"]["gamma"] == pytest.approx(0.004, rel=1e-6)
        assert document["t2_star_ms"] == pytest.approx(250.0, rel=1e-6)

    def test_several_series_need_a_choice(self, tmp_path, capsys):
        path = tmp_path / "ramsey.csv"
        self.write_decay(path, series=("afm-raw", "afm-corrected"))
        assert main(["fit", str(path)]) == 2
        code, document = run_json(capsys, "fit", str(path), "--series", "afm-raw")
        assert code == 0
        assert document["series"] == "afm-raw"

    def test_cosine_fit(self, tmp_path, capsys):
        path = tmp_path / "fringe.csv"
        phases = np.linspace(0.0, 2 * np.pi, 25)
        pd.DataFrame({"phase_rad": phases, "value": 0.8 * np.cos(3 * phases + 1.2)}).to_csv(path, index=False)
        code, document = run_json(capsys, "fit", str(path), "--model", "cos")
        assert code == 0
        assert document["params"]["A"] == pytest.approx(0.8)
        assert document["params"]["phi0"] == pytest.approx(1.2)

    def test_missing_file(self, tmp_path):
        assert main(["fit", str(tmp_path / "nope.csv")]) == 2
