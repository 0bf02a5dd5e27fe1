"""Command-line surface: flags, exit codes, exact outputs, determinism."""

import json
import os

import pytest
from click.testing import CliRunner

from contact_index.cli import main
from contact_index.catalog import dump_model, preset_weighted_s3
from contact_index.deltas import germ_from_document


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def calibrated(runner, tmp_path, monkeypatch):
    """Run every command from a scratch directory holding a calibration file."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("CONTACT_INDEX_CALIBRATION", raising=False)
    result = runner.invoke(main, ["calibrate"])
    assert result.exit_code == 0, result.output
    return tmp_path


def _strip_stamp(text):
    doc = json.loads(text)
    doc.pop("generated_at", None)
    return doc


class TestCalibrate:
    def test_fresh_run_writes_the_artifact(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        result = runner.invoke(main, ["calibrate"])
        assert result.exit_code == 0
        assert "poisson_sign=1" in result.output
        doc = json.loads((tmp_path / "contact-index-calibration.json").read_text())
        assert doc == {"version": 1, "poisson_sign": 1, "orientation_sign": 1,
                       "todd_direction": "plus"}

    def test_second_run_is_idempotent(self, runner, calibrated):
        first = (calibrated / "contact-index-calibration.json").read_text()
        result = runner.invoke(main, ["calibrate"])
        assert result.exit_code == 0
        assert (calibrated / "contact-index-calibration.json").read_text() == first

    def test_perturbed_anchors_exit_five(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        result = runner.invoke(main, ["calibrate", "--perturb-anchors"])
        assert result.exit_code == 5

    def test_env_var_overrides_the_path(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        target = tmp_path / "alt" / "cal.json"
        target.parent.mkdir()
        monkeypatch.setenv("CONTACT_INDEX_CALIBRATION", str(target))
        assert runner.invoke(main, ["calibrate"]).exit_code == 0
        assert target.exists()
        assert runner.invoke(main, ["character", "--preset", "circle",
                                    "--max-m", "2"]).exit_code == 0


class TestGermCommand:
    def test_circle_identity(self, runner, calibrated):
        result = runner.invoke(main, ["germ", "--preset", "circle", "--at", "0/1"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        germ, loc = germ_from_document(doc["germ"])
        assert loc == 0
        assert doc["germ"]["terms"] == [{
            "derivative_order": [0], "scalar": "(2)*pi^1", "approx": "6.2832"}]

    def test_sphere_half_turn_is_zero(self, runner, calibrated):
        result = runner.invoke(main, ["germ", "--preset", "hopf", "--n", "1",
                                      "--at", "1/2"])
        assert result.exit_code == 0
        assert json.loads(result.output)["germ"]["terms"] == []

    def test_weighted_half_turn_single_term(self, runner, calibrated):
        result = runner.invoke(main, ["germ", "--preset", "weighted-s3",
                                      "--weights", "1,2", "--at", "1/2"])
        assert result.exit_code == 0
        terms = json.loads(result.output)["germ"]["terms"]
        assert len(terms) == 1
        assert terms[0]["scalar"] == "(1/2)*pi^1"

    def test_bad_fraction_is_a_config_error(self, runner, calibrated):
        result = runner.invoke(main, ["germ", "--preset", "circle", "--at", "x/y"])
        assert result.exit_code == 2

    def test_rank_two_is_unsupported(self, runner, calibrated):
        result = runner.invoke(main, ["germ", "--preset", "prequantum-cpn",
                                      "--n", "1", "--at", "0/1"])
        assert result.exit_code == 3

    def test_out_writes_a_file(self, runner, calibrated):
        out = calibrated / "germ.json"
        result = runner.invoke(main, ["germ", "--preset", "circle", "--at", "0/1",
                                      "--out", str(out)])
        assert result.exit_code == 0
        assert json.loads(out.read_text())["model_id"] == "circle"


class TestCharacterCommand:
    def test_circle_csv(self, runner, calibrated):
        result = runner.invoke(main, ["character", "--preset", "circle",
                                      "--max-m", "5", "--format", "csv"])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "m,value"
        assert lines[1:] == [f"{m},1" for m in range(-5, 6)]

    def test_json_report_shape(self, runner, calibrated):
        result = runner.invoke(main, ["character", "--preset", "hopf", "--n", "1",
                                      "--max-m", "3"])
        doc = json.loads(result.output)
        values = {e["m"]: e["integer"] for e in doc["coefficients"]}
        assert values == {m: 1 - m for m in range(-3, 4)}
        assert doc["quasi_polynomial"]["period"] == 1
        assert doc["non_integer_coefficients"] == []

    def test_determinism_modulo_timestamp(self, runner, calibrated):
        args = ["character", "--preset", "weighted-s3", "--weights", "2,3",
                "--max-m", "12"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert _strip_stamp(first.output) == _strip_stamp(second.output)

    def test_missing_calibration_is_a_config_error(self, runner, tmp_path,
                                                   monkeypatch):
        monkeypatch.chdir(tmp_path)
        monkeypatch.delenv("CONTACT_INDEX_CALIBRATION", raising=False)
        result = runner.invoke(main, ["character", "--preset", "circle"])
        assert result.exit_code == 2
        assert "calibrate" in result.output

    def test_model_document_matches_preset(self, runner, calibrated):
        path = calibrated / "w23.json"
        dump_model(preset_weighted_s3(2, 3), path)
        from_file = runner.invoke(main, ["character", "--model", str(path),
                                         "--max-m", "12", "--format", "csv"])
        from_preset = runner.invoke(main, ["character", "--preset", "weighted-s3",
                                           "--weights", "2,3", "--max-m", "12",
                                           "--format", "csv"])
        assert from_file.exit_code == 0
        assert from_file.output == from_preset.output

    def test_preset_and_model_are_mutually_exclusive(self, runner, calibrated):
        result = runner.invoke(main, ["character", "--preset", "circle",
                                      "--model", "x.json"])
        assert result.exit_code == 2

    def test_missing_n_is_a_config_error(self, runner, calibrated):
        assert runner.invoke(main, ["character", "--preset", "hopf"]).exit_code == 2

    def test_bad_weights_are_a_config_error(self, runner, calibrated):
        result = runner.invoke(main, ["character", "--preset", "weighted-s3",
                                      "--weights", "2;3"])
        assert result.exit_code == 2


class TestDhCommand:
    def test_sphere_volume_transform(self, runner, calibrated):
        result = runner.invoke(main, ["dh", "--preset", "hopf", "--n", "1"])
        assert result.exit_code == 0
        terms = json.loads(result.output)["germ"]["terms"]
        assert terms == [{"derivative_order": [1], "scalar": "(2*z4^1)*pi^1"}]


class TestCorollaryCommand:
    def test_weights_table(self, runner, calibrated):
        result = runner.invoke(main, ["corollary", "--preset", "prequantum-cpn",
                                      "--n", "1", "--max-m", "2", "--max-k", "4"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        by_m = {e["m"]: {w["weight"]: w["multiplicity"] for w in e["weights"]}
                for e in doc["characters"]}
        assert by_m[2] == {0: 1, 1: 1, 2: 1}
        assert by_m[-1] == {}

    def test_rank_one_is_unsupported(self, runner, calibrated):
        result = runner.invoke(main, ["corollary", "--preset", "circle"])
        assert result.exit_code == 3


class TestVerifyCommand:
    def test_sphere_passes(self, runner, calibrated):
        result = runner.invoke(main, ["verify", "--preset", "hopf", "--n", "1",
                                      "--max-m", "50"])
        assert result.exit_code == 0
        assert "hopf-1: ok" in result.output

    def test_weighted_passes(self, runner, calibrated):
        result = runner.invoke(main, ["verify", "--preset", "weighted-s3",
                                      "--weights", "2,3", "--max-m", "100"])
        assert result.exit_code == 0

    def test_all_presets_pass_in_one_invocation(self, runner, calibrated):
        result = runner.invoke(main, ["verify", "--all", "--max-m", "30"])
        assert result.exit_code == 0
        assert result.output.count(": ok") == 7

    def test_user_models_have_no_oracle(self, runner, calibrated):
        path = calibrated / "m.json"
        dump_model(preset_weighted_s3(1, 2), path)
        result = runner.invoke(main, ["verify", "--model", str(path)])
        assert result.exit_code == 3

    def test_report_file_carries_the_full_document(self, runner, calibrated):
        out = calibrated / "verify.json"
        result = runner.invoke(main, ["verify", "--preset", "circle",
                                      "--max-m", "10", "--out", str(out)])
        assert result.exit_code == 0
        doc = json.loads(out.read_text())["results"][0]
        assert doc["oracle_match"] is True
        assert doc["mismatches"] == []
        assert doc["quasi_polynomial"]["period"] == 1
        assert {e["m"]: e["integer"] for e in doc["coefficients"]} == \
            {m: 1 for m in range(-10, 11)}
        assert doc["germs"][0]["terms"][0]["scalar"] == "(2)*pi^1"

    def test_wrong_conventions_exit_four_and_print_differences(
            self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        monkeypatch.delenv("CONTACT_INDEX_CALIBRATION", raising=False)
        (tmp_path / "contact-index-calibration.json").write_text(json.dumps({
            "version": 1, "poisson_sign": -1, "orientation_sign": 1,
            "todd_direction": "plus"}))
        result = runner.invoke(main, ["verify", "--preset", "hopf", "--n", "1",
                                      "--max-m", "10"])
        assert result.exit_code == 4
        assert "MISMATCH" in result.output
        assert result.output.count("m=") == 10  # first ten differing m
