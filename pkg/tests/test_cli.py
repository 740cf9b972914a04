"""Command-line front end: subcommand behavior, exit codes, format and
output plumbing, config-file dispatch, and the threads mirror."""

import json

import numpy as np
import pytest

from assouad_lab import (
    ExperimentReport,
    FiniteMetricSpace,
    assouad_estimate_subsets,
    covering_number,
    progression,
    sup_grid,
    write_space,
)
from assouad_lab import experiments
from assouad_lab.cli import THREADS_ENV, main

from conftest import euclidean_space


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture()
def space_file(tmp_path):
    path = tmp_path / "prog.json"
    write_space(progression(12), path)
    return str(path)


@pytest.fixture(autouse=True)
def _clear_threads_env(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)


class TestValidate:
    def test_valid_table(self, capsys, space_file):
        code, out, err = run(capsys, "validate", "--in", space_file)
        assert code == 0 and err == ""
        assert "valid" in out and "yes" in out

    def test_valid_structured(self, capsys, space_file):
        code, out, _ = run(
            capsys, "validate", "--in", space_file, "--format", "structured"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["command"] == "validate"
        assert doc["result"]["valid"] is True
        assert doc["result"]["points"] == 12
        assert doc["result"]["separation"] == 1.0

    def test_invalid_matrix_exits_3(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"d": [[0.0, 1.0], [2.0, 0.0]]}')
        code, _, err = run(capsys, "validate", "--in", str(bad))
        assert code == 3
        assert "error:" in err

    def test_missing_file_exits_3(self, capsys, tmp_path):
        code, _, err = run(capsys, "validate", "--in", str(tmp_path / "nope.json"))
        assert code == 3

    def test_csv_form_accepted(self, capsys, tmp_path):
        path = tmp_path / "m.csv"
        write_space(progression(4), path, form="csv")
        code, out, _ = run(capsys, "validate", "--in", str(path))
        assert code == 0

    def test_singleton_separation_is_null(self, capsys, tmp_path):
        path = tmp_path / "one.json"
        write_space(FiniteMetricSpace(("a",), np.zeros((1, 1))), path)
        code, out, _ = run(capsys, "validate", "--in", str(path), "--format", "structured")
        assert code == 0
        assert json.loads(out)["result"]["separation"] is None


class TestGhdist:
    def _two_files(self, tmp_path, d1=1.0, d2=3.0, n=2):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_space(progression(n, step=d1), a)
        write_space(progression(n, step=d2), b)
        return str(a), str(b)

    def test_exact_known_value(self, capsys, tmp_path):
        a, b = self._two_files(tmp_path)
        code, out, _ = run(
            capsys, "ghdist", "--a", a, "--b", b, "--mode", "exact",
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["value"] == 1.0  # |1 - 3| / 2
        assert doc["result"]["kind"] == "exact"
        assert doc["result"]["lower"] == doc["result"]["upper"] == 1.0

    def test_exact_mode_rejects_large(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_space(progression(20), a)
        write_space(progression(20), b)
        code, _, err = run(capsys, "ghdist", "--a", str(a), "--b", str(b),
                           "--mode", "exact")
        assert code == 3 and "error:" in err

    def test_bounds_mode_table(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_space(progression(20), a)
        write_space(progression(30), b)
        code, out, _ = run(capsys, "ghdist", "--a", str(a), "--b", str(b),
                           "--mode", "bounds")
        assert code == 0
        assert "kind" in out and "interval" in out


class TestDim:
    def test_matches_library_exactly(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        write_space(progression(32), path)
        code, out, _ = run(capsys, "dim", "--in", str(path), "--method", "subsets",
                           "--format", "structured")
        assert code == 0
        doc = json.loads(out)
        want = assouad_estimate_subsets(progression(32))
        assert doc["result"]["beta_hat"] == want.beta_hat
        assert doc["result"]["empirical"] is True
        assert doc["params"]["method"] == "subsets"

    def test_degenerate_window_exits_3(self, capsys, tmp_path):
        path = tmp_path / "g4.json"
        write_space(sup_grid(4), path)
        code, _, err = run(capsys, "dim", "--in", str(path), "--method", "subsets")
        assert code == 3 and "error:" in err

    def test_window_flags_forwarded(self, capsys, tmp_path):
        path = tmp_path / "g4.json"
        write_space(sup_grid(4), path)
        code, out, _ = run(
            capsys, "dim", "--in", str(path), "--method", "subsets",
            "--rho-min", "2.0", "--r-min", "1.0", "--r-max", "3.0",
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["window"]["rho_min"] == 2.0
        assert doc["params"]["rho_min"] == 2.0
        assert doc["params"]["r_min"] == 1.0


class TestCover:
    def test_count_matches_library(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        s = progression(10)
        write_space(s, path)
        code, out, _ = run(capsys, "cover", "--in", str(path), "--radius", "2.0",
                           "--format", "structured")
        assert code == 0
        doc = json.loads(out)
        want = covering_number(s.full_subset(), 2.0, mode="auto")
        assert doc["result"]["count"] == want.count
        assert doc["result"]["r"] == 2.0


class TestTelescope:
    def test_default_build_passes(self, capsys):
        code, out, _ = run(capsys, "telescope", "--sizes", "3,2,4")
        assert code == 0
        assert "verdict: pass" in out

    def test_save_space_round_trips(self, capsys, tmp_path):
        saved = tmp_path / "tele.json"
        code, out, _ = run(capsys, "telescope", "--sizes", "2,2",
                           "--save-space", str(saved), "--format", "structured")
        assert code == 0
        doc = json.loads(out)
        from assouad_lab import read_space, validate_metric

        space = read_space(saved)
        assert space.card == doc["result"]["points"] == 5
        validate_metric(space.labels, space.d)

    def test_seed_changes_components(self, capsys):
        _, out0, _ = run(capsys, "telescope", "--sizes", "3,3",
                         "--format", "structured", "--seed", "0")
        _, out1, _ = run(capsys, "telescope", "--sizes", "3,3",
                         "--format", "structured", "--seed", "1")
        assert json.loads(out0)["result"]["diameter"] != pytest.approx(
            json.loads(out1)["result"]["diameter"]
        ) or out0 != out1

    @pytest.mark.parametrize("sizes", ["a,b", "0", "3,-1"])
    def test_bad_sizes_exit_3(self, capsys, sizes):
        code, _, err = run(capsys, "telescope", "--sizes", sizes)
        assert code == 3 and "error:" in err


class TestAsymcone:
    def test_default_suite_passes(self, capsys):
        code, out, _ = run(capsys, "asymcone")
        assert code == 0
        assert "alpha-ratio" in out

    def test_structured_document(self, capsys):
        code, out, _ = run(capsys, "asymcone", "--format", "structured")
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["verdict"] == "pass"
        assert doc["params"]["blocks"] == 6 and doc["params"]["radius"] == 1.5

    def test_oversized_radius_exits_3(self, capsys):
        code, _, err = run(capsys, "asymcone", "--radius", "5000")
        assert code == 3

    def test_too_many_blocks_exits_3(self, capsys):
        code, _, err = run(capsys, "asymcone", "--blocks", "17")
        assert code == 3

    def test_save_space(self, capsys, tmp_path):
        saved = tmp_path / "cone.json"
        code, _, _ = run(capsys, "asymcone", "--save-space", str(saved))
        assert code == 0
        from assouad_lab import read_space

        assert read_space(saved).card == 7


class TestExperiment:
    def test_single_scenario_passes(self, capsys):
        code, out, _ = run(capsys, "experiment", "--scenario", "asymcone-lemmas")
        assert code == 0
        assert "overall: pass" in out

    def test_structured_reports(self, capsys):
        code, out, _ = run(capsys, "experiment", "--scenario", "asymcone-lemmas",
                           "--format", "structured")
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["overall"] == "pass"
        assert [r["name"] for r in doc["result"]["reports"]] == ["block-lemma-suite"]

    def test_structured_output_deterministic(self, capsys):
        args = ("experiment", "--scenario", "path-ball-convergence",
                "--format", "structured")
        _, out0, _ = run(capsys, *args)
        _, out1, _ = run(capsys, *args)
        assert out0 == out1

    def test_failing_scenario_exits_1(self, capsys, monkeypatch):
        step = {"i": 0, "check": "stub", "measured": 2.0, "bound": 1.0,
                "passed": False, "note": ""}
        rep = ExperimentReport("stub", (step,), "fail", runtime=0.0)
        monkeypatch.setitem(experiments.SCENARIOS, "stub-fail", lambda seed: [rep])
        code, out, _ = run(capsys, "experiment", "--scenario", "stub-fail")
        assert code == 1
        assert "overall: fail" in out

    def test_unknown_scenario_exits_2(self, capsys):
        code, _, err = run(capsys, "experiment", "--scenario", "nope")
        assert code == 2


class TestEmbed:
    def test_vectors_reproduce_metric(self, capsys, tmp_path):
        rng = np.random.default_rng(4)
        s = euclidean_space(rng, 6)
        path = tmp_path / "e.json"
        write_space(s, path)
        code, out, _ = run(capsys, "embed", "--in", str(path), "--format", "structured")
        assert code == 0
        doc = json.loads(out)
        vec = np.asarray(doc["result"]["vectors"])
        back = np.abs(vec[:, None, :] - vec[None, :, :]).max(axis=2)
        assert np.allclose(back, s.d, atol=1e-9)
        assert doc["result"]["labels"] == list(s.labels)

    def test_table_one_line_per_point(self, capsys, space_file):
        code, out, _ = run(capsys, "embed", "--in", space_file)
        assert code == 0
        assert len(out.rstrip("\n").split("\n")) == 12


class TestPlumbing:
    def test_out_writes_file_instead_of_stdout(self, capsys, tmp_path, space_file):
        dest = tmp_path / "report.json"
        code, out, _ = run(capsys, "validate", "--in", space_file,
                           "--format", "structured", "--out", str(dest))
        assert code == 0
        assert out == ""
        assert json.loads(dest.read_text())["result"]["valid"] is True

    def test_usage_errors_exit_2(self, capsys, space_file):
        assert run(capsys, )[0] == 2
        assert run(capsys, "frobnicate")[0] == 2
        assert run(capsys, "validate")[0] == 2  # missing --in
        assert run(capsys, "ghdist", "--a", space_file, "--b", space_file,
                   "--mode", "wild")[0] == 2
        assert run(capsys, "validate", "--in", space_file, "--threads", "0")[0] == 2

    def test_help_exits_0(self, capsys):
        assert run(capsys, "--help")[0] == 0

    def test_seed_and_params_recorded(self, capsys, space_file):
        code, out, _ = run(capsys, "validate", "--in", space_file,
                           "--format", "structured", "--seed", "5")
        doc = json.loads(out)
        assert doc["seed"] == 5
        assert set(doc["params"]) == {"infile"}  # presentation keys excluded

    def test_threads_env_mirror(self, capsys, monkeypatch, space_file):
        monkeypatch.setenv(THREADS_ENV, "7")
        _, out, _ = run(capsys, "validate", "--in", space_file,
                        "--format", "structured")
        assert json.loads(out)["threads"] == 7

    def test_threads_flag_beats_env(self, capsys, monkeypatch, space_file):
        monkeypatch.setenv(THREADS_ENV, "7")
        _, out, _ = run(capsys, "validate", "--in", space_file,
                        "--format", "structured", "--threads", "2")
        assert json.loads(out)["threads"] == 2

    @pytest.mark.parametrize("bogus", ["x", "0", "-3"])
    def test_bad_threads_env_exits_3(self, capsys, monkeypatch, space_file, bogus):
        monkeypatch.setenv(THREADS_ENV, bogus)
        code, _, err = run(capsys, "validate", "--in", space_file)
        assert code == 3 and "error:" in err


class TestConfig:
    def test_config_dispatches(self, capsys, tmp_path, space_file):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps(
            {"command": "validate", "in": space_file, "format": "structured"}
        ))
        code, out, _ = run(capsys, "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["result"]["valid"] is True

    def test_config_expands_underscores_and_lists(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "command": "telescope",
            "sizes": [2, 3],
            "no_rescale": False,
            "format": "structured",
        }))
        code, out, _ = run(capsys, "--config", str(cfg))
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["points"] == 6
        assert doc["params"]["sizes"] == "2,3"

    def test_config_bool_flag(self, capsys, tmp_path):
        # Pre-shrunk sizes keep no-rescale valid: single-point components.
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "command": "telescope", "sizes": [1, 1], "no_rescale": True,
            "format": "structured",
        }))
        code, out, _ = run(capsys, "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["params"]["no_rescale"] is True

    def test_config_must_stand_alone(self, capsys, tmp_path, space_file):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"command": "validate", "in": space_file}))
        code, _, err = run(capsys, "--config", str(cfg), "--seed", "1")
        assert code == 2

    def test_config_errors_exit_3(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run(capsys, "--config", str(bad))[0] == 3
        nocmd = tmp_path / "nocmd.json"
        nocmd.write_text(json.dumps({"in": "x"}))
        assert run(capsys, "--config", str(nocmd))[0] == 3
        assert run(capsys, "--config", str(tmp_path / "missing.json"))[0] == 3
