import json
import os
import subprocess
import sys

import pytest

from walkslab.cli import main
from walkslab.errors import ValidationError, WalkslabError
from walkslab.grid import GridSpec
from walkslab.ordinal import Ordinal, parse_ordinal
from walkslab.scenario import build_scenario, load_scenario
from walkslab.suites import run_scenario

o = parse_ordinal
SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "walkslab",
                            "scenarios")


def scenario_path(name):
    return os.path.join(SCENARIO_DIR, name + ".json")


class TestGridSpec:
    def test_parse(self):
        spec = GridSpec.parse("w^3:2:4")
        assert spec.bound == o("w^3")
        assert spec.max_exp == 2 and spec.max_coeff == 4

    def test_acceptance_grid_has_124_points(self):
        grid = GridSpec(o("w^3"), 2, 4).ordinals()
        assert len(grid) == 124
        assert grid[0] == Ordinal(1)
        assert all(grid[i] < grid[i + 1] for i in range(len(grid) - 1))

    def test_ten_point_grid(self):
        assert len(GridSpec(Ordinal(11), 0, 10).ordinals()) == 10

    def test_bad_spec(self):
        with pytest.raises(ValidationError):
            GridSpec.parse("w^3")


class TestScenarioValidation:
    def test_bundled_scenarios_load(self):
        for name in ("canonical-w3", "rhophi-graded", "twowalks",
                     "xyz-avoid", "lists-filters"):
            scn = load_scenario(scenario_path(name))
            assert scn.bound == o("w^3")

    def test_unknown_suite_rejected(self):
        with pytest.raises(ValidationError, match="unknown suite"):
            build_scenario({"bound": "w^3", "suites": [{"suite": "nope"}]})

    def test_unresolved_family_member(self):
        with pytest.raises(ValidationError, match="unknown set"):
            build_scenario({"bound": "w^3", "fpsets": {},
                            "families": {"f": ["ghost"]}})

    def test_ordinal_beyond_bound_rejected(self):
        with pytest.raises(ValidationError, match="not below the bound"):
            build_scenario({"bound": "w", "avoid_set": ["w+1"]})

    def test_bad_table_entry_rejected(self):
        doc = {"bound": "w^3",
               "provider": {"kind": "table", "entries": [
                   {"beta": "w*2", "prefix": ["w+1"], "tails": [["0", "1"]]}]}}
        with pytest.raises(ValidationError, match="missing limit point"):
            build_scenario(doc)

    def test_single_tail_keys(self):
        doc = {"bound": "w^3",
               "provider": {"kind": "table", "fallback": True, "entries": [
                   {"beta": "w", "prefix": ["0", "1"],
                    "tail_base": "3", "tail_step": "1", "order_type": "w"}]}}
        scn = build_scenario(doc)
        assert not scn.provider.member(o("w"), Ordinal(2))
        assert scn.provider.member(o("w"), Ordinal(4))

    def test_missing_suite_filter(self):
        scn = build_scenario({"bound": "w^3", "suites": []})
        with pytest.raises(WalkslabError, match="no suite named"):
            run_scenario(scn, only="walk-shape")

    def test_empty_suites_is_success(self, tmp_path):
        scn_file = tmp_path / "empty.json"
        scn_file.write_text(json.dumps({"bound": "w^3", "suites": []}))
        assert main(["check", "--scenario", str(scn_file)]) == 0

    def test_bundled_scenario_path(self):
        from walkslab.scenario import bundled_scenario_path
        scn = load_scenario(bundled_scenario_path("canonical-w3"))
        assert scn.grid is not None
        with pytest.raises(ValidationError):
            bundled_scenario_path("ghost")

    def test_unwritable_export_path(self):
        assert main(["export", "--table", "walks", "--grid", "w:1:3",
                     "--out", "/nonexistent-dir/x.csv"]) == 2


class TestDeterminism:
    def test_reports_identical_modulo_timing(self):
        scn1 = load_scenario(scenario_path("lists-filters"))
        scn2 = load_scenario(scenario_path("lists-filters"))
        r1 = run_scenario(scn1).to_json()
        r2 = run_scenario(scn2).to_json()
        r1.pop("meta")
        r2.pop("meta")
        assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


class TestCli:
    def test_walk_command(self, capsys):
        assert main(["walk", "--alpha", "w+1", "--beta", "w^2"]) == 0
        out = capsys.readouterr().out
        assert "w^2 > w*2 > w + 1" in out
        assert "rho0:       1;2" in out

    def test_measure_commands(self, capsys):
        assert main(["rho2", "--alpha", "5", "--beta", "7"]) == 0
        assert capsys.readouterr().out.strip() == "2"
        assert main(["lambda", "--alpha", "w*2", "--beta", "w^2"]) == 0
        assert capsys.readouterr().out.strip() == "w"
        assert main(["rho0", "--alpha", "w+1", "--beta", "w^2"]) == 0
        assert capsys.readouterr().out.strip() == "1;2"

    def test_rhophi_command(self, capsys):
        code = main(["rhophi", "--scenario", scenario_path("rhophi-graded"),
                     "--alpha", "w+3", "--beta", "w*2"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "2"

    def test_twowalk_command(self, capsys):
        code = main(["twowalk", "--set", "f9", "--alpha", "w",
                     "--scenario", scenario_path("twowalks")])
        assert code == 0
        assert "w + 4 > w + 3 > w" in capsys.readouterr().out

    def test_xyz_command(self, capsys):
        code = main(["xyz", "--x", "x1", "--y", "y1", "--z", "z1",
                     "--scenario", scenario_path("xyz-avoid")])
        assert code == 0
        assert capsys.readouterr().out.strip() == "4"

    def test_parse_error_exit_code(self, capsys):
        assert main(["walk", "--alpha", "w^", "--beta", "w"]) == 2

    def test_check_writes_report(self, tmp_path, capsys):
        report = tmp_path / "out.json"
        code = main(["check", "--scenario", scenario_path("lists-filters"),
                     "--report", str(report)])
        assert code == 0
        payload = json.loads(report.read_text())
        assert payload["scenario"].endswith("lists-filters.json")
        names = [s["name"] for s in payload["suites"]]
        assert "fip" in names and "indep-family" in names
        assert "wall_time_ms" in payload["meta"]

    def test_check_single_suite(self, capsys):
        code = main(["check", "--scenario", scenario_path("lists-filters"),
                     "--suite", "indep-family"])
        assert code == 0
        out = capsys.readouterr().out
        assert "[PASS] indep-family" in out

    def test_failing_expectation_sets_exit_code(self, tmp_path, capsys):
        doc = json.loads(open(scenario_path("rhophi-graded")).read())
        doc["suites"] = [{"suite": "rho-phi-monotone",
                          "cells": [{"alpha": "w+3", "beta": "w*2",
                                     "expect": "9"}]}]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert main(["check", "--scenario", str(bad)]) == 1
        assert "counterexample" in capsys.readouterr().out


class TestExport:
    def test_walks_row_count_10x10(self, tmp_path, capsys):
        out = tmp_path / "walks.csv"
        code = main(["export", "--table", "walks", "--grid", "11:0:10",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").split("\n")
        assert lines[0] == "alpha,beta,rho2,rho0,lambda,lambda_bar"
        assert len([l for l in lines[1:] if l]) == 100
        assert not lines[0].endswith(",")
        # alpha > beta rows carry empty measures
        row = next(l for l in lines if l.startswith("2,1,"))
        assert row == "2,1,,,,"

    def test_walks_csv_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["export", "--table", "walks", "--grid", "w:1:5", "--out", str(a)])
        main(["export", "--table", "walks", "--grid", "w:1:5", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_rhophi_cell(self, tmp_path):
        out = tmp_path / "rhophi.csv"
        code = main(["export", "--table", "rhophi-table",
                     "--scenario", scenario_path("rhophi-graded"),
                     "--grid", "w*2+1:1:4", "--out", str(out)])
        assert code == 0
        lines = out.read_text().split("\n")
        header = lines[0].split(",")
        col = header.index("w*2")
        row = next(l for l in lines if l.startswith("w + 3,")).split(",")
        assert row[col] == "2"

    def test_xyz_table_rows(self, tmp_path):
        out = tmp_path / "xyz.csv"
        code = main(["export", "--table", "xyz-table",
                     "--scenario", scenario_path("xyz-avoid"),
                     "--family", "xfam", "--partition", "main",
                     "--out", str(out)])
        assert code == 0
        lines = [l for l in out.read_text().split("\n") if l]
        assert lines[0] == "x,y,z,xyz,color"
        assert "x1,y1,z1,4,0" in lines

    def test_plot_renders_figure(self, tmp_path):
        out = tmp_path / "walks.csv"
        code = main(["export", "--table", "walks", "--grid", "w:1:5",
                     "--out", str(out), "--plot"])
        assert code == 0
        png = tmp_path / "walks.png"
        assert png.exists() and png.stat().st_size > 1000


class TestListCommands:
    def test_list_levels(self, tmp_path, capsys):
        out = tmp_path / "levels.csv"
        code = main(["list-levels", "--scenario", scenario_path("lists-filters"),
                     "--block", "graded", "--out", str(out)])
        assert code == 0
        text = capsys.readouterr().out
        assert "hull {1;w}: 2 level element(s)" in text
        lines = out.read_text().split("\n")
        assert lines[0] == "hull,size,level"
        assert any(line.split(",")[1] == "2" for line in lines[1:] if line)

    def test_branch_found(self, capsys):
        code = main(["branch", "--scenario", scenario_path("lists-filters"),
                     "--block", "compatible"])
        assert code == 0
        assert "branch {1;2} found" in capsys.readouterr().out

    def test_branch_none_certified(self, tmp_path, capsys):
        out = tmp_path / "branch.csv"
        code = main(["branch", "--scenario", scenario_path("lists-filters"),
                     "--block", "incompatible", "--out", str(out)])
        assert code == 0
        assert "certificate over 8 candidates" in capsys.readouterr().out
        assert "branch,none" in out.read_text()

    def test_fip(self, tmp_path, capsys):
        out = tmp_path / "fip.csv"
        code = main(["fip", "--scenario", scenario_path("lists-filters"),
                     "--block", "bx", "--max-subfamily", "2", "--out", str(out)])
        assert code == 0
        text = capsys.readouterr().out
        assert "witness" in text and "exhausted" not in text
        lines = [l for l in out.read_text().split("\n") if l]
        assert lines[0] == "subfamily,verdict,witness,examined"
        assert len(lines) == 1 + 7  # empty + 3 singles + 3 pairs

    def test_unknown_block(self):
        assert main(["branch", "--scenario", scenario_path("lists-filters"),
                     "--block", "ghost"]) == 2


def test_cli_entrypoint_subprocess():
    env = dict(os.environ)
    src = os.path.join(os.path.dirname(__file__), "..", "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "walkslab.cli", "rho2",
         "--alpha", "3", "--beta", "w"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1"
