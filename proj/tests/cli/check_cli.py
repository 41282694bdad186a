"""End-to-end checks of the likert-miner executable on synthetic data."""

import csv
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

MINER = os.environ["LIKERT_MINER_BIN"]
SYNTH = os.environ["LIKERT_SYNTH_BIN"]
SCHEMA = json.loads(Path(os.environ["LIKERT_MINER_SCHEMA"]).read_text())

WORK = Path(tempfile.mkdtemp(prefix="likert-cli-"))
DATA = WORK / "survey.csv"


def run(*args, env=None):
    return subprocess.run([MINER, *map(str, args)], capture_output=True, text=True, env=env)


def config(name, body):
    path = WORK / f"{name}.cfg"
    path.write_text(f"input={DATA}\nforest.trees=40\n" + body)
    return path


def report(out):
    return json.loads((Path(out) / "report.json").read_text())


def setUpModule():
    subprocess.run([SYNTH, "-n", "1200", "--seed", "11", "-o", DATA], check=True)


class Cli(unittest.TestCase):
    def test_full_run_validates_against_schema(self):
        out = WORK / "full"
        r = run("analyze", "--config", config("full", "format=json,csv\n"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        rep = report(out)
        jsonschema.validate(rep, SCHEMA)
        self.assertEqual(rep["status"], "ok")
        self.assertIsNone(rep["failure"])
        stages = [s["stage"] for s in rep["sections"]]
        self.assertEqual(stages, ["load", "reliability", "summaries", "associations", "correlation",
                                  "clustering", "factor", "tree", "forest"])

    def test_same_seed_gives_byte_identical_json(self):
        cfg = config("repeat", "format=json\n")
        a, b = WORK / "repeat_a", WORK / "repeat_b"
        for out in (a, b):
            self.assertEqual(run("analyze", "--config", cfg, "--out", out).returncode, 0)
        first = (a / "report.json").read_bytes().replace(str(a).encode(), b"OUT")
        second = (b / "report.json").read_bytes().replace(str(b).encode(), b"OUT")
        self.assertEqual(first, second)

    def test_thread_count_does_not_change_report(self):
        cfg = config("threads", "format=json\nout=" + str(WORK / "threads") + "\n")
        outputs = []
        for threads in ("1", "4"):
            env = dict(os.environ, LIKERT_MINER_THREADS=threads)
            self.assertEqual(run("analyze", "--config", cfg, env=env).returncode, 0)
            outputs.append((WORK / "threads" / "report.json").read_bytes())
        self.assertEqual(outputs[0], outputs[1])

    def test_load_only_report_has_dimensions_only(self):
        toggles = "".join(f"stages.{s}=false\n" for s in
                          ["reliability", "summaries", "associations", "correlation", "clustering", "factor", "tree", "forest"])
        out = WORK / "load_only"
        r = run("analyze", "--config", config("load_only", toggles + "format=json\n"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        rep = report(out)
        jsonschema.validate(rep, SCHEMA)
        self.assertEqual([s["stage"] for s in rep["sections"]], ["load"])
        self.assertEqual(rep["sections"][0]["payload"]["n"], 1200)
        self.assertEqual(rep["sections"][0]["payload"]["p"], 28)

    def test_subcommand_runs_only_its_stage(self):
        out = WORK / "reliability_only"
        r = run("reliability", "--config", config("rel", "format=json\n"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(report(out)["stages"], ["reliability"])

    def test_forest_subcommand_pulls_in_clustering_for_opinion(self):
        out = WORK / "forest_only"
        r = run("forest", "--config", config("forest", "format=json\n"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(report(out)["stages"], ["clustering", "forest"])

    def test_cli_flags_override_config_file(self):
        out = WORK / "override"
        cfg = config("override", "cluster.k=3\nseed=5\nformat=text\n")
        r = run("cluster", "--config", cfg, "--out", out, "--seed", "9", "--cluster.k", "4",
                "--cluster.curve_max_k=2", "--format", "json")
        self.assertEqual(r.returncode, 0, r.stderr)
        rep = report(out)
        self.assertEqual(rep["seed"], 9)
        payload = rep["sections"][1]["payload"]
        self.assertEqual(payload["k"], 4)
        self.assertEqual(len(payload["variation_curve"]), 2)
        self.assertFalse((out / "report.txt").exists())

    def test_format_changes_serialization_only(self):
        out_json, out_all = WORK / "fmt_json", WORK / "fmt_all"
        cfg = config("fmt", "")
        self.assertEqual(run("analyze", "--config", cfg, "--out", out_json, "--format", "json").returncode, 0)
        r = run("analyze", "--config", cfg, "--out", out_all, "--format", "json,text,csv")
        self.assertEqual(r.returncode, 0, r.stderr)
        a, b = report(out_json), report(out_all)
        self.assertEqual(a["sections"], b["sections"])
        self.assertIn("== forest ==", r.stdout)
        self.assertEqual((out_all / "report.txt").read_text(), r.stdout)

        # CSV plot data carries the same numbers as the JSON report.
        forest = next(s["payload"] for s in a["sections"] if s["stage"] == "forest")
        with open(out_all / "importance.csv") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual([(r["feature"], float(r["importance"]), int(r["rank"])) for r in rows],
                         [(e["feature"], e["importance"], e["rank"]) for e in forest["importance"]])
        factor = next(s["payload"] for s in a["sections"] if s["stage"] == "factor")
        with open(out_all / "loadings.csv") as f:
            rows = list(csv.DictReader(f))
        for row, entry in zip(rows, factor["loadings"]):
            self.assertEqual(row["item"], entry["item"])
            self.assertEqual([float(row["factor1"]), float(row["factor2"])], entry["loadings"])
            self.assertEqual(float(row["communality"]), entry["communality"])

    def test_plot_files(self):
        out = WORK / "plots"
        self.assertEqual(run("analyze", "--config", config("plots", "format=csv\n"), "--out", out).returncode, 0)
        with open(out / "course_variation.csv") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 13 * 2)
        self.assertEqual(sum(int(r["count"]) for r in rows), 1200)
        bars = sorted((out / "item_bars").glob("*.csv"))
        self.assertEqual(len(bars), 28)
        with open(out / "item_bars" / "Q1.csv") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual([int(r["level"]) for r in rows], [1, 2, 3, 4, 5])
        self.assertTrue(math.isclose(sum(float(r["proportion"]) for r in rows), 1.0, abs_tol=1e-12))
        with open(out / "scores.csv") as f:
            self.assertEqual(next(csv.reader(f)), ["row_id", "z1", "z2"])
        with open(out / "confusion.csv") as f:
            self.assertEqual(next(csv.reader(f))[0], "true")
        corr = json.loads((out / "correlation.json").read_text())
        self.assertEqual(len(corr["matrix"]), 28)

    def test_plot_for_stage_not_run_is_reported(self):
        out = WORK / "no_forest"
        r = run("reliability", "--config", config("noforest", "format=csv\nplots=importance\n"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("StageNotRun", r.stderr)
        self.assertFalse((out / "importance.csv").exists())

    def test_failed_stage_writes_partial_report(self):
        out = WORK / "failed"
        # More clusters than respondents is rejected by the clustering stage.
        cfg = config("failed", "format=json\nstages.tree=false\nstages.forest=false\ncluster.k=5000\n")
        r = run("analyze", "--config", cfg, "--out", out)
        self.assertEqual(r.returncode, 1)
        rep = report(out)
        jsonschema.validate(rep, SCHEMA)
        self.assertEqual(rep["status"], "failed")
        self.assertEqual(rep["failure"]["stage"], "clustering")
        self.assertEqual(rep["failure"]["kind"], "KTooLarge")
        self.assertEqual(rep["stages"], ["reliability", "summaries", "associations", "correlation"])

    def test_missing_input_is_a_load_failure(self):
        out = WORK / "missing"
        cfg = WORK / "missing.cfg"
        cfg.write_text(f"input={WORK / 'nope.csv'}\nformat=json\n")
        r = run("analyze", "--config", cfg, "--out", out)
        self.assertEqual(r.returncode, 1)
        rep = report(out)
        jsonschema.validate(rep, SCHEMA)
        self.assertEqual(rep["failure"]["stage"], "load")
        self.assertEqual(rep["sections"], [])

    def test_usage_errors(self):
        cfg = config("usage", "")
        self.assertEqual(run("analyze").returncode, 2)
        self.assertEqual(run("analyze", "--config", cfg, "--no.such.key", "1").returncode, 2)
        self.assertEqual(run("analyze", "--config", cfg, "--cluster.k", "many").returncode, 2)
        self.assertEqual(run("analyze", "--config", cfg, "--format", "pdf").returncode, 2)
        bad = WORK / "bad.cfg"
        bad.write_text("input=x.csv\nthis line has no equals sign\n")
        r = run("analyze", "--config", bad)
        self.assertEqual(r.returncode, 2)
        self.assertIn("bad.cfg:2", r.stderr)
        self.assertEqual(run("analyze", "--config", WORK / "absent.cfg").returncode, 2)
        # Opinion needs the k = 3 clustering.
        self.assertEqual(run("tree", "--config", cfg, "--cluster.k", "4").returncode, 2)


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=2)
