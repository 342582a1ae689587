import json
import os
import subprocess
import sys

import numpy as np
import pytest

from defcon.cli import main
from defcon.continuation import BifurcationDiagram, ConfigurationError, ContinuationConfig, run
from defcon.diagram_io import (
    CSV_HEADER,
    PROBLEM_DEFAULTS,
    RunManifest,
    _dump,
    diagram_document,
    parse_config_text,
    read_csv,
    read_json,
    write_csv,
    write_diagram,
    write_json,
)
from defcon.problems import RootsOfUnity


# -- manifest and config file ------------------------------------------------------

def test_manifest_roundtrip_through_config_text():
    for m in (
        RunManifest("unity", 2.0, 9.0, 0.1),
        RunManifest("elastica", 0.0, 12.566, 0.1, mu=0.5, grid=499, p=3.0, sigma=0.0,
                    distinct=1e-7, max_iter=50, tol=1e-9, backward=True, retain="all", out="runs/x"),
        RunManifest("mittelmann", 0.3678, 0.05, -0.0001, grid=21, retain="endpoints"),
    ):
        assert RunManifest.from_text(m.to_text()) == m


def test_config_text_format():
    text = RunManifest("elastica", 0.0, 1.0, 0.1, mu=0.5, max_iter=7).to_text()
    assert "max-iter = 7\n" in text
    assert "mu = 0.5\n" in text
    assert "grid" not in text
    parsed = parse_config_text("# comment\n\n--step = -0.01   # trailing\nbackward = yes\n")
    assert parsed == {"step": -0.01, "backward": True}


@pytest.mark.parametrize("text", ["speed = 3\n", "step 0.1\n", "grid = ten\n", "backward = maybe\n"])
def test_config_errors(text):
    with pytest.raises(ConfigurationError):
        parse_config_text(text)


def test_manifest_builds_continuation_config():
    cfg = RunManifest("pendulum", 0.0, 1.0, 0.01, max_iter=30, tol=1e-9, backward=True).continuation_config()
    assert cfg.newton.max_iterations == 30 and cfg.newton.residual_tolerance == 1e-9
    assert cfg.backward_pass and cfg.retain == "none"


# -- CSV / JSON --------------------------------------------------------------------

def test_empty_diagram_gives_header_only_csv(tmp_path):
    path = tmp_path / "d.csv"
    write_csv(BifurcationDiagram([], [0.0], [0]), path)
    assert path.read_text() == "lambda,branch_id,functional,born_by\n"
    assert read_csv(path) == []


@pytest.fixture(scope="module")
def small_unity():
    return run(RootsOfUnity(), ContinuationConfig(2.0, 4.3, 0.1, retain="endpoints"))


def test_csv_rows_sorted_and_exact(tmp_path, small_unity):
    path = tmp_path / "d.csv"
    write_csv(small_unity, path)
    rows = read_csv(path)
    assert [r[1:2] + r[0:1] for r in rows] == sorted(r[1:2] + r[0:1] for r in rows)
    expected = {
        (b.id, lam): (f, o.value)
        for b in small_unity.branches if not b.trivial
        for lam, f, o in zip(b.lambdas, b.functionals, b.origins)
    }
    assert len(rows) == len(expected)
    for lam, bid, f, origin in rows:
        # 17 significant digits reproduce every double exactly
        assert expected[(bid, lam)] == (f, origin)


def test_csv_row_count_matches_solution_counts(tmp_path, unity_sweep):
    d = unity_sweep.diagram
    path = tmp_path / "d.csv"
    write_csv(d, path)
    trivial_rows = sum(len(b.lambdas) for b in d.branches if b.trivial)
    assert len(read_csv(path)) == sum(d.solution_counts) - trivial_rows


def test_json_roundtrip_is_byte_identical(tmp_path, small_unity):
    manifest = RunManifest("unity", 2.0, 4.3, 0.1, retain="endpoints", out=str(tmp_path))
    csv_path, json_path = write_diagram(small_unity, manifest, RootsOfUnity())
    original = open(json_path).read()
    diagram, m2, info = read_json(json_path)
    assert m2 == manifest and info == {"name": "unity"}
    again = tmp_path / "again.json"
    write_json(diagram, again, m2, info)
    assert again.read_text() == original
    assert _dump(diagram_document(diagram, m2, info)) == original


def test_json_document_contents(small_unity):
    doc = json.loads(_dump(diagram_document(small_unity, RunManifest("unity", 2.0, 4.3, 0.1))))
    assert doc["solution_counts"] == small_unity.solution_counts
    assert doc["manifest"]["problem"] == "unity"
    trivial = doc["branches"][0]
    assert trivial["trivial"] and trivial["born_by"] == "Seed"
    # endpoints retention keeps the first and last vector of each branch
    for entry, b in zip(doc["branches"], small_unity.branches):
        assert [s["point"] for s in entry["solutions"]] == sorted({0, len(b.lambdas) - 1})
        np.testing.assert_array_equal(entry["solutions"][0]["values"], b.solutions[0])


# -- command line --------------------------------------------------------------------

def run_cli(*argv):
    return main([str(a) for a in argv])


def test_cli_unity_run(tmp_path, capsys):
    out = tmp_path / "unity"
    assert run_cli("unity", "--min", 2, "--max", 4.5, "--step", 0.1, "--out", out, "--retain", "all") == 0
    assert sorted(os.listdir(out)) == ["diagram.csv", "diagram.json", "manifest.cfg", "run.log"]
    assert open(out / "diagram.csv").readline().strip() == ",".join(CSV_HEADER)
    diagram, manifest, _ = read_json(out / "diagram.json")
    assert manifest.max == 4.5 and manifest.retain == "all"
    assert diagram.solution_counts[diagram.lambda_grid.index(4.0)] == 4
    log = [json.loads(line) for line in open(out / "run.log")]
    attempts = [r for r in log if r["pass"] in ("continue", "discover")]
    assert attempts and all({"lambda", "guess", "status"} <= set(r) for r in attempts)
    assert "unity:" in capsys.readouterr().out


def test_cli_is_byte_stable(tmp_path):
    for name in ("a", "b"):
        assert run_cli("unity", "--max", 3.0, "--out", tmp_path / name) == 0
    for f in ("diagram.csv", "run.log"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    a = json.loads((tmp_path / "a" / "diagram.json").read_text())
    b = json.loads((tmp_path / "b" / "diagram.json").read_text())
    a["manifest"].pop("out"), b["manifest"].pop("out")
    assert a == b


def test_cli_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("problem = unity\nmin = 2\nmax = 2.5\nstep = 0.25\nretain = endpoints\n")
    out = tmp_path / "o"
    assert run_cli("unity", "--config", cfg, "--step", 0.1, "--out", out) == 0
    _, manifest, _ = read_json(out / "diagram.json")
    assert (manifest.min, manifest.max, manifest.step, manifest.retain) == (2.0, 2.5, 0.1, "endpoints")


def test_cli_defaults_per_problem():
    assert PROBLEM_DEFAULTS["mittelmann"] == {"min": 0.3678, "max": 0.05, "step": -0.001}


@pytest.mark.parametrize(
    "argv",
    [
        ["bratu"],
        [],
        ["unity", "--step", "0"],
        ["unity", "--min", "2", "--max", "1", "--step", "0.1"],
        ["unity", "--retain", "some"],
        ["unity", "--p", "0.5"],
        ["unity", "--config", "/nonexistent/run.cfg"],
        ["unity", "--grid", "x"],
    ],
)
def test_cli_configuration_errors(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path)] if argv else argv) == 2
    assert "defcon:" in capsys.readouterr().err


def test_cli_config_for_other_problem(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("problem = pendulum\n")
    assert run_cli("unity", "--config", cfg, "--out", tmp_path) == 2


def test_cli_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run_cli("unity", "--max", 2.2, "--out", blocker / "sub") == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "defcon", "unity", "--max", "2.3", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "diagram.csv").exists()
    proc = subprocess.run([sys.executable, "-m", "defcon", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2
