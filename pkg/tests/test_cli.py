import json

import pytest

from csdepth.cli import run
from csdepth.dataio import save_csv, save_json
from csdepth.geometry import ColoredPointSet

from conftest import NINE_POINT_CLASSES, NINE_POINT_DEPTH


@pytest.fixture
def nine_csv(tmp_path, nine_points):
    path = str(tmp_path / "nine.csv")
    save_csv(nine_points, path)
    return path


def _read(path):
    with open(path) as fh:
        return json.load(fh)


def test_depth_command(nine_csv, tmp_path):
    out = str(tmp_path / "report.json")
    code = run(["--output", out, "depth", "--dataset", nine_csv, "--query", "6.2,6.2"])
    assert code == 0
    rep = _read(out)
    assert rep["schema_version"] == 1
    assert rep["results"]["count"] == NINE_POINT_DEPTH
    assert rep["results"]["total"] == 27
    assert rep["results"]["fraction"] == f"{NINE_POINT_DEPTH}/27"


def test_depth_methods_agree(nine_csv, tmp_path):
    out1 = str(tmp_path / "a.json")
    out2 = str(tmp_path / "b.json")
    assert run(["--output", out1, "depth", "--dataset", nine_csv, "--query", "6.2,6.2", "--method", "brute"]) == 0
    assert run(["--output", out2, "depth", "--dataset", nine_csv, "--query", "6.2,6.2", "--method", "sweep"]) == 0
    assert _read(out1)["results"]["count"] == _read(out2)["results"]["count"]


def test_maxdepth_command(nine_csv, tmp_path):
    out = str(tmp_path / "max.json")
    code = run(["--output", out, "maxdepth", "--dataset", nine_csv, "--mode", "exact2d"])
    assert code == 0
    rep = _read(out)
    assert rep["results"]["depth"]["count"] >= 6


def test_generate_then_verify(tmp_path):
    data = str(tmp_path / "gen.csv")
    out = str(tmp_path / "gen.json")
    assert run(
        ["--output", out, "generate", "--kind", "uniform", "--dim", "2", "--n", "3",
         "--seed", "7", "--output-dataset", data]
    ) == 0
    rep = _read(out)
    assert rep["results"]["class_sizes"] == [3, 3, 3]

    vout = str(tmp_path / "verify.json")
    code = run(["--output", vout, "verify", "--dataset", data, "--mode", "exact2d"])
    assert code == 0
    vrep = _read(vout)
    assert vrep["results"]["all_satisfied"] is True


def test_verify_generated_trials(tmp_path):
    vout = str(tmp_path / "verify.json")
    plot = str(tmp_path / "plot.csv")
    code = run(
        ["--output", vout, "verify", "--generate", "uniform", "--dim", "2", "--n", "3",
         "--trials", "3", "--seed", "7", "--plot-csv", plot]
    )
    assert code == 0
    rep = _read(vout)
    assert len(rep["results"]["reports"]) == 3
    assert rep["results"]["all_satisfied"] is True
    with open(plot) as fh:
        lines = fh.read().strip().splitlines()
    assert len(lines) == 4  # header + one tidy row per instance
    assert lines[0].startswith("experiment,")


def test_bounds_json(tmp_path):
    out = str(tmp_path / "bounds.json")
    assert run(["--output", out, "bounds", "--dims", "1..5", "--json"]) == 0
    rep = _read(out)
    rows = rep["results"]["table"]
    assert len(rows) == 5
    assert rows[1]["gromov"] == "2/9"
    assert rows[2]["c3_interval"] == ["187/2500", "3/32"]


def test_bounds_text(capsys):
    assert run(["bounds", "--dims", "2"]) == 0
    text = capsys.readouterr().out
    assert "2/9" in text


def test_estimate_and_search(tmp_path):
    fam_path = str(tmp_path / "fam.json")
    with open(fam_path, "w") as fh:
        json.dump(
            {
                "dim": 1,
                "measures": [
                    {"kind": "uniform_box", "lo": [0.0], "hi": [1.0]},
                    {"kind": "uniform_box", "lo": [0.0], "hi": [1.0]},
                ],
            },
            fh,
        )
    out = str(tmp_path / "est.json")
    assert run(
        ["--output", out, "estimate", "--family", fam_path, "--query", "0.5",
         "--trials", "20000", "--seed", "1"]
    ) == 0
    rep = _read(out)
    assert abs(rep["results"]["p_hat"] - 0.5) < 0.02

    sout = str(tmp_path / "search.json")
    assert run(
        ["--output", sout, "search", "--family", fam_path, "--grid-resolution", "7",
         "--refine-rounds", "1", "--trials-per-eval", "4000", "--seed", "2"]
    ) == 0
    srep = _read(sout)
    assert abs(srep["results"]["query"][0] - 0.5) < 0.15


def test_mollify_check_command(nine_csv, tmp_path):
    out = str(tmp_path / "mc.json")
    code = run(
        ["--output", out, "mollify-check", "--dataset", nine_csv, "--query", "6.2,6.2",
         "--trials", "10000", "--seed", "1"]
    )
    assert code == 0
    rep = _read(out)
    assert rep["results"]["agrees"] is True
    assert rep["results"]["exact_fraction"] == f"{NINE_POINT_DEPTH}/27"


def test_report_determinism_except_wall_time(nine_csv, tmp_path):
    a = str(tmp_path / "a.json")
    b = str(tmp_path / "b.json")
    args = ["depth", "--dataset", nine_csv, "--query", "6.2,6.2"]
    assert run(["--output", a] + args) == 0
    assert run(["--output", b] + args) == 0
    ra, rb = _read(a), _read(b)
    ra.pop("wall_time_s")
    rb.pop("wall_time_s")
    assert ra == rb


def test_dataset_round_trip_through_cli(tmp_path, nine_points):
    # CSV and JSON forms of the same dataset give identical depth reports
    csv_path = str(tmp_path / "d.csv")
    json_path = str(tmp_path / "d.json")
    save_csv(nine_points, csv_path)
    save_json(nine_points, json_path)
    out1 = str(tmp_path / "r1.json")
    out2 = str(tmp_path / "r2.json")
    assert run(["--output", out1, "depth", "--dataset", csv_path, "--query", "6.2,6.2"]) == 0
    assert run(["--output", out2, "depth", "--dataset", json_path, "--query", "6.2,6.2"]) == 0
    assert _read(out1)["results"] == _read(out2)["results"]


def test_missing_dataset_exit_code():
    assert run(["depth", "--dataset", "/nonexistent.csv", "--query", "0,0"]) == 2


def test_bad_query_exit_code(nine_csv):
    assert run(["depth", "--dataset", nine_csv, "--query", "zebra"]) == 2


def test_bad_subcommand_exit_code():
    assert run(["frobnicate"]) == 2


def test_degenerate_dataset_exit_code(tmp_path):
    path = str(tmp_path / "bad.csv")
    save_csv(ColoredPointSet.from_coords([[(0, 0)], [(1, 1)], [(2, 2)]]), path)
    assert run(["maxdepth", "--dataset", path]) == 1
