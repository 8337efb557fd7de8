import math
import os
import subprocess

import pytest

import landpat


def small_grid():
    # 1 1 2
    # 1 2 2
    # 3 3 -9999
    return landpat.Grid(3, 3, [1, 1, 2, 1, 2, 2, 3, 3, -9999], cellsize=100.0)


def test_grid_properties():
    g = small_grid()
    assert (g.nrows, g.ncols, len(g)) == (3, 3, 9)
    assert g.classes() == [1, 2, 3]


def test_metrics_rows():
    rows = landpat.calculate_metrics(small_grid(), ["lsm_c_np", "lsm_l_ta"], directions=4)
    np = {r["class"]: r["value"] for r in rows if r["metric"] == "np"}
    assert np == {1: 1.0, 2: 1.0, 3: 1.0}
    ta = [r for r in rows if r["metric"] == "ta"]
    assert ta[0]["level"] == "landscape" and ta[0]["class"] is None
    assert ta[0]["value"] == pytest.approx(8 * 100 * 100 / 10000)


def test_unknown_metric_raises():
    with pytest.raises(landpat.UsageError):
        landpat.calculate_metrics(small_grid(), ["lsm_x_nothing"])


def test_signature_and_distance():
    labels, rows = landpat.signatures(small_grid(), "cove")
    assert labels == ["1", "2", "3"]
    assert len(rows) == 1 and len(rows[0]["values"]) == 6
    assert sum(rows[0]["values"]) == pytest.approx(1.0, abs=1e-12)
    p = rows[0]["values"]
    assert landpat.distance(p, p) == 0.0
    assert landpat.distance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(math.log(2))
    assert landpat.distance([0.0, 0.0], [0.0, 1.0]) is None


def test_round_trip_and_cli(tmp_path):
    path = str(tmp_path / "g.asc")
    landpat.write_grid(small_grid(), path)
    assert landpat.load_grid(path).cells == small_grid().cells
    code, out, _ = landpat.run_cli(["metrics", path, "--what", "lsm_l_np"])
    assert code == 0
    assert out.startswith("layer,level,class,id,metric,value\n")
    assert landpat.run_cli(["metrics", path, "--what", "nope"])[0] == 2


def test_executable_matches_module(tmp_path):
    exe = os.environ.get("LANDPAT_CLI")
    if not exe:
        pytest.skip("LANDPAT_CLI not set")
    path = str(tmp_path / "g.asc")
    landpat.write_grid(small_grid(), path)
    args = ["signature", path, "--type", "cove", "--window", "whole"]
    proc = subprocess.run([exe, *args], capture_output=True, text=True, check=True)
    assert proc.stdout == landpat.run_cli(args)[1]
