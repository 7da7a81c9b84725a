"""Command-line surface: schemas, determinism, exit codes, SVG emission."""

import json
import math

import numpy as np
import pytest

from hexconf import (
    DataError,
    YamabeProblem,
    ball,
    develop,
    find_overlap,
    linear_factor,
    make_patch,
    random_quasi_harmonic,
)
from hexconf import jsonio
from hexconf.cli import main, render_svg


def _write_patch(tmp_path, name="patch.json", m=0.1, n=-0.05, radius=4):
    path = tmp_path / name
    jsonio.save_patch(linear_factor(m, n, ball((0, 0), radius)), path)
    return path


def test_patch_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(9)
    b = ball((0, 0), 4)
    w = {v: float(rng.uniform(-0.2, 0.2)) for v in b.vertices}
    p = make_patch(b, w, base_length=0.75)
    path = tmp_path / "patch.json"
    jsonio.save_patch(p, path)
    loaded = jsonio.load_patch(path)
    assert loaded.ball == p.ball
    assert loaded.base_length == p.base_length
    assert all(loaded.w[v] == p.w[v] for v in b.vertices)
    second = tmp_path / "again.json"
    jsonio.save_patch(loaded, second)
    assert path.read_bytes() == second.read_bytes()


def test_patch_schema_errors(tmp_path):
    path = _write_patch(tmp_path)
    doc = json.loads(path.read_text())

    missing = dict(doc)
    missing["w"] = doc["w"][1:]
    bad = tmp_path / "missing.json"
    bad.write_text(json.dumps(missing))
    with pytest.raises(DataError, match="missing vertex"):
        jsonio.load_patch(bad)

    duplicated = dict(doc)
    duplicated["w"] = doc["w"] + [doc["w"][0]]
    bad.write_text(json.dumps(duplicated))
    with pytest.raises(DataError, match="twice"):
        jsonio.load_patch(bad)

    stray = dict(doc)
    stray["w"] = doc["w"] + [[99, 99, 0.0]]
    bad.write_text(json.dumps(stray))
    with pytest.raises(DataError):
        jsonio.load_patch(bad)

    bad.write_text("{not json")
    with pytest.raises(DataError):
        jsonio.load_patch(bad)


def test_layout_and_function_round_trip(tmp_path):
    p = linear_factor(0.05, 0.02, ball((0, 0), 3))
    layout = develop(p)
    path = tmp_path / "layout.json"
    jsonio.save_layout(layout, path)
    loaded = jsonio.load_layout(path)
    assert loaded.holonomy_residual == layout.holonomy_residual
    for v, z in layout.positions.items():
        assert loaded.positions[v] == z
    assert len(loaded.placed_faces) == len(layout.placed_faces)

    rng = np.random.default_rng(3)
    f = random_quasi_harmonic(ball((0, 0), 3), 1 / 6, rng)
    fpath = tmp_path / "f.json"
    jsonio.save_function(f, fpath)
    assert jsonio.load_function(fpath) == f


def test_problem_round_trip(tmp_path):
    b = ball((0, 0), 3)
    prob = YamabeProblem(b, {v: 0.1 for v in b.boundary},
                         {v: 0.0 for v in b.interior})
    path = tmp_path / "prob.json"
    jsonio.save_problem(prob, path)
    loaded = jsonio.load_problem(path)
    assert loaded.ball == b
    assert loaded.boundary_w == prob.boundary_w
    assert loaded.target_K == prob.target_K


def test_cli_gen_linear_deterministic(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    args = ["gen-linear", "--m", "0.1", "--n", "0", "--radius", "4"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_curvature_and_verify(tmp_path, capsys):
    patch = _write_patch(tmp_path)
    report = tmp_path / "curv.json"
    assert main(["curvature", "--patch", str(patch), "--out", str(report)]) == 0
    out = capsys.readouterr().out
    assert "max|K|" in out and "theta_sup" in out
    assert main(["verify-flat", "--patch", str(patch), "--tol", "1e-9"]) == 0

    b = ball((0, 0), 2)
    w = {v: math.log(1.0 / 10.0) for v in b.vertices}
    w[(0, 0)] = 0.0
    cone = tmp_path / "cone.json"
    jsonio.save_patch(make_patch(b, w), cone)
    assert main(["verify-flat", "--patch", str(cone), "--tol", "1e-9"]) == 1


def test_cli_develop_overlap_round_trip(tmp_path):
    patch = _write_patch(tmp_path, m=0.2, n=0.0, radius=7)
    layout = tmp_path / "layout.json"
    svg = tmp_path / "fig.svg"
    assert main(["develop", "--patch", str(patch),
                 "--out", str(layout), "--svg", str(svg)]) == 0
    overlaps = tmp_path / "overlaps.json"
    assert main(["overlap", "--layout", str(layout), "--out", str(overlaps)]) == 0
    report = jsonio.load_overlaps(overlaps)
    assert report.pairs
    text = svg.read_text()
    face_count = len(ball((0, 0), 7).faces)
    assert text.count("<polygon") == face_count
    assert text.count("#d62728") >= 2


def test_cli_develop_svg_no_highlights_when_planar(tmp_path):
    patch = _write_patch(tmp_path, m=0.0, n=0.0, radius=2)
    layout = tmp_path / "layout.json"
    svg = tmp_path / "fig.svg"
    assert main(["develop", "--patch", str(patch),
                 "--out", str(layout), "--svg", str(svg)]) == 0
    text = svg.read_text()
    assert text.count("<polygon") == 24
    assert text.count("#d62728") == 0


def test_cli_develop_byte_identical(tmp_path):
    patch = _write_patch(tmp_path)
    out1 = tmp_path / "l1.json"
    out2 = tmp_path / "l2.json"
    assert main(["develop", "--patch", str(patch), "--out", str(out1)]) == 0
    assert main(["develop", "--patch", str(patch), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_overlap_radius(capsys):
    assert main(["overlap-radius", "--m", "0.2", "--n", "0", "--rmax", "16"]) == 0
    assert capsys.readouterr().out.strip() == "7"
    assert main(["overlap-radius", "--m", "0", "--n", "0", "--rmax", "4"]) == 0
    assert capsys.readouterr().out.strip() == "none"


def test_cli_similarity(tmp_path, capsys):
    patch = _write_patch(tmp_path, m=0.1, n=0.0, radius=5)
    layout = tmp_path / "layout.json"
    main(["develop", "--patch", str(patch), "--out", str(layout)])
    capsys.readouterr()
    assert main(["similarity", "--layout", str(layout), "--patch", str(patch),
                 "--at", "0,0", "--dir=-1,0", "--span", "3"]) == 0
    out = capsys.readouterr().out
    assert "contraction_norm" in out
    norm = float(out.split("contraction_norm = ")[1].splitlines()[0])
    assert norm == pytest.approx(math.exp(-0.2), abs=1e-12)


def test_cli_qh_weights(tmp_path, capsys):
    patch = _write_patch(tmp_path, m=0.05, n=0.02, radius=3)
    out = tmp_path / "weights.json"
    assert main(["qh-weights", "--patch", str(patch), "--c", "1,0",
                 "--theta", str(5 * math.pi / 12), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["mu"]) == 6
    assert sum(doc["mu"]) == pytest.approx(1.0, abs=1e-12)


def test_cli_qh_propagate_exit_codes(tmp_path):
    b = ball((0, 0), 3)
    f = {v: 1.0 for v in b.vertices}
    good = tmp_path / "good.json"
    jsonio.save_function(f, good)
    args = ["qh-propagate", "--f", str(good), "--factor", "0.16", "--center",
            "0,0", "--radius", "3", "--level", "1.0", "--eps", "0.5"]
    assert main(args) == 0
    f[(1, 1)] = 0.0
    bad = tmp_path / "bad.json"
    jsonio.save_function(f, bad)
    args[2] = str(bad)
    assert main(args) == 1


def test_cli_qh_twofun(tmp_path, capsys):
    dom = ball((0, 0), 8)
    jsonio.save_function({v: 0.5 for v in dom.vertices}, tmp_path / "f1.json")
    jsonio.save_function({v: 0.25 for v in dom.vertices}, tmp_path / "f2.json")
    assert main(["qh-twofun", "--f1", str(tmp_path / "f1.json"),
                 "--f2", str(tmp_path / "f2.json"), "--factor", "0.166",
                 "--radius", "1", "--eps", "0.5", "--domain", "8"]) == 0
    out = capsys.readouterr().out
    assert "M = 0.5" in out
    # needs n*R > domain now
    assert main(["qh-twofun", "--f1", str(tmp_path / "f1.json"),
                 "--f2", str(tmp_path / "f2.json"), "--factor", "0.166",
                 "--radius", "2", "--eps", "1e-5", "--domain", "8"]) == 2


def test_cli_solve(tmp_path, capsys):
    b = ball((0, 0), 3)
    prob = YamabeProblem(b, {v: 0.1 for v in b.boundary},
                         {v: 0.0 for v in b.interior})
    ppath = tmp_path / "prob.json"
    jsonio.save_problem(prob, ppath)
    out = tmp_path / "sol.json"
    assert main(["solve", "--problem", str(ppath), "--tol", "1e-10",
                 "--max-iter", "50", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["converged"] is True
    assert all(abs(row[2] - 0.1) <= 1e-8 for row in doc["patch"]["w"])


def test_cli_cross_ratio(tmp_path, capsys):
    patch = _write_patch(tmp_path)
    assert main(["cross-ratio", "--patch", str(patch), "--edge", "0,0:1,0"]) == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(1.0, abs=1e-12)
    assert main(["cross-ratio", "--patch", str(patch), "--edge", "4,0:4,1"]) == 2


def test_cli_check_bound(tmp_path):
    patch = _write_patch(tmp_path)
    assert main(["check-bound", "--patch", str(patch)]) == 0


def test_cli_data_errors_exit_two(tmp_path):
    assert main(["curvature", "--patch", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["curvature", "--patch", str(bad)]) == 2


def test_render_svg_generator_comment_only_difference(tmp_path):
    layout = develop(linear_factor(0.0, 0.0, ball((0, 0), 2)))
    overlaps = find_overlap(layout)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render_svg(layout, overlaps, a)
    render_svg(layout, overlaps, b)
    assert a.read_bytes() == b.read_bytes()
    assert "<!-- hexconf" in a.read_text()
