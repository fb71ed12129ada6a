"""Command-line interface: subcommands, formats, and exit codes, in-process."""

import json

import numpy as np
import pytest

from easdet import eas, evalbench, image, testimages
from easdet.cli import main
from easdet.errors import FormatError


@pytest.fixture(scope="module")
def scene_pgm(tmp_path_factory):
    d = tmp_path_factory.mktemp("imgs")
    p = d / "scene.pgm"
    image.save_image(testimages.synthetic_scene(128, seed=4), p, mode="pgm16")
    return str(p)


@pytest.fixture(scope="module")
def flat_pgm(tmp_path_factory):
    d = tmp_path_factory.mktemp("imgs")
    p = d / "flat.pgm"
    image.save_image(np.full((64, 64), 0.5), p, mode="pgm8")
    return str(p)


# ---------------------------------------------------------------- exit codes


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "easdet" in capsys.readouterr().out


def test_no_subcommand_is_usage_error(capsys):
    assert main([]) == 1
    capsys.readouterr()


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 1
    capsys.readouterr()


def test_missing_required_flag_is_usage_error(capsys):
    assert main(["detect"]) == 1
    capsys.readouterr()


def test_missing_input_file_is_io_error(tmp_path, capsys):
    assert main(["detect", "--in", str(tmp_path / "nope.pgm")]) == 2
    assert "error:" in capsys.readouterr().err


def test_corrupt_image_is_format_error(tmp_path, capsys):
    p = tmp_path / "bad.pgm"
    p.write_bytes(b"P5\n4 4\n255\n\x00\x00")  # truncated raster
    assert main(["detect", "--in", str(p)]) == 2
    capsys.readouterr()


def test_bad_pipeline_is_format_error(tmp_path, scene_pgm, capsys):
    pipe = tmp_path / "bad.txt"
    pipe.write_text("swirl amount=9\n")
    out = tmp_path / "o.pgm"
    code = main(["blur", "--in", scene_pgm, "--pipeline", str(pipe), "--out", str(out)])
    assert code == 2
    capsys.readouterr()


def test_bad_warp_is_value_error(scene_pgm, capsys):
    code = main(["eval", "--in", scene_pgm, "--warp", "1,2,3"])
    assert code == 1
    capsys.readouterr()


def test_octave_out_of_range(tmp_path, scene_pgm, capsys):
    out = tmp_path / "s.f32"
    code = main(
        ["dump-scores", "--in", scene_pgm, "--octave", "9", "--out", str(out)]
    )
    assert code == 1
    assert "octave" in capsys.readouterr().err


# ---------------------------------------------------------------- detect


def test_detect_flat_image_header_only(flat_pgm, capsys):
    assert main(["detect", "--in", flat_pgm]) == 0
    out = capsys.readouterr().out
    assert out.strip() == "x,y,r,score,octave"


def test_detect_stdout_rows(scene_pgm, capsys):
    assert main(["detect", "--in", scene_pgm, "--top-n", "25"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "x,y,r,score,octave"
    assert len(lines) == 26
    x, y, r, score, octave = lines[1].split(",")
    assert int(r) == 2 ** int(octave)
    assert float(score) > 0


def test_detect_out_csv_and_json_agree(tmp_path, scene_pgm, capsys):
    cp = tmp_path / "kp.csv"
    jp = tmp_path / "kp.json"
    assert main(["detect", "--in", scene_pgm, "--top-n", "40", "--out", str(cp)]) == 0
    assert main(["detect", "--in", scene_pgm, "--top-n", "40", "--out", str(jp)]) == 0
    capsys.readouterr()
    with open(cp) as f:
        from_csv = eas.read_keypoints_csv(f)
    with open(jp) as f:
        from_json = eas.read_keypoints_json(f)
    assert len(from_csv) == len(from_json) == 40
    for a, b in zip(from_csv, from_json):
        assert (a.x, a.y, a.r, a.octave) == (b.x, b.y, b.r, b.octave)
        assert a.score == pytest.approx(b.score, rel=1e-8)


def test_detect_matches_library(tmp_path, scene_pgm, capsys):
    out = tmp_path / "kp.json"
    assert main(["detect", "--in", scene_pgm, "--top-n", "30", "--out", str(out)]) == 0
    capsys.readouterr()
    with open(out) as f:
        cli_kps = eas.read_keypoints_json(f)
    lib_kps = evalbench.detect_by_name(image.load_image(scene_pgm), "eas", top_n=30)
    assert cli_kps == lib_kps


def test_detect_baseline_flag(tmp_path, scene_pgm, capsys):
    out = tmp_path / "h.json"
    code = main(
        ["detect", "--in", scene_pgm, "--detector", "min-eigen", "--top-n", "20",
         "--out", str(out)]
    )
    assert code == 0
    capsys.readouterr()
    with open(out) as f:
        cli_kps = eas.read_keypoints_json(f)
    lib_kps = evalbench.detect_by_name(image.load_image(scene_pgm), "min_eigen", top_n=20)
    assert cli_kps == lib_kps


# ---------------------------------------------------------------- blur


def test_blur_deterministic_bytes(tmp_path, scene_pgm, capsys):
    pipe = tmp_path / "p.txt"
    pipe.write_text("gaussian sigma=1.5\nsaltpepper frac=0.05\n")
    a = tmp_path / "a.pgm"
    b = tmp_path / "b.pgm"
    for out in (a, b):
        code = main(
            ["blur", "--in", scene_pgm, "--pipeline", str(pipe), "--out", str(out),
             "--seed", "9"]
        )
        assert code == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_blur_seed_changes_noise(tmp_path, scene_pgm, capsys):
    pipe = tmp_path / "p.txt"
    pipe.write_text("saltpepper frac=0.1\n")
    a = tmp_path / "a.pgm"
    b = tmp_path / "b.pgm"
    assert main(["blur", "--in", scene_pgm, "--pipeline", str(pipe), "--out", str(a), "--seed", "1"]) == 0
    assert main(["blur", "--in", scene_pgm, "--pipeline", str(pipe), "--out", str(b), "--seed", "2"]) == 0
    capsys.readouterr()
    assert a.read_bytes() != b.read_bytes()


def test_blur_raw_f32_matches_library(tmp_path, scene_pgm, capsys):
    from easdet import blur as blur_mod

    pipe = tmp_path / "p.txt"
    pipe.write_text("motion l=5 theta=0.785398163\n")
    out = tmp_path / "o.f32"
    code = main(
        ["blur", "--in", scene_pgm, "--pipeline", str(pipe), "--out", str(out),
         "--mode", "raw_f32"]
    )
    assert code == 0
    capsys.readouterr()
    got = image.load_raw_f32(out)
    img = image.load_image(scene_pgm)
    ref = blur_mod.apply_pipeline(img, blur_mod.parse_pipeline(pipe.read_text()))
    assert np.array_equal(got, ref.astype(np.float32).astype(np.float64))


# ---------------------------------------------------------------- eval


def test_eval_identity_prints_one(scene_pgm, capsys):
    assert main(["eval", "--in", scene_pgm, "--top-n", "50"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "detector,condition,top_n,n_c,repeatability"
    parts = lines[1].split(",")
    assert parts[0] == "eas"
    assert float(parts[-1]) == 1.0


def test_eval_with_pipeline_and_warp(tmp_path, scene_pgm, capsys):
    pipe = tmp_path / "p.txt"
    pipe.write_text("gaussian sigma=1\n")
    code = main(
        ["eval", "--in", scene_pgm, "--pipeline", str(pipe),
         "--warp", "1,0,3,0,1,-2", "--top-n", "60"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert " then warp " in lines[1]
    rep = float(lines[1].rsplit(",", 1)[1])
    assert 0.0 <= rep <= 1.0


# ---------------------------------------------------------------- sweep


def test_sweep_report_and_series(tmp_path, scene_pgm, capsys):
    out = tmp_path / "report.csv"
    series = tmp_path / "series"
    series.mkdir()
    code = main(
        ["sweep", "--in", scene_pgm, "--axis", "gaussian:1,2",
         "--top-ns", "30,60", "--detectors", "eas,harris", "--tol", "1",
         "--out", str(out), "--series-dir", str(series)]
    )
    assert code == 0
    capsys.readouterr()
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "detector,condition,top_n,n_c,repeatability"
    assert len(lines) == 1 + 2 * 2 * 2
    assert sorted(p.name for p in series.iterdir()) == [
        "series_eas.csv",
        "series_harris.csv",
    ]


def test_sweep_bad_axis(tmp_path, scene_pgm, capsys):
    out = tmp_path / "r.csv"
    code = main(["sweep", "--in", scene_pgm, "--axis", "box:1,2", "--out", str(out)])
    assert code == 1
    capsys.readouterr()


# ---------------------------------------------------------------- bench


def test_bench_prints_median(scene_pgm, capsys):
    assert main(["bench", "--in", scene_pgm, "--repeats", "3"]) == 0
    out = capsys.readouterr().out
    assert "median_ms=" in out
    ms = float(out.split("median_ms=")[1])
    assert ms > 0


# ---------------------------------------------------------------- dump-scores


def test_dump_scores_loadable(tmp_path, scene_pgm, capsys):
    out = tmp_path / "score.f32"
    assert main(["dump-scores", "--in", scene_pgm, "--octave", "1", "--out", str(out)]) == 0
    capsys.readouterr()
    score = image.load_raw_f32(out)
    assert score.shape == (64, 64)
    assert np.all(score >= 0.0)
    assert np.any(score > 0.0)


# ---------------------------------------------------------------- backend flag


def test_backend_python_same_result(tmp_path, scene_pgm, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(["detect", "--in", scene_pgm, "--top-n", "50", "--out", str(a)]) == 0
    code = main(
        ["detect", "--in", scene_pgm, "--top-n", "50", "--backend", "python",
         "--out", str(b)]
    )
    assert code == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
