import json
import shutil

import pytest

from mineseg import cli
from mineseg.gradcheck import CheckResult

from conftest import CORPUS


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as e:
        run("nonsense")
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        run("eval", "--pred", "x")
    assert e.value.code == 1
    assert run("enhance", "--input", CORPUS / "images", "--output", "x", "--gamma", "2", "--target-mean", ".4") == 1


def test_data_error_exit_2(tmp_path):
    assert run("enhance", "--input", tmp_path / "missing", "--output", tmp_path / "o") == 2
    (tmp_path / "bad.json").write_text("{")
    assert run("render", "--image", CORPUS / "images" / "scene_00.png", "--pred", tmp_path / "bad.json",
               "--out", tmp_path / "o.png") == 2


def test_loss_check(capsys, monkeypatch):
    assert run("loss-check", "--points", "3") == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 7
    monkeypatch.setattr(cli, "run_gradient_suite", lambda **kw: [CheckResult("dice", 1.0, 3)])
    assert run("loss-check") == 3


def test_global_flags_either_side(tmp_path):
    for argv in (["--seed", "5", "mock-segment"], ["mock-segment", "--seed", "5"]):
        out = tmp_path / argv[0].strip("-")
        assert run(*argv, "--gt", CORPUS / "gt", "--out", out, "--epsilon", "0.2") == 0
    a = sorted((tmp_path / "seed").glob("*.json"))
    b = sorted((tmp_path / "mock-segment").glob("*.json"))
    assert [p.read_bytes() for p in a] == [p.read_bytes() for p in b]


def test_degrade_filter_render(tmp_path):
    assert run("degrade", "--input", CORPUS / "images", "--output", tmp_path / "d", "--seed", "42") == 0
    assert len(list((tmp_path / "d").glob("*.png"))) == 10
    assert run("filter", "--input", tmp_path / "d", "--report", tmp_path / "f.json") == 0
    assert len(json.loads((tmp_path / "f.json").read_text())) == 10
    assert run("render", "--image", CORPUS / "images" / "scene_00.png", "--pred", CORPUS / "gt" / "scene_00.json",
               "--out", tmp_path / "o.png") == 0


def test_filter_moves_rejected(tmp_path):
    src = tmp_path / "in"
    shutil.copytree(CORPUS / "images", src)
    shutil.copy(src / "scene_00.png", src / "scene_00_copy.png")
    assert run("filter", "--input", src, "--report", tmp_path / "f.json", "--move-rejected", tmp_path / "rej",
               "--dup-distance", "0") == 0
    assert (tmp_path / "rej" / "scene_00_copy.png").exists()


def test_single_fuse(tmp_path):
    gt = CORPUS / "gt" / "scene_02.json"
    assert run("fuse", "--image", CORPUS / "images" / "scene_02.png", "--pred-a", gt, "--pred-b", gt,
               "--out", tmp_path / "f.json", "--alignment-report", tmp_path / "al.json") == 0
    info = json.loads((tmp_path / "al.json").read_text())["scene_02"]
    assert info["fallback"] is None
    assert run("fuse", "--image", CORPUS / "images" / "scene_02.png", "--pred-a", gt, "--pred-b", gt,
               "--out", tmp_path / "g.json", "--no-align", "--alignment-report", tmp_path / "al.json") == 0
    assert json.loads((tmp_path / "al.json").read_text())["scene_02"]["fallback"] == "disabled"


def test_chained_commands_equal_run(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("mock-segment", "--gt", CORPUS / "gt", "--out", a, "--epsilon", "0.2", "--seed", "1",
               "--shift", "3", "2") == 0
    assert run("mock-segment", "--gt", CORPUS / "gt", "--out", b, "--epsilon", "0.2", "--seed", "2") == 0

    full = tmp_path / "full"
    assert run("run", "--input", CORPUS / "images", "--gt", CORPUS / "gt", "--pred-a", a, "--pred-b", b,
               "--output", full) == 0

    step = tmp_path / "step"
    assert run("enhance", "--input", CORPUS / "images", "--output", step / "enhanced") == 0
    assert run("fuse", "--image", step / "enhanced", "--pred-a", a, "--pred-b", b, "--out", step / "fused") == 0
    assert run("eval", "--pred", step / "fused", "--gt", CORPUS / "gt", "--out", step / "report.json") == 0

    for sub in ("enhanced", "fused"):
        names = sorted(p.name for p in (full / sub).iterdir())
        assert names == sorted(p.name for p in (step / sub).iterdir())
        for n in names:
            assert (full / sub / n).read_bytes() == (step / sub / n).read_bytes(), n
    for n in ("report.json", "report.csv"):
        assert (full / n).read_bytes() == (step / n).read_bytes()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("eval: {iou_threshold: 0.9}\n")
    gt = CORPUS / "gt"
    assert run("eval", "--config", cfg, "--pred", gt, "--gt", gt, "--out", tmp_path / "r.json") == 0
    assert json.loads((tmp_path / "r.json").read_text())["config"]["iou_threshold"] == 0.9
    assert run("eval", "--config", cfg, "--pred", gt, "--gt", gt, "--out", tmp_path / "r.json", "--iou", "0.3") == 0
    assert json.loads((tmp_path / "r.json").read_text())["config"]["iou_threshold"] == 0.3
