import csv
import json

import pytest

from vortex_barcode.barcode import read_barcode
from vortex_barcode.cli import main
from vortex_barcode.frames import GrayFrame, frame_centroids, save_gray
from vortex_barcode.pipeline import (
    STATUS_DEGENERATE,
    STATUS_OK,
    PipelineConfig,
    analyze_points,
    process_frame,
    run_pipeline,
)
from vortex_barcode.synthetic import draw_holes, hexagonal_fan, planted_frame, write_planted_sequence


@pytest.fixture
def seq(tmp_path):
    d = tmp_path / "frames"
    write_planted_sequence(d, ["betti8", "betti8", "betti8"])
    return d


def test_three_identical_frames(seq, tmp_path):
    res = run_pipeline(PipelineConfig(frames_dir=seq, out_dir=tmp_path / "out", render_barcode=True))
    assert res.barcode.betti_domain == [8]
    assert res.barcode.frames_with(8) == [0, 1, 2]
    svg = (tmp_path / "out" / "barcode.svg").read_text()
    assert svg.count('class="bar"') == 3
    for name in ("barcode.csv", "barcode.json", "frames.csv"):
        assert (tmp_path / "out" / name).exists()
    rows = list(csv.DictReader((tmp_path / "out" / "frames.csv").open()))
    assert len(rows) == 3 and {r["status"] for r in rows} == {STATUS_OK}


def test_degenerate_frame():
    report = process_frame(GrayFrame(planted_frame("degenerate")), PipelineConfig())
    assert report.status == STATUS_DEGENERATE
    assert report.n_centroids == 2 and report.betti == []


def test_all_policy_keeps_every_mnc():
    pts = hexagonal_fan((60, 120), 30) + hexagonal_fan((180, 120), 30)
    _, m, every = analyze_points(pts, mnc_policy="all")
    _, _, first = analyze_points(pts, mnc_policy="first")
    assert m >= 2 and len(every) >= 2
    assert len(first) == 1 and first[0].mnc_nucleus == every[0].mnc_nucleus
    frame = GrayFrame(draw_holes(pts, 240, 240))
    _, m_img, nerves_img = analyze_points([(c.x, c.y) for c in frame_centroids(frame)])
    report = process_frame(frame, PipelineConfig())
    assert report.mnc_count == m_img >= 2
    assert len(report.betti) == len(nerves_img) >= 2
    assert len(process_frame(frame, PipelineConfig(mnc_policy="first")).betti) == 1


def test_report_per_frame(tmp_path):
    d = tmp_path / "f"
    write_planted_sequence(d, ["betti8", "degenerate", "betti1", "betti8"])
    res = run_pipeline(PipelineConfig(frames_dir=d, out_dir=tmp_path / "o", betti_target=8, min_run=1))
    assert [r.index for r in res.reports] == [0, 1, 2, 3]
    assert [[b.value for b in r.betti] for r in res.reports] == [[8], [], [1], [8]]
    assert res.plan.retained_frames == (0, 3)
    assert (tmp_path / "o" / "plan.txt").read_text() == "0\n3\n"


def test_render_frames(seq, tmp_path):
    run_pipeline(PipelineConfig(frames_dir=seq, out_dir=tmp_path / "o", render_frames=True))
    assert sorted(p.name for p in (tmp_path / "o" / "frames").iterdir()) == [f"frame{i:04d}.svg" for i in range(3)]


def test_workers_match_serial(tmp_path):
    d = tmp_path / "f"
    write_planted_sequence(d, ["betti8", "betti1", "degenerate", "betti8"])
    serial = run_pipeline(PipelineConfig(frames_dir=d, out_dir=tmp_path / "a"))
    parallel = run_pipeline(PipelineConfig(frames_dir=d, out_dir=tmp_path / "b", workers=2))
    assert serial.barcode == parallel.barcode
    assert (tmp_path / "a" / "barcode.csv").read_bytes() == (tmp_path / "b" / "barcode.csv").read_bytes()


class TestConfig:
    def test_from_file_with_override(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("# run settings\nthreshold = 100\nmax-rings=3\nbetti_target=8\nrender_barcode=yes\n")
        cfg = PipelineConfig.from_file(p, max_rings=5)
        assert cfg.threshold == 100 and cfg.max_rings == 5
        assert cfg.betti_target == 8 and cfg.render_barcode is True

    def test_bad_line(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("colour=blue\n")
        with pytest.raises(ValueError):
            PipelineConfig.from_file(p)

    @pytest.mark.parametrize("kw", [{"max_rings": 0}, {"mnc_policy": "some"}, {"min_run": 0}])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            PipelineConfig(**kw)


class TestCli:
    def test_barcode_ok(self, seq, tmp_path, capsys):
        out = tmp_path / "o"
        assert main(["barcode", "--frames", str(seq), "--out", str(out), "--betti", "8"]) == 0
        assert "betti values: [8]" in capsys.readouterr().out
        assert read_barcode(out / "barcode.json").frames_with(8) == [0, 1, 2]

    def test_config_flag(self, seq, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(f"frames_dir={seq}\nout_dir={tmp_path / 'o'}\n")
        assert main(["barcode", "--config", str(cfg)]) == 0
        assert (tmp_path / "o" / "barcode.csv").exists()

    def test_usage_error(self, capsys):
        assert main_exit(["barcode", "--threshold", "999"]) == 1
        assert main_exit(["nonsense"]) == 1

    def test_missing_frames_dir(self, tmp_path, capsys):
        assert main(["barcode", "--frames", str(tmp_path / "nope"), "--out", str(tmp_path / "o")]) == 2

    def test_no_nerve(self, tmp_path):
        d = tmp_path / "f"
        write_planted_sequence(d, ["degenerate", "degenerate"])
        assert main(["barcode", "--frames", str(d), "--out", str(tmp_path / "o")]) == 3

    def test_frame_command(self, tmp_path, capsys):
        img = tmp_path / "one.png"
        save_gray(planted_frame("betti8"), img)
        assert main(["frame", str(img), "--out", str(tmp_path / "dbg")]) == 0
        doc = json.loads((tmp_path / "dbg" / "one.json").read_text())
        assert doc["betti"] == [8] and doc["contributions"] == [[1, 7]]
        assert (tmp_path / "dbg" / "one.svg").exists()

    def test_shrink_from_barcode(self, tmp_path):
        d = tmp_path / "f"
        write_planted_sequence(d, ["betti8", "betti8", "betti1", "betti8"])
        assert main(["barcode", "--frames", str(d), "--out", str(tmp_path / "o")]) == 0
        kept = tmp_path / "kept"
        rc = main(["shrink", "--frames", str(d), "--barcode", str(tmp_path / "o" / "barcode.csv"), "--betti", "8", "--out", str(kept)])
        assert rc == 0
        assert sorted(p.name for p in kept.glob("*.png")) == ["frame0000.png", "frame0001.png"]

    def test_shrink_from_plan(self, tmp_path):
        d = tmp_path / "f"
        write_planted_sequence(d, ["betti1"] * 3)
        plan = tmp_path / "plan.txt"
        plan.write_text("2\n")
        assert main(["shrink", "--frames", str(d), "--plan", str(plan), "--out", str(tmp_path / "k")]) == 0
        assert [p.name for p in (tmp_path / "k").glob("*.png")] == ["frame0002.png"]

    def test_shrink_needs_source(self, tmp_path):
        d = tmp_path / "f"
        write_planted_sequence(d, ["betti1"])
        assert main(["shrink", "--frames", str(d), "--out", str(tmp_path / "k")]) == 1

    def test_demo(self, tmp_path):
        assert main(["demo", "--out", str(tmp_path / "d"), "--kinds", "betti8*2,betti1"]) == 0
        assert len(list((tmp_path / "d").glob("*.png"))) == 3

    def test_bench_small(self, tmp_path):
        assert main(["bench", "--n", "50", "100", "150", "--repeats", "3", "--out", str(tmp_path / "b")]) == 0
        assert (tmp_path / "b" / "fit.txt").read_text().startswith("k=")


def main_exit(argv):
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code
