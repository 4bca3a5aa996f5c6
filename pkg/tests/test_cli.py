import json

import numpy as np
import pytest

from emovis import cli, imgio, stats
from emovis.core import ControlVector, Emotion, PipelineConfig

from util import make_chart
from test_stats import records_from_cells, synthetic_cells


@pytest.fixture
def chart_ppm(tmp_path):
    path = tmp_path / "chart.ppm"
    imgio.save_image(make_chart(48), path, bit_depth=16)
    return path


class TestRender:
    def test_neutral_identity_with_baseline_config(self, tmp_path, chart_ppm):
        from emovis.core import rgb_to_lumachroma

        img = imgio.load_image(chart_ppm)
        avg = float(np.mean(rgb_to_lumachroma(img).y, dtype=np.float64))
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(f"p = 0\nzeta = 0\nclahe_enabled = false\nT = {avg}\n")
        out = tmp_path / "o.ppm"
        rc = cli.main(["render", "--input", str(chart_ppm), "--output", str(out),
                       "--emotion", "neutral", "--config", str(cfg)])
        assert rc == 0
        got = imgio.load_image(out)
        assert np.abs(got.data - img.data).max() <= 1.0 / 65535

    def test_emotion_equals_explicit_alphas(self, tmp_path, chart_ppm):
        out1 = tmp_path / "a.ppm"
        out2 = tmp_path / "b.ppm"
        assert cli.main(["render", "--input", str(chart_ppm), "--output", str(out1),
                         "--emotion", "sad"]) == 0
        assert cli.main(["render", "--input", str(chart_ppm), "--output", str(out2),
                         "--alphas=-0.18,-0.1,0,-0.02,-0.09,0"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_wrong_alpha_arity_exits_2(self, tmp_path, chart_ppm):
        with pytest.raises(SystemExit) as exc:
            cli.main(["render", "--input", str(chart_ppm),
                      "--output", str(tmp_path / "o.ppm"), "--alphas", "0,0,0,0,0"])
        assert exc.value.code == 2

    def test_missing_input_exits_1(self, tmp_path, capsys):
        rc = cli.main(["render", "--input", str(tmp_path / "nope.ppm"),
                       "--output", str(tmp_path / "o.ppm"), "--emotion", "sad"])
        assert rc == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_config_key_exits_1(self, tmp_path, chart_ppm, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("gf_radisu = 4\n")
        rc = cli.main(["render", "--input", str(chart_ppm),
                       "--output", str(tmp_path / "o.ppm"),
                       "--emotion", "sad", "--config", str(cfg)])
        assert rc == 1
        assert "gf_radisu" in capsys.readouterr().err

    def test_bit_depth_8(self, tmp_path, chart_ppm):
        out = tmp_path / "o.png"
        assert cli.main(["render", "--input", str(chart_ppm), "--output", str(out),
                         "--emotion", "happy", "--bit-depth", "8"]) == 0
        assert imgio.probe(out).format == "png8"


class TestInvert:
    def test_srgb_round_trip_via_files(self, tmp_path):
        import cv2

        codes = np.arange(256, dtype=np.uint8).reshape(16, 16)
        codes = np.stack([codes] * 3, axis=-1)
        src = tmp_path / "in.png"
        cv2.imwrite(str(src), cv2.cvtColor(codes, cv2.COLOR_RGB2BGR))
        out = tmp_path / "lin.ppm"
        assert cli.main(["invert", "--input", str(src), "--output", str(out),
                         "--srgb"]) == 0
        lin = imgio.load_image(out)
        from emovis.inverse_isp import linearize

        want = linearize(codes).data
        assert np.abs(lin.data - want).max() <= 1.0 / 65535

    def test_gamma_flag(self, tmp_path):
        import cv2

        codes = np.full((4, 4, 3), 128, dtype=np.uint8)
        src = tmp_path / "in.png"
        cv2.imwrite(str(src), codes)
        out = tmp_path / "lin.ppm"
        assert cli.main(["invert", "--input", str(src), "--output", str(out),
                         "--gamma", "2.2"]) == 0
        lin = imgio.load_image(out)
        assert lin.data[0, 0, 0] == pytest.approx((128 / 255) ** 2.2, abs=1e-4)

    def test_unknown_flag_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["invert", "--input", "x.png", "--output", "y.ppm",
                      "--frobnicate"])
        assert exc.value.code == 2


class TestAnalyze:
    def test_synthetic_fixture_reproduces_oracle(self, tmp_path, capsys):
        from util import anova_oracle

        cells = synthetic_cells(21)
        path = tmp_path / "cal.jsonl"
        stats.write_calibration_records(records_from_cells(cells), path)
        assert cli.main(["analyze", "--records", str(path)]) == 0
        out = capsys.readouterr().out
        f, _, _ = anova_oracle(cells)
        assert f"{f:.3f}" in out
        assert "alpha_s" in out and "angry" in out

    def test_empty_file_exits_1(self, tmp_path, capsys):
        path = tmp_path / "cal.jsonl"
        path.write_text("")
        assert cli.main(["analyze", "--records", str(path)]) == 1
        assert "error" in capsys.readouterr().err

    def test_constant_response_gives_zero_f_row(self, tmp_path, capsys):
        cells = np.tile(np.array([[0.1], [0.3], [-0.2]]), (1, 4))
        path = tmp_path / "cal.jsonl"
        stats.write_calibration_records(records_from_cells(cells), path)
        assert cli.main(["analyze", "--records", str(path)]) == 0
        out = capsys.readouterr().out
        assert "0.000" in out.splitlines()[1]


class TestAbtest:
    def _write_clips(self, tmp_path, rows):
        img = tmp_path / "clipimg.ppm"
        imgio.save_image(make_chart(16), img, bit_depth=16)
        clips = tmp_path / "clips.csv"
        lines = ["clip_id,image,valence,arousal"]
        for cid, v, a in rows:
            lines.append(f"{cid},{img},{v},{a}")
        clips.write_text("\n".join(lines) + "\n")
        return clips

    def test_make_pairs_reproducible(self, tmp_path, capsys):
        clips = self._write_clips(tmp_path, [("c1", 0.4, 0.6), ("c2", -0.3, -0.2)])
        out1 = tmp_path / "p1"
        out2 = tmp_path / "p2"
        for out in (out1, out2):
            assert cli.main(["abtest", "make-pairs", "--clips", str(clips),
                             "--out", str(out), "--seed", "5"]) == 0
        for name in ("manifest.jsonl", "c1_left.png", "c1_right.png",
                     "c2_left.png", "c2_right.png"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_zero_valence_names_clip(self, tmp_path, capsys):
        clips = self._write_clips(tmp_path, [("weird", 0.0, 0.5)])
        assert cli.main(["abtest", "make-pairs", "--clips", str(clips),
                         "--out", str(tmp_path / "p"), "--seed", "1"]) == 1
        assert "weird" in capsys.readouterr().err

    def test_tally_prints_headline_rows(self, tmp_path, capsys):
        from test_stats import make_ab_records

        path = tmp_path / "ab.jsonl"
        stats.write_ab_records(make_ab_records(167, 25, 46, 146), path)
        assert cli.main(["abtest", "tally", "--records", str(path)]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert any("correct" in l and " 87 " in l and " 13 " in l for l in lines)
        assert any("wrong" in l and " 24 " in l and " 76 " in l for l in lines)


class TestConfigFile:
    def test_round_trips_all_fields(self, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(
            "eps = 1e-5\nT = 0.2\nzeta = 0.1\np = 0.3\nsigma = 2.0\n"
            "gf_radius = 4\ngf_eps = 1e-2\nclahe_tiles = 4,4\n"
            "clahe_clip = 3.0\nclahe_enabled = true\nroi = 0,0,8,8\n")
        parsed = cli.load_config(cfg)
        assert parsed == PipelineConfig(
            eps=1e-5, T=0.2, zeta=0.1, p=0.3, sigma=2.0, gf_radius=4,
            gf_eps=1e-2, clahe_tiles=(4, 4), clahe_clip=3.0,
            clahe_enabled=True, roi=(0, 0, 8, 8))
