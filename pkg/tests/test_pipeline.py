import numpy as np
import pytest

from emovis.core import (
    BorderCaseError,
    ControlVector,
    Emotion,
    LinearImage,
    PipelineConfig,
    VAVector,
    rgb_to_lumachroma,
)
from emovis import pipeline

from util import make_chart

TABLE_1 = {
    Emotion.ANGRY: dict(alpha_s=0.15, alpha_b=-0.08, alpha_lc=0.32,
                        alpha_rg=0.19, alpha_p=0.7, alpha_yb=0.0),
    Emotion.CALM: dict(alpha_s=0.0, alpha_b=0.0, alpha_lc=0.0,
                       alpha_rg=0.0, alpha_p=-0.2, alpha_yb=0.0),
    Emotion.HAPPY: dict(alpha_s=0.2, alpha_b=0.19, alpha_lc=0.14,
                        alpha_rg=0.0, alpha_p=0.0, alpha_yb=0.0),
    Emotion.SAD: dict(alpha_s=-0.18, alpha_b=-0.09, alpha_lc=-0.02,
                      alpha_rg=0.0, alpha_p=0.0, alpha_yb=-0.1),
}


class TestPresets:
    @pytest.mark.parametrize("emotion", list(TABLE_1))
    def test_preset_values(self, emotion):
        vec = pipeline.preset_for_emotion(emotion)
        for name, expected in TABLE_1[emotion].items():
            assert getattr(vec, name) == expected

    def test_neutral_all_zero(self):
        assert pipeline.preset_for_emotion(Emotion.NEUTRAL) == ControlVector.zero()

    def test_presets_text_is_key_value(self):
        text = pipeline.presets_text()
        assert "happy.alpha_b = 0.19" in text
        assert "sad.alpha_yb = -0.1" in text
        assert len([l for l in text.splitlines() if " = " in l]) == 30


class TestQuadrantFromVA:
    @pytest.mark.parametrize("v,a,expected", [
        (0.3, 0.5, Emotion.HAPPY),
        (0.3, -0.5, Emotion.CALM),
        (-0.2, 0.5, Emotion.ANGRY),
        (-0.2, -0.4, Emotion.SAD),
    ])
    def test_sign_quadrants(self, v, a, expected):
        assert pipeline.quadrant_from_va(VAVector(v, a)) == expected

    @pytest.mark.parametrize("v,a", [(0.0, 0.5), (0.3, 0.0), (0.0, 0.0)])
    def test_borders_rejected(self, v, a):
        with pytest.raises(BorderCaseError):
            pipeline.quadrant_from_va(VAVector(v, a))


class TestRender:
    def test_neutral_identity_with_baseline_zeroed(self):
        img = make_chart(64)
        avg = float(np.mean(rgb_to_lumachroma(img).y, dtype=np.float64))
        cfg = PipelineConfig(p=0.0, zeta=0.0, clahe_enabled=False, T=avg)
        out = pipeline.render_image(img, ControlVector.zero(), cfg)
        assert np.abs(out.data - img.data).max() <= 1.0 / 65535

    def test_deterministic(self):
        img = make_chart(48)
        vec = pipeline.preset_for_emotion(Emotion.ANGRY)
        a = pipeline.render_image(img, vec)
        b = pipeline.render_image(img, vec)
        assert np.array_equal(a.data, b.data)

    def test_directional_sad_vs_neutral(self):
        img = make_chart()
        neutral = pipeline.render_image(img, pipeline.preset_for_emotion(Emotion.NEUTRAL))
        sad = pipeline.render_image(img, pipeline.preset_for_emotion(Emotion.SAD))
        lc_n = rgb_to_lumachroma(neutral)
        lc_s = rgb_to_lumachroma(sad)
        assert lc_s.y.mean() < lc_n.y.mean()
        assert lc_s.chroma_magnitude().mean() < lc_n.chroma_magnitude().mean()

    def test_directional_happy_vs_neutral(self):
        img = make_chart()
        neutral = pipeline.render_image(img, pipeline.preset_for_emotion(Emotion.NEUTRAL))
        happy = pipeline.render_image(img, pipeline.preset_for_emotion(Emotion.HAPPY))
        assert rgb_to_lumachroma(happy).y.mean() > rgb_to_lumachroma(neutral).y.mean()

    def test_brightness_monotone_response(self):
        img = make_chart(48)
        means = []
        for alpha_b in (0.0, 0.1, 0.19):
            out = pipeline.render_image(img, ControlVector(alpha_b=alpha_b))
            means.append(rgb_to_lumachroma(out).y.mean())
        assert means[0] < means[1] < means[2]

    def test_render_request_wrapper(self):
        img = make_chart(32)
        req = pipeline.RenderRequest(image=img, vector=ControlVector.zero())
        out = pipeline.render(req)
        assert out.data.shape == img.data.shape


def _small_cfg():
    return PipelineConfig(gf_radius=1, sigma=0.6, clahe_tiles=(1, 1))


class TestRenderABPair:
    def test_seeded_reproducibility(self):
        rng = np.random.default_rng(0)
        img = LinearImage(rng.random((8, 8, 3)))
        cfg = _small_cfg()
        out1 = pipeline.render_ab_pair(img, Emotion.SAD, Emotion.HAPPY, cfg,
                                       seed=1, image_id="x")
        out2 = pipeline.render_ab_pair(img, Emotion.SAD, Emotion.HAPPY, cfg,
                                       seed=1, image_id="x")
        assert out1[2] == out2[2]
        assert np.array_equal(out1[0].data, out2[0].data)
        assert np.array_equal(out1[1].data, out2[1].data)

    def test_descriptor_schema(self):
        rng = np.random.default_rng(1)
        img = LinearImage(rng.random((6, 6, 3)))
        _, _, desc = pipeline.render_ab_pair(img, Emotion.ANGRY, Emotion.SAD,
                                             _small_cfg(), seed=3, image_id="clip7")
        d = desc.as_dict()
        assert set(d) == {"image_id", "shown_emotion", "is_correct_emotion",
                          "emotion_side"}
        assert d["image_id"] == "clip7"
        assert d["shown_emotion"] in ("angry", "sad")
        assert d["emotion_side"] in ("left", "right")
        assert d["is_correct_emotion"] == (d["shown_emotion"] == "angry")

    def test_neutral_correct_rejected(self):
        img = LinearImage(np.full((4, 4, 3), 0.4))
        with pytest.raises(ValueError):
            pipeline.render_ab_pair(img, Emotion.NEUTRAL, Emotion.SAD, _small_cfg())

    @pytest.mark.parametrize("base_seed", [100, 20000])
    def test_side_assignment_uniform(self, base_seed):
        rng = np.random.default_rng(2)
        img = LinearImage(rng.random((2, 2, 3)) * 0.8 + 0.1)
        cfg = _small_cfg()
        lefts = 0
        trials = 1000
        for i in range(trials):
            _, _, desc = pipeline.render_ab_pair(img, Emotion.SAD, Emotion.HAPPY,
                                                 cfg, seed=base_seed + i)
            lefts += desc.emotion_side == "left"
        assert 0.45 <= lefts / trials <= 0.55
