import numpy as np
import pytest

from zsfuse.errors import ZsfuseError
from zsfuse.grid import audio_embedding, zero_shot_scores
from zsfuse.metrics import uar
from zsfuse.synth import SyntheticWorldConfig, synth_world
from zsfuse.zeroshot import ZeroShotVector, zero_shot_predict


def zero_shot_preds(manifest, audio_table, text_table, a=1, t=1):
    scores = zero_shot_scores(manifest, audio_table, text_table,
                              manifest.label_set, a, t)
    labels = manifest.labels_by_id()
    preds, truth = [], []
    for rec in manifest.records:
        preds.append(zero_shot_predict(
            ZeroShotVector(utterance_id=rec.id, s=scores[rec.id])))
        truth.append(labels[rec.id])
    return preds, truth


class TestSynthWorld:
    def test_shapes_and_keys(self):
        config = SyntheticWorldConfig(n_classes=4, n_per_class=5, seed=3)
        manifest, fm, audio, text = synth_world(config)
        assert len(manifest.records) == 20
        assert len(fm) == 20
        assert sorted(audio) == [1, 2, 3, 4]
        for a, table in audio.items():
            assert all(k.endswith(f"@a{a}") for k in table.entries)
        # prompts for every t in 1..4: 3 templates x 4 classes x 4 t values
        assert len(text) == 48

    def test_determinism(self):
        config = SyntheticWorldConfig(seed=11, n_per_class=4)
        m1, fm1, audio1, text1 = synth_world(config)
        m2, fm2, audio2, text2 = synth_world(config)
        assert m1 == m2
        assert fm1 == fm2 and text1 == text2
        for a in audio1:
            assert audio1[a] == audio2[a]

    def test_different_seed_differs(self):
        base = SyntheticWorldConfig(seed=1, n_per_class=4)
        other = SyntheticWorldConfig(seed=2, n_per_class=4)
        assert synth_world(base)[1] != synth_world(other)[1]

    def test_full_informativeness_perfect_zero_shot(self):
        config = SyntheticWorldConfig(zero_shot_informativeness=1.0,
                                      n_per_class=20, seed=0)
        manifest, _, audio, text = synth_world(config)
        preds, truth = zero_shot_preds(manifest, audio[1], text)
        assert preds == truth

    def test_zero_informativeness_chance_level(self):
        # Monte-Carlo: many samples, UAR should sit near 1/E
        config = SyntheticWorldConfig(zero_shot_informativeness=0.0,
                                      n_per_class=2500, seed=0)
        manifest, _, audio, text = synth_world(config)
        preds, truth = zero_shot_preds(manifest, audio[1], text)
        value = uar(preds, truth, manifest.label_set.E)
        assert abs(value - 0.25) <= 0.03

    def test_audio_repeats_are_perturbed_copies(self):
        config = SyntheticWorldConfig(n_per_class=5, seed=4)
        manifest, _, audio, _ = synth_world(config)
        for rec in manifest.records:
            v1 = audio_embedding(audio[1], rec.id, 1).astype(np.float64)
            v3 = audio_embedding(audio[3], rec.id, 3).astype(np.float64)
            assert not np.array_equal(v1, v3)
            assert float(v1 @ v3) > 0.9  # jitter is small

    def test_invalid_config_rejected(self):
        with pytest.raises(ZsfuseError):
            synth_world(SyntheticWorldConfig(zero_shot_informativeness=1.5))
        with pytest.raises(ZsfuseError):
            synth_world(SyntheticWorldConfig(n_classes=1))
        with pytest.raises(ZsfuseError):
            synth_world(SyntheticWorldConfig(n_classes=8, dim_alm=4))
