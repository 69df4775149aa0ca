import hashlib
import json
import os

import pytest

from zsfuse.cli import main
from zsfuse.embedio import read_embeddings


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def file_hash(path):
    return hashlib.sha256(open(path, "rb").read()).hexdigest()


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    code = main(["synth", "--out-dir", str(out), "--n-per-class", "10",
                 "--seed", "1", "--separation", "4.0", "--informativeness",
                 "0.9"])
    assert code == 0
    return out


class TestDispatch:
    def test_prompts_renders_12_rows(self, capsys):
        code, out, _ = run(capsys, "prompts", "--classes", "A,H,N,S", "--t", "1")
        assert code == 0
        rows = out.strip().split("\n")
        assert len(rows) == 12
        assert rows[0] == "emotion_speech:A:t1\tangry speech"

    def test_prompts_amplified(self, capsys):
        code, out, _ = run(capsys, "prompts", "--classes", "A,H", "--t", "2")
        assert code == 0
        assert all(line.split("\t")[1].startswith("2 instances of ")
                   for line in out.strip().split("\n"))

    def test_unknown_subcommand_exit_1(self, capsys):
        code, _, err = run(capsys, "bogus")
        assert code == 1

    def test_missing_required_flag_exit_1(self, capsys):
        code, _, _ = run(capsys, "prompts")
        assert code == 1

    def test_data_error_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.zsem"
        bad.write_bytes(b"NOPE" + b"\x00" * 16)
        code, _, err = run(capsys, "score", "--audio-emb", str(bad),
                           "--text-emb", str(bad), "--classes", "A,H",
                           "--out", str(tmp_path / "out.zsem"))
        assert code == 2
        assert "zsfuse:" in err


class TestSynthCommand:
    def test_outputs_exist(self, synth_dir):
        for name in ("manifest.json", "fm.zsem", "alm_text.zsem",
                     "alm_audio_a1.zsem", "alm_audio_a4.zsem"):
            assert (synth_dir / name).exists()

    def test_determinism_identical_hashes(self, tmp_path, capsys):
        outs = []
        for sub in ("one", "two"):
            out = tmp_path / sub
            code, _, _ = run(capsys, "synth", "--out-dir", str(out),
                             "--seed", "5", "--n-per-class", "4")
            assert code == 0
            outs.append(out)
        for name in ("manifest.json", "fm.zsem", "alm_audio_a2.zsem",
                     "alm_text.zsem"):
            assert file_hash(outs[0] / name) == file_hash(outs[1] / name)


class TestPipelineCommands:
    def test_score_fuse_train(self, synth_dir, tmp_path, capsys):
        split = tmp_path / "split.json"
        code, _, _ = run(capsys, "split", "--manifest",
                         str(synth_dir / "manifest.json"), "--method", "speaker",
                         "--train-speakers", "4", "--val-speakers", "1",
                         "--test-speakers", "1", "--out", str(split))
        assert code == 0

        scores = tmp_path / "scores.zsem"
        code, _, _ = run(capsys, "score",
                         "--audio-emb", str(synth_dir / "alm_audio_a1.zsem"),
                         "--text-emb", str(synth_dir / "alm_text.zsem"),
                         "--classes", "A,H,N,S", "--t", "1", "--a", "1",
                         "--out", str(scores))
        assert code == 0
        table = read_embeddings(scores)
        assert table.dim == 4
        assert len(table) == 40

        fused = tmp_path / "fused.zsem"
        code, _, _ = run(capsys, "fuse", "--fm-emb", str(synth_dir / "fm.zsem"),
                         "--scores", str(scores), "--out", str(fused))
        assert code == 0
        assert read_embeddings(fused).dim == 20

        config = tmp_path / "train.json"
        config.write_text(json.dumps({"lr": 1e-2, "epochs": 3, "seeds": [0]}))
        report = tmp_path / "report.json"
        code, out, _ = run(capsys, "train", "--features", str(fused),
                           "--manifest", str(synth_dir / "manifest.json"),
                           "--split", str(split), "--config", str(config),
                           "--out", str(report))
        assert code == 0
        assert "test UAR" in out
        doc = json.loads(report.read_text())
        assert doc["config"]["epochs"] == 3
        # reproducibility metadata: every input file is hashed
        assert str(fused) in doc["inputs"]
        assert doc["inputs"][str(fused)] == file_hash(fused)

    def test_loso_split_writes_folds(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "folds"
        code, _, _ = run(capsys, "split", "--manifest",
                         str(synth_dir / "manifest.json"), "--method", "loso",
                         "--out", str(out))
        assert code == 0
        assert sorted(os.listdir(out)) == [f"fold_{i}.json" for i in range(5)]

    def test_eval_command(self, synth_dir, tmp_path, capsys):
        from zsfuse.manifest import load_manifest
        manifest = load_manifest(synth_dir / "manifest.json")
        preds = tmp_path / "preds.tsv"
        preds.write_text("".join(f"{r.id}\t{r.label_code}\n"
                                 for r in manifest.records))
        code, out, _ = run(capsys, "eval", "--preds", str(preds),
                           "--manifest", str(synth_dir / "manifest.json"))
        assert code == 0
        assert out.startswith("UAR\t1.000000")
        assert "confusion" in out

    def test_zs_grid_command(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "heatmap.csv"
        code, text, _ = run(
            capsys, "zs-grid", "--manifest", str(synth_dir / "manifest.json"),
            "--alm-audio-pattern", str(synth_dir / "alm_audio_a{a}.zsem"),
            "--text-emb", str(synth_dir / "alm_text.zsem"), "--out", str(out))
        assert code == 0
        assert out.read_text().startswith("a\\t,")
        assert len(out.read_text().strip().split("\n")) == 5

    def test_grid_command(self, synth_dir, tmp_path, capsys):
        split = tmp_path / "split.json"
        run(capsys, "split", "--manifest", str(synth_dir / "manifest.json"),
            "--method", "speaker", "--train-speakers", "4",
            "--val-speakers", "1", "--test-speakers", "1", "--out", str(split))
        config = tmp_path / "train.json"
        config.write_text(json.dumps({"lr": 1e-2, "epochs": 2, "seeds": [0]}))
        out_dir = tmp_path / "gridrun"
        code, text, _ = run(
            capsys, "grid", "--manifest", str(synth_dir / "manifest.json"),
            "--split", str(split), "--fm-emb", str(synth_dir / "fm.zsem"),
            "--alm-audio-pattern", str(synth_dir / "alm_audio_a{a}.zsem"),
            "--text-emb", str(synth_dir / "alm_text.zsem"),
            "--config", str(config), "--out-dir", str(out_dir))
        assert code == 0
        assert (out_dir / "cells.csv").exists()
        assert (out_dir / "summary.txt").exists()
        doc = json.loads((out_dir / "report.json").read_text())
        assert len(doc["cells"]) == 16
        assert "Best a×t" in text

    def test_report_command(self, capsys):
        code, out, _ = run(capsys, "report")
        assert code == 0
        assert "a1×t2: 0.8984±0.0221" in out
        assert "Random" in out
