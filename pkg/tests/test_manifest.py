import pytest

from zsfuse.errors import ManifestError, SplitError
from zsfuse.labels import LabelSet
from zsfuse.manifest import (DatasetManifest, UtteranceRecord, load_manifest,
                             load_provided_partitions, load_split, loso_folds,
                             save_manifest, save_split, speaker_disjoint_split)

from conftest import make_manifest


def partition_sizes(split):
    return {p: len(split.ids_in(p)) for p in ("train", "val", "test")}


class TestSpeakerDisjoint:
    def test_ravdess_style_counts(self):
        # 24 speakers x 28 utterances, 16/4/4 speakers -> 448/112/112
        manifest = make_manifest(n_speakers=24, per_speaker=28)
        split = speaker_disjoint_split(manifest, 16, 4, 4, seed=0)
        assert partition_sizes(split) == {"train": 448, "val": 112, "test": 112}

    def test_speakers_never_straddle_partitions(self):
        manifest = make_manifest(n_speakers=10, per_speaker=5)
        split = speaker_disjoint_split(manifest, 6, 2, 2, seed=3)
        speaker_of = {r.id: r.speaker_id for r in manifest.records}
        parts = {}
        for part in ("train", "val", "test"):
            parts[part] = {speaker_of[uid] for uid in split.ids_in(part)}
        assert not (parts["train"] & parts["val"])
        assert not (parts["train"] & parts["test"])
        assert not (parts["val"] & parts["test"])

    def test_all_records_assigned(self):
        manifest = make_manifest(n_speakers=7, per_speaker=3)
        split = speaker_disjoint_split(manifest, 5, 1, 1, seed=1)
        assert set(split.mapping) == set(manifest.ids)

    def test_count_mismatch_names_totals(self):
        manifest = make_manifest(n_speakers=5, per_speaker=2)
        with pytest.raises(SplitError, match="5 distinct speakers"):
            speaker_disjoint_split(manifest, 3, 1, 2, seed=0)

    def test_empty_partition_rejected(self):
        manifest = make_manifest(n_speakers=2, per_speaker=2)
        with pytest.raises(SplitError):
            speaker_disjoint_split(manifest, 1, 1, 0, seed=0)

    def test_same_seed_identical_other_seed_still_disjoint(self):
        manifest = make_manifest(n_speakers=3, per_speaker=4)
        a = speaker_disjoint_split(manifest, 1, 1, 1, seed=7)
        b = speaker_disjoint_split(manifest, 1, 1, 1, seed=7)
        assert a.mapping == b.mapping
        c = speaker_disjoint_split(manifest, 1, 1, 1, seed=8)
        speaker_of = {r.id: r.speaker_id for r in manifest.records}
        for split in (a, c):
            by_part = {}
            for uid, part in split.mapping.items():
                by_part.setdefault(part, set()).add(speaker_of[uid])
            sets = list(by_part.values())
            for i in range(len(sets)):
                for j in range(i + 1, len(sets)):
                    assert not sets[i] & sets[j]


class TestLoso:
    def test_five_sessions_five_folds_exhaustive_test(self):
        manifest = make_manifest(n_speakers=10, per_speaker=5, n_sessions=5)
        folds = loso_folds(manifest)
        assert len(folds) == 5
        test_ids = []
        for fold in folds:
            test_ids.extend(fold.ids_in("test"))
        assert sorted(test_ids) == sorted(manifest.ids)
        assert len(test_ids) == len(set(test_ids))

    def test_three_sessions_minimum(self):
        manifest = make_manifest(n_speakers=6, per_speaker=3, n_sessions=3)
        folds = loso_folds(manifest)
        assert len(folds) == 3
        session_of = {r.id: r.session_id for r in manifest.records}
        for fold in folds:
            train_sessions = {session_of[uid] for uid in fold.ids_in("train")}
            assert len(train_sessions) == 1

    def test_wrap_rule_for_middle_session(self):
        # 5 sessions s1..s5; fold with test=s3 must use val=s4, train={s1,s2,s5}
        manifest = make_manifest(n_speakers=10, per_speaker=5, n_sessions=5)
        session_of = {r.id: r.session_id for r in manifest.records}
        fold = loso_folds(manifest)[2]
        assert {session_of[u] for u in fold.ids_in("test")} == {"s3"}
        assert {session_of[u] for u in fold.ids_in("val")} == {"s4"}
        assert {session_of[u] for u in fold.ids_in("train")} == {"s1", "s2", "s5"}

    def test_last_fold_wraps_to_first_session(self):
        manifest = make_manifest(n_speakers=10, per_speaker=5, n_sessions=5)
        session_of = {r.id: r.session_id for r in manifest.records}
        fold = loso_folds(manifest)[4]
        assert {session_of[u] for u in fold.ids_in("test")} == {"s5"}
        assert {session_of[u] for u in fold.ids_in("val")} == {"s1"}

    def test_missing_session_id_names_record(self):
        manifest = make_manifest(n_speakers=4, per_speaker=2)
        with pytest.raises(SplitError, match="utt00000"):
            loso_folds(manifest)


class TestProvidedPartitions:
    def write_partitions(self, tmp_path, pairs):
        path = tmp_path / "partitions.tsv"
        path.write_text("".join(f"{u}\t{t}\n" for u, t in pairs), encoding="utf-8")
        return path

    def small_manifest(self, ids):
        label_set = LabelSet.from_codes(["A", "H"])
        records = tuple(
            UtteranceRecord(id=u, speaker_id="spk0",
                            label_code="AH"[i % 2], duration_s=1.0)
            for i, u in enumerate(ids))
        return DatasetManifest(name="m", label_set=label_set, records=records)

    def test_tag_mapping(self, tmp_path):
        manifest = self.small_manifest(["u1", "u2", "u3", "u4"])
        path = self.write_partitions(tmp_path, [
            ("u1", "train"), ("u2", "dev"), ("u3", "test1"), ("u4", "test2")])
        split = load_provided_partitions(manifest, path)
        assert split.mapping == {"u1": "train", "u2": "val",
                                 "u3": "test", "u4": "test"}

    def test_missing_id_named(self, tmp_path):
        manifest = self.small_manifest(["u1", "u2", "u3", "u4"])
        path = self.write_partitions(tmp_path, [
            ("u1", "train"), ("u2", "dev"), ("u3", "test1")])
        with pytest.raises(SplitError, match="u4"):
            load_provided_partitions(manifest, path)

    def test_partition_counts_merge_tests(self, tmp_path):
        # 100 ids split 60/15/15/10 -> 60 train / 15 val / 25 test
        ids = [f"u{i:03d}" for i in range(100)]
        tags = ["train"] * 60 + ["dev"] * 15 + ["test1"] * 15 + ["test2"] * 10
        manifest = self.small_manifest(ids)
        path = self.write_partitions(tmp_path, list(zip(ids, tags)))
        split = load_provided_partitions(manifest, path)
        assert partition_sizes(split) == {"train": 60, "val": 15, "test": 25}

    def test_unknown_tag_rejected(self, tmp_path):
        manifest = self.small_manifest(["u1", "u2"])
        path = self.write_partitions(tmp_path, [("u1", "train"), ("u2", "validate")])
        with pytest.raises(ManifestError, match="validate"):
            load_provided_partitions(manifest, path)


class TestManifestIO:
    def test_round_trip(self, tmp_path):
        manifest = make_manifest(n_speakers=3, per_speaker=2, n_sessions=2)
        path = tmp_path / "manifest.json"
        save_manifest(manifest, path)
        assert load_manifest(path) == manifest

    def test_duplicate_ids_rejected(self):
        label_set = LabelSet.from_codes(["A", "H"])
        rec = UtteranceRecord(id="u1", speaker_id="s", label_code="A",
                              duration_s=1.0)
        with pytest.raises(ManifestError, match="duplicate"):
            DatasetManifest(name="m", label_set=label_set, records=(rec, rec))

    def test_unknown_label_rejected(self):
        label_set = LabelSet.from_codes(["A", "H"])
        rec = UtteranceRecord(id="u1", speaker_id="s", label_code="S",
                              duration_s=1.0)
        with pytest.raises(ManifestError, match="'S'"):
            DatasetManifest(name="m", label_set=label_set, records=(rec,))

    def test_split_round_trip(self, tmp_path):
        manifest = make_manifest(n_speakers=3, per_speaker=2)
        split = speaker_disjoint_split(manifest, 1, 1, 1, seed=0)
        path = tmp_path / "split.json"
        save_split(split, path)
        assert load_split(path) == split
