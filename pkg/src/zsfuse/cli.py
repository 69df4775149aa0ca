"""zsfuse command-line interface.

Exit codes: 0 success, 1 usage error, 2 data/validation error.
Every artifact-producing command embeds the resolved config and a content
hash of each input file into its report for reproducibility.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import fusion, grid, manifest as mf, metrics, report, synth
from .embedio import EmbeddingTable, read_embeddings, write_embeddings
from .errors import ZsfuseError
from .labels import LabelSet, load_lexicon
from .prompts import build_prompt_matrix
from .training import TrainConfig, train
from .zeroshot import ensemble, score_matrix


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def input_hashes(paths) -> dict:
    return {str(p): sha256_file(p) for p in paths if p is not None}


def _label_set(args) -> LabelSet:
    lexicon = load_lexicon(args.lexicon) if getattr(args, "lexicon", None) else None
    return LabelSet.from_codes(args.classes.split(","), lexicon=lexicon)


def _load_train_config(path) -> TrainConfig:
    if path is None:
        return TrainConfig()
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if "seeds" in data:
        data["seeds"] = tuple(data["seeds"])
    return TrainConfig(**data)


# --- subcommands ---

def cmd_prompts(args) -> int:
    matrix = build_prompt_matrix(_label_set(args), args.t)
    for spec in matrix.flat():
        print(f"{spec.prompt_id}\t{spec.text}")
    return 0


def cmd_split(args) -> int:
    manifest = mf.load_manifest(args.manifest)
    if args.method == "speaker":
        split = mf.speaker_disjoint_split(manifest, args.train_speakers,
                                          args.val_speakers, args.test_speakers,
                                          seed=args.seed)
        mf.save_split(split, args.out)
    elif args.method == "provided":
        split = mf.load_provided_partitions(manifest, args.partitions)
        mf.save_split(split, args.out)
    else:  # loso: one file per fold
        folds = mf.loso_folds(manifest)
        os.makedirs(args.out, exist_ok=True)
        for fold in folds:
            mf.save_split(fold, os.path.join(args.out, f"fold_{fold.fold_index}.json"))
    return 0


def cmd_synth(args) -> int:
    config = synth.SyntheticWorldConfig(
        n_classes=args.n_classes, dim_fm=args.dim_fm, dim_alm=args.dim_alm,
        cluster_separation=args.separation,
        zero_shot_informativeness=args.informativeness,
        n_per_class=args.n_per_class, seed=args.seed)
    manifest, fm_table, audio_tables, text_table = synth.synth_world(config)
    os.makedirs(args.out_dir, exist_ok=True)
    mf.save_manifest(manifest, os.path.join(args.out_dir, "manifest.json"))
    write_embeddings(fm_table, os.path.join(args.out_dir, "fm.zsem"))
    for a, table in audio_tables.items():
        write_embeddings(table, os.path.join(args.out_dir, f"alm_audio_a{a}.zsem"))
    write_embeddings(text_table, os.path.join(args.out_dir, "alm_text.zsem"))
    with open(os.path.join(args.out_dir, "synth_config.json"), "w",
              encoding="utf-8") as f:
        json.dump(asdict(config), f, indent=2, sort_keys=True)
        f.write("\n")
    return 0


def cmd_score(args) -> int:
    audio_table = read_embeddings(args.audio_emb)
    text_table = read_embeddings(args.text_emb)
    label_set = _label_set(args)
    matrix = build_prompt_matrix(label_set, args.t)
    suffix = f"@a{args.a}"
    out = EmbeddingTable(dim=label_set.E, encoder_id="zsfuse-scores")
    for key in sorted(audio_table.entries):
        if key.endswith(suffix):
            uid = key[:-len(suffix)]
        elif args.a == 1 and "@a" not in key:
            uid = key
        else:
            continue
        sm = score_matrix(audio_table.get(key), matrix, text_table, utterance_id=uid)
        out.add(uid, ensemble(sm).s.astype(np.float32))
    write_embeddings(out, args.out)
    return 0


def cmd_fuse(args) -> int:
    fm_table = read_embeddings(args.fm_emb)
    if args.scores is None:
        out = EmbeddingTable(dim=fm_table.dim, encoder_id="zsfuse-fused")
        for uid in sorted(fm_table.entries):
            out.add(uid, fusion.fuse_none(fm_table.get(uid), utterance_id=uid).z
                    .astype(np.float32))
    else:
        score_table = read_embeddings(args.scores)
        out = EmbeddingTable(dim=fm_table.dim + score_table.dim,
                             encoder_id="zsfuse-fused")
        for uid in sorted(fm_table.entries):
            if uid not in score_table.entries:
                raise ZsfuseError(f"no score vector for utterance {uid!r}")
            fused = fusion.fuse(fm_table.get(uid), score_table.get(uid),
                                epsilon=args.epsilon, utterance_id=uid)
            out.add(uid, fused.z.astype(np.float32))
    write_embeddings(out, args.out)
    return 0


def cmd_train(args) -> int:
    manifest = mf.load_manifest(args.manifest)
    split = mf.load_split(args.split)
    table = read_embeddings(args.features)
    config = _load_train_config(args.config)
    labels = manifest.labels_by_id()
    features = {
        uid: fusion.FusedVector(utterance_id=uid,
                                z=np.asarray(vec, dtype=np.float64),
                                D=table.dim, E=0)
        for uid, vec in table.entries.items()
    }
    result = train(features, labels, split, config, manifest.label_set.E)
    doc = {
        "config": asdict(config),
        "inputs": input_hashes([args.features, args.manifest, args.split,
                                args.config]),
        "records": [asdict(r) for r in result.records],
        "test_uar": {"per_seed": result.test_uar.per_seed,
                     "mean": result.test_uar.mean, "std": result.test_uar.std},
    }
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"test UAR {result.test_uar}")
    return 0


def cmd_eval(args) -> int:
    manifest = mf.load_manifest(args.manifest)
    labels = manifest.labels_by_id()
    preds = {}
    with open(args.preds, "r", encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            uid, code = line.split("\t")
            preds[uid] = manifest.label_set.index_of(code)
    missing = [uid for uid in labels if uid not in preds]
    if missing:
        raise ZsfuseError(f"no prediction for ids: {sorted(missing)[:10]}")
    ids = sorted(labels)
    y_true = [labels[u] for u in ids]
    y_pred = [preds[u] for u in ids]
    C = manifest.label_set.E
    cm = metrics.confusion_matrix(y_pred, y_true, C)
    value = metrics.uar(y_pred, y_true, C, strict=args.strict)
    print(f"UAR\t{value:.6f}")
    for j, label in enumerate(manifest.label_set.labels):
        support = cm.counts[j].sum()
        recall = cm.counts[j, j] / support if support else float("nan")
        print(f"recall\t{label.code}\t{recall:.6f}")
    header = "\t".join(manifest.label_set.codes)
    print(f"confusion\ttrue\\pred\t{header}")
    for j, label in enumerate(manifest.label_set.labels):
        row = "\t".join(str(int(c)) for c in cm.counts[j])
        print(f"confusion\t{label.code}\t{row}")
    return 0


def _load_grid_inputs(args):
    manifest = mf.load_manifest(args.manifest)
    text_table = read_embeddings(args.text_emb)
    audio_tables = {}
    paths = {}
    for a in grid.GRID_A:
        path = args.alm_audio_pattern.format(a=a)
        audio_tables[a] = read_embeddings(path)
        paths[a] = path
    return manifest, text_table, audio_tables, paths


def cmd_grid(args) -> int:
    manifest, text_table, audio_tables, audio_paths = _load_grid_inputs(args)
    split = mf.load_split(args.split)
    fm_table = read_embeddings(args.fm_emb)
    config = _load_train_config(args.config)
    cells, summary, _ = grid.run_grid(manifest, split, fm_table, audio_tables,
                                      text_table, manifest.label_set, config)
    os.makedirs(args.out_dir, exist_ok=True)
    with open(os.path.join(args.out_dir, "cells.csv"), "w", encoding="utf-8") as f:
        f.write(grid.cells_to_csv(cells))
    row = report.summary_row(args.system, manifest.name, summary)
    table = report.render_summary_table([row])
    with open(os.path.join(args.out_dir, "summary.txt"), "w", encoding="utf-8") as f:
        f.write(table)
    doc = {
        "config": asdict(config),
        "inputs": input_hashes([args.manifest, args.split, args.fm_emb,
                                args.text_emb, args.config]
                               + list(audio_paths.values())),
        "summary": row,
        "cells": {f"a{a}×t{t}": {"mean": r.mean, "std": r.std,
                                 "per_seed": r.per_seed}
                  for (a, t), r in sorted(cells.items())},
    }
    with open(os.path.join(args.out_dir, "report.json"), "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    print(table, end="")
    return 0


def cmd_zs_grid(args) -> int:
    manifest, text_table, audio_tables, _ = _load_grid_inputs(args)
    cells = grid.run_zero_shot_grid(manifest, audio_tables, text_table,
                                    manifest.label_set)
    csv = grid.zero_shot_cells_to_csv(cells)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(csv)
    print(csv, end="")
    return 0


def cmd_report(args) -> int:
    print(report.render_table1_fixture())
    print(report.render_table2_fixture())
    if args.runs:
        for entry in sorted(os.listdir(args.runs)):
            path = os.path.join(args.runs, entry, "summary.txt")
            if os.path.isfile(path):
                print(f"[run] {entry}")
                with open(path, "r", encoding="utf-8") as f:
                    print(f.read())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zsfuse",
                     description="Zero-shot late-fusion emotion scoring engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prompts", help="render the prompt matrix as TSV")
    p.add_argument("--classes", required=True, help="comma-separated class codes")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--lexicon", help="JSON word-form overrides")
    p.set_defaults(func=cmd_prompts)

    p = sub.add_parser("split", help="build a split assignment")
    p.add_argument("--manifest", required=True)
    p.add_argument("--method", choices=["speaker", "loso", "provided"],
                   required=True)
    p.add_argument("--train-speakers", type=int, default=16)
    p.add_argument("--val-speakers", type=int, default=4)
    p.add_argument("--test-speakers", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--partitions", help="id<TAB>tag file for --method provided")
    p.add_argument("--out", required=True,
                   help="output file (or directory for loso)")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("synth", help="generate a synthetic dataset + embeddings")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n-classes", type=int, default=4)
    p.add_argument("--dim-fm", type=int, default=16)
    p.add_argument("--dim-alm", type=int, default=16)
    p.add_argument("--separation", type=float, default=2.0)
    p.add_argument("--informativeness", type=float, default=0.9)
    p.add_argument("--n-per-class", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("score", help="zero-shot ensemble scores per utterance")
    p.add_argument("--audio-emb", required=True)
    p.add_argument("--text-emb", required=True)
    p.add_argument("--classes", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("fuse", help="fuse FM features with zero-shot scores")
    p.add_argument("--fm-emb", required=True)
    p.add_argument("--scores", help="omit for the no-ALM baseline")
    p.add_argument("--epsilon", type=float, default=fusion.DEFAULT_EPSILON)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("train", help="train the classification head")
    p.add_argument("--features", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--config", help="JSON TrainConfig overrides")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a prediction file")
    p.add_argument("--preds", required=True, help="TSV id<TAB>class_code")
    p.add_argument("--manifest", required=True)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="run the 4x4 amplification grid with training")
    p.add_argument("--manifest", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--fm-emb", required=True)
    p.add_argument("--alm-audio-pattern", required=True,
                   help="path template with {a}, e.g. out/alm_audio_a{a}.zsem")
    p.add_argument("--text-emb", required=True)
    p.add_argument("--config")
    p.add_argument("--system", default="synth")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("zs-grid", help="zero-shot UAR heatmap over the grid")
    p.add_argument("--manifest", required=True)
    p.add_argument("--alm-audio-pattern", required=True)
    p.add_argument("--text-emb", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_zs_grid)

    p = sub.add_parser("report", help="render reference tables and run summaries")
    p.add_argument("--runs", help="directory of grid run outputs")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 1
    try:
        return args.func(args)
    except ZsfuseError as exc:
        sys.stderr.write(f"zsfuse: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"zsfuse: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
