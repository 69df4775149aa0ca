"""zsfuse-export: run a frozen encoder over a manifest or prompt TSV."""

from __future__ import annotations

import argparse
import sys

from .export import ExportJob, run_job
from .zsem import ExportError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zsfuse-export",
        description="Export frozen encoder embeddings in the engine's format")
    parser.add_argument("--kind", choices=["fm", "alm-audio", "alm-text"],
                        required=True)
    parser.add_argument("--ckpt", required=True,
                        help="checkpoint id, short name, or dummy:<dim>")
    parser.add_argument("--manifest", help="manifest JSON (fm / alm-audio)")
    parser.add_argument("--prompts", help="prompt TSV (alm-text)")
    parser.add_argument("--a", type=int, default=1,
                        help="audio-repeat factor (alm-audio)")
    parser.add_argument("--cap-seconds", type=float,
                        help="truncate tiled audio to this many seconds")
    parser.add_argument("--pool", choices=["mean", "max"], default="mean",
                        help="frame pooling for fm exports")
    parser.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = ExportJob(kind=args.kind, checkpoint=args.ckpt, out_path=args.out,
                    manifest_path=args.manifest, prompts_path=args.prompts,
                    a=args.a, cap_seconds=args.cap_seconds, pool=args.pool)
    try:
        run_job(job)
    except (ExportError, OSError) as exc:
        sys.stderr.write(f"zsfuse-export: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
