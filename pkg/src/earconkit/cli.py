"""Command-line entry point.

Subcommands mirror the release scripts: corpus generation, the two
baselines, and the spectrogram figure. Every subcommand is idempotent
and refuses to clobber existing outputs unless --force is given.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import baselines, corpus, figures


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _refuse_overwrite(paths: list[Path], force: bool) -> str | None:
    existing = [str(p) for p in paths if p.exists()]
    if existing and not force:
        return f"refusing to overwrite {', '.join(existing)} (pass --force)"
    return None


def cmd_generate(args) -> int:
    out_dir = Path(args.outdir)
    meta_path = Path(args.meta)
    if out_dir.exists() and any(out_dir.iterdir()) and not args.force:
        return _fail(f"output directory {out_dir} is not empty (pass --force)")
    blocked = _refuse_overwrite([meta_path], args.force)
    if blocked:
        return _fail(blocked)

    grid = corpus.GridDefinition()
    if args.target_n > grid.size():
        return _fail(
            f"--target_n {args.target_n} exceeds the parameter grid size "
            f"({grid.size()} canonical combinations)"
        )
    try:
        manifest = corpus.build_corpus(grid, args.target_n, args.seed, out_dir, meta_path)
    except corpus.CorpusBuildError as err:
        return _fail(str(err))

    counts = manifest.split_counts
    print(f"generated {manifest.target_n} clips into {out_dir}")
    print(
        f"splits: train={counts['train']} val={counts['val']} test={counts['test']}"
    )
    print(f"peak-capped clips: {manifest.peak_capped_clips}")
    print(f"metadata: {meta_path}")
    print(f"manifest: {meta_path.parent / 'manifest.json'}")
    return 0


def _load_corpus(args) -> tuple[list[dict], Path]:
    audio_dir = Path(args.audio_dir)
    if not audio_dir.is_dir():
        raise FileNotFoundError(f"audio directory {audio_dir} does not exist")
    rows = corpus.read_metadata(args.meta)
    if not rows:
        raise ValueError(f"metadata file {args.meta} has no rows")
    return rows, audio_dir


def cmd_classify(args) -> int:
    blocked = _refuse_overwrite([Path(args.report)], args.force)
    if blocked:
        return _fail(blocked)
    try:
        rows, audio_dir = _load_corpus(args)
        report = baselines.classification_report(rows, audio_dir)
    except (FileNotFoundError, ValueError, RuntimeError) as err:
        return _fail(str(err))
    baselines.write_report(report, args.report)
    for split in ("val", "test"):
        metrics = report["splits"][split]
        print(f"{split} accuracy: {metrics['accuracy']:.4f} (n={metrics['n']})")
    print(f"report: {args.report}")
    return 0


def cmd_f0(args) -> int:
    blocked = _refuse_overwrite([Path(args.report)], args.force)
    if blocked:
        return _fail(blocked)
    try:
        rows, audio_dir = _load_corpus(args)
        report = baselines.evaluate_f0(rows, audio_dir)
    except (FileNotFoundError, ValueError, RuntimeError) as err:
        return _fail(str(err))
    baselines.write_report(report, args.report)
    print(
        f"single tones: n={report['n']} (unvoiced={report['n_unvoiced']})\n"
        f"MAE: {report['mae_hz']:.2f} Hz\n"
        f"MedAE: {report['medae_hz']:.2f} Hz\n"
        f"within +/-1 semitone: {report['within_semitone_rate']:.1%}"
    )
    print(f"report: {args.report}")
    return 0


def cmd_spectrogram_figure(args) -> int:
    blocked = _refuse_overwrite([Path(args.out)], args.force)
    if blocked:
        return _fail(blocked)
    try:
        rows, audio_dir = _load_corpus(args)
        figures.render_spectrogram_grid(rows, audio_dir, args.out)
    except (FileNotFoundError, ValueError, RuntimeError) as err:
        return _fail(str(err))
    print(f"figure: {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="earconkit",
        description="Deterministic earcon corpus generation, analysis, and baselines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="render the corpus, metadata, and manifest")
    gen.add_argument("--outdir", default="audio", help="WAV output directory")
    gen.add_argument("--meta", default="metadata/metadata.csv", help="metadata CSV path")
    gen.add_argument("--seed", type=int, default=13, help="corpus sampling seed")
    gen.add_argument("--target_n", type=int, default=400, help="number of clips")
    gen.add_argument("--force", action="store_true", help="overwrite existing outputs")
    gen.set_defaults(func=cmd_generate)

    cls = sub.add_parser("classify-waveform", help="waveform-family classification baseline")
    cls.add_argument("--audio_dir", default="audio")
    cls.add_argument("--meta", default="metadata/metadata.csv")
    cls.add_argument("--report", default="reports/classify_waveform.json")
    cls.add_argument("--force", action="store_true")
    cls.set_defaults(func=cmd_classify)

    f0 = sub.add_parser("f0-regression", help="YIN pitch baseline on single tones")
    f0.add_argument("--audio_dir", default="audio")
    f0.add_argument("--meta", default="metadata/metadata.csv")
    f0.add_argument("--report", default="reports/f0_regression.json")
    f0.add_argument("--force", action="store_true")
    f0.set_defaults(func=cmd_f0)

    fig = sub.add_parser(
        "spectrogram-figure", help="log-mel grid image across families and AM settings"
    )
    fig.add_argument("--audio_dir", default="audio")
    fig.add_argument("--meta", default="metadata/metadata.csv")
    fig.add_argument("--out", default="figures/spectrograms.png")
    fig.add_argument("--force", action="store_true")
    fig.set_defaults(func=cmd_spectrogram_figure)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
