"""Operator-facing command line over the rendering, inversion and study tools.

Exit codes: 0 success, 1 runtime/I-O error (message on stderr), 2 bad
arguments.  Results go to stdout; diagnostics go to stderr.  Every command is
deterministic given identical inputs, flags and --seed.
"""
from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from dataclasses import fields as dc_fields
from pathlib import Path

from .core import (
    ControlVector,
    Emotion,
    EmovisError,
    PipelineConfig,
    VAVector,
)
from . import imgio, pipeline, stats
from .inverse_isp import InverseConfig, linearize


def _parse_alphas(text: str, parser: argparse.ArgumentParser) -> ControlVector:
    parts = text.split(",")
    if len(parts) != 6:
        parser.error(f"--alphas needs 6 comma-separated values (S,YB,RG,LC,B,P), got {len(parts)}")
    try:
        return ControlVector.from_tuple(float(p) for p in parts)
    except ValueError as exc:
        parser.error(f"bad --alphas: {exc}")


_CONFIG_FIELD_TYPES = {f.name: f.type for f in dc_fields(PipelineConfig)}


def load_config(path) -> PipelineConfig:
    """Plain key=value config matching PipelineConfig field names.

    Unknown keys are an error, not silently ignored.
    """
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise EmovisError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_FIELD_TYPES:
            raise EmovisError(f"{path}:{lineno}: unknown config key {key!r}")
        if key == "clahe_tiles":
            overrides[key] = tuple(int(v) for v in value.split(","))
        elif key == "roi":
            overrides[key] = tuple(int(v) for v in value.split(","))
        elif key == "clahe_enabled":
            overrides[key] = value.lower() in ("1", "true", "yes")
        elif key in ("gf_radius",):
            overrides[key] = int(value)
        else:
            overrides[key] = float(value)
    return PipelineConfig(**overrides)


def _cmd_render(args, parser) -> int:
    if args.emotion is not None:
        vector = pipeline.preset_for_emotion(Emotion(args.emotion))
    else:
        vector = _parse_alphas(args.alphas, parser)
    cfg = load_config(args.config) if args.config else PipelineConfig()
    img = imgio.load_image(args.input)
    out = pipeline.render_image(img, vector, cfg)
    imgio.save_image(out, args.output, bit_depth=args.bit_depth)
    return 0


def _cmd_invert(args, parser) -> int:
    if args.gamma is not None:
        cfg = InverseConfig(transfer="gamma", gamma=args.gamma)
    else:
        cfg = InverseConfig(transfer="srgb")
    import cv2
    import numpy as np

    raw = cv2.imread(str(args.input), cv2.IMREAD_UNCHANGED)
    if raw is None or raw.dtype != np.uint8 or raw.ndim != 3:
        raise EmovisError(f"{args.input} is not an 8-bit RGB image")
    rgb = cv2.cvtColor(raw[..., :3], cv2.COLOR_BGR2RGB)
    imgio.save_image(linearize(rgb, cfg), args.output, bit_depth=16)
    return 0


def _cmd_analyze(args, parser) -> int:
    records = stats.read_calibration_records(args.records)
    if not records:
        raise EmovisError(f"no records in {args.records}")
    try:
        results = [stats.rm_anova(records, name) for name in ControlVector.ORDER]
        print(stats.format_anova_table(results))
    except stats.InsufficientDataError as exc:
        print(f"ANOVA skipped: {exc}", file=sys.stderr)
    print()
    print(stats.format_preset_table(stats.calibrate_presets(records)))
    return 0


def _cmd_abtest_make_pairs(args, parser) -> int:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    wrong_pool = [Emotion.HAPPY, Emotion.ANGRY, Emotion.SAD]
    manifest = []
    with open(args.clips, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        clip_id = row["clip_id"]
        va = VAVector(valence=float(row["valence"]), arousal=float(row["arousal"]))
        try:
            correct = pipeline.quadrant_from_va(va)
        except EmovisError as exc:
            raise EmovisError(f"clip {clip_id!r}: {exc}") from exc
        rng = random.Random(f"{args.seed}:{clip_id}")
        wrong = rng.choice([e for e in wrong_pool if e != correct])
        img = imgio.load_image(row["image"])
        neutral, emotion, desc = pipeline.render_ab_pair(
            img, correct, wrong, cfg, seed=rng.random(), image_id=clip_id)
        left, right = ((emotion, neutral) if desc.emotion_side == "left"
                       else (neutral, emotion))
        imgio.save_image(left, out_dir / f"{clip_id}_left.png", bit_depth=8)
        imgio.save_image(right, out_dir / f"{clip_id}_right.png", bit_depth=8)
        manifest.append(desc.as_dict() | {"clip_id": clip_id})
    with open(out_dir / "manifest.jsonl", "w") as fh:
        for entry in manifest:
            fh.write(json.dumps(entry) + "\n")
    print(f"wrote {len(manifest)} pairs to {out_dir}")
    return 0


def _cmd_abtest_tally(args, parser) -> int:
    records = stats.read_ab_records(args.records)
    if not records:
        raise EmovisError(f"no records in {args.records}")
    print(stats.format_ab_table(stats.ab_tally(records)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emovis")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render an image with an emotion or explicit alphas")
    p_render.add_argument("--input", required=True)
    p_render.add_argument("--output", required=True)
    group = p_render.add_mutually_exclusive_group(required=True)
    group.add_argument("--emotion", choices=[e.value for e in Emotion])
    group.add_argument("--alphas", help="six values: S,YB,RG,LC,B,P")
    p_render.add_argument("--config")
    p_render.add_argument("--bit-depth", type=int, choices=(8, 16), default=16)
    p_render.set_defaults(func=_cmd_render)

    p_invert = sub.add_parser("invert", help="linearize an 8-bit sRGB image")
    p_invert.add_argument("--input", required=True)
    p_invert.add_argument("--output", required=True)
    tgroup = p_invert.add_mutually_exclusive_group()
    tgroup.add_argument("--gamma", type=float)
    tgroup.add_argument("--srgb", action="store_true")
    p_invert.set_defaults(func=_cmd_invert)

    p_an = sub.add_parser("analyze", help="ANOVA + preset table from calibration records")
    p_an.add_argument("--records", required=True)
    p_an.set_defaults(func=_cmd_analyze)

    p_ab = sub.add_parser("abtest", help="A/B pair generation and tallying")
    ab_sub = p_ab.add_subparsers(dest="ab_command", required=True)
    p_mk = ab_sub.add_parser("make-pairs")
    p_mk.add_argument("--clips", required=True,
                      help="CSV with columns clip_id,image,valence,arousal")
    p_mk.add_argument("--out", required=True)
    p_mk.add_argument("--seed", type=int, default=0)
    p_mk.add_argument("--config")
    p_mk.set_defaults(func=_cmd_abtest_make_pairs)
    p_tl = ab_sub.add_parser("tally")
    p_tl.add_argument("--records", required=True)
    p_tl.set_defaults(func=_cmd_abtest_tally)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (EmovisError, imgio.ImageFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
