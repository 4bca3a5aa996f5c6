#!/usr/bin/env python3
"""Render every emotion preset of one input image side by side.

Usage: python3 scripts/render_demo.py INPUT OUT_DIR

Writes one 8-bit PNG per emotion into OUT_DIR, named <stem>_<emotion>.png.
"""
import sys
from pathlib import Path

from emovis import imgio, pipeline
from emovis.core import Emotion


def main(argv) -> int:
    if len(argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    src = Path(argv[1])
    out_dir = Path(argv[2])
    out_dir.mkdir(parents=True, exist_ok=True)
    img = imgio.load_image(src)
    for emotion in Emotion:
        vec = pipeline.preset_for_emotion(emotion)
        out = pipeline.render_image(img, vec)
        dst = out_dir / f"{src.stem}_{emotion.value}.png"
        imgio.save_image(out, dst, bit_depth=8)
        print(dst)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
