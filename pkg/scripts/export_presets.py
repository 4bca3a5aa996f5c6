#!/usr/bin/env python3
"""Print the shipped emotion presets as key-value text.

Usage: python3 scripts/export_presets.py [outfile]
"""
import sys

from emovis.pipeline import presets_text


def main() -> int:
    text = presets_text()
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
