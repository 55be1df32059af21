#!/usr/bin/env python3
"""Rebuild the example gallery: verification report + OBJ mesh per catalog entry.

    python3 scripts/gallery.py [outdir]
"""
import sys

from zmcrot.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "gallery_out"
    raise SystemExit(main(["gallery", "--out", out]))
