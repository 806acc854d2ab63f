#!/usr/bin/env python3
"""Run the committed projective-line localization experiment: kernel counts
per graded degree must match the zero-set cohomology (two points) for every
twist and every deformation strength in the grid."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from equivlab.cli import main

ROOT = pathlib.Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    sys.exit(main(["run", str(ROOT / "configs/localization_cp1.json"),
                   "-o", "runs/localization_cp1", "-v"]))
