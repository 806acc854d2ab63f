#!/usr/bin/env python3
"""Fiber-model experiment: Galerkin spectra of the oscillator operator,
the kernel state overlap, the T-linear spectral gap, and the normalization
integral scaling alpha * T^m -> 2^{-m}."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from equivlab.cli import main

if __name__ == "__main__":
    sys.exit(main(["oscillator", "--m", "1,2", "--T", "1,10",
                   "--cutoff", "12,4", "-o", "runs/oscillator", "-v"]))
