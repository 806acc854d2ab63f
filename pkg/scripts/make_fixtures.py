#!/usr/bin/env python3
"""Regenerate the committed fixture files under src/equivlab/fixtures/.

Run from the repository root after any intentional convention change; the
test suite compares committed fixtures against regenerated ones, so stale
fixtures fail loudly."""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from equivlab.exterior import golden_tables
from equivlab.localmodel import GAP_CONSTANT
from equivlab.oracle import generate_fixture_tables

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "src/equivlab/fixtures"


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    tables = golden_tables()
    tables["schema"] = ("matrices are rows of entries [a, b, c, d] meaning "
                        "(a + b i) + (c + d i) sqrt(2), fractions as strings; "
                        "basis rows are [anti, holo, fiber]")
    (FIXTURES / "clifford_tables_n1.json").write_text(
        json.dumps(tables, indent=1, sort_keys=True) + "\n")
    gap = {"schema_version": 1, "A": GAP_CONSTANT,
           "provenance": ("first nonzero eigenvalue over T of the fiber "
                          "model: scalar oscillator levels 2T(K+m) shifted "
                          "by the fiber endomorphism eigenvalues 2Tj, "
                          "j in [-m, m]; minimum positive value 2T")}
    (FIXTURES / "oscillator_gap.json").write_text(
        json.dumps(gap, indent=1, sort_keys=True) + "\n")
    (FIXTURES / "hodge_tables.json").write_text(
        json.dumps(generate_fixture_tables(), indent=1, sort_keys=True) + "\n")
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
