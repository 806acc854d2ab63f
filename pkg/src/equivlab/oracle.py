"""Analytic ground truth: Hodge tables of the desk models, their zero-set
tables, Kunneth combination, and the localization prediction that the
deformed kernel dimensions per degree equal the cohomology of the field's
zero set.

Closed-form entries are never trusted alone: the committed fixture is
cross-validated in the test suite against exact degree-(p,q) kernel counts
of the undeformed truncated complex before anything downstream consumes it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .deformed import CohomologyTable
from .geometry.base import ModelError, ModelSpec


@dataclass(frozen=True)
class OracleTable:
    """Hodge numbers h^{p,q} of one model, as a (p,q) -> dim map."""

    n: int
    h: tuple  # tuple of ((p, q), dim)

    @classmethod
    def make(cls, n: int, entries: dict) -> "OracleTable":
        for (p, q), v in entries.items():
            if not (0 <= p <= n and 0 <= q <= n) and v:
                raise ValueError(f"entry outside bidegree square: {(p, q)}")
        return cls(n, tuple(sorted((pq, v) for pq, v in entries.items() if v)))

    def entry(self, p: int, q: int) -> int:
        return dict(self.h).get((p, q), 0)

    def per_degree(self) -> CohomologyTable:
        dims: dict[int, int] = {r: 0 for r in range(-self.n, self.n + 1)}
        for (p, q), v in self.h:
            dims[q - p] += v
        return CohomologyTable(dims=dims, source="oracle")


POINT_TABLE = OracleTable.make(0, {(0, 0): 1})


def kunneth(left: OracleTable, right: OracleTable) -> OracleTable:
    """h^{p,q} of a product as the bidegree convolution of the factors."""
    n = left.n + right.n
    out: dict[tuple[int, int], int] = {}
    for (a, b), u in left.h:
        for (c, d), v in right.h:
            key = (a + c, b + d)
            out[key] = out.get(key, 0) + u * v
    return OracleTable.make(n, out)


def torus_table() -> OracleTable:
    """Trivially twisted flat torus: every corner of the square is one."""
    return OracleTable.make(1, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})


def cp1_table(k: int) -> OracleTable:
    """Twist-k line bundle on the projective line: holomorphic sections are
    polynomials of degree <= k, the (1, q) row is the twist shifted by the
    canonical bundle, and duality fills the rest."""
    if k < 0:
        raise ModelError("negative twists are not modelled")
    h00 = k + 1
    h01 = 0
    h10 = max(k - 1, 0)
    h11 = max(1 - k, 0)
    return OracleTable.make(1, {(0, 0): h00, (0, 1): h01,
                                (1, 0): h10, (1, 1): h11})


def model_hodge_table(spec: ModelSpec) -> OracleTable:
    """Closed-form undeformed cohomology table of a supported model."""
    if spec.kind == "torus":
        return torus_table()
    if spec.kind == "cp1":
        return cp1_table(spec.k)
    if spec.kind == "product":
        return kunneth(model_hodge_table(spec.left),
                       model_hodge_table(spec.right))
    raise ModelError(f"no oracle table for model kind {spec.kind!r}")


@dataclass(frozen=True)
class ZeroSetDescriptor:
    """Connected components of the field's zero set: complex dimension,
    restricted fiber rank, and the component's own cohomology table."""

    components: tuple  # tuple of (dim, rank, OracleTable)

    def total_per_degree(self, ambient_n: int) -> CohomologyTable:
        dims = {r: 0 for r in range(-ambient_n, ambient_n + 1)}
        for _, rank, table in self.components:
            for r, v in table.per_degree().dims.items():
                dims[r] += rank * v
        return CohomologyTable(dims=dims, source="oracle")


def zero_set(spec: ModelSpec) -> ZeroSetDescriptor:
    if spec.kind == "torus":
        return ZeroSetDescriptor(components=())       # constant field: empty
    if spec.kind == "cp1":
        # linear field z d/dz: two transversal points (origin and infinity)
        return ZeroSetDescriptor(components=((0, 1, POINT_TABLE),
                                             (0, 1, POINT_TABLE)))
    if spec.kind == "product":
        # two disjoint copies of the torus factor
        return ZeroSetDescriptor(components=((1, 1, torus_table()),
                                             (1, 1, torus_table())))
    raise ModelError(f"no zero set descriptor for model kind {spec.kind!r}")


def localization_prediction(spec: ModelSpec) -> CohomologyTable:
    """Per-degree dimensions of the deformed cohomology for T != 0: the
    zero-set cohomology, summed over components (all-zero when the field
    never vanishes)."""
    spec.validate()
    return zero_set(spec).total_per_degree(spec.n)


# ---------------------------------------------------------------------------
# Fixture IO
# ---------------------------------------------------------------------------

def fixture_tables() -> dict:
    """The committed closed-form tables with per-entry provenance."""
    text = resources.files("equivlab.fixtures").joinpath(
        "hodge_tables.json").read_text()
    return json.loads(text)


def generate_fixture_tables() -> dict:
    out = {"schema_version": 1,
           "provenance": ("closed-form counts cross-validated against exact "
                          "degree-(p,q) kernel dimensions of the undeformed "
                          "truncated complex at cutoff 8; see tests"),
           "torus": {f"{p},{q}": torus_table().entry(p, q)
                     for p in (0, 1) for q in (0, 1)},
           "cp1": {}}
    for k in range(4):
        out["cp1"][str(k)] = {f"{p},{q}": cp1_table(k).entry(p, q)
                              for p in (0, 1) for q in (0, 1)}
    return out
