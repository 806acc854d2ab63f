"""Product of the projective-line model with a flat torus, field lifted
from the left factor.

Bases are graded tensor products of the factor bases (left labels first).
On the product, the Dolbeault operator is dbar_L (x) 1 + sign (x) dbar_R
with the sign (-1)^{p_L + q_L} of the left form degree, and the lifted field
contracts the left factor only.  Both factor models are orthonormalized
before tensoring, so every product Gram is the identity.

Each pair (left rotation charge, right Fourier mode) spans an exact
invariant sector; the assembled model is the list of those cells.  A merged
single-cell assembly of the same data is available for cross-checks at
small cutoffs.
"""

from __future__ import annotations

import numpy as np

from .base import AssembledModel, FieldSpec, ModelSpec, PQ, SpectralCell
from .cp1 import Cp1Exact, _chunk_dim, assemble_cp1
from .torus import dolbeault_coefficient

_PQS1 = ((0, 0), (1, 0), (0, 1), (1, 1))


def _left_blocks(exact: Cp1Exact, chi: int):
    """Orthonormal float blocks and labels of one left charge sector."""
    dims = {pq: _chunk_dim(exact.blocks[pq], chi) for pq in _PQS1}
    labels = {}
    for pq, d in dims.items():
        if d:
            blk = exact.blocks[pq]
            sl = blk.chunk_slices[chi]
            labels[pq] = blk.labels[sl]
    dbar = {}
    for pq in ((0, 0), (1, 0)):
        if dims[pq] and dims[(pq[0], 1)]:
            dbar[pq] = exact.ortho_chunk(exact.dbar_chunks[pq], pq,
                                         (pq[0], 1), chi)
    iv = {}
    for pq in ((1, 0), (1, 1)):
        if dims[pq] and dims[(0, pq[1])]:
            iv[pq] = exact.ortho_chunk(exact.iv_chunks[pq], pq,
                                       (0, pq[1]), chi)
    return dims, labels, dbar, iv


def _product_cell(name: str, ldims, llabels, ldbar, liv,
                  mu: complex, mode_tag: str) -> SpectralCell:
    """Tensor one left sector with the four right labels of one mode."""
    dims: dict[PQ, int] = {}
    labels: dict[PQ, list[str]] = {}
    parts: dict[PQ, list[tuple[PQ, PQ, int]]] = {}   # (left pq, right pq, offset)
    for lpq in _PQS1:
        d = ldims.get(lpq, 0)
        if not d:
            continue
        for rpq in _PQS1:
            pq = (lpq[0] + rpq[0], lpq[1] + rpq[1])
            off = dims.get(pq, 0)
            parts.setdefault(pq, []).append((lpq, rpq, off))
            dims[pq] = off + d
            labels.setdefault(pq, []).extend(
                f"{lab}*{mode_tag}:p{rpq[0]}q{rpq[1]}" for lab in llabels[lpq])

    def offset_of(pq: PQ, lpq: PQ, rpq: PQ) -> int | None:
        for a, b, off in parts.get(pq, []):
            if (a, b) == (lpq, rpq):
                return off
        return None

    dbar: dict[PQ, np.ndarray] = {}
    iv: dict[PQ, np.ndarray] = {}
    for pq, plist in parts.items():
        tgt_q = (pq[0], pq[1] + 1)
        tgt_p = (pq[0] - 1, pq[1])
        dmat = np.zeros((dims.get(tgt_q, 0), dims[pq]), dtype=complex)
        imat = np.zeros((dims.get(tgt_p, 0), dims[pq]), dtype=complex)
        any_d = any_i = False
        for lpq, rpq, off in plist:
            d = ldims[lpq]
            blk = ldbar.get(lpq)
            if blk is not None and blk.size and rpq in _PQS1:
                t_off = offset_of(tgt_q, (lpq[0], lpq[1] + 1), rpq)
                if t_off is not None:
                    dmat[t_off:t_off + blk.shape[0], off:off + d] += blk
                    any_d = True
            # right factor Dolbeault: mode coefficient, +mu on rq=0 scalars,
            # -mu on the right dz frame, with the left-degree parity sign
            if rpq[1] == 0 and mu != 0:
                coeff = mu if rpq[0] == 0 else -mu
                sign = -1.0 if (lpq[0] + lpq[1]) % 2 else 1.0
                t_off = offset_of(tgt_q, lpq, (rpq[0], 1))
                if t_off is not None:
                    dmat[t_off:t_off + d, off:off + d] += (
                        sign * coeff * np.eye(d))
                    any_d = True
            blk = liv.get(lpq)
            if blk is not None and blk.size:
                t_off = offset_of(tgt_p, (lpq[0] - 1, lpq[1]), rpq)
                if t_off is not None:
                    imat[t_off:t_off + blk.shape[0], off:off + d] += blk
                    any_i = True
        if any_d:
            dbar[pq] = dmat
        if any_i:
            iv[pq] = imat
    return SpectralCell(name=name, dims=dims, labels=labels, dbar=dbar, iv=iv)


def assemble_product(spec: ModelSpec, merged_modes: bool = False) -> AssembledModel:
    spec.validate()
    left = assemble_cp1(spec.left)
    exact: Cp1Exact = left.exact
    tau = spec.right.tau
    cutoff_r = spec.right.cutoff
    modes = [(j, k) for j in range(-cutoff_r, cutoff_r + 1)
             for k in range(-cutoff_r, cutoff_r + 1)]
    cells: list[SpectralCell] = []
    for chi in exact.charges():
        ldims, llabels, ldbar, liv = _left_blocks(exact, chi)
        if not any(ldims.values()):
            continue
        if merged_modes:
            sub = [_product_cell(f"chi{chi}/jk{jk}", ldims, llabels, ldbar, liv,
                                 dolbeault_coefficient(tau, *jk), f"jk{jk}")
                   for jk in modes]
            cells.append(_merge_cells(f"chi{chi}/all-modes", sub))
        else:
            for jk in modes:
                mu = dolbeault_coefficient(tau, *jk)
                cells.append(_product_cell(f"chi{chi}/jk{jk}", ldims, llabels,
                                           ldbar, liv, mu, f"jk{jk}"))
    leakage = dict(left.leakage)
    conds = dict(left.gram_conditions)
    return AssembledModel(spec=spec, n=2, cells=cells, leakage=leakage,
                          gram_conditions=conds, exact=None)


def _merge_cells(name: str, cells: list[SpectralCell]) -> SpectralCell:
    """Direct sum of cells (used only for small cross-check assemblies)."""
    dims: dict[PQ, int] = {}
    labels: dict[PQ, list[str]] = {}
    offsets: list[dict[PQ, int]] = []
    for cell in cells:
        offs = {}
        for pq, d in cell.dims.items():
            offs[pq] = dims.get(pq, 0)
            dims[pq] = dims.get(pq, 0) + d
            labels.setdefault(pq, []).extend(cell.labels[pq])
        offsets.append(offs)
    dbar: dict[PQ, np.ndarray] = {}
    iv: dict[PQ, np.ndarray] = {}
    for opname, store in (("dbar", dbar), ("iv", iv)):
        for pq in dims:
            tgt = (pq[0], pq[1] + 1) if opname == "dbar" else (pq[0] - 1, pq[1])
            if tgt not in dims:
                continue
            mat = np.zeros((dims[tgt], dims[pq]), dtype=complex)
            filled = False
            for cell, offs in zip(cells, offsets):
                blk = getattr(cell, opname).get(pq)
                if blk is None or not blk.size or tgt not in offs:
                    continue
                mat[offs[tgt]:offs[tgt] + blk.shape[0],
                    offs[pq]:offs[pq] + blk.shape[1]] = blk
                filled = True
            if filled:
                store[pq] = mat
    return SpectralCell(name=name, dims=dims, labels=labels, dbar=dbar, iv=iv)


def product_model(k: int, cp1_cutoff: int, tau: complex,
                  torus_cutoff: int) -> AssembledModel:
    """Projective line (twist k, linear field) times flat torus, with the
    field lifted from the projective-line factor."""
    spec = ModelSpec(
        kind="product",
        field=FieldSpec("product_lift", factor="left"),
        left=ModelSpec(kind="cp1", k=k, cutoff=cp1_cutoff,
                       field=FieldSpec("linear")),
        right=ModelSpec(kind="torus", tau=tau, cutoff=torus_cutoff,
                        field=FieldSpec("constant", c=1.0)),
    )
    return assemble_product(spec)
