"""The block design (F, B) with B = {Phi*a + c : a in F*, c in F}.

It is a 2-(q, k, k-1) design with mq blocks, and it is circular (super-simple)
exactly when two distinct blocks never share more than two points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ferro.ff import DenseField, FieldError
from ferro.subgroup import SubgroupCtx

DESIGN_BUDGET = 4_000_000  # max stored incidences (blocks * k)
EXHAUSTIVE_LIMIT = 128 ** 3  # max q^3 for the all-pairs intersection scan


class BudgetExceeded(ValueError):
    pass


@dataclass
class BlockDesign:
    q: int
    k: int
    m: int
    blocks: np.ndarray  # (b, k) raw dense encodings, rows sorted ascending
    field: DenseField

    @property
    def params(self) -> tuple[int, int, int, int, int]:
        """Nominal (v, b, r, k, lambda)."""
        return self.q, self.m * self.q, self.q - 1, self.k, self.k - 1

    def to_json(self) -> str:
        F = self.field

        def name(v):
            return "0" if v == F.ZERO else f"g^{int(v)}"

        doc = {
            "q": self.q,
            "k": self.k,
            "params": list(self.params),
            "blocks": [[name(v) for v in row] for row in self.blocks],
        }
        return json.dumps(doc, separators=(",", ":")) + "\n"


def build_design(ctx: SubgroupCtx, budget: int = DESIGN_BUDGET) -> BlockDesign:
    """All translates Phi*a + c, a over coset representatives zeta^i (i < m)."""
    F = ctx.field
    if not isinstance(F, DenseField):
        raise FieldError("block designs need a dense field")
    q, k, m, n = F.q, ctx.k, ctx.m, F.n
    if m * q * k > budget:
        raise BudgetExceeded(f"{m * q} blocks of size {k} exceed the budget of {budget} incidences")
    phi = np.array(ctx.elements, dtype=np.int64)
    cosets = (phi[None, :] + np.arange(m, dtype=np.int64)[:, None]) % n  # (m, k)
    cs = np.arange(q, dtype=np.int64)
    blocks = F.vadd(cosets[:, None, :], cs[None, :, None]).reshape(m * q, k)
    blocks.sort(axis=1)
    return BlockDesign(q=q, k=k, m=m, blocks=blocks, field=F)


@dataclass(frozen=True)
class DesignReport:
    params: tuple
    distinct_blocks: int
    block_sizes_ok: bool
    replication: tuple[int, int]  # (min, max) blocks per point
    pair_counts: tuple[int, int] | None  # (min, max) blocks per point pair
    valid: bool


def verify_2design(design: BlockDesign, check_pairs: bool = True) -> DesignReport:
    q, k = design.q, design.k
    v, b, r, _, lam = design.params
    blocks = design.blocks
    distinct = int(np.unique(blocks, axis=0).shape[0])
    sizes_ok = blocks.shape[1] == k and bool((np.diff(blocks, axis=1) > 0).all())
    reps = np.bincount(blocks.ravel(), minlength=q)
    replication = (int(reps.min()), int(reps.max()))
    pair_counts = None
    valid = distinct == b and sizes_ok and replication == (r, r)
    if check_pairs:
        counts = np.zeros(q * q, dtype=np.int64)
        iu, ju = np.triu_indices(k, 1)
        step = max(1, 2_000_000 // max(1, len(iu)))
        for s in range(0, blocks.shape[0], step):
            chunk = blocks[s:s + step]
            idx = (chunk[:, iu] * q + chunk[:, ju]).ravel()
            counts += np.bincount(idx, minlength=q * q)
        upper = counts.reshape(q, q)[np.triu_indices(q, 1)]
        pair_counts = (int(upper.min()), int(upper.max()))
        valid = valid and pair_counts == (lam, lam)
    return DesignReport(design.params, distinct, sizes_ok, replication, pair_counts, valid)


def _incidence(design: BlockDesign) -> sparse.csr_matrix:
    b, k = design.blocks.shape
    rows = np.repeat(np.arange(b), k)
    data = np.ones(b * k, dtype=np.int32)
    return sparse.csr_matrix((data, (rows, design.blocks.ravel())), shape=(b, design.q))


def max_pair_intersection(design: BlockDesign, method: str = "auto") -> int:
    """Largest |B ∩ C| over distinct blocks B, C.

    ``exhaustive`` forms every pairwise intersection from the sparse product of
    the incidence matrix with its transpose.  ``base-block`` intersects every
    block with Phi only; this is exact because x -> u*x + d (u != 0) maps blocks
    to blocks and moves any block onto Phi, so every pair of distinct blocks is
    equivalent to a pair (Phi, C).
    """
    if method == "auto":
        method = "exhaustive" if design.q ** 3 <= EXHAUSTIVE_LIMIT else "base-block"
    if method == "exhaustive":
        M = _incidence(design)
        G = (M @ M.T).tocoo()
        off = G.row != G.col
        return int(G.data[off].max()) if off.any() else 0
    if method == "base-block":
        F = design.field
        blocks = design.blocks
        in_phi = F.vpow(blocks, design.k) == F.one
        sizes = in_phi.sum(axis=1)
        base = np.sort(np.array([i * design.m for i in range(design.k)]))  # Phi as sorted logs
        is_base = (blocks == base[None, :]).all(axis=1)
        sizes = sizes[~is_base]
        return int(sizes.max()) if sizes.size else 0
    raise ValueError(f"unknown method {method!r}")


__all__ = [
    "BlockDesign",
    "BudgetExceeded",
    "DesignReport",
    "build_design",
    "max_pair_intersection",
    "verify_2design",
]
