"""Deciding circularity of the Ferrero pair (GF(q), Phi) with |Phi| = k.

Two full decision procedures:

* ``is_circular_direct`` enumerates [a, c]_k = |Phi ∩ (Phi*a + c)| for a over
  coset representatives and c over F* (dense fields only).
* ``is_circular_collision`` looks for two ordered pairs (x1, y1), (x2, y2) from
  Phi \\ {1} with (x1-1)(y1-1) = (x2-1)(y2-1).  Any such coincidence between
  pairs that are not equal as multisets {x1, y1} != {x2, y2} yields three points
  1, x1, x2 of Phi inside Phi*a + (1 - a) with a = (x1-1)/(y2-1), and conversely
  every intersection of size >= 3 produces one.  Swapped pairs are always legal;
  coincidences between two different diagonal pairs are not.

Plus two necessary-condition prefilters that can only rule circularity out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ferro.brackets import bracket, bracket_row
from ferro.ff import (
    DenseField,
    Field,
    FieldError,
    FieldSpec,
    PolyField,
    dense_cap,
    is_prime,
    multiplicative_order,
    prime_power,
)
from ferro.subgroup import SubgroupCtx, coset_representatives

METHODS = ("direct", "collision", "prefilter-subfield", "prefilter-bound", "gcd-convention")


@dataclass(frozen=True)
class CircularityVerdict:
    """Outcome of a circularity decision.

    ``witness`` is None for circular verdicts and prefilter rejections.  For the
    direct method it is ``{"kind": "triple", "a", "b", "c"}`` (integer element
    encodings) with |Phi*a ∩ (Phi*b + c)| >= 3; for the collision method it is
    ``{"kind": "collision", "pairs": [[x1, y1], [x2, y2]]}``.
    """

    circular: bool
    method: str
    p: int
    k: int
    q: int | None = None
    witness: dict | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        out = {"p": self.p, "k": self.k, "q": self.q, "circular": self.circular, "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


# -- prefilters ---------------------------------------------------------------


def prefilter_subfield(p: int, k: int) -> CircularityVerdict | None:
    """Non-circular if Phi contains K* for a subfield K with more than 4 elements."""
    h = 1
    while p ** h - 1 <= k:
        if k % (p ** h - 1) == 0 and p ** h > 4:
            return CircularityVerdict(
                False, "prefilter-subfield", p, k,
                detail=f"GF({p}^{h})* lies in Phi since {p}^{h}-1 divides {k}",
            )
        h += 1
    return None


def prefilter_bound(q: int, k: int) -> CircularityVerdict | None:
    """Non-circular if m = (q-1)/k fails (2m+3)^2 >= 4q-7."""
    if (q - 1) % k:
        raise FieldError(f"k={k} does not divide q-1={q - 1}")
    m = (q - 1) // k
    if (2 * m + 3) ** 2 < 4 * q - 7:
        return CircularityVerdict(
            False, "prefilter-bound", prime_power(q)[0], k, q=q,
            detail=f"m={m} violates (2m+3)^2 >= 4q-7",
        )
    return None


# -- full methods ---------------------------------------------------------------


def is_circular_direct(ctx: SubgroupCtx) -> CircularityVerdict:
    F = ctx.field
    if not isinstance(F, DenseField):
        raise FieldError("the direct method enumerates F* and needs a dense field")
    n = F.n
    for a in coset_representatives(ctx):
        row = bracket_row(ctx, a)[:n]  # drop c = 0
        worst = int(row.argmax())
        if row[worst] >= 3:
            witness = {"kind": "triple", "a": F.to_int(F.one), "b": F.to_int(a), "c": F.to_int(worst)}
            return CircularityVerdict(False, "direct", F.p, ctx.k, q=F.q, witness=witness,
                                      detail=f"|Phi ∩ (Phi*b + c)| = {int(row[worst])}")
    return CircularityVerdict(True, "direct", F.p, ctx.k, q=F.q)


def _collision_map(ctx: SubgroupCtx) -> dict:
    F = ctx.field
    one = F.one
    shifted = [(x, F.sub(x, one)) for x in ctx.nontrivial()]
    products: dict = {}
    for x, dx in shifted:
        for y, dy in shifted:
            products.setdefault(F.mul(dx, dy), []).append((x, y))
    return products


def is_circular_collision(ctx: SubgroupCtx) -> CircularityVerdict:
    F = ctx.field
    if ctx.field.backend == "dense" and ctx.k > 64:
        return _collision_dense(ctx)
    for pairs in _collision_map(ctx).values():
        if len(pairs) < 2:
            continue
        first = pairs[0]
        base = sorted(first, key=F.to_int)
        for other in pairs[1:]:
            if sorted(other, key=F.to_int) != base:
                return _collision_verdict(ctx, first, other)
    return CircularityVerdict(True, "collision", F.p, ctx.k, q=F.q)


def _collision_dense(ctx: SubgroupCtx) -> CircularityVerdict:
    # same rule as the generic path, vectorized over log indices
    F = ctx.field
    n = F.n
    xs = np.array(ctx.nontrivial(), dtype=np.int64)
    d = F.vadd(xs, np.full_like(xs, F.neg(F.one)))
    prod = (d[:, None] + d[None, :]) % n
    lo = np.minimum(xs[:, None], xs[None, :])
    hi = np.maximum(xs[:, None], xs[None, :])
    key = prod.ravel()
    pair_id = (lo * n + hi).ravel()
    order = np.lexsort((pair_id, key))
    key, pair_id = key[order], pair_id[order]
    same_key = key[1:] == key[:-1]
    diff_pair = pair_id[1:] != pair_id[:-1]
    bad = np.flatnonzero(same_key & diff_pair)
    if bad.size == 0:
        return CircularityVerdict(True, "collision", F.p, ctx.k, q=F.q)
    i = int(bad[0])
    first = divmod(int(pair_id[i]), n)
    other = divmod(int(pair_id[i + 1]), n)
    return _collision_verdict(ctx, first, other)


def _collision_verdict(ctx, first, other) -> CircularityVerdict:
    F = ctx.field
    witness = {
        "kind": "collision",
        "pairs": [[F.to_int(first[0]), F.to_int(first[1])], [F.to_int(other[0]), F.to_int(other[1])]],
    }
    return CircularityVerdict(False, "collision", F.p, ctx.k, q=F.q, witness=witness,
                              detail="(x1-1)(y1-1) = (x2-1)(y2-1) with {x1,y1} != {x2,y2}")


def collision_to_triple(ctx: SubgroupCtx, pairs) -> tuple:
    """Turn a collision witness into raw (a, c) with {1, x1, x2} ⊆ Phi ∩ (Phi*a + c)."""
    F = ctx.field
    (x1, y1), (x2, y2) = pairs
    one = F.one
    if x1 == y2:
        raise ValueError("swapped pairs are not a collision witness")
    a = F.div(F.sub(x1, one), F.sub(y2, one))
    c = F.sub(one, a)
    return a, c


def verify_witness(ctx: SubgroupCtx, verdict: CircularityVerdict) -> bool:
    """Recompute a non-circular witness from scratch; True iff it confirms failure."""
    if verdict.circular or verdict.witness is None:
        return False
    F = ctx.field
    w = verdict.witness
    if w["kind"] == "triple":
        a, b, c = (F.from_int(w[key]) for key in ("a", "b", "c"))
        if F.zero in (a, b, c):
            return False
        ainv = F.inv(a)
        return bracket(ctx, F.mul(ainv, b), F.mul(ainv, c)) >= 3
    if w["kind"] == "collision":
        (x1, y1), (x2, y2) = [[F.from_int(v) for v in pair] for pair in w["pairs"]]
        for v in (x1, y1, x2, y2):
            if v not in ctx.element_set or v == F.one:
                return False
        one = F.one
        lhs = F.mul(F.sub(x1, one), F.sub(y1, one))
        rhs = F.mul(F.sub(x2, one), F.sub(y2, one))
        if lhs != rhs or sorted((F.to_int(x1), F.to_int(y1))) == sorted((F.to_int(x2), F.to_int(y2))):
            return False
        a, c = collision_to_triple(ctx, ((x1, y1), (x2, y2)))
        return c != F.zero and bracket(ctx, a, c) >= 3
    return False


def field_for_pair(p: int, k: int, multiple: int = 1, backend: str = "poly") -> Field:
    """GF(p^(r*multiple)) with r the order of p mod k."""
    r = multiplicative_order(p, k) * multiple
    spec = FieldSpec(p, r)
    if backend == "dense":
        return DenseField(spec)
    if backend == "poly":
        return PolyField(spec)
    if backend == "auto":
        return DenseField(spec) if spec.q <= min(dense_cap(), 1 << 16) else PolyField(spec)
    raise ValueError(f"unknown backend {backend!r}")


def is_circular(ctx: SubgroupCtx, method: str = "auto", prefilter: bool = True) -> CircularityVerdict:
    """Decide circularity of an existing context."""
    F = ctx.field
    if prefilter:
        for v in (prefilter_subfield(F.p, ctx.k), prefilter_bound(F.q, ctx.k)):
            if v is not None:
                return CircularityVerdict(v.circular, v.method, F.p, ctx.k, q=F.q, detail=v.detail)
    if method == "direct":
        return is_circular_direct(ctx)
    if method in ("collision", "auto"):
        return is_circular_collision(ctx)
    raise ValueError(f"unknown method {method!r}")


def is_circular_pair(p: int, k: int, method: str = "auto", multiple: int = 1) -> CircularityVerdict:
    """Circularity of (p, k), decided in GF(p^r), r = multiple * ord_k(p)."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 3:
        raise FieldError(f"k must be >= 3, got {k}")
    if math.gcd(p, k) != 1:
        return CircularityVerdict(False, "gcd-convention", p, k,
                                  detail=f"{p} divides {k}: no field of characteristic {p} has an order-{k} subgroup")
    backend = "dense" if method == "direct" else "poly"
    F = field_for_pair(p, k, multiple, backend)
    ctx = SubgroupCtx(F, k)
    return is_circular(ctx, method)


__all__ = [
    "METHODS",
    "CircularityVerdict",
    "collision_to_triple",
    "field_for_pair",
    "is_circular",
    "is_circular_collision",
    "is_circular_direct",
    "is_circular_pair",
    "prefilter_bound",
    "prefilter_subfield",
    "verify_witness",
]
