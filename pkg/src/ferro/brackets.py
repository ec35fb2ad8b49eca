"""Intersection numbers [a, c]_k = |Phi ∩ (Phi*a + c)| and their aggregates.

All counts here come from enumerating the k elements mu*a + c.  The closed
forms (``t_closed_form``, ``s_closed_form``, ``bracket_a1_closed_form``) are kept
separate and are only used to cross-check enumeration in circular contexts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ferro.ff import DenseField, FieldError
from ferro.subgroup import SubgroupCtx, minus_one_in_phi, same_coset, two_in_phi


class ClosedFormMismatch(AssertionError):
    """Enumeration disagrees with a closed form in a circular context."""


def bracket(ctx: SubgroupCtx, a, c) -> int:
    """|Phi ∩ (Phi*a + c)|; c = 0 gives k if a ∈ Phi else 0."""
    F = ctx.field
    if a == F.zero:
        raise ValueError("bracket needs a != 0")
    return sum(1 for mu in ctx.elements if ctx.contains(F.add(F.mul(mu, a), c)))


def bracket_row(ctx: SubgroupCtx, a: int) -> np.ndarray:
    """[a, c]_k for every raw c of a dense field (index = raw value, zero last)."""
    F = ctx.field
    if not isinstance(F, DenseField):
        raise FieldError("bracket_row needs a dense field")
    if a == F.ZERO:
        raise ValueError("bracket needs a != 0")
    mus = np.array(ctx.elements, dtype=np.int64)
    shifted = F.vmul(mus, a)[:, None]
    cs = np.arange(F.q, dtype=np.int64)[None, :]
    vals = F.vadd(shifted, cs)
    return (F.vpow(vals, ctx.k) == F.one).sum(axis=0)


def bracket_table(ctx: SubgroupCtx) -> np.ndarray:
    """Full table B[a, c] over nonzero raw a (rows 0..q-2) and all raw c."""
    F = ctx.field
    if not isinstance(F, DenseField):
        raise FieldError("bracket_table needs a dense field")
    n = F.n
    a = np.arange(n, dtype=np.int64)[:, None]
    cs = np.arange(F.q, dtype=np.int64)[None, :]
    out = np.zeros((n, F.q), dtype=np.int64)
    for mu in ctx.elements:
        vals = F.vadd((a + mu) % n, cs)
        out += F.vpow(vals, ctx.k) == F.one
    return out


def intersection_size(ctx: SubgroupCtx, j: int) -> int:
    """|(Phi + 1) ∩ (Phi + phi^j)| by enumerating Phi + 1."""
    if j % ctx.k == 0:
        raise ValueError("intersection_size needs j not divisible by k")
    F = ctx.field
    shift = ctx.phi_pow(j)
    return sum(1 for lam in ctx.elements if ctx.contains(F.sub(F.add(lam, F.one), shift)))


def intersection_sizes(ctx: SubgroupCtx, chunk: int = 1 << 20) -> list[int]:
    """intersection_size for j = 1..k-1; vectorized over a dense field."""
    F = ctx.field
    k = ctx.k
    if not isinstance(F, DenseField):
        return [intersection_size(ctx, j) for j in range(1, k)]
    phi = np.array(ctx.elements, dtype=np.int64)
    plus_one = F.vadd(phi, np.int64(F.one))[None, :]
    shifts = (phi[1:] + F.half) % F.n  # -phi^j
    out = []
    rows = max(1, chunk // k)
    for start in range(0, k - 1, rows):
        vals = F.vadd(plus_one, shifts[start:start + rows, None])
        out.extend((F.vpow(vals, k) == F.one).sum(axis=1).tolist())
    return out


def compute_t_direct(ctx: SubgroupCtx) -> int:
    return bracket(ctx, ctx.field.one, ctx.field.one)


def compute_s_direct(ctx: SubgroupCtx) -> int:
    return sum(intersection_sizes(ctx))


def t_closed_form(ctx: SubgroupCtx) -> int:
    k, p = ctx.k, ctx.p
    if k % 2 == 0:
        if k % 6 == 0:
            return 2
        return 1 if p == 3 else 0
    if p == 2:
        return 2 if k % 3 == 0 else 0
    return 1 if two_in_phi(ctx) else 0


def s_closed_form(ctx: SubgroupCtx) -> int:
    k = ctx.k
    if k % 2 == 0:
        return 2 * k - 3
    if ctx.p == 2:
        return 2 * k - 2
    return k - 1


@dataclass(frozen=True)
class Aggregates:
    s: int
    t: int
    s_closed: int | None = None
    t_closed: int | None = None


def compute_t(ctx: SubgroupCtx, circular: bool = False) -> int:
    t = compute_t_direct(ctx)
    if circular and t != t_closed_form(ctx):
        raise ClosedFormMismatch(f"t={t} but closed form gives {t_closed_form(ctx)} for q={ctx.q}, k={ctx.k}")
    return t


def compute_s(ctx: SubgroupCtx, circular: bool = False) -> int:
    s = compute_s_direct(ctx)
    if circular and s != s_closed_form(ctx):
        raise ClosedFormMismatch(f"s={s} but closed form gives {s_closed_form(ctx)} for q={ctx.q}, k={ctx.k}")
    return s


def aggregates(ctx: SubgroupCtx, circular: bool = False) -> Aggregates:
    s = compute_s(ctx, circular)
    t = compute_t(ctx, circular)
    if circular:
        return Aggregates(s, t, s_closed_form(ctx), t_closed_form(ctx))
    return Aggregates(s, t)


def bracket_a1_closed_form(ctx: SubgroupCtx, a) -> int:
    """Predicted [a, 1]_k for a circular context, from coset membership alone."""
    F = ctx.field
    if a == F.zero:
        raise ValueError("bracket needs a != 0")
    one = F.one
    even = ctx.k % 2 == 0
    excluded = {one, ctx.minus_one} if even else {one}
    hits = any(same_coset(ctx, a, F.sub(psi, one)) for psi in ctx.elements if psi not in excluded)
    if even:
        if hits:
            return 2
        return 1 if same_coset(ctx, a, F.scalar(2)) else 0
    if hits:
        return 2 if ctx.p == 2 else 1
    return 0


def cyclotomic_number(ctx: SubgroupCtx, h: int, ell: int) -> int:
    """(h, l)_m = [-zeta^h, zeta^l]_k in a dense field."""
    F = ctx.field
    if not isinstance(F, DenseField):
        raise FieldError("cyclotomic numbers need a dense field (zeta)")
    b = h % F.n
    a = ell % F.n
    return bracket(ctx, F.neg(b), a)


def dickson_sums(ctx: SubgroupCtx, c) -> tuple[int, int]:
    """(sum over coset representatives r of [r, c]_k, sum over all r in F* of [r, c]_k).

    The expected values are (k-1, k(k-1)) for c in Phi and (k, k^2) otherwise;
    a mismatch raises ClosedFormMismatch.
    """
    F = ctx.field
    if not isinstance(F, DenseField):
        raise FieldError("dickson_sums needs a dense field")
    if c == F.zero:
        raise ValueError("dickson_sums needs c != 0")
    over_reps = sum(bracket(ctx, r, c) for r in range(ctx.m))
    over_all = sum(bracket(ctx, r, c) for r in range(F.n))
    k = ctx.k
    expected = (k - 1, k * (k - 1)) if ctx.contains(c) else (k, k * k)
    if (over_reps, over_all) != expected:
        raise ClosedFormMismatch(f"Dickson sums {(over_reps, over_all)} != {expected} for c={F.to_int(c)}")
    return over_reps, over_all


__all__ = [
    "Aggregates",
    "ClosedFormMismatch",
    "aggregates",
    "bracket",
    "bracket_a1_closed_form",
    "bracket_row",
    "bracket_table",
    "compute_s",
    "compute_t",
    "cyclotomic_number",
    "dickson_sums",
    "intersection_size",
    "intersection_sizes",
    "minus_one_in_phi",
    "s_closed_form",
    "t_closed_form",
]
