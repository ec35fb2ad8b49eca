"""Counting solutions of x^m + y^m - z^m = 1 over GF(q), m = (q-1)/k.

Two oracles that do not assume circularity:

* ``count_oracle_naive`` sweeps the whole (x, y) grid of a dense field and
  adds #{z : z^m = x^m + y^m - 1}.
* ``count_oracle_structured`` splits solutions into S (xyz != 0) and the six
  coordinate-zero parts of T, each counted from enumerated intersection sizes.

Two formulas that do: the general count in terms of s and t, and the fully
closed form by case split on k and p.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ferro.brackets import bracket, intersection_sizes, s_closed_form, t_closed_form
from ferro.circularity import CircularityVerdict, is_circular
from ferro.ff import DenseField, FieldError
from ferro.subgroup import SubgroupCtx, minus_one_in_phi, two_in_phi

NAIVE_BUDGET = 4096


class NotCircularError(ValueError):
    """A closed formula was requested for a non-circular context."""


class BudgetExceeded(ValueError):
    pass


def count_oracle_naive(F: DenseField, m: int, budget: int = NAIVE_BUDGET, chunk: int = 1 << 17) -> tuple[int, int]:
    """(N, N') by sweeping all (x, y) in F^2; N' counts solutions with xyz != 0.

    For every cell u = x^m + (y^m - 1) is formed with one Zech lookup and
    #{z : z^m = u} is read off a histogram of z^m over all z.
    """
    if not isinstance(F, DenseField):
        raise FieldError("the naive oracle needs a dense field")
    if F.q > budget:
        raise BudgetExceeded(f"q={F.q} exceeds the naive-oracle budget {budget}")
    if m < 1:
        raise ValueError("m must be positive")
    q, n, Z = F.q, F.n, F.ZERO
    xs = np.arange(q, dtype=np.int64)
    powers = F.vpow(xs, m)
    z_count = np.bincount(powers, minlength=q)  # #{z : z^m = u}, indexed by raw u
    w = F.vadd(powers, np.int64(F.neg(F.one)))  # y^m - 1 for every y
    w_zero = w == Z
    # zech2[d + n] = Z(d mod n), with "sum is zero" pushed to 3n so that
    # reduce[zech2[..] + a] maps it back to Z and everything else mod n.
    zech = F.zech.astype(np.int64)
    zech = np.where(zech == Z, 3 * n, zech)
    zech2 = np.concatenate([zech, zech])
    reduce = np.full(5 * n, Z, dtype=np.int64)
    reduce[:2 * n] = np.arange(2 * n) % n
    b = np.where(w_zero, 0, w)[None, :]  # zero columns are patched below
    total = int(z_count[w].sum())  # row x = 0, where u = y^m - 1
    nonzero = 0  # x = 0 never contributes to N'
    rows = max(1, chunk // q)
    for start in range(0, n, rows):
        a = powers[start:min(start + rows, n)][:, None]  # x != 0, so x^m != 0
        u = reduce[zech2[b - a + n] + a]
        u[:, w_zero] = np.broadcast_to(a, (a.shape[0], int(w_zero.sum())))
        counts = z_count[u]
        total += int(counts.sum())
        inner = counts[:, :n]  # y != 0 (zero is the last raw index)
        nonzero += int(inner.sum()) - int((u[:, :n] == Z).sum())
    return total, nonzero


@dataclass
class CountReport:
    q: int
    k: int
    m: int
    circular: bool | None = None
    N_naive: int | None = None
    N_structured: int | None = None
    N_general: int | None = None
    N_theorem1: int | None = None
    Nprime_naive: int | None = None
    Nprime_structured: int | None = None
    Nprime_general: int | None = None
    Nprime_theorem1: int | None = None
    s: int | None = None
    t: int | None = None
    T_parts: dict = field(default_factory=dict)
    agreement: bool = True

    def values(self, prefix: str) -> list[int]:
        return [v for key, v in asdict(self).items()
                if key.startswith(prefix + "_") and v is not None]

    def check(self) -> bool:
        N = set(self.values("N"))
        Np = set(self.values("Nprime"))
        ok = len(N) <= 1 and len(Np) <= 1
        if self.T_parts and self.N_structured is not None:
            ok = ok and self.N_structured == self.Nprime_structured + sum(self.T_parts.values())
        self.agreement = ok
        return ok

    def as_dict(self) -> dict:
        d = asdict(self)
        return {key: v for key, v in d.items() if v is not None and v != {}}


def count_oracle_structured(ctx: SubgroupCtx) -> CountReport:
    """S/T decomposition with every intersection size counted by enumeration."""
    F = ctx.field
    k, m = ctx.k, ctx.m
    one = F.one
    s = sum(intersection_sizes(ctx))
    t = bracket(ctx, one, one)
    t_z = bracket(ctx, ctx.minus_one, one)  # |Phi ∩ (1 - Phi)|
    parts = {
        "T_x": m * m * t,
        "T_y": m * m * t,
        "T_z": m * m * t_z,
        "T_xy": m if minus_one_in_phi(ctx) else 0,
        "T_xz": m,
        "T_yz": m,
    }
    Nprime = m ** 3 * (k + s)
    return CountReport(q=F.q, k=k, m=m, N_structured=Nprime + sum(parts.values()),
                       Nprime_structured=Nprime, s=s, t=t, T_parts=parts)


def _require_circular(ctx: SubgroupCtx, verdict: CircularityVerdict | None) -> None:
    if verdict is None:
        verdict = is_circular(ctx)
    if not verdict.circular:
        raise NotCircularError(f"(q={ctx.q}, k={ctx.k}) is not circular")


def count_formula_general(ctx: SubgroupCtx, verdict: CircularityVerdict | None = None) -> tuple[int, int]:
    """m^3(k+s) + 3m^2 t + 2m or 3m, with s and t from their closed forms."""
    _require_circular(ctx, verdict)
    k, m = ctx.k, ctx.m
    s, t = s_closed_form(ctx), t_closed_form(ctx)
    linear = 3 * m if (k % 2 == 0 or ctx.p == 2) else 2 * m
    Nprime = m ** 3 * (k + s)
    return Nprime + 3 * m * m * t + linear, Nprime


def count_formula_theorem1(ctx: SubgroupCtx, verdict: CircularityVerdict | None = None) -> tuple[int, int]:
    """Closed count by cases on the parity of k, p, 6 | k, 3 | k and 2 ∈ Phi."""
    _require_circular(ctx, verdict)
    k, m, p = ctx.k, ctx.m, ctx.p
    m2, m3 = m * m, m ** 3
    if k % 2 == 0:
        Nprime = 3 * (k - 1) * m3
        if k % 6 == 0:
            return Nprime + 6 * m2 + 3 * m, Nprime
        if p == 3:
            return Nprime + 3 * m2 + 3 * m, Nprime
        return Nprime + 3 * m, Nprime
    if p == 2:
        Nprime = (3 * k - 2) * m3
        if k % 3 == 0:
            return Nprime + 6 * m2 + 3 * m, Nprime
        return Nprime + 3 * m, Nprime
    Nprime = (2 * k - 1) * m3
    if two_in_phi(ctx):
        return Nprime + 3 * m2 + 2 * m, Nprime
    return Nprime + 2 * m, Nprime


def count_report(ctx: SubgroupCtx, oracle: str = "both", formulas: bool = True,
                 verdict: CircularityVerdict | None = None, budget: int = NAIVE_BUDGET) -> CountReport:
    """Run the requested oracles, plus both formulas when the pair is circular."""
    if oracle not in ("naive", "structured", "both"):
        raise ValueError(f"unknown oracle {oracle!r}")
    F = ctx.field
    if oracle in ("structured", "both"):
        report = count_oracle_structured(ctx)
    else:
        report = CountReport(q=F.q, k=ctx.k, m=ctx.m)
    if oracle in ("naive", "both"):
        report.N_naive, report.Nprime_naive = count_oracle_naive(F, ctx.m, budget)
    if formulas:
        if verdict is None:
            verdict = is_circular(ctx)
        report.circular = verdict.circular
        if verdict.circular:
            report.N_general, report.Nprime_general = count_formula_general(ctx, verdict)
            report.N_theorem1, report.Nprime_theorem1 = count_formula_theorem1(ctx, verdict)
    report.check()
    return report


__all__ = [
    "BudgetExceeded",
    "CountReport",
    "NotCircularError",
    "count_formula_general",
    "count_formula_theorem1",
    "count_oracle_naive",
    "count_oracle_structured",
    "count_report",
]
