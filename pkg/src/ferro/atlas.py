"""Exceptional prime sets P_k: primes p for which (p, k) is not circular.

``scan_pk`` classifies every prime up to a bound in GF(p^ord_k(p)) with the
sparse backend and the collision test, optionally across worker processes.
Results are merged in prime order, so the report does not depend on the
number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ferro.circularity import is_circular, prefilter_bound, prefilter_subfield, verify_witness
from ferro.ff import FieldSpec, PolyField, multiplicative_order
from ferro.subgroup import SubgroupCtx

# k: (p_k, pi_k, n_k, printed n_k / pi_k)
TABLE1 = {
    4: (5, 3, 2, "0.666667"),
    5: (11, 5, 2, "0.4"),
    6: (19, 8, 5, "0.625"),
    7: (43, 14, 4, "0.285714"),
    8: (41, 13, 5, "0.384615"),
    9: (271, 58, 7, "0.12069"),
    10: (101, 26, 8, "0.307692"),
    11: (683, 124, 8, "0.064516"),
    12: (193, 44, 15, "0.340909"),
    13: (2731, 399, 14, "0.035088"),
    14: (1289, 209, 20, "0.095694"),
    15: (46261, 4784, 34, "0.007107"),
    16: (2129, 320, 24, "0.075"),
    17: (43691, 4552, 34, "0.007469"),
    18: (5779, 758, 31, "0.0408973"),
    19: (174763, 15898, 54, "0.003397"),
    20: (23321, 2600, 58, "0.022308"),
    21: (8171731, 550533, 93, "0.000169"),
    22: (165749, 15157, 59, "0.003893"),
    23: (2796203, 203095, 78, "0.000384"),
    24: (28753, 3132, 89, "0.028416"),
    25: (9430951, 629307, 123, "0.000195"),
    26: (926537, 73227, 111, "0.001516"),
    27: (34975153, 2145358, 185, "0.000086"),
    28: (2968337, 214686, 149, "0.000694"),
    29: (217108153, 11972010, 182, "0.000015"),
    30: (56941, 5775, 134, "0.023203"),
    31: (1114506049, 56359124, 257, "0.000005"),
    32: (21821249, 1378629, 273, "0.000198"),
}


class ScanError(RuntimeError):
    """Classification of a single prime failed; carries the prime."""

    def __init__(self, p: int, k: int, reason: str):
        super().__init__(f"p={p}, k={k}: {reason}")
        self.p = p
        self.k = k


class InsufficientBound(ValueError):
    pass


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def format_ratio(n: int, pi: int) -> str:
    """n/pi to 6 decimals with trailing zeros dropped, as printed in the table."""
    text = f"{n / pi:.6f}".rstrip("0").rstrip(".")
    return text or "0"


def default_bound(k: int) -> int:
    if k not in TABLE1:
        raise InsufficientBound(f"no reference p_k for k={k}; pass max_prime explicitly")
    return -(-TABLE1[k][0] * 11 // 10)


@dataclass(frozen=True)
class PrimeResult:
    p: int
    circular: bool
    method: str
    witness: dict | None = None


def classify_prime(p: int, k: int) -> PrimeResult:
    """Circularity of (p, k) via gcd convention, prefilters, then collisions."""
    try:
        if k % p == 0:
            return PrimeResult(p, False, "gcd-convention")
        verdict = prefilter_subfield(p, k)
        if verdict is not None:
            return PrimeResult(p, False, verdict.method)
        r = multiplicative_order(p, k)
        verdict = prefilter_bound(p ** r, k)
        if verdict is not None:
            return PrimeResult(p, False, verdict.method)
        ctx = SubgroupCtx(PolyField(FieldSpec(p, r)), k)
        verdict = is_circular(ctx, "collision", prefilter=False)
        if not verdict.circular and not verify_witness(ctx, verdict):
            raise ScanError(p, k, "collision witness failed re-verification")
        return PrimeResult(p, verdict.circular, verdict.method, verdict.witness)
    except ScanError:
        raise
    except Exception as exc:  # surface the offending prime
        raise ScanError(p, k, f"{type(exc).__name__}: {exc}") from exc


def _classify_star(args):
    return classify_prime(*args)


@dataclass
class PkReport:
    k: int
    max_prime: int
    members: list[PrimeResult]
    scanned: int
    alerts: list[str] = field(default_factory=list)

    @property
    def p_k(self) -> int | None:
        return self.members[-1].p if self.members else None

    @property
    def n_k(self) -> int:
        return len(self.members)

    @property
    def pi_k(self) -> int:
        return len(primes_upto(self.p_k)) if self.members else 0

    @property
    def ratio(self) -> str:
        return format_ratio(self.n_k, self.pi_k) if self.members else "0"

    def member_primes(self) -> list[int]:
        return [m.p for m in self.members]

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "max_prime": self.max_prime,
            "members": [{"p": m.p, "method": m.method} for m in self.members],
            "p_k": self.p_k,
            "n_k": self.n_k,
            "pi_k": self.pi_k,
            "ratio": self.ratio,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "p", "method"])
        for m in self.members:
            writer.writerow([self.k, m.p, m.method])
        return buf.getvalue()


def scan_pk(k: int, max_prime: int | None = None, workers: int = 1) -> PkReport:
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if max_prime is None:
        max_prime = default_bound(k)
    if max_prime < 2:
        raise ValueError("max_prime must be >= 2")
    primes = primes_upto(max_prime)
    jobs = [(p, k) for p in primes]
    if workers <= 1:
        results = [classify_prime(p, k) for p in primes]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_classify_star, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    members = [r for r in results if not r.circular]
    report = PkReport(k=k, max_prime=max_prime, members=members, scanned=len(primes))
    if k in TABLE1:
        ref = TABLE1[k][0]
        report.alerts = [f"p={m.p} > reference p_k={ref} is not circular" for m in members if m.p > ref]
    return report


def table1_compare(report: PkReport) -> dict:
    """Differences between a scan and the reference row; empty when they match."""
    if report.k not in TABLE1:
        raise InsufficientBound(f"no reference row for k={report.k}")
    p_k, pi_k, n_k, ratio = TABLE1[report.k]
    if report.max_prime * 10 < p_k * 11:
        raise InsufficientBound(f"max_prime={report.max_prime} is below 1.1 * p_k = {p_k * 1.1:g}")
    computed = {"p_k": report.p_k, "n_k": report.n_k, "pi_k": report.pi_k, "ratio": report.ratio}
    expected = {"p_k": p_k, "n_k": n_k, "pi_k": pi_k, "ratio": ratio}
    return {key: (computed[key], expected[key]) for key in computed if computed[key] != expected[key]}


__all__ = [
    "TABLE1",
    "InsufficientBound",
    "PkReport",
    "PrimeResult",
    "ScanError",
    "classify_prime",
    "default_bound",
    "format_ratio",
    "primes_upto",
    "scan_pk",
    "table1_compare",
]
