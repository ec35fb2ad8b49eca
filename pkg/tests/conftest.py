from functools import lru_cache

import pytest

from ferro.ff import DenseField, FieldSpec, PolyField, prime_power
from ferro.subgroup import SubgroupCtx


@lru_cache(maxsize=None)
def prime_powers(upto: int) -> tuple[int, ...]:
    out = []
    for q in range(2, upto + 1):
        try:
            prime_power(q)
        except ValueError:
            continue
        out.append(q)
    return tuple(out)


@lru_cache(maxsize=None)
def ferrero_pairs(upto: int) -> tuple[tuple[int, int], ...]:
    """All (q, k) with q <= upto a prime power, k >= 3 and k | q - 1."""
    return tuple((q, k) for q in prime_powers(upto) for k in range(3, q) if (q - 1) % k == 0)


@lru_cache(maxsize=8)
def dense(q: int) -> DenseField:
    return DenseField(FieldSpec.from_order(q))


@lru_cache(maxsize=8)
def poly(q: int) -> PolyField:
    return PolyField(FieldSpec.from_order(q))


def ctx(q: int, k: int, backend: str = "dense") -> SubgroupCtx:
    return SubgroupCtx(dense(q) if backend == "dense" else poly(q), k)


@pytest.fixture
def gf13_4():
    return ctx(13, 4)


@pytest.fixture
def gf7_3():
    return ctx(7, 3)


ACCEPTANCE: list[str] = []


def record(number: int, title: str, failures: list, checked: int) -> None:
    """Remember one PASS/FAIL line for an acceptance criterion and echo it."""
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number}: {status}  {title} ({checked} checked, {len(failures)} failed)"
    if failures:
        line += f"; first failure: {failures[0]}"
    ACCEPTANCE.append(line)
    print("\n" + line, flush=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
