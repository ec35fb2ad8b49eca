import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ctx, ferrero_pairs
from ferro.brackets import (
    ClosedFormMismatch,
    aggregates,
    bracket,
    bracket_a1_closed_form,
    bracket_row,
    bracket_table,
    compute_s,
    compute_t,
    cyclotomic_number,
    dickson_sums,
    intersection_size,
    intersection_sizes,
)
from ferro.circularity import is_circular
from ferro.ff import FieldError
from ferro.subgroup import SubgroupCtx, c_ji, same_coset

PAIRS_100 = ferrero_pairs(100)
CIRCULAR_200 = [(q, k) for q, k in ferrero_pairs(200) if is_circular(ctx(q, k)).circular]


def test_bracket_examples():
    C = ctx(13, 4)
    F = C.field
    assert bracket(C, F.from_int(3), F.from_int(3)) == 2
    G = ctx(7, 3)
    assert bracket(G, G.field.one, G.field.one) == 1
    assert bracket(C, F.one, F.zero) == 4
    assert bracket(C, F.from_int(2), F.zero) == 0
    with pytest.raises(ValueError):
        bracket(C, F.zero, F.one)


def test_intersection_size_examples():
    C = ctx(13, 4)
    assert [intersection_size(C, j) for j in (1, 2, 3)] == [2, 1, 2]
    C = ctx(7, 3)
    assert [intersection_size(C, j) for j in (1, 2)] == [1, 1]
    C = ctx(4, 3, "poly")
    assert [intersection_size(C, j) for j in (1, 2)] == [2, 2]
    with pytest.raises(ValueError):
        intersection_size(C, 3)


def test_aggregate_examples():
    assert compute_t(ctx(31, 5), circular=True) == 1
    assert compute_t(ctx(4, 3), circular=True) == 2
    agg = aggregates(ctx(13, 4), circular=True)
    assert (agg.s, agg.t, agg.s_closed, agg.t_closed) == (5, 0, 5, 0)


def test_closed_forms_are_enforced():
    # GF(5) with Phi = F* is not circular; asking for the closed form must fail loudly
    with pytest.raises(ClosedFormMismatch):
        compute_t(ctx(5, 4), circular=True)


def test_cyclotomic_examples():
    C = ctx(7, 3)
    assert cyclotomic_number(C, 0, 0) == 1
    with pytest.raises(FieldError):
        cyclotomic_number(ctx(7, 3, "poly"), 0, 0)


def test_dickson_examples():
    C = ctx(13, 4)
    F = C.field
    assert dickson_sums(C, F.one) == (3, 12)
    assert dickson_sums(C, F.from_int(2)) == (4, 16)
    G = ctx(7, 3)
    assert dickson_sums(G, G.field.one) == (2, 6)
    with pytest.raises(ValueError):
        dickson_sums(C, F.zero)


def _table(q, k):
    C = ctx(q, k)
    return C, bracket_table(C)


@pytest.mark.parametrize("q,k", PAIRS_100)
def test_table_matches_scalar_bracket(q, k):
    C, T = _table(q, k)
    F = C.field
    rng = np.random.default_rng(q * 1000 + k)
    for a, c in zip(rng.integers(0, F.n, 30), rng.integers(0, F.q, 30)):
        assert T[a, c] == bracket(C, int(a), int(c))
    assert np.array_equal(T[1 % F.n], bracket_row(C, 1 % F.n))


@pytest.mark.parametrize("q,k", PAIRS_100)
def test_bracket_symmetries(q, k):
    C, T = _table(q, k)
    F = C.field
    n, m = F.n, C.m
    A, Cc = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")  # a, c in F*
    base = T[:, :n]
    # phi generates Phi, so shifting a or c by phi covers every psi, chi
    assert np.array_equal(T[(A + m) % n, Cc], base)
    assert np.array_equal(T[A, (Cc + m) % n], base)
    assert np.array_equal(base.T, base)
    assert np.array_equal(T[(F.half - A + Cc) % n, (-A) % n], base)


@pytest.mark.parametrize("q,k", PAIRS_100)
def test_nonzero_bracket_criterion(q, k):
    C, T = _table(q, k)
    F = C.field
    for c in range(F.q):
        hits = set()
        for psi in C.elements:
            if psi != c:
                d = F.sub(psi, c)
                hits.update(F.mul(mu, d) for mu in C.elements)
        predicted = np.array([a in hits for a in range(F.n)])
        assert np.array_equal(T[:, c] > 0, predicted)


def _two_point_cosets(C):
    """Coset indices (a mod m, c mod m) with a ∈ Phi c_{j,i} and c ∈ Phi c_{j,j-i}, i != j."""
    m = C.m
    return {(c_ji(C, j, i) % m, c_ji(C, j, j - i) % m)
            for j in range(1, C.k) for i in range(1, C.k) if i != j}


@pytest.mark.parametrize("q,k", PAIRS_100)
def test_two_point_criterion(q, k):
    C, T = _table(q, k)
    F = C.field
    m = C.m
    cosets = np.zeros((m, m), dtype=bool)
    for x, y in _two_point_cosets(C):
        cosets[x, y] = True
    logs = np.arange(F.n)
    predicted = cosets[(logs % m)[:, None], (logs % m)[None, :]]
    assert np.array_equal(T[:, :F.n] >= 2, predicted)
    if is_circular(C).circular:
        assert np.array_equal(T[:, :F.n] == 2, predicted)


@pytest.mark.parametrize("q,k", CIRCULAR_200)
def test_bracket_at_one_case_table(q, k):
    C = ctx(q, k)
    row = bracket_row(C, C.field.one)
    # [a, 1] for all a: use the symmetry [a, 1] = [1, a]
    for a in range(C.field.n):
        assert row[a] == bracket_a1_closed_form(C, a)


@pytest.mark.parametrize("q,k", CIRCULAR_200)
def test_aggregate_closed_forms(q, k):
    C = ctx(q, k)
    agg = aggregates(C, circular=True)
    assert agg.s == agg.s_closed and agg.t == agg.t_closed


@pytest.mark.parametrize("q,k", PAIRS_100)
def test_aggregate_bounds(q, k):
    C = ctx(q, k)
    s, t = compute_s(C), compute_t(C)
    assert 0 <= t <= k
    # distinct translates of Phi share at most k - 1 points; at most 2 when circular
    assert 0 <= s <= (k - 1) ** 2
    if is_circular(C).circular:
        assert s <= 2 * (k - 1)


def _cyclotomic_brute(C, h, ell):
    F = C.field
    n, m, k = F.n, C.m, C.k
    count = 0
    for u in range(k):
        for v in range(k):
            if F.add((m * u + h) % n, F.one) == (m * v + ell) % n:
                count += 1
    return count


@pytest.mark.parametrize("q,k", PAIRS_100)
def test_cyclotomic_numbers_by_brute_force(q, k):
    C = ctx(q, k)
    for h in range(C.m + 1):
        for ell in range(C.m + 1):
            assert cyclotomic_number(C, h, ell) == _cyclotomic_brute(C, h, ell)


@pytest.mark.parametrize("q,k", PAIRS_100)
def test_dickson_identities(q, k):
    C, T = _table(q, k)
    F = C.field
    for c in range(F.n):
        inside = C.contains(c)
        assert int(T[:C.m, c].sum()) == (k - 1 if inside else k)
        assert int(T[:, c].sum()) == (k * (k - 1) if inside else k * k)
    assert dickson_sums(C, F.one) == (k - 1, k * (k - 1))


@settings(max_examples=100, deadline=None)
@given(qk=st.sampled_from([(q, k) for q, k in ferrero_pairs(400)]), data=st.data())
def test_bracket_backend_invariance(qk, data):
    q, k = qk
    D, P = ctx(q, k), ctx(q, k, "poly")
    a = data.draw(st.integers(1, q - 1))
    c = data.draw(st.integers(0, q - 1))
    assert bracket(D, D.field.from_int(a), D.field.from_int(c)) == bracket(P, P.field.from_int(a), P.field.from_int(c))


def test_bracket_multisets_agree_between_backends():
    for q, k in [(64, 7), (81, 5), (125, 31), (243, 11)]:
        D, P = ctx(q, k), ctx(q, k, "poly")
        dense_vals = sorted(int(v) for v in bracket_row(D, D.field.from_int(3)))
        poly_vals = sorted(bracket(P, P.field.from_int(3), P.field.from_int(c)) for c in range(q))
        assert dense_vals == poly_vals


def test_generator_choice_does_not_matter():
    F = ctx(13, 4).field
    a = SubgroupCtx(F, 4, phi=F.from_int(8))
    b = SubgroupCtx(F, 4, phi=F.from_int(5))
    assert compute_s(a) == compute_s(b) == 5


@pytest.mark.parametrize("q,k", [(q, k) for q, k in ferrero_pairs(300)][::7] + [(5, 4), (4, 3)])
def test_vectorized_intersection_sizes(q, k):
    C = ctx(q, k)
    scalar = [intersection_size(C, j) for j in range(1, k)]
    assert intersection_sizes(C) == scalar
    assert intersection_sizes(C, chunk=k) == scalar
    # the sparse backend picks its own generator, so only the multiset must match
    assert sorted(intersection_sizes(ctx(q, k, "poly"))) == sorted(scalar)
