import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import ctx, ferrero_pairs
from ferro.brackets import bracket
from ferro.circularity import (
    CircularityVerdict,
    _collision_dense,
    collision_to_triple,
    field_for_pair,
    is_circular,
    is_circular_collision,
    is_circular_direct,
    is_circular_pair,
    prefilter_bound,
    prefilter_subfield,
    verify_witness,
)
from ferro.ff import FieldError, is_prime
from ferro.subgroup import SubgroupCtx


def brute_force_circular(C):
    """Definition: |Phi*a ∩ (Phi*b + c)| <= 2 for all a, b, c in F*."""
    F = C.field
    nonzero = list(range(F.n))
    for a, b, c in itertools.product(nonzero, repeat=3):
        left = {F.mul(mu, a) for mu in C.elements}
        right = {F.add(F.mul(mu, b), c) for mu in C.elements}
        if len(left & right) > 2:
            return False
    return True


def alternative_reading(C):
    """Collision rule where coincidences among diagonal pairs are all tolerated."""
    F = C.field
    one = F.one
    seen = {}
    for x in C.nontrivial():
        for y in C.nontrivial():
            seen.setdefault(F.mul(F.sub(x, one), F.sub(y, one)), []).append((x, y))
    for pairs in seen.values():
        unordered = {tuple(sorted(pr)) for pr in pairs}
        if len(unordered) > 1 and not all(x == y for x, y in unordered):
            return False
    return True


@pytest.mark.parametrize("q,k,expected", [(7, 3, True), (5, 4, False), (13, 4, True), (4, 3, True), (9, 4, True)])
def test_direct_examples(q, k, expected):
    v = is_circular_direct(ctx(q, k))
    assert v.circular is expected and v.method == "direct"
    if not expected:
        assert verify_witness(ctx(q, k), v)


def test_gf5_phi_plus_one():
    C = ctx(5, 4)
    assert bracket(C, C.field.one, C.field.one) == 3


@pytest.mark.parametrize("q,k", [(7, 3), (5, 4), (13, 4), (31, 5), (64, 9)])
def test_collision_examples_match_direct(q, k):
    for backend in ("dense", "poly"):
        v = is_circular_collision(ctx(q, k, backend))
        assert v.circular == is_circular_direct(ctx(q, k)).circular
        if not v.circular:
            assert verify_witness(ctx(q, k, backend), v)


def test_gf5_diagonal_collision_is_reported():
    # (3-1)^2 = (4-1)^2 = 4 in GF(5): two distinct diagonal pairs collide
    v = is_circular_collision(ctx(5, 4, "poly"))
    assert not v.circular
    assert v.witness["kind"] == "collision"


@pytest.mark.parametrize("p,k,expected", [(7, 6, False), (2, 3, True), (31, 35, True), (3, 4, True),
                                          (3, 10, True), (3, 8, False), (5, 4, False), (2, 4, False)])
def test_pair_examples(p, k, expected):
    assert is_circular_pair(p, k).circular is expected


def test_gcd_convention():
    v = is_circular_pair(3, 6)
    assert not v.circular and v.method == "gcd-convention"
    with pytest.raises(FieldError):
        is_circular_pair(9, 4)
    with pytest.raises(FieldError):
        is_circular_pair(5, 2)


def test_prefilter_examples():
    assert prefilter_subfield(3, 8).method == "prefilter-subfield"
    assert prefilter_subfield(3, 4) is None
    assert prefilter_subfield(2, 3) is None
    assert prefilter_subfield(7, 6) is not None
    assert prefilter_bound(13, 12).method == "prefilter-bound"
    assert prefilter_bound(7, 3) is None
    assert prefilter_bound(5, 4) is None
    with pytest.raises(FieldError):
        prefilter_bound(13, 5)


@pytest.mark.parametrize("q,k", [(q, k) for q, k in ferrero_pairs(40)])
def test_definition_matches_direct(q, k):
    C = ctx(q, k)
    assert brute_force_circular(C) == is_circular_direct(C).circular


@pytest.mark.parametrize("q,k", ferrero_pairs(250))
def test_methods_and_prefilters_agree(q, k):
    C = ctx(q, k)
    direct = is_circular_direct(C)
    collision = is_circular_collision(C)
    assert direct.circular == collision.circular
    assert alternative_reading(C) == direct.circular
    for v in (direct, collision):
        if not v.circular:
            assert verify_witness(C, v)
    for pre in (prefilter_subfield(C.p, k), prefilter_bound(q, k)):
        if pre is not None:
            assert not direct.circular


@pytest.mark.parametrize("q,k", [(q, k) for q, k in ferrero_pairs(2000) if k > 64][:40])
def test_vectorized_collision_path(q, k):
    # large k takes the numpy path; compare with the dictionary path on the poly backend
    dense_v = is_circular_collision(ctx(q, k))
    poly_v = is_circular_collision(ctx(q, k, "poly"))
    assert dense_v.circular == poly_v.circular
    if not dense_v.circular:
        assert verify_witness(ctx(q, k), dense_v)


@pytest.mark.parametrize("q,k", [(q, k) for q, k in ferrero_pairs(200)])
def test_vectorized_collision_small_k(q, k):
    C = ctx(q, k)
    assert _collision_dense(C).circular == is_circular_collision(C).circular


def test_collision_to_triple_rejects_swaps():
    C = ctx(13, 4, "poly")
    x, y = C.nontrivial()[:2]
    with pytest.raises(ValueError):
        collision_to_triple(C, ((x, y), (y, x)))


def test_forged_witnesses_fail():
    C = ctx(13, 4)
    forged = CircularityVerdict(False, "direct", 13, 4, q=13, witness={"kind": "triple", "a": 1, "b": 1, "c": 1})
    assert not verify_witness(C, forged)
    forged = CircularityVerdict(False, "collision", 13, 4, q=13, witness={"kind": "collision", "pairs": [[5, 8], [8, 5]]})
    assert not verify_witness(C, forged)
    assert not verify_witness(C, CircularityVerdict(True, "direct", 13, 4, q=13))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
@pytest.mark.parametrize("k", range(3, 13))
def test_r_independence(p, k):
    if k % p == 0:
        return
    verdicts = {is_circular_pair(p, k, "collision", multiple=mult).circular for mult in (1, 2)}
    assert len(verdicts) == 1


def test_field_for_pair():
    F = field_for_pair(2, 7)
    assert F.q == 8
    assert field_for_pair(2, 7, multiple=2).q == 64
    assert field_for_pair(2, 7, backend="dense").backend == "dense"
    with pytest.raises(ValueError):
        field_for_pair(2, 7, backend="gpu")


def test_unknown_method():
    with pytest.raises(ValueError):
        is_circular(ctx(13, 4), method="oracle")


def test_verdict_dict():
    v = is_circular_pair(5, 4)
    d = v.as_dict()
    assert d["circular"] is False and d["method"] == "prefilter-subfield"


def test_mersenne_rule():
    for k in (3, 5, 7, 13):
        p = 2 ** k - 1
        assert is_prime(p)
        assert is_circular_pair(p, k).circular


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_backends_agree_on_verdicts(data):
    # the dense and sparse backends must decide identically for q <= 2^16
    q, k = data.draw(st.sampled_from([(q, k) for q, k in ferrero_pairs(1 << 12) if k <= 200]))
    C_dense, C_poly = ctx(q, k), ctx(q, k, "poly")
    assert is_circular(C_dense).circular == is_circular(C_poly).circular


@pytest.mark.parametrize("q,k", [(2 ** 16, 17), (2 ** 16, 51), (3 ** 10, 11), (2 ** 15, 31), (5 ** 6, 7 * 3)])
def test_backends_agree_large(q, k):
    if (q - 1) % k:
        pytest.skip("k does not divide q - 1")
    from ferro.ff import DenseField, FieldSpec, PolyField
    spec = SubgroupCtx(PolyField(FieldSpec.from_order(q)), k)
    dense = SubgroupCtx(DenseField(FieldSpec.from_order(q)), k)
    assert is_circular(spec, prefilter=False).circular == is_circular(dense, prefilter=False).circular
