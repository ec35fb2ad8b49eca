"""The order-k multiplicative subgroup Phi of GF(q) and related elements."""

from __future__ import annotations

from ferro.ff import DenseField, Field, FieldError


class SubgroupCtx:
    """Phi = <phi> of order k inside a field context.

    ``elements[i]`` is phi^i (raw encoding).  Membership is tested by k-th
    powering, which works in either backend.  Immutable after construction.
    """

    def __init__(self, field: Field, k: int, phi=None):
        if k < 3:
            raise FieldError(f"subgroup order must be >= 3, got {k}")
        field.check_subgroup_order(k)
        self.field = field
        self.k = k
        self.m = (field.q - 1) // k
        if phi is None:
            phi = field.find_element_of_order(k)
        elif not field.has_exact_order(phi, k):
            raise FieldError(f"given generator does not have order {k}")
        self.phi = phi
        els = [field.one]
        for _ in range(k - 1):
            els.append(field.mul(els[-1], phi))
        self.elements = tuple(els)
        self.element_set = frozenset(els)
        if len(self.element_set) != k:
            raise FieldError("generator powers are not distinct")  # pragma: no cover
        self.minus_one = field.neg(field.one)

    def __repr__(self):
        return f"SubgroupCtx({self.field}, k={self.k})"

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def p(self) -> int:
        return self.field.p

    def contains(self, x) -> bool:
        if x == self.field.zero:
            return False
        return self.field.pow(x, self.k) == self.field.one

    def phi_pow(self, i: int):
        return self.elements[i % self.k]

    def nontrivial(self):
        """Phi without the identity."""
        return self.elements[1:]


def subgroup(field: Field, k: int) -> SubgroupCtx:
    return SubgroupCtx(field, k)


def c_ji(ctx: SubgroupCtx, j: int, i: int):
    """(phi^j - 1)^-1 (phi^i - 1), indices taken mod k."""
    j %= ctx.k
    i %= ctx.k
    if i == 0 or j == 0:
        raise ValueError("c_ji needs indices not divisible by k")
    F = ctx.field
    num = F.sub(ctx.elements[i], F.one)
    den = F.sub(ctx.elements[j], F.one)
    return F.mul(F.inv(den), num)


def coset_label(ctx: SubgroupCtx, a):
    """Canonical representative of Phi*a: the member with smallest integer encoding."""
    F = ctx.field
    if a == F.zero:
        raise ValueError("zero lies in no coset of Phi")
    return min((F.mul(mu, a) for mu in ctx.elements), key=F.to_int)


def same_coset(ctx: SubgroupCtx, a, b) -> bool:
    F = ctx.field
    if a == F.zero or b == F.zero:
        raise ValueError("same_coset needs nonzero elements")
    return ctx.contains(F.mul(F.inv(a), b))


def two_in_phi(ctx: SubgroupCtx) -> bool:
    # In characteristic 2 the element 2 is zero; callers never rely on it there.
    if ctx.p == 2:
        return False
    return ctx.contains(ctx.field.scalar(2))


def minus_one_in_phi(ctx: SubgroupCtx) -> bool:
    return ctx.contains(ctx.minus_one)


def coset_representatives(ctx: SubgroupCtx) -> list:
    """zeta^0, ..., zeta^(m-1); dense fields only."""
    F = ctx.field
    if not isinstance(F, DenseField):
        raise FieldError("coset representatives need a dense field")
    return list(range(ctx.m))
