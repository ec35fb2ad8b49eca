"""Finite field arithmetic over GF(p^r) with two interchangeable backends.

``PolyField`` stores elements as coefficient tuples modulo the lexicographically
smallest monic irreducible polynomial of degree r.  It touches only the elements
it is asked about, so it works for astronomically large q.

``DenseField`` is built on top of the same modulus and stores nonzero elements
as discrete-log indices with respect to a primitive element zeta.  Addition goes
through a Zech-logarithm table, and numpy-vectorized versions of add/mul/pow are
available for exhaustive enumeration.

Both backends share the integer encoding ``sum(c_i * p**i)`` of the coefficient
vector, so ``to_int``/``from_int`` agree between a dense field and a poly field
of the same order.

Field methods act on raw encodings (ints for the dense backend, tuples for the
poly backend).  ``field(n)`` wraps a value in an :class:`Elem` supporting the
usual operators for interactive use.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_DENSE_CAP = 1 << 24


class FieldError(ValueError):
    """Invalid field parameters or an impossible field operation."""


class FieldMismatchError(TypeError):
    """Operands belong to different field contexts."""


def dense_cap() -> int:
    env = os.environ.get("FERRO_DENSE_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise FieldError(f"FERRO_DENSE_CAP is not an integer: {env!r}") from None
    return DEFAULT_DENSE_CAP


# -- integer helpers ---------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, as ((prime, exponent), ...)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def multiplicative_order(a: int, n: int) -> int:
    """Order of a in (Z/nZ)*, by direct powering (n is small)."""
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    if n == 1:
        return 1
    x, e = a % n, 1
    while x != 1:
        x = x * a % n
        e += 1
    return e


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, r) with q = p**r, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = factorize(q)[0][0] if q < 1 << 62 else None
    if p is None:
        raise FieldError(f"{q} is too large to factor")
    r, t = 0, q
    while t % p == 0:
        t //= p
        r += 1
    if t != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, r


@dataclass(frozen=True)
class FieldSpec:
    p: int
    r: int = 1

    def __post_init__(self):
        if self.r < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.r}")
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")

    @property
    def q(self) -> int:
        return self.p ** self.r

    @classmethod
    def from_order(cls, q: int) -> "FieldSpec":
        return cls(*prime_power(q))

    def __str__(self):
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"


# -- dense polynomials over GF(p), coefficient lists low degree first --------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    """a mod f for monic-or-not f (leading coefficient inverted mod p)."""
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i in range(df + 1):
            a[shift + i] = (a[shift + i] - c * f[i]) % p
        _trim(a)
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        e >>= 1
        if e:
            base = _poly_mod(_poly_mul(base, base, p), f, p)
    return result


def _frobenius_powers(f: list[int], p: int, upto: int) -> list[list[int]]:
    """[x^(p^i) mod f for i in 0..upto]."""
    h = _poly_mod([0, 1], f, p)
    out = [h]
    for _ in range(upto):
        h = _poly_powmod(h, p, f, p)
        out.append(h)
    return out


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test: x^(p^r) = x mod f and gcd(x^(p^(r/l)) - x, f) = 1 for primes l | r."""
    f = _trim(list(f))
    r = len(f) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    frob = _frobenius_powers(f, p, r)
    x = _poly_mod([0, 1], f, p)
    if _poly_sub(frob[r], x, p):
        return False
    for ell in prime_divisors(r):
        g = _poly_gcd(_poly_sub(frob[r // ell], x, p), f, p)
        if len(g) != 1:
            return False
    return True


def _has_small_factor(f: list[int], p: int) -> bool:
    # Ben-Or style early exit: a factor of degree i divides x^(p^i) - x.
    r = len(f) - 1
    x = [0, 1]
    h = x
    for _ in range(1, r // 2 + 1):
        h = _poly_powmod(h, p, f, p)
        if len(_poly_gcd(_poly_sub(h, x, p), f, p)) != 1:
            return True
    return False


@lru_cache(maxsize=512)
def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r over GF(p).

    Order is by (c_{r-1}, ..., c_0), i.e. by the integer sum(c_i p^i).
    Returned low degree first, including the leading 1.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if r == 1:
        return (0, 1)
    for n in range(p ** r):
        coeffs = [(n // p ** i) % p for i in range(r)]
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if _has_small_factor(f, p):
            continue
        if is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {r} over GF({p})")  # pragma: no cover


def format_poly(f, var: str = "x") -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "1" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if i and c == 1:
            terms.append(mono)
        elif i:
            terms.append(f"{c}*{mono}")
        else:
            terms.append(str(c))
    return " + ".join(terms) or "0"


# -- element wrapper ----------------------------------------------------------


class Elem:
    """A field element bound to its context; supports +, -, *, /, ** and ==."""

    __slots__ = ("field", "value")

    def __init__(self, field: "Field", value):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, Elem):
            if other.field is not self.field:
                raise FieldMismatchError(f"cannot combine elements of {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.scalar(other)
        return NotImplemented

    def _wrap(self, v):
        return Elem(self.field, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, self.field.inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(o, self.field.inv(self.value)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self) -> "Elem":
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == self.field.zero

    def __eq__(self, other):
        if isinstance(other, Elem):
            return other.field is self.field and other.value == self.value
        if isinstance(other, int):
            return self.value == self.field.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.field.to_int(self.value)

    def __repr__(self):
        return f"{self.field}({self.field.to_int(self.value)})"


# -- backends -----------------------------------------------------------------


class Field:
    """Common interface; subclasses define zero/one and raw arithmetic."""

    backend = "abstract"
    zero = None
    one = None

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.r = spec.r
        self.q = spec.q

    def __call__(self, n) -> Elem:
        if isinstance(n, Elem):
            if n.field is not self:
                raise FieldMismatchError(f"element of {n.field} given to {self}")
            return n
        return Elem(self, self.from_int(n))

    def __repr__(self):
        return f"{type(self).__name__}({self.spec})"

    def __str__(self):
        return str(self.spec)

    def _check_encoding(self, n: int) -> int:
        if self.r == 1:
            return n % self.p
        if not 0 <= n < self.q:
            raise FieldError(f"{n} is not an element encoding of {self} (expected 0..{self.q - 1})")
        return n

    def scalar(self, n: int):
        """The integer n as the field element n * 1."""
        return self.from_int(n % self.p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        """Square-and-multiply; negative exponents go through inv."""
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def order_of(self, a, factors_of_q_minus_1=None) -> int:
        """Multiplicative order of a; needs the factorization of q-1 (small q)."""
        if a == self.zero:
            raise FieldError("zero has no multiplicative order")
        n = self.q - 1
        factors = factors_of_q_minus_1 or factorize(n)
        order = n
        for ell, e in factors:
            for _ in range(e):
                if self.pow(a, order // ell) == self.one:
                    order //= ell
                else:
                    break
        return order

    def has_exact_order(self, a, k: int) -> bool:
        if self.pow(a, k) != self.one:
            return False
        return all(self.pow(a, k // ell) != self.one for ell in prime_divisors(k))

    def find_element_of_order(self, k: int):
        raise NotImplementedError

    def check_subgroup_order(self, k: int):
        if k < 1 or (self.q - 1) % k:
            raise FieldError(f"k={k} does not divide q-1={self.q - 1} in {self}")


class PolyField(Field):
    """GF(p^r) as GF(p)[x]/(f) with coefficient-tuple elements (low degree first)."""

    backend = "poly"

    def __init__(self, spec: FieldSpec, modulus=None):
        super().__init__(spec)
        if modulus is None:
            modulus = smallest_irreducible(spec.p, spec.r)
        modulus = tuple(c % spec.p for c in modulus)
        if len(modulus) != spec.r + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree r")
        if not is_irreducible(list(modulus), spec.p):
            raise FieldError(f"{format_poly(modulus)} is reducible over GF({spec.p})")
        self.modulus = modulus
        self.zero = (0,) * spec.r
        self.one = (1,) + (0,) * (spec.r - 1)
        self._tail = [(-c) % spec.p for c in modulus[:-1]]  # x^r = sum tail_i x^i

    def from_int(self, n: int):
        n = self._check_encoding(n)
        p = self.p
        out = []
        for _ in range(self.r):
            n, c = divmod(n, p)
            out.append(c)
        return tuple(out)

    def to_int(self, a) -> int:
        n = 0
        for c in reversed(a):
            n = n * self.p + c
        return n

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, r = self.p, self.r
        if r == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        tail = self._tail
        for d in range(2 * r - 2, r - 1, -1):
            c = prod[d] % p
            if c:
                s = d - r
                for i in range(r):
                    prod[s + i] += c * tail[i]
        return tuple(c % p for c in prod[:r])

    def pow(self, a, e: int):
        if not any(a[1:]):
            # prime-subfield element: reduce the exponent mod p - 1
            c = a[0]
            if c == 0:
                return super().pow(a, e)
            return (pow(c, e % (self.p - 1), self.p),) + self.zero[1:]
        return super().pow(a, e)

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.r == 1:
            return (pow(a[0], -1, self.p),)
        # extended Euclid on lists
        p = self.p
        f = list(self.modulus)
        r0, r1 = f, _trim(list(a))
        s0, s1 = [], [1]
        while r1:
            qt, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(qt, s1, p), p)
        inv_c = pow(r0[0], -1, p)
        s0 = [c * inv_c % p for c in s0]
        s0 = _poly_mod(s0, f, p)
        return tuple(s0 + [0] * (self.r - len(s0)))

    def elements(self):
        for n in range(self.q):
            yield self.from_int(n)

    def find_element_of_order(self, k: int):
        """First y = x^((q-1)/k) of exact order k, x over nonzero encodings in order."""
        self.check_subgroup_order(k)
        e = (self.q - 1) // k
        n = 1
        while n < self.q:
            y = self.pow(self.from_int(n), e)
            if self.has_exact_order(y, k):
                return y
            n += 1
        raise FieldError(f"no element of order {k} in {self}")  # pragma: no cover


def _poly_divmod(a, b, p):
    a = _trim(list(a))
    b = _trim(list(b))
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    qt = [0] * max(len(a) - db, 1)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        qt[shift] = c
        for i in range(db + 1):
            a[shift + i] = (a[shift + i] - c * b[i]) % p
        _trim(a)
    return _trim(qt), a


def build_poly_field(spec: FieldSpec) -> PolyField:
    return PolyField(spec)


class DenseField(Field):
    """GF(q) in discrete-log form: nonzero zeta^n is stored as n, zero as q-1.

    Tables (numpy int64):
      exp[n]  integer encoding of zeta^n, n in [0, q-2]
      log[v]  inverse of exp; log[0] = ZERO
      zech[n] Z(n) with zeta^Z(n) = zeta^n + 1, or ZERO when zeta^n = -1
    """

    backend = "dense"

    def __init__(self, spec: FieldSpec, cap: int | None = None):
        super().__init__(spec)
        cap = dense_cap() if cap is None else cap
        if spec.q > cap:
            raise FieldError(f"q={spec.q} exceeds the dense cap {cap}")
        self.poly = PolyField(spec)
        self.modulus = self.poly.modulus
        q = self.q
        n = q - 1
        self.n = n
        self.zero = q - 1
        self.one = 0
        self.ZERO = q - 1
        self.q_minus_1_factors = factorize(n)
        self.zeta_int = self._find_primitive()
        self.exp = self._exp_table()
        log = np.full(q, self.ZERO, dtype=np.int64)
        log[self.exp] = np.arange(n, dtype=np.int64)
        self.log = log
        if (log[self.exp] != np.arange(n)).any() or np.unique(self.exp).size != n:
            raise FieldError("primitive element search produced a non-generator")  # pragma: no cover
        self.zech = self._zech_table()
        self.half = n // 2 if self.p != 2 else 0  # log of -1
        for arr in (self.exp, self.log, self.zech):
            arr.flags.writeable = False

    def _find_primitive(self) -> int:
        poly = self.poly
        if self.q == 2:
            return 1
        for cand in range(2, self.q):
            a = poly.from_int(cand)
            if all(poly.pow(a, self.n // ell) != poly.one for ell, _ in self.q_minus_1_factors):
                return cand
        raise FieldError(f"no primitive element found in {self}")  # pragma: no cover

    def _exp_table(self) -> np.ndarray:
        p, r, n = self.p, self.r, self.n
        poly = self.poly
        zeta = poly.from_int(self.zeta_int)
        block = max(1, min(n, math.isqrt(n) + 1))
        first = [poly.one]
        for _ in range(block - 1):
            first.append(poly.mul(first[-1], zeta))
        digits = np.array(first, dtype=np.int64).reshape(block, r)
        step = poly.pow(zeta, block)
        chunks = [digits]
        total = block
        cur = digits
        while total < n:
            cur = _vec_mul_const(cur, step, self.modulus, p)
            chunks.append(cur)
            total += block
        all_digits = np.concatenate(chunks)[:n]
        weights = np.array([p ** i for i in range(r)], dtype=np.int64)
        return all_digits @ weights

    def _zech_table(self) -> np.ndarray:
        p = self.p
        v = self.exp
        c0 = v % p
        plus_one = v - c0 + (c0 + 1) % p
        return self.log[plus_one].copy()

    # raw scalar arithmetic
    def from_int(self, n: int) -> int:
        return int(self.log[self._check_encoding(n)])

    def to_int(self, a: int) -> int:
        return 0 if a == self.ZERO else int(self.exp[a])

    def add(self, a: int, b: int) -> int:
        Z = self.ZERO
        if a == Z:
            return b
        if b == Z:
            return a
        z = int(self.zech[(b - a) % self.n])
        return Z if z == Z else (a + z) % self.n

    def neg(self, a: int) -> int:
        return a if a == self.ZERO else (a + self.half) % self.n

    def mul(self, a: int, b: int) -> int:
        if a == self.ZERO or b == self.ZERO:
            return self.ZERO
        return (a + b) % self.n

    def inv(self, a: int) -> int:
        if a == self.ZERO:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        return (-a) % self.n

    def pow(self, a: int, e: int) -> int:
        if a == self.ZERO:
            if e > 0:
                return self.ZERO
            if e == 0:
                return 0
            raise ZeroDivisionError(f"negative power of zero in {self}")
        return a * e % self.n

    def elements(self):
        yield self.ZERO
        yield from range(self.n)

    def zeta(self) -> int:
        return 1 % self.n if self.n > 1 else 0

    def find_element_of_order(self, k: int) -> int:
        self.check_subgroup_order(k)
        return self.n // k % self.n if self.n > 1 else 0

    # numpy-vectorized arithmetic over arrays of raw values
    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        Z, n = self.ZERO, self.n
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        z = self.zech[(b - a) % n]
        out = np.where(z == Z, Z, (a + z) % n)
        out = np.where(a == Z, b, out)
        return np.where(b == Z, a, out)

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        Z = self.ZERO
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return np.where((a == Z) | (b == Z), Z, (a + b) % self.n)

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        if e < 0:
            raise ValueError("vpow expects a nonnegative exponent")
        a = np.asarray(a, dtype=np.int64)
        zero_result = self.ZERO if e > 0 else 0
        return np.where(a == self.ZERO, zero_result, a * (e % self.n) % self.n)


def _vec_mul_const(digits: np.ndarray, c, modulus, p: int) -> np.ndarray:
    """Multiply each row of a (N, r) coefficient array by the constant poly c mod f."""
    rows, r = digits.shape
    prod = np.zeros((rows, 2 * r - 1), dtype=np.int64)
    for j, cj in enumerate(c):
        if cj:
            prod[:, j:j + r] += digits * cj
    prod %= p
    tail = [(-x) % p for x in modulus[:-1]]
    for d in range(2 * r - 2, r - 1, -1):
        top = prod[:, d]
        s = d - r
        for i in range(r):
            if tail[i]:
                prod[:, s + i] = (prod[:, s + i] + top * tail[i]) % p
    return prod[:, :r] % p


def build_dense_field(spec: FieldSpec, cap: int | None = None) -> DenseField:
    return DenseField(spec, cap)


@lru_cache(maxsize=64)
def field_for(q: int, backend: str = "dense") -> Field:
    """Cached field context of order q for the given backend."""
    spec = FieldSpec.from_order(q)
    if backend == "dense":
        return DenseField(spec)
    if backend == "poly":
        return PolyField(spec)
    raise ValueError(f"unknown backend {backend!r}")
