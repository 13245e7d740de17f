"""Arithmetic in GF(p^e) and in univariate polynomials over it.

Field elements are integers in ``[0, q)`` whose base-``p`` digits are the
coefficients of the element's polynomial representative (lowest digit = constant
term). Polynomials over the field are tuples of elements, lowest degree first,
with no trailing zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ArithmeticFieldError, InvalidInputError

Poly = tuple


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


# -- polynomials over the prime field, used only to set up the extension field


def _pp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mod(a, b, p):
    a = _pp_trim(a)
    b = _pp_trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        a = _pp_trim(a)
    return a


def _pp_is_irreducible(coeffs, p) -> bool:
    e = len(coeffs) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    for deg in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            divisor = list(tail) + [1]
            if not _pp_mod(coeffs, divisor, p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible polynomial of degree ``e`` over GF(p) with the smallest integer code."""
    for code in range(p**e, 2 * p**e):
        digits = []
        x = code
        for _ in range(e + 1):
            x, r = divmod(x, p)
            digits.append(r)
        if digits[-1] == 1 and _pp_is_irreducible(digits, p):
            return tuple(digits)
    raise InvalidInputError(f"no irreducible polynomial of degree {e} over GF({p})")


class FieldSpec:
    """The finite field GF(p^e) defined by an irreducible modulus."""

    def __init__(self, p: int, e: int = 1, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise InvalidInputError(f"characteristic {p} is not prime")
        if e < 1:
            raise InvalidInputError("extension degree must be >= 1")
        if p**e > 2**32:
            raise InvalidInputError("fields larger than 2^32 are not supported")
        if modulus is None:
            modulus = least_irreducible(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise InvalidInputError("modulus must be monic of degree e")
        if not _pp_is_irreducible(modulus, p):
            raise InvalidInputError(f"modulus {modulus} is reducible over GF({p})")
        self.p, self.e, self.modulus = p, e, modulus
        self.q = p**e
        self._build_tables()

    def __repr__(self):
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={self.modulus})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    # -- table setup

    def _digits(self, x):
        out = []
        for _ in range(self.e):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def _undigits(self, digits):
        x = 0
        for d in reversed(digits):
            x = x * self.p + d
        return x

    def _slow_mul(self, a, b):
        p, e = self.p, self.e
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(self._digits(a)):
            if ai:
                for j, bj in enumerate(self._digits(b)):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        red = _pp_mod(prod, self.modulus, p) if len(_pp_trim(prod)) > e else _pp_trim(prod)
        red = red + [0] * (e - len(red))
        return self._undigits(red)

    def _build_tables(self):
        q = self.q
        order = q - 1
        for g in range(1, q):
            exp = [1] * order
            x = 1
            ok = True
            for i in range(1, order):
                x = self._slow_mul(x, g)
                if x == 1:
                    ok = False
                    break
                exp[i] = x
            if ok:
                break
        self.generator = g if q > 2 else 1
        self.exp = np.array(exp + exp, dtype=np.int64)
        self.log = np.zeros(q, dtype=np.int64)
        self.log[self.exp[:order]] = np.arange(order)
        self._exp_list = self.exp.tolist()
        self._log_list = self.log.tolist()

    # -- scalar arithmetic

    def elements(self) -> range:
        """Field elements in canonical (integer) order."""
        return range(self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise InvalidInputError(f"{a} is not an element of GF({self.q})")
        return a

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        return self._undigits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.e == 1:
            return -a % self.p
        return self._undigits([-x % self.p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_list[self._log_list[a] + self._log_list[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ArithmeticFieldError("inverse of zero")
        return self._exp_list[(self.q - 1 - self._log_list[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ArithmeticFieldError("division by zero")
        if a == 0:
            return 0
        return self._exp_list[(self._log_list[a] - self._log_list[b]) % (self.q - 1)]

    def pow(self, a: int, n: int) -> int:
        if n == 0:
            return 1
        if a == 0:
            if n < 0:
                raise ArithmeticFieldError("zero to a negative power")
            return 0
        return self._exp_list[(self._log_list[a] * n) % (self.q - 1)]

    # -- vector arithmetic (numpy int64 arrays)

    def vadd(self, a: np.ndarray, b) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.e == 1:
            return (a + b) % self.p
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = np.zeros(a.shape, dtype=np.int64)
        scale = 1
        for _ in range(self.e):
            out += ((a // scale + b // scale) % self.p) * scale
            scale *= self.p
        return out

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return a
        return self.vadd(np.zeros_like(a), -1 * a) if self.e == 1 else self._vneg_digits(a)

    def _vneg_digits(self, a):
        out = np.zeros_like(a)
        scale = 1
        for _ in range(self.e):
            out += ((-(a // scale)) % self.p) * scale
            scale *= self.p
        return out

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(np.asarray(b, dtype=np.int64)))

    def vmul(self, a: np.ndarray, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)


def field_arithmetic(field: FieldSpec, a: int, b: int | None, op: str) -> int:
    """Dispatch helper: ``op`` is one of add, sub, mul, div, inv."""
    field.check(a)
    if op == "inv":
        return field.inv(a)
    field.check(b)
    ops = {"add": field.add, "sub": field.sub, "mul": field.mul, "div": field.div}
    if op not in ops:
        raise InvalidInputError(f"unknown field operation {op!r}")
    return ops[op](a, b)


@lru_cache(maxsize=None)
def gf(q: int) -> FieldSpec:
    """The default field of order ``q`` (a prime power)."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    e, x = 0, q
    while x % p == 0:
        x //= p
        e += 1
    if x != 1 or not _is_prime(p):
        raise InvalidInputError(f"{q} is not a prime power")
    return FieldSpec(p, e)


# ---------------------------------------------------------------------------
# polynomials over the field


def poly_trim(a: Iterable[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_deg(a: Poly) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(poly_trim(a)) - 1


def poly_add(F: FieldSpec, a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return poly_trim(F.add(x, y) for x, y in zip(a, b))


def poly_sub(F: FieldSpec, a: Poly, b: Poly) -> Poly:
    return poly_add(F, a, tuple(F.neg(x) for x in b))


def poly_scale(F: FieldSpec, a: Poly, c: int) -> Poly:
    return poly_trim(F.mul(x, c) for x in a)


def poly_mul(F: FieldSpec, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    exp, log = F._exp_list, F._log_list
    out = [0] * (len(a) + len(b) - 1)
    lb = [(j, log[y]) for j, y in enumerate(b) if y]
    xor = F.p == 2
    for i, x in enumerate(a):
        if x:
            lx = log[x]
            for j, ly in lb:
                prod = exp[lx + ly]
                out[i + j] = out[i + j] ^ prod if xor else F.add(out[i + j], prod)
    return poly_trim(out)


def poly_divmod(F: FieldSpec, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    b = poly_trim(b)
    if not b:
        raise ArithmeticFieldError("polynomial division by zero")
    rem = list(poly_trim(a))
    if len(rem) < len(b):
        return (), tuple(rem)
    exp, log = F._exp_list, F._log_list
    quot = [0] * (len(rem) - len(b) + 1)
    lead_inv = F.inv(b[-1])
    lb = [(i, log[bc]) for i, bc in enumerate(b) if bc]
    xor = F.p == 2
    for shift in range(len(rem) - len(b), -1, -1):
        coef = F.mul(rem[shift + len(b) - 1], lead_inv)
        quot[shift] = coef
        if coef:
            lc = log[coef]
            for i, li in lb:
                prod = exp[lc + li]
                rem[shift + i] = rem[shift + i] ^ prod if xor else F.sub(rem[shift + i], prod)
    return poly_trim(quot), poly_trim(rem[: len(b) - 1])


def poly_eval(F: FieldSpec, a: Poly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_eval_many(F: FieldSpec, a: Poly, xs: Sequence[int]) -> list[int]:
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros(len(xs), dtype=np.int64)
    for c in reversed(a):
        acc = F.vadd(F.vmul(acc, xs), c)
    return acc.tolist()


def poly_from_roots(F: FieldSpec, roots: Iterable[int]) -> Poly:
    out: Poly = (1,)
    for r in roots:
        out = poly_mul(F, out, (F.neg(r), 1))
    return out


def lagrange(F: FieldSpec, points: Sequence[tuple[int, int]]) -> Poly:
    """Unique polynomial of degree < len(points) through ``points``."""
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise InvalidInputError("interpolation points must have distinct x")
    result: Poly = ()
    full = poly_from_roots(F, xs)
    for x, y in points:
        if not y:
            continue
        basis, rem = poly_divmod(F, full, (F.neg(x), 1))
        denom = poly_eval(F, basis, x)
        result = poly_add(F, result, poly_scale(F, basis, F.div(y, denom)))
    return result


def poly_interpolate(F: FieldSpec, points: Sequence[tuple[int, int]], d: int) -> Poly | None:
    """Polynomial of degree < ``d`` through every point, or ``None`` if none exists."""
    points = [(F.check(x), F.check(y)) for x, y in points]
    if len(points) < d:
        raise InvalidInputError(f"need at least {d} points, got {len(points)}")
    poly = lagrange(F, points)
    return poly if len(poly) <= d else None
