"""Exact scalar arithmetic: arbitrary-precision rationals and cyclotomic fields.

Rationals are `fractions.Fraction` (always stored reduced, positive
denominator, courtesy of the stdlib).  Root-of-unity arithmetic happens in
Q(zeta_n), whose elements are kept in canonical form modulo the n-th
cyclotomic polynomial, so equality of field elements is coefficient
comparison.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

Rat = Fraction


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    """Divide integer polynomials known to divide exactly (constant term first)."""
    num = list(num)
    deg_n, deg_d = len(num) - 1, len(den) - 1
    out = [0] * (deg_n - deg_d + 1)
    for i in range(deg_n - deg_d, -1, -1):
        c = num[i + deg_d]
        if c % den[deg_d] != 0:
            raise ArithmeticError("non-exact polynomial division")
        q = c // den[deg_d]
        out[i] = q
        for j, dj in enumerate(den):
            num[i + j] -= q * dj
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant term first."""
    if n < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _polydiv_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


class CycField:
    """The cyclotomic field Q(zeta_n), zeta_n a fixed primitive n-th root of unity."""

    _cache: dict[int, "CycField"] = {}

    def __new__(cls, n: int):
        if n in cls._cache:
            return cls._cache[n]
        self = object.__new__(cls)
        cls._cache[n] = self
        self.n = n
        mod = cyclotomic_polynomial(n)
        self.degree = len(mod) - 1
        # x^degree = -(lower part of Phi_n), then x^(degree+t) by shifting.
        self._mod_tail = tuple(Fraction(-c) for c in mod[:-1])
        rows = [self._mod_tail]
        for _ in range(self.degree - 2):
            prev = rows[-1]
            shifted = [Fraction(0)] + list(prev[:-1])
            top = prev[-1]
            if top:
                shifted = [s + top * m for s, m in zip(shifted, self._mod_tail)]
            rows.append(tuple(shifted))
        self._red_rows = rows  # reduction of x^(degree+t), t = 0 .. degree-2
        self._zeta_pows = None
        return self

    def __repr__(self):
        return f"CycField({self.n})"

    def _reduce(self, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
        deg = self.degree
        out = list(coeffs[:deg]) + [Fraction(0)] * max(0, deg - len(coeffs))
        for t in range(len(coeffs) - 1, deg - 1, -1):
            c = coeffs[t]
            if c:
                row = self._red_rows[t - deg]
                for j, rj in enumerate(row):
                    if rj:
                        out[j] += c * rj
        return tuple(out)

    def zero(self) -> "Cyc":
        return Cyc(self, (Fraction(0),) * self.degree)

    def one(self) -> "Cyc":
        return self.from_rat(1)

    def from_rat(self, r) -> "Cyc":
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(r)
        return Cyc(self, tuple(c))

    def zeta(self, e: int = 1) -> "Cyc":
        """zeta_n^e, reduced."""
        if self._zeta_pows is None:
            pows = []
            cur = [Fraction(0)] * self.degree
            cur[0] = Fraction(1)
            for _ in range(self.n):
                pows.append(tuple(cur))
                nxt = [Fraction(0)] + cur[:-1]
                top = cur[-1]
                if top:
                    nxt = self._reduce(nxt + [top])
                cur = list(nxt)
            self._zeta_pows = pows
        return Cyc(self, self._zeta_pows[e % self.n])


class Cyc:
    """An element of Q(zeta_n) in canonical reduced form."""

    __slots__ = ("field", "c")

    def __init__(self, field: CycField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.c = coeffs

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a rational number: {self}")
        return self.c[0]

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.field is not self.field:
                raise ValueError("mixed cyclotomic orders")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rat(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.field, tuple(-a for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.field.zero()
            return Cyc(self.field, tuple(a * other for a in self.c))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        deg = self.field.degree
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return Cyc(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inv(self) -> "Cyc":
        """Field inverse via the extended Euclidean algorithm mod Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return self.field.from_rat(1 / self.c[0])
        mod = [Fraction(m) for m in cyclotomic_polynomial(self.field.n)]
        r0, r1 = mod, list(self.c)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, r = _polydivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _polysub(s0, _polymul(q, s1))
        # gcd is a nonzero constant since Phi_n is irreducible
        if max(i for i, c in enumerate(r0) if c) != 0:
            raise ArithmeticError("inverse failed: element not coprime to modulus")
        c0 = r0[0]
        res = [s / c0 for s in s0]
        return Cyc(self.field, self.field._reduce(res))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = self.field.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        if isinstance(other, Cyc):
            return self.field is other.field and self.c == other.c
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash((self.field.n, self.c))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, a in enumerate(self.c):
            if not a:
                continue
            if e == 0:
                parts.append(str(a))
            else:
                z = f"z{e}" if e > 1 else "z"
                parts.append(z if a == 1 else f"{a}*{z}")
        return " + ".join(parts)


def _polydivmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    db = max(i for i, c in enumerate(b) if c)
    lead = b[db]
    q = [Fraction(0)] * max(1, len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db]
        if c:
            f = c / lead
            q[i] = f
            for j in range(db + 1):
                a[i + j] -= f * b[j]
    while len(a) > 1 and not a[-1]:
        a.pop()
    return q, a


def _polymul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _polysub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    return [ai - (b[i] if i < len(b) else 0) for i, ai in enumerate(a)]


def lemma_root_sum(m: int) -> Cyc:
    """Sum of zeta^{-j} / (1 - zeta^{-j})^2 over j = 1..m-1, zeta a primitive m-th root.

    Evaluates exactly in Q(zeta_m); the value is the rational -(m^2-1)/12.
    """
    if m < 1:
        raise ValueError("m must be positive")
    field = CycField(m)
    total = field.zero()
    for j in range(1, m):
        z = field.zeta(-j)
        total = total + z * ((field.one() - z) ** (-2))
    return total
