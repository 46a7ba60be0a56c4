"""Exact scalars: rationals, cyclotomic field elements and polynomials in eps.

Rationals are plain :class:`fractions.Fraction` values.  The two other kinds
are small immutable classes that interoperate with ``int`` and ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


class ParseError(ValueError):
    """Malformed input; ``location`` says where."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {x!r}") from exc
    raise TypeError(f"cannot read {type(x).__name__} as a rational")


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# cyclotomic fields


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, constant first."""
    if m < 1:
        raise ValueError("order must be positive")
    from sympy import Poly, cyclotomic_poly, symbols

    x = symbols("x")
    coeffs = Poly(cyclotomic_poly(m, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def totient(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce_mod_phi(coeffs: list, m: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(m)
    k = len(phi) - 1
    c = [Fraction(v) for v in coeffs]
    # phi is monic, so long division is plain subtraction
    for top in range(len(c) - 1, k - 1, -1):
        lead = c[top]
        if lead:
            shift = top - k
            for i, p in enumerate(phi):
                c[shift + i] -= lead * p
    c = c[:k] + [Fraction(0)] * max(0, k - len(c))
    return tuple(c)


class Cyclotomic:
    """Element of Q(zeta_m), stored reduced modulo the m-th cyclotomic polynomial."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Iterable = ()):
        self.m = int(m)
        self.coeffs = _reduce_mod_phi(list(coeffs), self.m)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Cyclotomic":
        k %= m
        return cls(m, [0] * k + [1])

    @classmethod
    def from_rational(cls, m: int, x) -> "Cyclotomic":
        return cls(m, [to_rational(x)])

    def _lift(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.m != self.m:
                raise TypeError(f"cannot mix Q(zeta_{self.m}) and Q(zeta_{other.m})")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Cyclotomic(self.m, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return Cyclotomic(self.m, prod)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        from .linalg import solve

        k = len(self.coeffs)
        # column j holds self * zeta^j; solve for the vector mapping to 1
        cols = [(self * Cyclotomic.zeta(self.m, j)).coeffs if j else self.coeffs for j in range(k)]
        matrix = [[cols[j][i] for j in range(k)] for i in range(k)]
        rhs = [Fraction(1)] + [Fraction(0)] * (k - 1)
        x = solve(matrix, rhs)
        return Cyclotomic(self.m, x)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic(self.m, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self.m == other.m and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs == Cyclotomic(self.m, [other]).coeffs
        return NotImplemented

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.m, self.coeffs))

    def rational_value(self) -> Fraction | None:
        """The element as a Fraction when it lies in Q, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __repr__(self):
        return f"Cyclotomic({self.m}, [{', '.join(fmt_rational(c) for c in self.coeffs)}])"


# --------------------------------------------------------------------------
# polynomials in eps


def _trim(coeffs: Sequence) -> tuple[Fraction, ...]:
    c = [to_rational(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class EpsPoly:
    """Univariate polynomial in eps with rational coefficients, constant first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim(list(coeffs))

    @classmethod
    def eps(cls, k: int = 1) -> "EpsPoly":
        return cls([0] * k + [1])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    @staticmethod
    def _lift(other):
        if isinstance(other, EpsPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return EpsPoly([other])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        return EpsPoly([self.coeff(k) + o.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return EpsPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return EpsPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return EpsPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = EpsPoly([1])
        for _ in range(e):
            result = result * self
        return result

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.coeffs == o.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeff(0))
        return hash(("eps", self.coeffs))

    def __repr__(self):
        return f"EpsPoly([{', '.join(fmt_rational(c) for c in self.coeffs)}])"


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
