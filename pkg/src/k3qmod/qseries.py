"""Truncated Laurent series in ``q`` with exact rational coefficients.

A :class:`QSeries` stores the coefficients of ``q^v .. q^N``.  Everything
below ``q^v`` is known to be zero, everything above ``q^N`` is unknown.
Operations propagate this window honestly: nothing is ever padded with
zeros that were not actually computed.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Iterator, Sequence

__all__ = [
    "PrecisionError",
    "QSeries",
    "as_rational",
    "b_op",
    "dq",
    "u_op",
]


class PrecisionError(ArithmeticError):
    """Raised when an operation would leave no known coefficients, or when
    a requested coefficient lies outside the known window."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _to_integers(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for c in coeffs:
        if c.denominator != 1:
            den = lcm(den, c.denominator)
    if den == 1:
        return [c.numerator for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


class QSeries:
    """Immutable truncated Laurent series ``sum_{n=v}^{N} a_n q^n``."""

    __slots__ = ("_val", "_coeffs")

    def __init__(self, valuation: int, coeffs: Iterable):
        coeffs = tuple(as_rational(c) for c in coeffs)
        if not coeffs:
            raise PrecisionError("a series needs at least one known coefficient")
        self._val = int(valuation)
        self._coeffs = coeffs

    # -- constructors -------------------------------------------------

    @classmethod
    def from_dict(cls, terms: dict, order: int) -> QSeries:
        """Exact Laurent polynomial ``terms`` (exponent -> coefficient), known to ``order``."""
        lo = min((n for n, c in terms.items() if c != 0), default=0)
        lo = min(lo, order)
        return cls(lo, [terms.get(n, 0) for n in range(lo, order + 1)])

    @classmethod
    def monomial(cls, n: int, order: int, coeff=1) -> QSeries:
        if order < n:
            raise PrecisionError(f"q^{n} requested with order {order}")
        return cls(n, [coeff] + [0] * (order - n))

    @classmethod
    def constant(cls, c, order: int) -> QSeries:
        return cls.from_dict({0: c}, order)

    @classmethod
    def zero(cls, valuation: int, order: int) -> QSeries:
        if order < valuation:
            raise PrecisionError("empty window")
        return cls(valuation, [0] * (order - valuation + 1))

    # -- basic accessors ----------------------------------------------

    @property
    def valuation(self) -> int:
        return self._val

    @property
    def order(self) -> int:
        return self._val + len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if n > self.order:
            raise PrecisionError(f"coefficient of q^{n} unknown (order {self.order})")
        if n < self._val:
            return Fraction(0)
        return self._coeffs[n - self._val]

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return zip(range(self._val, self.order + 1), self._coeffs)

    def leading(self) -> tuple[int, Fraction] | None:
        """First nonzero term ``(n, a_n)``, or None for a zero series."""
        for n, c in self.items():
            if c:
                return n, c
        return None

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def truncate(self, order: int) -> QSeries:
        if order > self.order:
            raise PrecisionError(f"cannot extend order {self.order} to {order}")
        if order < self._val:
            raise PrecisionError("truncation leaves an empty window")
        return QSeries(self._val, self._coeffs[: order - self._val + 1])

    def normalized(self) -> QSeries:
        """Drop leading zeros (the zero series keeps only its top coefficient)."""
        lead = self.leading()
        if lead is None:
            return QSeries(self.order, [0])
        n = lead[0]
        return QSeries(n, self._coeffs[n - self._val:])

    def with_valuation(self, v: int) -> QSeries:
        """Same series, stored from ``q^v``.  Only lowers ``v`` or drops zeros."""
        if v < self._val:
            return QSeries(v, (0,) * (self._val - v) + self._coeffs)
        if any(self._coeffs[: v - self._val]):
            raise ValueError(f"nonzero coefficient below q^{v}")
        if v > self.order:
            raise PrecisionError("empty window")
        return QSeries(v, self._coeffs[v - self._val:])

    # -- comparison ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        lo = min(self._val, other._val)
        return all(self[n] == other[n] for n in range(lo, self.order + 1))

    def __hash__(self) -> int:
        s = self.normalized()
        return hash((s._val, s._coeffs))

    def first_mismatch(self, other: QSeries) -> int | None:
        """Smallest exponent in the common known range where the two differ."""
        top = min(self.order, other.order)
        lo = min(self._val, other._val)
        for n in range(lo, top + 1):
            if self[n] != other[n]:
                return n
        return None

    def agrees_with(self, other: QSeries) -> bool:
        return self.first_mismatch(other) is None

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> QSeries:
        if isinstance(other, QSeries):
            return other
        return QSeries.constant(as_rational(other), max(self.order, 0))

    def __add__(self, other) -> QSeries:
        if not isinstance(other, (QSeries, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        lo = min(self._val, other._val)
        hi = min(self.order, other.order)
        if hi < lo:
            raise PrecisionError("sum has an empty window")
        return QSeries(lo, [self[n] + other[n] for n in range(lo, hi + 1)])

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries(self._val, [-c for c in self._coeffs])

    def __sub__(self, other) -> QSeries:
        if not isinstance(other, (QSeries, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> QSeries:
        return (-self) + other

    def scale(self, c) -> QSeries:
        c = as_rational(c)
        return QSeries(self._val, [c * a for a in self._coeffs])

    def __mul__(self, other) -> QSeries:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        lo = self._val + other._val
        hi = min(self._val + other.order, other._val + self.order)
        length = hi - lo + 1
        a, da = _to_integers(self._coeffs)
        b, db = _to_integers(other._coeffs)
        out = [0] * length
        for i, x in enumerate(a[:length]):
            if x:
                for j, y in enumerate(b[: length - i]):
                    out[i + j] += x * y
        den = da * db
        return QSeries(lo, [Fraction(c, den) for c in out])

    __rmul__ = __mul__

    def invert(self) -> QSeries:
        """Multiplicative inverse; the stored leading coefficient must be nonzero."""
        c0 = self._coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("leading coefficient is zero; normalize first")
        a, den = _to_integers(self._coeffs)
        n = len(a)
        lead = a[0]
        if lead in (1, -1):
            g = [0] * n
            g[0] = lead
            for k in range(1, n):
                s = 0
                for j in range(1, k + 1):
                    if a[j]:
                        s += a[j] * g[k - j]
                g[k] = -s * lead
            out = [Fraction(x * den) for x in g]
        else:
            fa = [Fraction(x) for x in a]
            inv0 = 1 / fa[0]
            g = [inv0] + [Fraction(0)] * (n - 1)
            for k in range(1, n):
                s = sum((fa[j] * g[k - j] for j in range(1, k + 1) if a[j]), Fraction(0))
                g[k] = -s * inv0
            out = [x * den for x in g]
        return QSeries(-self._val, out)

    def __truediv__(self, other) -> QSeries:
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_rational(other))
        if isinstance(other, QSeries):
            return self * other.normalized().invert()
        return NotImplemented

    def __pow__(self, e: int) -> QSeries:
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.normalized().invert() ** (-e)
        result = QSeries.constant(1, max(self.order - self._val, 0))
        if e == 0:
            return result
        base = self
        result = None
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- display ------------------------------------------------------

    def __repr__(self) -> str:
        return f"QSeries(valuation={self._val}, order={self.order}, {self._short()})"

    def _short(self, terms: int = 6) -> str:
        parts = []
        for n, c in self.items():
            if c:
                parts.append(f"{c}*q^{n}")
            if len(parts) == terms:
                break
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return f"{self._short()} + O(q^{self.order + 1})"


def dq(f: QSeries) -> QSeries:
    """Euler operator ``q d/dq``."""
    return QSeries(f.valuation, [n * c for n, c in f.items()])


def b_op(d: int, f: QSeries) -> QSeries:
    """Substitution ``q -> q^d``."""
    if d < 1:
        raise ValueError("b_op needs d >= 1")
    if d == 1:
        return f
    out = [Fraction(0)] * (d * (len(f) - 1) + 1)
    for i, c in enumerate(f.coeffs):
        out[d * i] = c
    return QSeries(d * f.valuation, out)


def u_op(d: int, f: QSeries) -> QSeries:
    """Coefficient extraction ``sum a_{dn} q^n``."""
    if d < 1:
        raise ValueError("u_op needs d >= 1")
    if d == 1:
        return f
    lo = _ceil_div(f.valuation, d)
    hi = f.order // d
    if hi < lo:
        raise PrecisionError(f"U_{d} leaves an empty window on [{f.valuation}, {f.order}]")
    return QSeries(lo, [f[d * n] for n in range(lo, hi + 1)])
