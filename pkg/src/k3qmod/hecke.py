"""Hecke operators on q-expansions, including the wrong-weight operators ``T_{m,l}``."""

from __future__ import annotations

from fractions import Fraction

from .qseries import QSeries, b_op, u_op

__all__ = ["c_coeff", "divisors", "hecke_t", "mobius", "t_wrong"]


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("divisors of a positive integer only")
    return [d for d in range(1, n + 1) if n % d == 0]


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def _power(a: int, e: int) -> Fraction:
    return Fraction(a) ** e


def t_wrong(m: int, ell: int, f: QSeries) -> QSeries:
    """``T_{m,ell} = sum_{ad=m} a^(ell-1) B_a U_d``; the window is the
    intersection of the summand windows."""
    if m < 1:
        raise ValueError("Hecke index must be >= 1")
    total = None
    for a in divisors(m):
        term = b_op(a, u_op(m // a, f)).scale(_power(a, ell - 1))
        total = term if total is None else total + term
    return total


def hecke_t(m: int, k: int, f: QSeries) -> QSeries:
    """Classical weight-``k`` Hecke operator ``sum_{ad=m} a^(k-1) B_a U_d``."""
    return t_wrong(m, k, f)


def c_coeff(k: int, ell: int, a: int) -> Fraction:
    """Coefficient with ``T_{m,ell} = sum_{ad=m} c_{k,ell}(a) B_a T_d`` on weight-``k`` input."""
    return sum((_power(r, ell - 1) * mobius(a // r) * _power(a // r, k - 1)
                for r in divisors(a)), Fraction(0))
