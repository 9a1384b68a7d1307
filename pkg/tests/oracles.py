"""Independent reference implementations, deliberately naive.

None of these share code with the package: series are plain dicts
``{exponent: Fraction}``, products are expanded term by term, and Hecke
operators use the coefficient formula rather than ``B``/``U`` compositions.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, gcd


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def mobius(n: int) -> int:
    primes = []
    d, x = 2, n
    while x > 1:
        if x % d == 0:
            if primes and primes[-1] == d:
                return 0
            primes.append(d)
            x //= d
        else:
            d += 1
    return (-1) ** len(primes)


def bernoulli(n: int) -> Fraction:
    """Akiyama-Tanigawa (gives B_1 = +1/2, irrelevant for even n)."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def poly_mul(f: dict, g: dict, top: int) -> dict:
    out: dict = {}
    for i, a in f.items():
        for j, b in g.items():
            if i + j <= top:
                out[i + j] = out.get(i + j, 0) + a * b
    return {k: v for k, v in out.items() if v}


def delta(top: int) -> dict:
    """``q prod (1-q^n)^24`` by repeated multiplication of binomial expansions."""
    acc = {1: 1}
    for n in range(1, top):
        factor = {n * j: (-1) ** j * comb(24, j) for j in range(25) if n * j <= top}
        acc = poly_mul(acc, factor, top)
    return acc


def inverse_delta(top: int) -> dict:
    """Long division of 1 by Delta, exponents -1..top."""
    d = delta(top + 2)
    shifted = [Fraction(d.get(n + 1, 0)) for n in range(top + 2)]  # Delta / q
    inv = [Fraction(0)] * (top + 2)
    inv[0] = 1 / shifted[0]
    for n in range(1, top + 2):
        inv[n] = -sum(shifted[j] * inv[n - j] for j in range(1, n + 1)) / shifted[0]
    return {n - 1: c for n, c in enumerate(inv) if c and n - 1 <= top}


def eisenstein_c(k: int, top: int) -> dict:
    out = {0: -bernoulli(k) / (k * factorial(k))}
    for n in range(1, top + 1):
        out[n] = Fraction(2 * sigma(k - 1, n), factorial(k))
    return out


def t_wrong_coeff(m: int, ell: int, f: dict, n: int) -> Fraction:
    """``(T_{m,l} f)_n = sum_{a | gcd(m, n)} a^(l-1) f_{mn/a^2}`` (with gcd(m, 0) = m)."""
    g = gcd(m, n) if n else m
    total = Fraction(0)
    for a in range(1, g + 1):
        if m % a == 0 and n % a == 0:
            total += Fraction(a) ** (ell - 1) * f.get(m * n // (a * a), 0)
    return total


def dq(f: dict) -> dict:
    return {n: n * c for n, c in f.items() if n}


def gauss_rank(rows: list[list[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank
