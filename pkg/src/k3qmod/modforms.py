"""Eisenstein series, the discriminant, and (quasi)modular bases at levels 1 and 2.

Quasimodular forms are handled through their unique expression as
polynomials in ``C2`` over modular forms.  A weakly holomorphic form with
pole of order at most ``m`` is stored as ``Delta^-m * P`` with ``P`` a
polynomial in the generators of weight ``k + 12 m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping

from . import linalg
from .qseries import PrecisionError, QSeries, as_rational, b_op

__all__ = [
    "GENERATORS",
    "MembershipError",
    "QMForm",
    "basis",
    "bernoulli",
    "ddc2",
    "decompose",
    "discriminant",
    "dimension",
    "eisenstein_c",
    "eisenstein_e",
    "generator_series",
    "inverse_discriminant",
    "level2_generators",
    "monomials",
    "sigma",
    "to_qseries",
]

GENERATORS: dict[int, tuple[str, ...]] = {1: ("C2", "C4", "C6"), 2: ("C2", "X2", "X4")}
WEIGHTS: dict[str, int] = {"C2": 2, "C4": 4, "C6": 6, "X2": 2, "X4": 4}

DEFAULT_SURPLUS = 10


class MembershipError(ValueError):
    """The given expansion is not in the requested space (to its precision)."""


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number ``B_n`` with ``B_1 = -1/2``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    s = sum(comb(n + 1, j) * bernoulli(j) for j in range(n))
    return -s / (n + 1)


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def _sigma_table(k: int, n_max: int) -> list[int]:
    table = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dk = d**k
        for multiple in range(d, n_max + 1, d):
            table[multiple] += dk
    return table


def _check_weight(k2: int) -> None:
    if k2 < 2 or k2 % 2:
        raise ValueError(f"Eisenstein weight must be even and positive, got {k2}")


def eisenstein_e(k2: int, order: int) -> QSeries:
    """``E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n``."""
    _check_weight(k2)
    factor = -Fraction(2 * k2) / bernoulli(k2)
    sig = _sigma_table(k2 - 1, order)
    return QSeries(0, [1] + [factor * s for s in sig[1:]])


def eisenstein_c(k2: int, order: int) -> QSeries:
    """Renormalized Eisenstein series ``C_k = -B_k/(k k!) E_k``."""
    _check_weight(k2)
    const = -bernoulli(k2) / (k2 * factorial(k2))
    factor = Fraction(2, factorial(k2))
    sig = _sigma_table(k2 - 1, order)
    return QSeries(0, [const] + [factor * s for s in sig[1:]])


def _eta24(order: int) -> list[int]:
    # prod (1-q^n)^24 via n p_n = -24 sum_{j<=n} sigma_1(j) p_{n-j}
    sig = _sigma_table(1, order)
    p = [1] + [0] * order
    for n in range(1, order + 1):
        s = sum(sig[j] * p[n - j] for j in range(1, n + 1))
        p[n] = -24 * s // n
    return p


@lru_cache(maxsize=8)
def _discriminant_cached(order: int) -> QSeries:
    return QSeries(1, _eta24(order - 1))


def discriminant(order: int) -> QSeries:
    """``Delta = q prod (1-q^n)^24`` to ``q^order``."""
    if order < 1:
        raise ValueError("discriminant needs order >= 1")
    return _discriminant_cached(order)


@lru_cache(maxsize=32)
def inverse_discriminant(order: int, power: int = 1) -> QSeries:
    """``Delta^-power`` to ``q^order``."""
    delta = discriminant(order + 2 * power)
    inv = delta.invert()
    result = inv if power == 1 else inv**power
    return result.truncate(order)


def level2_generators(order: int) -> tuple[QSeries, QSeries]:
    """``X2 = 2 E2(q^2) - E2(q)`` and ``X4 = E4``, generators of modular forms for Gamma0(2)."""
    e2 = eisenstein_e(2, order)
    x2 = b_op(2, e2).truncate(order).scale(2) - e2
    return x2, eisenstein_e(4, order)


def generator_series(name: str, order: int) -> QSeries:
    return _generator_cached(name, order)


@lru_cache(maxsize=64)
def _generator_cached(name: str, order: int) -> QSeries:
    if name in ("C2", "C4", "C6"):
        return eisenstein_c(int(name[1:]), order)
    if name == "X2":
        return level2_generators(order)[0]
    if name == "X4":
        return eisenstein_e(4, order)
    raise KeyError(name)


def monomials(level: int, weight: int, quasi: bool = True) -> list[tuple[int, ...]]:
    """Exponent vectors of generator monomials of the given weight."""
    if level not in GENERATORS:
        raise ValueError(f"unsupported level {level}")
    if weight < 0 or weight % 2:
        return []
    gens = GENERATORS[level]
    ws = [WEIGHTS[g] for g in gens]
    out = []
    a_max = weight // ws[0] if quasi else 0
    for a in range(a_max, -1, -1):
        rest = weight - a * ws[0]
        for b in range(rest // ws[1], -1, -1):
            r2 = rest - b * ws[1]
            if r2 % ws[2] == 0:
                out.append((a, b, r2 // ws[2]))
    return out


def dimension(level: int, weight: int, quasi: bool = True) -> int:
    return len(monomials(level, weight, quasi))


@lru_cache(maxsize=4096)
def _monomial_series(level: int, exps: tuple[int, ...], order: int) -> QSeries:
    result = QSeries.constant(1, order)
    for name, e in zip(GENERATORS[level], exps):
        if e:
            result = result * _generator_power(name, e, order)
    return result


@lru_cache(maxsize=1024)
def _generator_power(name: str, e: int, order: int) -> QSeries:
    g = generator_series(name, order)
    if e == 1:
        return g
    return _generator_power(name, e - 1, order) * g


@dataclass(frozen=True)
class QMForm:
    """``Delta^-pole_order * P(generators)`` with ``P`` of weight ``weight + 12*pole_order``."""

    level: int
    weight: int
    pole_order: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...] = ()

    def __post_init__(self):
        if self.level not in GENERATORS:
            raise ValueError(f"unsupported level {self.level}")
        if self.pole_order < 0:
            raise ValueError("pole order must be nonnegative")
        ws = [WEIGHTS[g] for g in GENERATORS[self.level]]
        target = self.weight + 12 * self.pole_order
        clean = {}
        for exps, c in self.terms:
            exps = tuple(exps)
            if len(exps) != 3 or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps}")
            if sum(w * e for w, e in zip(ws, exps)) != target:
                raise ValueError(f"monomial {exps} does not have weight {target}")
            c = as_rational(c) + clean.get(exps, 0)
            clean[exps] = c
        items = tuple(sorted(((e, c) for e, c in clean.items() if c), reverse=True))
        object.__setattr__(self, "terms", items)

    @classmethod
    def from_dict(cls, level: int, weight: int, pole_order: int, poly: Mapping) -> QMForm:
        return cls(level, weight, pole_order, tuple(poly.items()))

    @classmethod
    def generator(cls, name: str, level: int = 1) -> QMForm:
        gens = GENERATORS[level]
        exps = tuple(int(g == name) for g in gens)
        if not any(exps):
            raise KeyError(f"{name} is not a generator at level {level}")
        return cls(level, WEIGHTS[name], 0, ((exps, Fraction(1)),))

    @property
    def poly(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    @property
    def depth(self) -> int:
        """Degree in C2 (-1 for the zero form)."""
        return max((e[0] for e, _ in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def _same_space(self, other: QMForm) -> None:
        if (self.level, self.weight, self.pole_order) != (other.level, other.weight, other.pole_order):
            raise ValueError("forms live in different spaces")

    def __add__(self, other: QMForm) -> QMForm:
        self._same_space(other)
        return QMForm(self.level, self.weight, self.pole_order, self.terms + other.terms)

    def __neg__(self) -> QMForm:
        return self.scale(-1)

    def __sub__(self, other: QMForm) -> QMForm:
        return self + (-other)

    def scale(self, c) -> QMForm:
        c = as_rational(c)
        return QMForm(self.level, self.weight, self.pole_order,
                      tuple((e, c * v) for e, v in self.terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        gens = GENERATORS[self.level]
        parts = []
        for exps, c in self.terms:
            mono = "*".join(f"{g}^{e}" if e > 1 else g for g, e in zip(gens, exps) if e)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        body = " + ".join(parts)
        return f"Delta^-{self.pole_order}*({body})" if self.pole_order else body


def basis(level: int, weight: int, pole_order: int, order: int, quasi: bool = True) -> list[QSeries]:
    """Expansions of ``Delta^-m * monomial`` spanning the space, certified independent."""
    if weight + 12 * pole_order < 0:
        raise ValueError("weight + 12*pole_order must be nonnegative")
    monos = monomials(level, weight + 12 * pole_order, quasi)
    inv = inverse_discriminant(order, pole_order) if pole_order else None
    out = []
    for exps in monos:
        s = _monomial_series(level, exps, order + pole_order)
        out.append(s * inv if inv is not None else s.truncate(order))
    if out and linalg.rank([[s[n] for n in range(-pole_order, order + 1)] for s in out]) < len(out):
        raise PrecisionError(f"order {order} too small to certify independence of {len(out)} forms")
    return out


def to_qseries(form: QMForm, order: int) -> QSeries:
    m = form.pole_order
    total = QSeries.zero(0, order + m)
    for exps, c in form.terms:
        total = total + _monomial_series(form.level, exps, order + m).scale(c)
    if m == 0:
        return total
    return total * inverse_discriminant(order, m)


def decompose(f: QSeries, level: int, weight: int, pole_order: int,
              surplus: int = DEFAULT_SURPLUS) -> QMForm:
    """Express ``f`` as an element of ``Delta^-m QMod(level)`` of the given weight.

    Every known coefficient of ``f`` is used; the system is required to be
    over-determined by at least ``surplus`` equations.
    """
    m = pole_order
    monos = monomials(level, weight + 12 * m)
    for n in range(f.valuation, min(-m, f.order + 1)):
        if f[n] != 0:
            raise MembershipError(f"pole of order {-n} exceeds {m}")
    if f.valuation < -m:
        f = f.with_valuation(-m)
    # Delta^m f is holomorphic; compare it with the generator monomials on [0, order]
    g = f * discriminant(f.order + 2 * m) ** m if m else f
    top = g.order
    n_eq = top + 1
    if n_eq < len(monos) + surplus:
        raise PrecisionError(
            f"{n_eq} coefficients cannot certify a space of dimension {len(monos)} "
            f"(surplus {surplus} required)")
    rhs = [g[n] for n in range(0, top + 1)]
    if not monos:
        if any(rhs):
            raise MembershipError(f"no nonzero forms of weight {weight} with pole order {m}")
        return QMForm(level, weight, m)
    cols = [_monomial_series(level, e, top) for e in monos]
    rows = [[c[n] for c in cols] for n in range(0, top + 1)]
    try:
        x = linalg.solve(rows, rhs)
    except linalg.InconsistentSystem as exc:
        raise MembershipError(
            f"expansion is not in Delta^-{m} QMod({level}) of weight {weight}") from exc
    except linalg.Underdetermined as exc:
        raise PrecisionError(str(exc)) from exc
    return QMForm(level, weight, m, tuple(zip(monos, x)))


def ddc2(form: QMForm) -> QMForm:
    """Formal derivative with respect to ``C2``."""
    terms = tuple(((e[0] - 1,) + e[1:], c * e[0]) for e, c in form.terms if e[0] > 0)
    return QMForm(form.level, form.weight - 2, form.pole_order, terms)
