"""Symbolic descendent potentials ``F_{g,m}(tau_a1(g1) ... tau_an(gn))`` of an elliptic K3.

Expressions are rational combinations of ``D_q^j F_{g,m}(...)``.  The
divisor, dilaton and string equations rewrite an expression into a normal
form whose atoms carry no ``tau_0(divisor)``, ``tau_0(1)`` or ``tau_1(1)``
insertions.  :func:`assemble_H` builds the right-hand side of the
holomorphic anomaly equation in divisibility ``m`` and
:func:`check_divisor_compat` tests its compatibility with the divisor
equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial, prod
from typing import Callable, Iterable, Sequence

from .hecke import t_wrong
from .qseries import QSeries, as_rational

__all__ = [
    "CompatReport",
    "DIAGONAL_S",
    "F",
    "Insertion",
    "InsertionClass",
    "ONE",
    "POINT",
    "PSI1",
    "PotentialExpr",
    "PotentialKey",
    "ReductionError",
    "UPERP_RANK",
    "W",
    "apply_mcf",
    "assemble_H",
    "check_divisor_compat",
    "cup",
    "degree_data",
    "pairing",
    "pi_pushpull",
    "psi_integral",
    "reduce",
    "sigma",
    "tau",
    "uperp",
    "uperp_dual",
]

UPERP_RANK = 20
PSI1 = "psi1"

_DEG = {"1": 0, "F": 1, "W": 1, "e": 1, "e*": 1, "p": 2}
_DEGBAR = {"1": 0, "F": 0, "W": 2, "e": 1, "e*": 1, "p": 2}


class ReductionError(ValueError):
    """An atom needs a tautological identity that is not catalogued."""


@dataclass(frozen=True, order=True)
class InsertionClass:
    """A class in H*(S): 1, F, W, the point p, or a basis/dual-basis vector of U-perp."""

    tag: str
    index: int = 0

    def __post_init__(self):
        if self.tag not in _DEG:
            raise ValueError(f"unknown class tag {self.tag!r}")
        if self.tag in ("e", "e*"):
            if not 1 <= self.index <= UPERP_RANK:
                raise ValueError(f"U-perp index must lie in 1..{UPERP_RANK}")
        elif self.index:
            raise ValueError(f"class {self.tag} takes no index")

    @property
    def deg(self) -> int:
        return _DEG[self.tag]

    @property
    def degbar(self) -> int:
        return _DEGBAR[self.tag]

    @property
    def is_uperp(self) -> bool:
        return self.tag in ("e", "e*")

    def __str__(self) -> str:
        if self.tag == "e":
            return f"e_{self.index}"
        if self.tag == "e*":
            return f"e^{self.index}"
        return self.tag


ONE = InsertionClass("1")
F = InsertionClass("F")
W = InsertionClass("W")
POINT = InsertionClass("p")


def uperp(i: int) -> InsertionClass:
    return InsertionClass("e", i)


def uperp_dual(i: int) -> InsertionClass:
    return InsertionClass("e*", i)


# Kunneth decomposition of the diagonal of S in the basis {1, F, W, e_i, p}
DIAGONAL_S: tuple[tuple[InsertionClass, InsertionClass], ...] = (
    (ONE, POINT), (POINT, ONE), (F, W), (W, F),
) + tuple((uperp(i), uperp_dual(i)) for i in range(1, UPERP_RANK + 1))


def pairing(a: InsertionClass, b: InsertionClass) -> int:
    """Intersection pairing ``<a, b>`` (zero unless the degrees are complementary)."""
    if a.deg + b.deg != 2:
        return 0
    if a.deg != 1:
        return 1  # <1, p>
    if a.is_uperp or b.is_uperp:
        if a.is_uperp and b.is_uperp:
            if a.tag == b.tag:
                raise ValueError(f"pairing <{a}, {b}> is not modelled (only basis vs dual basis)")
            return int(a.index == b.index)
        return 0
    return int(a != b)  # <F,W> = 1, <F,F> = <W,W> = 0


def cup(a: InsertionClass, b: InsertionClass) -> tuple[int, InsertionClass] | None:
    """``a ∪ b`` as ``(coefficient, class)``, or None when it vanishes."""
    if a == ONE:
        return 1, b
    if b == ONE:
        return 1, a
    if a.deg + b.deg > 2:
        return None
    c = pairing(a, b)
    return (c, POINT) if c else None


def pi_pushpull(a: InsertionClass) -> InsertionClass | None:
    """``pi^* pi_* a`` for the elliptic fibration ``pi: S -> P^1``."""
    if a == W:
        return ONE
    if a == POINT:
        return F
    return None


def sigma(a: InsertionClass, b: InsertionClass) -> list[tuple[int, InsertionClass, InsertionClass]]:
    """The endomorphism ``sigma(a ⊠ b)`` as a list of ``(coeff, left, right)``."""
    if a.tag in ("1", "F", "p") or b.tag in ("1", "F", "p"):
        return []
    if a == W and b == W:
        return [(1, uperp(i), uperp_dual(i)) for i in range(1, UPERP_RANK + 1)]
    if a == W:
        return [(-1, b, F)]
    if b == W:
        return [(-1, F, a)]
    c = pairing(a, b)
    return [(c, F, F)] if c else []


@dataclass(frozen=True, order=True)
class Insertion:
    a: int
    cls: InsertionClass

    def __str__(self) -> str:
        return f"tau{self.a}({self.cls})"


def tau(a: int, cls: InsertionClass) -> Insertion:
    return Insertion(a, cls)


@dataclass(frozen=True)
class PotentialKey:
    """``F_{g,m}(insertions)``, optionally decorated with a catalogued tautological class."""

    g: int
    m: int
    insertions: tuple[Insertion, ...] = ()
    marker: str | None = None

    def __post_init__(self):
        if self.g < 0 or self.m < 1:
            raise ValueError("need g >= 0 and m >= 1")
        if self.marker not in (None, PSI1):
            raise ValueError(f"unknown marker {self.marker!r}")
        object.__setattr__(self, "insertions", tuple(sorted(self.insertions)))

    @property
    def n(self) -> int:
        return len(self.insertions)

    def dimension_ok(self) -> bool:
        if any(ins.a < 0 for ins in self.insertions):
            return False
        total = sum(ins.a + ins.cls.deg for ins in self.insertions)
        if self.marker == PSI1:
            total += 1
        return total == self.g + self.n

    def replace(self, **changes) -> PotentialKey:
        data = dict(g=self.g, m=self.m, insertions=self.insertions, marker=self.marker)
        data.update(changes)
        return PotentialKey(**data)

    def _sort_key(self):
        return (self.g, self.m, self.insertions, self.marker or "")

    def __str__(self) -> str:
        body = " ".join(str(i) for i in self.insertions)
        if self.marker:
            body = f"{self.marker}; " + ", ".join(str(i.cls) for i in self.insertions)
        return f"F_{{{self.g},{self.m}}}({body})"


@dataclass(frozen=True)
class PotentialExpr:
    """Rational combination of ``D_q^j F_{g,m}(...)`` terms, kept in canonical order."""

    terms: tuple[tuple[Fraction, int, PotentialKey], ...] = field(default=())

    def __post_init__(self):
        merged: dict[tuple[int, PotentialKey], Fraction] = {}
        for c, j, key in self.terms:
            if j < 0:
                raise ValueError("negative D_q power")
            merged[(j, key)] = merged.get((j, key), Fraction(0)) + as_rational(c)
        items = sorted(((c, j, key) for (j, key), c in merged.items() if c),
                       key=lambda t: (t[2]._sort_key(), t[1]))
        object.__setattr__(self, "terms", tuple(items))

    @classmethod
    def atom(cls, key: PotentialKey, coeff=1, dq_power: int = 0) -> PotentialExpr:
        return cls(((as_rational(coeff), dq_power, key),))

    @classmethod
    def total(cls, exprs: Iterable[PotentialExpr]) -> PotentialExpr:
        return cls(tuple(t for e in exprs for t in e.terms))

    def __add__(self, other: PotentialExpr) -> PotentialExpr:
        if not isinstance(other, PotentialExpr):
            return NotImplemented
        return PotentialExpr(self.terms + other.terms)

    def __neg__(self) -> PotentialExpr:
        return self.scale(-1)

    def __sub__(self, other: PotentialExpr) -> PotentialExpr:
        return self + (-other)

    def scale(self, c) -> PotentialExpr:
        c = as_rational(c)
        return PotentialExpr(tuple((c * v, j, k) for v, j, k in self.terms))

    def __mul__(self, c) -> PotentialExpr:
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def dq(self, power: int = 1) -> PotentialExpr:
        return PotentialExpr(tuple((c, j + power, k) for c, j, k in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def atoms(self) -> set[PotentialKey]:
        return {k for _, _, k in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, j, key in self.terms:
            op = "" if j == 0 else ("D_q " if j == 1 else f"D_q^{j} ")
            parts.append(f"{c} {op}{key}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO = PotentialExpr()


def _atom(g: int, m: int, insertions: Sequence[Insertion], coeff=1, dq_power: int = 0) -> PotentialExpr:
    return PotentialExpr.atom(PotentialKey(g, m, tuple(insertions)), coeff, dq_power)


# ---------------------------------------------------------------- degrees


def degree_data(g: int, insertions: Sequence[Insertion]) -> tuple[int, int, int, int]:
    """``(deg, degbar, ell, k)`` with ``ell = 2g-2+degbar`` and weight ``k = 2g-12+degbar``."""
    deg = sum(i.cls.deg for i in insertions)
    degbar = sum(i.cls.degbar for i in insertions)
    return deg, degbar, 2 * g - 2 + degbar, 2 * g - 12 + degbar


def apply_mcf(primitive: QSeries, g: int, m: int, insertions: Sequence[Insertion]) -> QSeries:
    """Multiple cover transform ``m^(deg-degbar) T_{m,ell}`` of the divisibility-1 series."""
    deg, degbar, ell, _ = degree_data(g, insertions)
    return t_wrong(m, ell, primitive).scale(Fraction(m) ** (deg - degbar))


# ---------------------------------------------------------------- reduction


def _reducible(ins: Insertion) -> bool:
    if ins.a == 0:
        return ins.cls.deg <= 1  # string (class 1) or divisor
    return ins.a == 1 and ins.cls == ONE  # dilaton


def _without(ins: tuple[Insertion, ...], i: int) -> list[Insertion]:
    return list(ins[:i] + ins[i + 1:])


def _contact_terms(key: PotentialKey, rest: list[Insertion], gamma: InsertionClass) -> list[PotentialExpr]:
    out = []
    for j, other in enumerate(rest):
        if other.a < 1:
            continue
        c = cup(other.cls, gamma)
        if c is None:
            continue
        coeff, cls = c
        new = rest[:j] + [tau(other.a - 1, cls)] + rest[j + 1:]
        out.append(_atom(key.g, key.m, new, coeff))
    return out


def _apply_rule(key: PotentialKey, i: int) -> PotentialExpr:
    ins = key.insertions[i]
    rest = _without(key.insertions, i)
    if ins.a == 1:  # dilaton
        return _atom(key.g, key.m, rest, 2 * key.g - 2 + len(rest))
    gamma = ins.cls
    parts = _contact_terms(key, rest, gamma)  # string equation when gamma = 1
    if gamma.deg == 1:
        pf, pw = pairing(gamma, F), pairing(gamma, W)
        if pf:
            parts.append(_atom(key.g, key.m, rest, pf, dq_power=1))
        if pw:
            parts.append(_atom(key.g, key.m, rest, key.m * pw))
    return PotentialExpr.total(parts)


def _expand_marker(key: PotentialKey) -> PotentialExpr:
    """Catalogued boundary expressions for psi_1 on M_{1,1} and M_{1,2}."""
    if key.marker != PSI1 or key.g != 1 or key.n not in (1, 2) or any(i.a for i in key.insertions):
        raise ReductionError(f"no catalogued identity for {key}")
    classes = [i.cls for i in key.insertions]
    parts = []
    # psi_1 = (1/24) delta_0: glue two extra points of a genus-0 curve
    for d1, d2 in DIAGONAL_S:
        new = [tau(0, c) for c in classes + [d1, d2]]
        parts.append(_atom(0, key.m, new, Fraction(1, 24)))
    if key.n == 2:
        # + delta_1: both markings on a contracted rational tail
        c = cup(classes[0], classes[1])
        if c is not None:
            parts.append(_atom(1, key.m, [tau(0, c[1])], c[0]))
    return PotentialExpr.total(parts)


Chooser = Callable[[list[int]], int]


def _reduce_key(key: PotentialKey, choose: Chooser | None, cache: dict) -> PotentialExpr:
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not key.dimension_ok():
        result = ZERO
    elif key.marker is not None:
        result = _reduce_expr(_expand_marker(key), choose, cache)
    else:
        cands = [i for i, ins in enumerate(key.insertions) if _reducible(ins)]
        if not cands:
            result = PotentialExpr.atom(key)
        else:
            i = cands[0] if choose is None else choose(cands)
            result = _reduce_expr(_apply_rule(key, i), choose, cache)
    cache[key] = result
    return result


def _reduce_expr(expr: PotentialExpr, choose: Chooser | None, cache: dict) -> PotentialExpr:
    parts = []
    for c, j, key in expr.terms:
        nf = _reduce_key(key, choose, cache)
        parts.append(nf.dq(j).scale(c) if j else nf.scale(c))
    return PotentialExpr.total(parts)


def reduce(expr: PotentialExpr | PotentialKey, choose: Chooser | None = None) -> PotentialExpr:
    """Normal form under the divisor, dilaton and string equations.

    ``choose`` picks which reducible insertion to eliminate next (default:
    the first); any choice yields the same normal form.
    """
    if isinstance(expr, PotentialKey):
        expr = PotentialExpr.atom(expr)
    return _reduce_expr(expr, choose, {})


# ---------------------------------------------------------------- HAE


def psi_integral(g: int, exps: Sequence[int]) -> Fraction:
    """``int_{M_{g,n}} prod psi_i^{a_i}`` for ``g`` in {0, 1}."""
    n = len(exps)
    if g == 0:
        if n < 3 or sum(exps) != n - 3:
            return Fraction(0)
        return Fraction(factorial(n - 3), prod(factorial(a) for a in exps))
    if g != 1:
        raise ValueError("only genus 0 and 1 psi integrals are needed")
    if n < 1 or sum(exps) != n:
        return Fraction(0)
    exps = sorted(exps)
    if n == 1:
        return Fraction(1, 24)
    if exps[0] == 0:  # string equation
        rest = exps[1:]
        return sum((psi_integral(1, rest[:j] + [a - 1] + rest[j + 1:])
                    for j, a in enumerate(rest) if a > 0), Fraction(0))
    if exps[0] == 1:  # dilaton equation
        return (n - 1) * psi_integral(1, exps[1:])
    return Fraction(0)


def _integrate_S(classes: Sequence[InsertionClass], euler: bool = False) -> int:
    if euler:
        return 24 if all(c == ONE for c in classes) else 0
    coeff, acc = 1, ONE
    for c in classes:
        r = cup(acc, c)
        if r is None:
            return 0
        coeff, acc = coeff * r[0], r[1]
    return coeff if acc == POINT else 0


def _virtual_factor(g2: int, part: Sequence[Insertion], node_cls: InsertionClass) -> Fraction:
    """Degree-zero contribution ``F^vir_{g2}(part, node_cls)`` for ``g2`` in {0, 1}."""
    n = len(part) + 1
    if 2 * g2 - 2 + n <= 0:
        return Fraction(0)
    psi = psi_integral(g2, [i.a for i in part] + [0])
    if not psi:
        return Fraction(0)
    return psi * _integrate_S([i.cls for i in part] + [node_cls], euler=(g2 == 1))


def assemble_H(g: int, m: int, insertions: Sequence[Insertion]) -> PotentialExpr:
    """Right-hand side ``H_{g,m}`` of the divisibility-``m`` holomorphic anomaly equation."""
    ins = tuple(insertions)
    parts: list[PotentialExpr] = []
    # genus reduction: Delta_{P^1} = 1 ⊠ F + F ⊠ 1
    if g >= 1:
        parts.append(_atom(g - 1, m, ins + (tau(0, ONE), tau(0, F)), 2))
    # splitting off a degree-zero component of genus 0 or 1
    n = len(ins)
    for g2 in (0, 1):
        g1 = g - g2
        if g1 < 0:
            continue
        for size in range(n + 1):
            for idx in combinations(range(n), size):
                part = [ins[i] for i in idx]
                keep = [ins[i] for i in range(n) if i not in idx]
                for delta, dual in ((ONE, F), (F, ONE)):
                    v = _virtual_factor(g2, part, dual)
                    if v:
                        parts.append(_atom(g1, m, keep + [tau(0, delta)], 2 * v))
    for i, x in enumerate(ins):
        pp = pi_pushpull(x.cls)
        if pp is not None:
            parts.append(_atom(g, m, ins[:i] + (tau(x.a + 1, pp),) + ins[i + 1:], -2))
        pf = pairing(x.cls, F)
        if pf:
            parts.append(_atom(g, m, ins[:i] + (tau(x.a, F),) + ins[i + 1:], Fraction(20 * pf, m)))
    for i, j in combinations(range(n), 2):
        for c, s1, s2 in sigma(ins[i].cls, ins[j].cls):
            new = list(ins)
            new[i] = tau(ins[i].a, s1)
            new[j] = tau(ins[j].a, s2)
            parts.append(_atom(g, m, new, Fraction(-2 * c, m)))
    return PotentialExpr.total(parts)


@dataclass(frozen=True)
class CompatReport:
    ok: bool
    lhs: PotentialExpr
    rhs: PotentialExpr
    residual: PotentialExpr  # reduce(H(... tau0(gamma)) - d/dgamma H(...))
    weight: int

    def __str__(self) -> str:
        verdict = "compatible" if self.ok else "INCOMPATIBLE"
        return f"{verdict}; residual = {self.residual}"


def check_divisor_compat(g: int, m: int, insertions: Sequence[Insertion],
                         gamma_n: InsertionClass) -> CompatReport:
    """Compare ``H(..., tau_0(gamma_n))`` with the divisor equation applied to ``H(...)``.

    The commutator ``[d/dC2, D_q] = -2k`` contributes only through the
    ``<gamma_n, F> D_q`` part of ``d/dgamma_n``.
    """
    if gamma_n.deg != 1:
        raise ValueError("gamma_n must be a divisor class")
    ins = tuple(insertions)
    _, _, _, k = degree_data(g, ins)
    pf, pw = pairing(gamma_n, F), pairing(gamma_n, W)

    lhs = reduce(assemble_H(g, m, ins + (tau(0, gamma_n),)))
    base = assemble_H(g, m, ins)
    d_base = base.dq().scale(pf) + base.scale(m * pw)
    contact = []
    for i, x in enumerate(ins):
        if x.a < 1:
            continue
        c = cup(x.cls, gamma_n)
        if c is None:
            continue
        new = ins[:i] + (tau(x.a - 1, c[1]),) + ins[i + 1:]
        contact.append(assemble_H(g, m, new).scale(c[0]))
    anomaly = _atom(g, m, ins, -2 * k * pf)
    rhs = reduce(d_base + anomaly + PotentialExpr.total(contact))
    residual = reduce(assemble_H(g, m, ins + (tau(0, gamma_n),)) - d_base)
    return CompatReport(lhs == rhs, lhs, rhs, residual, k)
