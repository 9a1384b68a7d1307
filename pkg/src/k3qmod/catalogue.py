"""Closed-form base series: absolute K3 potentials, elliptic-fiber series and relative series.

Primitive (divisibility 1) absolute entries are explicit quasimodular
expressions.  Higher divisibility is obtained by the multiple cover transform,
applied to a primitive series computed to ``m`` times the requested order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Callable, Mapping

from .modforms import eisenstein_c, inverse_discriminant
from .potentials import (
    F, POINT, PSI1, PotentialExpr, PotentialKey, apply_mcf, reduce, tau,
)
from .qseries import QSeries, dq

__all__ = [
    "Catalogue",
    "DEFAULT",
    "FiberKey",
    "NAMED_KEYS",
    "OMEGA",
    "RelativeKey",
    "RelativeProfile",
    "UNIT",
    "UncataloguedError",
    "base_series",
    "evaluate",
    "fiber_series",
    "named_series",
    "rel_P1E",
    "rel_SE",
]

UNIT = "1"
OMEGA = "w"
SE = "S/E"
P1E = "P1xE/E"


class UncataloguedError(KeyError):
    pass


def _c2(n: int) -> QSeries:
    return eisenstein_c(2, n)


def _dq_c2(n: int, power: int = 1) -> QSeries:
    s = _c2(n)
    for _ in range(power):
        s = dq(s)
    return s


# ---------------------------------------------------------------- keys


def _key(g: int, m: int, *ins) -> PotentialKey:
    return PotentialKey(g, m, tuple(ins))


NAMED_KEYS: dict[str, PotentialKey] = {
    "F_0_1": _key(0, 1),
    "F_1_1_p": _key(1, 1, tau(0, POINT)),
    "F_2_1_pp": _key(2, 1, tau(0, POINT), tau(0, POINT)),
    "F_1_1_t1F": PotentialKey(1, 1, (tau(0, F),), PSI1),
    "F_0_2": _key(0, 2),
    "F_1_2_p": _key(1, 2, tau(0, POINT)),
    "F_2_2_pp": _key(2, 2, tau(0, POINT), tau(0, POINT)),
    "F_1_2_t1F": PotentialKey(1, 2, (tau(0, F),), PSI1),
}


@dataclass(frozen=True)
class FiberKey:
    """``F^E_g(tau_{g-1}(omega))`` for the elliptic curve ``E``."""

    g: int

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("fiber series need g >= 1")


@dataclass(frozen=True)
class RelativeProfile:
    """Ordered list of ``(multiplicity, class)`` with class ``"1"`` or ``"w"`` (the point of E)."""

    parts: tuple[tuple[int, str], ...]

    def __post_init__(self):
        parts = tuple((int(mu), str(c)) for mu, c in self.parts)
        if not parts:
            raise ValueError("empty profile")
        for mu, c in parts:
            if mu < 1 or c not in (UNIT, OMEGA):
                raise ValueError(f"bad profile part {(mu, c)}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: tuple[int, str]) -> RelativeProfile:
        return cls(tuple(parts))

    @property
    def m(self) -> int:
        return sum(mu for mu, _ in self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def canonical(self) -> RelativeProfile:
        return RelativeProfile(tuple(sorted(self.parts)))

    def dual(self) -> RelativeProfile:
        swap = {UNIT: OMEGA, OMEGA: UNIT}
        return RelativeProfile(tuple((mu, swap[c]) for mu, c in self.parts))

    def all_omega(self) -> bool:
        return all(c == OMEGA for _, c in self.parts)

    def gluing_factor(self) -> Fraction:
        """``prod mu_i / l!`` for an ordered profile."""
        return Fraction(prod(mu for mu, _ in self.parts), factorial(self.length))

    def __str__(self) -> str:
        return ",".join(f"({mu},{c})" for mu, c in self.parts)


@dataclass(frozen=True)
class RelativeKey:
    """Connected relative series of genus ``g`` with ``points`` insertions ``tau_0(p)``."""

    geometry: str
    g: int
    points: int
    profile: RelativeProfile

    def __post_init__(self):
        if self.geometry not in (SE, P1E):
            raise ValueError(f"unknown geometry {self.geometry!r}")

    @property
    def m(self) -> int:
        return self.profile.m

    def lookup(self) -> tuple[str, int, int, tuple]:
        return self.geometry, self.g, self.points, self.profile.canonical().parts

    def __str__(self) -> str:
        name = "F^rel" if self.geometry == SE else "G^rel"
        return f"{name}_{{{self.g},{self.m}}}(tau0(p)^{self.points} | {self.profile})"


def se_key(g: int, *parts) -> RelativeKey:
    return RelativeKey(SE, g, 0, RelativeProfile(tuple(parts)))


def p1e_key(g: int, points: int, *parts) -> RelativeKey:
    return RelativeKey(P1E, g, points, RelativeProfile(tuple(parts)))


# ---------------------------------------------------------------- catalogue


Primitive = Callable[[int], QSeries]


def _f01(n: int) -> QSeries:
    return inverse_discriminant(n)


def _f11p(n: int) -> QSeries:
    return (_dq_c2(n + 1) * inverse_discriminant(n + 1)).truncate(n)


def _f21pp(n: int) -> QSeries:
    d = _dq_c2(n + 1)
    return (d * d * inverse_discriminant(n + 1)).truncate(n)


_PRIMITIVES: dict[PotentialKey, Primitive] = {
    NAMED_KEYS["F_0_1"]: _f01,
    NAMED_KEYS["F_1_1_p"]: _f11p,
    NAMED_KEYS["F_2_1_pp"]: _f21pp,
}
_PRIMITIVE_NAMES = {"F_0_1", "F_1_1_p", "F_2_1_pp"}


class Catalogue:
    """Lookup of base series.  ``overrides`` replaces primitive entries by name
    (``F_0_1``, ``F_1_1_p``, ``F_2_1_pp``), e.g. to test what depends on them."""

    def __init__(self, overrides: Mapping[str, Primitive] | None = None):
        self._primitives = dict(_PRIMITIVES)
        for name, fn in (overrides or {}).items():
            if name not in _PRIMITIVE_NAMES:
                raise UncataloguedError(f"only primitive entries can be overridden, not {name}")
            self._primitives[NAMED_KEYS[name]] = fn

    # -- absolute ------------------------------------------------------

    def absolute(self, key: PotentialKey, n: int) -> QSeries:
        """``F_{g,m}(...)`` for a catalogued key to order ``n``."""
        if key.marker is not None:
            return self.evaluate(PotentialExpr.atom(key), n)
        prim_key = key.replace(m=1)
        fn = self._primitives.get(prim_key)
        if fn is None:
            raise UncataloguedError(f"no catalogue entry for {key}")
        if key.m == 1:
            return fn(n)
        return apply_mcf(fn(key.m * n), key.g, key.m, key.insertions).truncate(n)

    def evaluate(self, expr: PotentialExpr | PotentialKey, n: int) -> QSeries:
        """Reduce ``expr`` to normal form and expand every atom from the catalogue."""
        nf = reduce(expr)
        total = None
        for c, j, key in nf.terms:
            s = self.absolute(key, n)
            for _ in range(j):
                s = dq(s)
            s = s.scale(c)
            total = s if total is None else total + s
        if total is None:
            return QSeries.zero(0, n)
        return total

    def named(self, name: str, n: int) -> QSeries:
        if name in NAMED_KEYS:
            return self.absolute(NAMED_KEYS[name], n)
        if name.startswith("FE_") and name[3:].isdigit():
            return fiber_series(FiberKey(int(name[3:])), n)
        raise UncataloguedError(f"unknown catalogue name {name!r}")

    # -- relative ------------------------------------------------------

    def rel_SE(self, profile: RelativeProfile, n: int) -> QSeries:
        """Relative series of ``(S, E)`` in divisibility 2, in terms of absolute ones."""
        parts = profile.canonical().parts
        f02 = self.absolute(NAMED_KEYS["F_0_2"], n + 2)
        if parts == ((1, UNIT), (1, UNIT)):
            return f02.scale(2).truncate(n)
        if parts == ((1, UNIT), (1, OMEGA)):
            f12 = self.absolute(NAMED_KEYS["F_1_2_p"], n)
            return f12 - (f02 * _dq_c2(n + 2)).scale(2).truncate(n)
        if parts == ((2, UNIT),):
            return (dq(f02).scale(Fraction(1, 3)) - (f02 * _c2(n + 2)).scale(4)).truncate(n)
        raise UncataloguedError(f"no (S,E) relative series for profile {profile}")

    def relative(self, key: RelativeKey, n: int) -> QSeries:
        if key.geometry == SE:
            if key.points:
                raise UncataloguedError(f"no entry for {key}")
            expected_g = {((1, UNIT), (1, UNIT)): 0}.get(key.profile.canonical().parts, 1)
            if key.g != expected_g:
                raise UncataloguedError(f"no entry for {key}")
            return self.rel_SE(key.profile, n)
        return rel_P1E(key, n)


_P1E_TABLE: dict[tuple[int, int, tuple], Callable[[int], QSeries]] = {
    (0, 1, ((1, UNIT),)): lambda n: QSeries.constant(1, n),
    (0, 0, ((1, OMEGA),)): lambda n: QSeries.constant(1, n),
    (1, 1, ((1, OMEGA),)): lambda n: _dq_c2(n),
    (1, 2, ((1, UNIT),)): lambda n: _dq_c2(n).scale(2),
    (2, 2, ((1, OMEGA),)): lambda n: (_dq_c2(n) * _dq_c2(n)).truncate(n),
    (1, 2, ((2, OMEGA),)): lambda n: _dq_c2(n, 2),
    (1, 2, ((1, OMEGA), (1, OMEGA))): lambda n: _dq_c2(n, 3),
}


def rel_P1E(key: RelativeKey, n: int) -> QSeries:
    """Relative series of ``(P^1 x E, E)`` (from the Gromov-Witten theory of E)."""
    if key.geometry != P1E:
        raise ValueError("rel_P1E expects a P1xE/E key")
    fn = _P1E_TABLE.get(key.lookup()[1:])
    if fn is None:
        raise UncataloguedError(f"no entry for {key}")
    return fn(n)


def fiber_series(key: FiberKey | int, n: int) -> QSeries:
    """``F^E_g(tau_{g-1}(omega)) = g!/2^(g-1) C_{2g}``."""
    g = key.g if isinstance(key, FiberKey) else FiberKey(key).g
    return eisenstein_c(2 * g, n).scale(Fraction(factorial(g), 2 ** (g - 1)))


DEFAULT = Catalogue()


def base_series(key: PotentialKey | FiberKey | RelativeKey, n: int) -> QSeries:
    if isinstance(key, FiberKey):
        return fiber_series(key, n)
    if isinstance(key, RelativeKey):
        return DEFAULT.relative(key, n)
    return DEFAULT.absolute(key, n)


def rel_SE(profile: RelativeProfile, n: int) -> QSeries:
    return DEFAULT.rel_SE(profile, n)


def evaluate(expr: PotentialExpr | PotentialKey, n: int) -> QSeries:
    return DEFAULT.evaluate(expr, n)


def named_series(name: str, n: int) -> QSeries:
    return DEFAULT.named(name, n)
