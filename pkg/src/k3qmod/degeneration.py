"""Degeneration of K3 to ``S ∪_E (P^1 x E)`` for ``F_{2,2}(tau_0(p)^2)``.

Each splitting pairs an ordered relative profile on ``(S, E)`` with a
(possibly disconnected) bubble contribution on ``(P^1 x E, E)``: a sum of
products of connected relative series whose profiles carry the dual classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .catalogue import (
    DEFAULT, OMEGA, P1E, SE, UNIT, Catalogue, RelativeKey, p1e_key, se_key,
)
from .potentials import POINT, apply_mcf, tau
from .qseries import QSeries

__all__ = [
    "BubbleTerm",
    "CrosscheckReport",
    "DegenerationPlan",
    "F22_PLAN",
    "PlanError",
    "Splitting",
    "assemble",
    "assemble_f22",
    "crosscheck_mcf",
    "mcf_prediction",
]


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class BubbleTerm:
    """``coeff * prod_c G^rel(component_c)``."""

    coeff: Fraction
    components: tuple[RelativeKey, ...]


@dataclass(frozen=True)
class Splitting:
    left: RelativeKey
    bubble: tuple[BubbleTerm, ...]
    factor: Fraction


@dataclass(frozen=True)
class DegenerationPlan:
    """Terms of the degeneration formula for ``F_{g,m}(tau_0(p)^points)`` with all points on the bubble."""

    g: int
    m: int
    points: int
    splittings: tuple[Splitting, ...]

    def __post_init__(self):
        for s in self.splittings:
            self._validate(s)

    def _validate(self, s: Splitting) -> None:
        left = s.left
        if left.geometry != SE or left.points:
            raise PlanError("left side must be an (S,E) series without point insertions")
        if left.m != self.m:
            raise PlanError(f"profile {left.profile} has divisibility {left.m}, expected {self.m}")
        if left.profile.all_omega():
            raise PlanError("all-omega profiles on (S,E) have vanishing contribution")
        if s.factor != left.profile.gluing_factor():
            raise PlanError(f"factor {s.factor} differs from prod(mu)/l! = {left.profile.gluing_factor()}")
        want = sorted(left.profile.dual().parts)
        l = left.profile.length
        for term in s.bubble:
            comps = term.components
            if any(c.geometry != P1E for c in comps):
                raise PlanError("bubble components must be (P1xE, E) series")
            if sorted(p for c in comps for p in c.profile.parts) != want:
                raise PlanError(f"bubble profile does not match the dual of {left.profile}")
            if sum(c.points for c in comps) != self.points:
                raise PlanError("bubble terms must carry every point insertion")
            genus = left.g + sum(c.g for c in comps) + l - len(comps)
            if genus != self.g:
                raise PlanError(f"glued genus {genus} != {self.g}")


def _bubble(*terms) -> tuple[BubbleTerm, ...]:
    return tuple(BubbleTerm(Fraction(c), tuple(comps)) for c, *comps in terms)


_mixed_bubble = _bubble(
    (2, p1e_key(1, 1, (1, OMEGA)), p1e_key(0, 1, (1, UNIT))),
    (1, p1e_key(0, 0, (1, OMEGA)), p1e_key(1, 2, (1, UNIT))),
)

F22_PLAN = DegenerationPlan(
    g=2, m=2, points=2,
    splittings=(
        Splitting(se_key(1, (1, UNIT), (1, OMEGA)), _mixed_bubble, Fraction(1, 2)),
        Splitting(se_key(1, (1, OMEGA), (1, UNIT)), _mixed_bubble, Fraction(1, 2)),
        Splitting(se_key(1, (2, UNIT)), _bubble((1, p1e_key(1, 2, (2, OMEGA)))), Fraction(2)),
        Splitting(
            se_key(0, (1, UNIT), (1, UNIT)),
            _bubble(
                (1, p1e_key(1, 2, (1, OMEGA), (1, OMEGA))),
                (1, p1e_key(2, 2, (1, OMEGA)), p1e_key(0, 0, (1, OMEGA))),
                (1, p1e_key(0, 0, (1, OMEGA)), p1e_key(2, 2, (1, OMEGA))),
                (2, p1e_key(1, 1, (1, OMEGA)), p1e_key(1, 1, (1, OMEGA))),
            ),
            Fraction(1, 2),
        ),
    ),
)


def assemble(plan: DegenerationPlan, n: int, catalogue: Catalogue = DEFAULT) -> QSeries:
    """Sum of ``factor * F^rel(left) * bubble`` over the plan, to order ``n``."""
    # the left factor has a pole of order m, so the bubble needs m extra terms
    wide = n + plan.m
    total = None
    for s in plan.splittings:
        bubble = None
        for term in s.bubble:
            prod_ = QSeries.constant(term.coeff, wide)
            for comp in term.components:
                prod_ = prod_ * catalogue.relative(comp, wide)
            bubble = prod_ if bubble is None else bubble + prod_
        contrib = (catalogue.relative(s.left, wide) * bubble).scale(s.factor)
        total = contrib if total is None else total + contrib
    return total.truncate(n)


def assemble_f22(n: int, catalogue: Catalogue = DEFAULT) -> QSeries:
    """``F_{2,2}(tau_0(p)^2)`` from the degeneration formula, to order ``n``."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return assemble(F22_PLAN, n, catalogue)


def mcf_prediction(n: int, catalogue: Catalogue = DEFAULT) -> QSeries:
    ins = (tau(0, POINT), tau(0, POINT))
    primitive = catalogue.named("F_2_1_pp", 2 * n)
    return apply_mcf(primitive, 2, 2, ins).truncate(n)


@dataclass(frozen=True)
class CrosscheckReport:
    ok: bool
    order: int
    first_mismatch: int | None
    degeneration: QSeries
    prediction: QSeries


def crosscheck_mcf(n: int, catalogue: Catalogue = DEFAULT) -> CrosscheckReport:
    """Compare the degeneration result with the multiple cover prediction through ``q^n``."""
    degen = assemble_f22(n, catalogue)
    pred = mcf_prediction(n, catalogue)
    bad = degen.first_mismatch(pred)
    return CrosscheckReport(bad is None, n, bad, degen, pred)
