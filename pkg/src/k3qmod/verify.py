"""Named verification suites: each returns a list of pass/fail checks with diagnostics."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import catalogue as cat
from .degeneration import assemble_f22, crosscheck_mcf
from .hecke import c_coeff, divisors, hecke_t, t_wrong
from .modforms import (
    MembershipError, QMForm, ddc2, decompose, dimension, discriminant, eisenstein_c,
    inverse_discriminant, to_qseries, DEFAULT_SURPLUS,
)
from .potentials import PotentialKey, W, check_divisor_compat, reduce, tau
from .qseries import PrecisionError, QSeries, b_op, dq, u_op

__all__ = ["Check", "SUITES", "SuiteReport", "run_suite", "random_series"]


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return f"[{mark}] {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class SuiteReport:
    suite: str
    order: int
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def format(self) -> str:
        lines = [c.line() for c in self.checks]
        passed = sum(c.ok for c in self.checks)
        lines.append(f"{self.suite}: {passed}/{len(self.checks)} checks passed (order {self.order})")
        return "\n".join(lines)


def compare(name: str, got: QSeries, want: QSeries) -> Check:
    bad = got.first_mismatch(want)
    top = min(got.order, want.order)
    if bad is None:
        return Check(name, True, f"equal through q^{top}")
    return Check(name, False, f"first mismatch at q^{bad}: {got[bad]} vs {want[bad]}")


def expect(name: str, got, want) -> Check:
    ok = got == want
    return Check(name, ok, f"{got}" if ok else f"got {got}, expected {want}")


def random_series(rng: random.Random, order: int, valuation: int | None = None) -> QSeries:
    """Random Laurent series with small rational coefficients."""
    v = rng.randint(-3, 1) if valuation is None else valuation
    coeffs = [Fraction(rng.randint(-9, 9), rng.choice((1, 1, 1, 2, 3))) for _ in range(order - v + 1)]
    return QSeries(v, coeffs)


def required_order(level: int, weight: int, pole: int, surplus: int = DEFAULT_SURPLUS) -> int:
    """Smallest order at which :func:`decompose` accepts a series of this space."""
    return dimension(level, weight + 12 * pole) + surplus - 1


# ---------------------------------------------------------------- suites


def suite_commutators(order: int) -> list[Check]:
    rng = random.Random(2026)
    checks = []
    for trial in range(3):
        f = random_series(rng, order)
        tag = f"series#{trial}"
        for d, e in ((2, 3), (3, 2), (2, 2)):
            checks.append(compare(f"B{d}B{e} = B{d*e} [{tag}]", b_op(d, b_op(e, f)), b_op(d * e, f)))
            checks.append(compare(f"U{d}U{e} = U{d*e} [{tag}]", u_op(d, u_op(e, f)), u_op(d * e, f)))
        for d in (2, 3, 5):
            checks.append(compare(f"DqB{d} = {d}B{d}Dq [{tag}]", dq(b_op(d, f)), b_op(d, dq(f)).scale(d)))
            checks.append(compare(f"U{d}Dq = {d}DqU{d} [{tag}]", u_op(d, dq(f)), dq(u_op(d, f)).scale(d)))
        for m in (2, 3, 4, 6):
            ell = rng.randint(-12, 12)
            checks.append(compare(f"T{m},{ell + 2}Dq = {m}DqT{m},{ell} [{tag}]",
                                  t_wrong(m, ell + 2, dq(f)), dq(t_wrong(m, ell, f)).scale(m)))
    checks += _check_v(order) + _check_vi(order)
    return checks


def _sample_forms() -> list[tuple[str, QMForm]]:
    c = lambda name: QMForm.generator(name, 1)
    one_over_delta = QMForm(1, -12, 1, (((0, 0, 0), 1),))
    return [
        ("C2", c("C2")),
        ("C2*C4 - 3*C6", QMForm(1, 6, 0, (((1, 1, 0), 1), ((0, 0, 1), -3)))),
        ("DqC2", QMForm(1, 4, 0, (((2, 0, 0), -2), ((0, 1, 0), 10)))),
        ("C2^3 + C6", QMForm(1, 6, 0, (((3, 0, 0), 1), ((0, 0, 1), 1)))),
        ("1/Delta", one_over_delta),
        ("DqC2/Delta", QMForm(1, -8, 1, (((2, 0, 0), -2), ((0, 1, 0), 10)))),
        ("C2^2/Delta", QMForm(1, -8, 1, (((2, 0, 0), 1),))),
    ]


def _check_v(order: int) -> list[Check]:
    """d/dC2 T_{m,l+2} = m T_{m,l} d/dC2 on decomposable forms."""
    checks = []
    for label, form in _sample_forms():
        for m in (1, 2):
            ell = form.weight - 2 if m == 1 else form.weight
            pole = m * form.pole_order
            need = max(order, required_order(m, form.weight, pole))
            f = to_qseries(form, m * need)
            lhs_series = t_wrong(m, ell + 2, f).truncate(need)
            try:
                lhs = to_qseries(ddc2(decompose(lhs_series, m, form.weight, pole)), need)
            except (MembershipError, PrecisionError) as exc:
                checks.append(Check(f"m={m} on {label}", False, str(exc)))
                continue
            rhs = t_wrong(m, ell, to_qseries(ddc2(form), m * need)).scale(m).truncate(need)
            checks.append(compare(f"d/dC2 T{m},{ell + 2} = {m} T{m},{ell} d/dC2 on {label}", lhs, rhs))
    return checks


def _check_vi(order: int) -> list[Check]:
    """[d/dC2, Dq] = -2k."""
    checks = []
    for label, form in _sample_forms():
        k = form.weight
        need = max(order, required_order(1, k + 2, form.pole_order))
        f = to_qseries(form, need)
        try:
            a = to_qseries(ddc2(decompose(dq(f), 1, k + 2, form.pole_order)), need)
        except (MembershipError, PrecisionError) as exc:
            checks.append(Check(f"on {label}", False, str(exc)))
            continue
        b = dq(to_qseries(ddc2(form), need))
        checks.append(compare(f"[d/dC2, Dq] = {-2 * k} on {label} (k={k})", a - b, f.scale(-2 * k)))
    return checks


def suite_hecke_decomp(order: int) -> list[Check]:
    rng = random.Random(7)
    checks = [
        expect("c_{-12,-2}(2) = 1023/8192", c_coeff(-12, -2, 2), Fraction(1023, 8192)),
        expect("c_{-10,0}(2) = 1023/2048", c_coeff(-10, 0, 2), Fraction(1023, 2048)),
        expect("c_{k,l}(1) = 1", {c_coeff(k, l, 1) for k in range(-12, 13, 2) for l in range(-6, 7)}, {1}),
    ]
    for trial in range(4):
        k = rng.randrange(-12, 13, 2)
        ell = rng.randint(-12, 12)
        f = random_series(rng, 12 * order)
        for m in (2, 3, 4, 6, 12):
            lhs = t_wrong(m, ell, f)
            rhs = None
            for a in divisors(m):
                term = b_op(a, hecke_t(m // a, k, f)).scale(c_coeff(k, ell, a))
                rhs = term if rhs is None else rhs + term
            checks.append(compare(f"T{m},{ell} = sum c_{{{k},{ell}}}(a) B_a T_d [series#{trial}]", lhs, rhs))
    # level-2 membership of T_{2,l} applied to a weight -12 form with a simple pole
    need = max(order, required_order(2, -12, 2))
    for ell in (-2, 4):
        image = t_wrong(2, ell, inverse_discriminant(2 * need)).truncate(need)
        try:
            form = decompose(image, 2, -12, 2)
            checks.append(Check(f"T2,{ell}(1/Delta) in Delta^-2 QMod(2)_-12", True, str(form)))
        except (MembershipError, PrecisionError) as exc:
            checks.append(Check(f"T2,{ell}(1/Delta) in Delta^-2 QMod(2)_-12", False, str(exc)))
    return checks


def suite_examples(order: int) -> list[Check]:
    f01 = cat.named_series("F_0_1", 2 * order + 2)
    f02 = cat.named_series("F_0_2", order)
    f11_t1f = cat.named_series("F_1_1_t1F", 2 * order + 2)
    checks = [
        expect("F_{0,2} at q^-2", f02[-2], Fraction(1, 8)),
        expect("F_{0,2} at q^0", f02[0], 27),
        compare("F_{1,1}(tau1 F) = (1/12) Dq F_{0,1}", f11_t1f, dq(f01).scale(Fraction(1, 12))),
        compare("F_{0,2} = U2 F01 + (1/8) B2 F01",
                f02, (u_op(2, f01) + b_op(2, f01).scale(Fraction(1, 8))).truncate(order)),
        compare("F_{0,2} = T2 F01 + (1023/8192) B2 F01",
                f02, (hecke_t(2, -12, f01) + b_op(2, f01).scale(Fraction(1023, 8192))).truncate(order)),
        compare("(1/3) Dq F_{0,2} = 2 T2 F11(tau1F) + (1023/1024) B2 F11(tau1F)",
                dq(f02).scale(Fraction(1, 3)),
                (hecke_t(2, -10, f11_t1f).scale(2) + b_op(2, f11_t1f).scale(Fraction(1023, 1024))).truncate(order)),
        compare("F_{1,2}(psi1; F) = (1/3) Dq F_{0,2}", cat.named_series("F_1_2_t1F", order),
                dq(f02).scale(Fraction(1, 3))),
    ]
    return checks


GOLDEN_F22 = {1: 36, 2: 8760, 3: 754992, 4: 36694512}


def suite_degeneration(order: int) -> list[Check]:
    f22 = assemble_f22(order)
    checks = [expect(f"F_{{2,2}}(tau0(p)^2) at q^{n}", f22[n], want) for n, want in GOLDEN_F22.items()]
    checks.append(expect("F_{2,2}(tau0(p)^2) vanishes below q^1", [str(f22[n]) for n in range(-2, 1)], ["0"] * 3))
    rep = crosscheck_mcf(order)
    detail = f"through q^{order}" if rep.ok else f"first mismatch at q^{rep.first_mismatch}"
    checks.append(Check("degeneration = multiple cover prediction", rep.ok, detail))
    return checks


def suite_compat(order: int) -> list[Check]:
    checks = []
    for m in (1, 2):
        cases = [
            (0, (tau(0, W),), reduce(PotentialKey(0, m, (tau(0, W),))).scale(20)),
            (1, (tau(1, W),), reduce(PotentialKey(1, m, (tau(1, W),))).scale(16)),
        ]
        for g, ins, want in cases:
            rep = check_divisor_compat(g, m, ins, W)
            name = f"g={g} m={m} base {' '.join(map(str, ins))} + tau0(W)"
            checks.append(Check(name + " compatible", rep.ok, str(rep.residual)))
            checks.append(expect(name + " residual", str(rep.residual), str(want)))
    return checks


def suite_membership(order: int) -> list[Check]:
    checks = []
    need = max(order, required_order(1, 4, 0))
    c2 = eisenstein_c(2, need)
    form = decompose(dq(c2), 1, 4, 0)
    checks.append(expect("decompose(Dq C2)", str(form), "-2*C2^2 + 10*C4"))

    need = max(order, required_order(2, -4, 2))
    delta2 = discriminant(need + 4) ** 2
    try:
        f22 = assemble_f22(need)
        form = decompose((delta2 * f22).truncate(need), 2, 20, 0)
        checks.append(Check("Delta^2 F_{2,2}(tau0(p)^2) in QMod(2)_20", True, f"depth {form.depth}"))
    except (MembershipError, PrecisionError) as exc:
        checks.append(Check("Delta^2 F_{2,2}(tau0(p)^2) in QMod(2)_20", False, str(exc)))

    need = max(order, required_order(2, -12, 2))
    delta2 = discriminant(need + 4) ** 2
    try:
        f02 = cat.named_series("F_0_2", need)
        form = decompose((delta2 * f02).truncate(need), 2, 12, 0)
        checks.append(expect("Delta^2 F_{0,2} has C2-degree 0", form.depth, 0))
        checks.append(expect("d/dC2 (Delta^2 F_{0,2}) = 0", ddc2(form).is_zero(), True))
    except (MembershipError, PrecisionError) as exc:
        checks.append(Check("Delta^2 F_{0,2} in QMod(2)_12", False, str(exc)))
    return checks


SUITES: dict[str, tuple[Callable[[int], list[Check]], int]] = {
    "commutators": (suite_commutators, 12),
    "hecke-decomp": (suite_hecke_decomp, 4),
    "examples": (suite_examples, 2),
    "degeneration": (suite_degeneration, 4),
    "compat": (suite_compat, 0),
    "membership": (suite_membership, 1),
}


def run_suite(name: str, order: int) -> SuiteReport:
    fn, minimum = SUITES[name]
    if order < minimum:
        raise ValueError(f"suite {name} needs order >= {minimum}")
    return SuiteReport(name, order, fn(order))
