from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from k3qmod.catalogue import (
    DEFAULT, NAMED_KEYS, OMEGA, UNIT, Catalogue, FiberKey, RelativeProfile, UncataloguedError,
    base_series, fiber_series, named_series, p1e_key, rel_P1E, rel_SE, se_key,
)
from k3qmod.modforms import bernoulli, eisenstein_c, inverse_discriminant
from k3qmod.potentials import F, POINT, PotentialKey, apply_mcf, tau
from k3qmod.qseries import QSeries, dq

import oracles

ORDER = 20


def _oracle_dq_c2_over_delta(top: int, power: int = 1) -> dict:
    d = oracles.dq(oracles.eisenstein_c(2, top + 2))
    num = {0: Fraction(1)}
    for _ in range(power):
        num = oracles.poly_mul(num, d, top + 2)
    return oracles.poly_mul(num, oracles.inverse_delta(top + 2), top)


class TestAbsolute:
    def test_yau_zaslow_leading_terms(self):
        f = base_series(NAMED_KEYS["F_0_1"], 5)
        assert (f.valuation, f[-1], f[0]) == (-1, 1, 24)
        want = oracles.inverse_delta(30)
        got = named_series("F_0_1", 30)
        assert all(got[n] == want.get(n, 0) for n in range(-1, 31))

    def test_genus1_point_entry(self):
        want = _oracle_dq_c2_over_delta(ORDER)
        got = named_series("F_1_1_p", ORDER)
        assert all(got[n] == want.get(n, 0) for n in range(-1, ORDER + 1))
        assert (got[-1], got[0]) == (0, 1)

    def test_genus2_two_points_entry(self):
        got = named_series("F_2_1_pp", ORDER)
        assert (got[0], got[1]) == (0, 1)
        want = _oracle_dq_c2_over_delta(ORDER, power=2)
        assert all(got[n] == want.get(n, 0) for n in range(-1, ORDER + 1))

    def test_divisibility_two_genus0(self):
        f = named_series("F_0_2", 10)
        assert (f.valuation, f[-2], f[-1], f[0]) == (-2, Fraction(1, 8), 0, 27)

    @pytest.mark.parametrize("name,primitive,ell", [
        ("F_0_2", "F_0_1", -2), ("F_1_2_p", "F_1_1_p", 2), ("F_2_2_pp", "F_2_1_pp", 6)])
    def test_divisibility_two_matches_coefficient_formula(self, name, primitive, ell):
        prim = named_series(primitive, 2 * ORDER + 2)
        coeffs = {n: c for n, c in prim.items() if c}
        got = named_series(name, ORDER)
        for n in range(got.valuation, ORDER + 1):
            assert got[n] == oracles.t_wrong_coeff(2, ell, coeffs, n)

    @pytest.mark.parametrize("name", ["F_0_2", "F_1_2_p", "F_2_2_pp"])
    def test_divisibility_two_is_mcf_of_primitive(self, name):
        key = NAMED_KEYS[name]
        prim = base_series(key.replace(m=1), 2 * ORDER)
        assert base_series(key, ORDER) == apply_mcf(prim, key.g, 2, key.insertions).truncate(ORDER)

    def test_psi_marker_entries(self):
        f01 = named_series("F_0_1", 21)
        assert named_series("F_1_1_t1F", 20) == dq(f01).scale(Fraction(1, 12)).truncate(20)
        f02 = named_series("F_0_2", 21)
        assert named_series("F_1_2_t1F", 20) == dq(f02).scale(Fraction(1, 3)).truncate(20)

    def test_evaluate_reduces_first(self):
        # the divisor equation turns tau0(F) into multiplication by m
        key = PotentialKey(0, 2, (tau(0, F),))
        assert DEFAULT.evaluate(key, 10) == named_series("F_0_2", 10).scale(2)

    def test_uncatalogued(self):
        with pytest.raises(UncataloguedError):
            base_series(PotentialKey(3, 1, (tau(0, POINT),) * 3), 5)
        with pytest.raises(UncataloguedError):
            named_series("F_9_9", 5)


class TestOverrides:
    def test_override_primitive(self):
        cat = Catalogue({"F_0_1": lambda n: QSeries.constant(1, n)})
        assert cat.named("F_0_1", 4) == QSeries.constant(1, 4)
        # divisibility two follows the overridden primitive
        assert cat.named("F_0_2", 4) == apply_mcf(QSeries.constant(1, 8), 0, 2, ()).truncate(4)
        assert DEFAULT.named("F_0_1", 4)[0] == 24

    def test_only_primitives(self):
        with pytest.raises(UncataloguedError):
            Catalogue({"F_0_2": lambda n: QSeries.constant(1, n)})


class TestFiber:
    def test_genus2_q1(self):
        assert fiber_series(FiberKey(2), 3)[1] == Fraction(1, 12)
        assert named_series("FE_2", 3) == fiber_series(2, 3)

    @pytest.mark.parametrize("g", range(1, 8))
    def test_constant_term_sign(self, g):
        c0 = fiber_series(g, 0)[0]
        assert c0 != 0
        assert (c0 > 0) == (g % 2 == 0)
        assert c0 == -oracles.bernoulli(2 * g) * factorial(g) / (2 ** (g - 1) * 2 * g * factorial(2 * g))

    def test_genus_one_is_c2(self):
        assert fiber_series(1, 10) == eisenstein_c(2, 10)

    def test_bad_genus(self):
        with pytest.raises(ValueError):
            FiberKey(0)


class TestRelativeSE:
    def test_two_unit_parts(self):
        f = rel_SE(RelativeProfile.of((1, UNIT), (1, UNIT)), 5)
        assert (f.valuation, f[-2]) == (-2, Fraction(1, 4))

    def test_double_contact(self):
        # (1/3)(-2)(1/8) - 4(-1/24)(1/8)
        f = rel_SE(RelativeProfile.of((2, UNIT)), 5)
        assert f[-2] == Fraction(-1, 12) + Fraction(1, 48) == Fraction(-1, 16)

    def test_mixed_profile_window(self):
        f = rel_SE(RelativeProfile.of((1, UNIT), (1, OMEGA)), 5)
        assert f.valuation == -2
        assert f == rel_SE(RelativeProfile.of((1, OMEGA), (1, UNIT)), 5)

    def test_mixed_profile_formula(self):
        n = 12
        f02 = named_series("F_0_2", n + 2)
        want = named_series("F_1_2_p", n) - (f02 * dq(eisenstein_c(2, n + 2))).scale(2).truncate(n)
        assert rel_SE(RelativeProfile.of((1, UNIT), (1, OMEGA)), n) == want

    def test_relative_keys(self):
        assert DEFAULT.relative(se_key(0, (1, UNIT), (1, UNIT)), 4) == rel_SE(
            RelativeProfile.of((1, UNIT), (1, UNIT)), 4)
        with pytest.raises(UncataloguedError):
            DEFAULT.relative(se_key(1, (1, UNIT), (1, UNIT)), 4)

    def test_uncatalogued_profiles(self):
        with pytest.raises(UncataloguedError):
            rel_SE(RelativeProfile.of((2, OMEGA)), 4)
        with pytest.raises(UncataloguedError):
            rel_SE(RelativeProfile.of((1, UNIT), (1, UNIT), (1, UNIT)), 4)


class TestRelativeP1E:
    def test_examples(self):
        g = rel_P1E(p1e_key(1, 1, (1, OMEGA)), 5)
        assert g[1] == 1
        assert g == dq(eisenstein_c(2, 5))
        h = rel_P1E(p1e_key(1, 2, (1, OMEGA), (1, OMEGA)), 6)
        assert h[1] == 1
        assert all(h[n] == n**3 * oracles.sigma(1, n) for n in range(1, 7))
        assert rel_P1E(p1e_key(0, 0, (1, OMEGA)), 4) == QSeries.constant(1, 4)
        assert rel_P1E(p1e_key(0, 1, (1, UNIT)), 4) == QSeries.constant(1, 4)

    def test_remaining_entries(self):
        d = dq(eisenstein_c(2, 8))
        assert rel_P1E(p1e_key(1, 2, (1, UNIT)), 8) == d.scale(2)
        assert rel_P1E(p1e_key(2, 2, (1, OMEGA)), 8) == (d * d).truncate(8)
        assert rel_P1E(p1e_key(1, 2, (2, OMEGA)), 8) == dq(d)

    def test_uncatalogued(self):
        with pytest.raises(UncataloguedError):
            rel_P1E(p1e_key(3, 0, (1, OMEGA)), 4)
        with pytest.raises(ValueError):
            rel_P1E(se_key(0, (1, UNIT)), 4)


class TestProfiles:
    def test_validation(self):
        with pytest.raises(ValueError):
            RelativeProfile(())
        with pytest.raises(ValueError):
            RelativeProfile.of((0, UNIT))
        with pytest.raises(ValueError):
            RelativeProfile.of((1, "x"))

    def test_dual_and_factor(self):
        p = RelativeProfile.of((1, UNIT), (1, OMEGA))
        assert p.dual() == RelativeProfile.of((1, OMEGA), (1, UNIT))
        assert p.gluing_factor() == Fraction(1, 2)
        assert RelativeProfile.of((2, UNIT)).gluing_factor() == 2
        assert RelativeProfile.of((2, OMEGA)).all_omega()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 4), st.sampled_from([UNIT, OMEGA])), min_size=1, max_size=4))
def test_profile_dual_is_involution(parts):
    p = RelativeProfile(tuple(parts))
    assert p.dual().dual() == p
    assert p.dual().m == p.m
    assert p.canonical().gluing_factor() == p.gluing_factor()


def test_bernoulli_sign_matches_fiber_constant():
    for g in range(1, 6):
        assert (bernoulli(2 * g) > 0) == (fiber_series(g, 0)[0] < 0)
    assert inverse_discriminant(0)[0] == 24
