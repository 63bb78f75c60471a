import math
import random
from fractions import Fraction

import pytest

from asailab.quadfield import (IdealRep, QuadFieldError,
                               RealQuadraticField, discriminant, find_generator,
                               fundamental_unit, ideal_from_label, ideal_label,
                               ideals_of_norm, primes_above, splitting_type,
                               totally_positive_generator)
from oracles import legendre_symbol, naive_totally_positive_search, pell_fundamental_unit


def test_discriminant_examples():
    # oracle: disc of the minimal polynomial of omega
    # d=5: x^2 - x - 1 -> 1 + 4 = 5;  d=3: x^2 - 3 -> 12
    assert discriminant(5) == 5
    assert discriminant(3) == 12
    with pytest.raises(QuadFieldError):
        discriminant(1)
    with pytest.raises(QuadFieldError):
        discriminant(12)  # not squarefree
    with pytest.raises(QuadFieldError):
        discriminant(-3)


def test_splitting_examples():
    f5 = RealQuadraticField(5)
    assert legendre_symbol(5, 11) == 1
    assert splitting_type(f5, 11).is_split
    assert splitting_type(f5, 5).is_ramified
    assert legendre_symbol(5, 3) == -1
    assert splitting_type(f5, 3).is_inert
    with pytest.raises(QuadFieldError):
        splitting_type(f5, 6)


@pytest.mark.parametrize("d", [2, 3, 5, 13])
def test_splitting_trichotomy_matches_legendre(d):
    field = RealQuadraticField(d)
    for ell in range(3, 1000, 2):
        if any(ell % q == 0 for q in range(2, math.isqrt(ell) + 1)):
            continue
        if field.disc % ell == 0:
            assert splitting_type(field, ell).is_ramified
            continue
        st = splitting_type(field, ell)
        sym = legendre_symbol(field.disc % ell, ell)
        assert st.is_split == (sym == 1)
        assert st.is_inert == (sym == -1)
        for p in st.primes:
            assert p.norm() in (ell, ell * ell)


@pytest.mark.parametrize("d,expected_norm", [(5, -1), (3, 1), (2, -1), (13, -1), (7, 1)])
def test_fundamental_unit(d, expected_norm):
    field = RealQuadraticField(d)
    unit, nrm = fundamental_unit(field)
    assert nrm == expected_norm
    assert unit.norm() == nrm
    theta, a, b, norm_oracle = pell_fundamental_unit(d)
    assert norm_oracle == nrm
    assert abs(float(unit.theta1()) - theta) < 1e-9


def test_fundamental_unit_values():
    f5 = RealQuadraticField(5)
    u5, _ = fundamental_unit(f5)
    assert u5 == f5.omega()  # (1+sqrt5)/2
    f3 = RealQuadraticField(3)
    u3, _ = fundamental_unit(f3)
    assert u3 == f3.element(2, 1)  # 2 + sqrt3
    f2 = RealQuadraticField(2)
    u2, _ = fundamental_unit(f2)
    assert u2 == f2.element(1, 1)  # 1 + sqrt2


@pytest.mark.parametrize("d", [5, 3])
def test_fundamental_unit_minimality(d):
    # no unit v with 1 < theta1(v) < theta1(u): brute force below the found bound
    field = RealQuadraticField(d)
    unit, _ = fundamental_unit(field)
    bound = float(unit.theta1())
    for b in range(-8, 9):
        for a in range(-20, 21):
            x = field.element(a, b)
            if x.norm() in (1, -1) and 1.0 + 1e-12 < float(x.theta1()) < bound - 1e-12:
                raise AssertionError(f"smaller unit {x} found")


def test_norm_multiplicativity_random():
    rng = random.Random(42)
    field = RealQuadraticField(5)
    ideals = []
    for n in range(1, 60):
        ideals.extend(ideals_of_norm(field, n))
    for _ in range(500):
        a, b = rng.choice(ideals), rng.choice(ideals)
        assert (a * b).norm() == a.norm() * b.norm()


def test_totally_positive_generator_examples():
    f5 = RealQuadraticField(5)
    p11 = primes_above(f5, 11)[0]
    g = totally_positive_generator(p11)
    assert g is not None and g.is_totally_positive() and f5.ideal(g) == p11
    assert naive_totally_positive_search(f5, p11) is not None
    # (1 + sqrt3) over d=3: norm -2 and unit norm +1, so no fix exists
    f3 = RealQuadraticField(3)
    i = f3.ideal(f3.element(1, 1))
    assert (f3.element(1, 1)).norm() == -2
    assert totally_positive_generator(i) is None
    assert naive_totally_positive_search(f3, i) is None
    # identity
    assert totally_positive_generator(f5.maximal_order()) == f5.one()


def test_unit_norm_minus_one_gives_tpg_everywhere():
    # d=5 has a norm -1 unit: every principal ideal of norm < 200 has a
    # totally positive generator
    f5 = RealQuadraticField(5)
    for n in range(1, 200):
        for ideal in ideals_of_norm(f5, n):
            g = totally_positive_generator(ideal)  # class number 1: all principal
            assert g is not None
            assert g.is_totally_positive()
            assert f5.ideal(g) == ideal


def test_ideals_of_norm():
    f5 = RealQuadraticField(5)
    assert ideals_of_norm(f5, 1) == [f5.maximal_order()]
    eleven = ideals_of_norm(f5, 11)
    assert len(eleven) == 2 and eleven[0] != eleven[1]
    assert all(i.norm() == 11 for i in eleven)
    assert ideals_of_norm(f5, 3) == []
    assert len(ideals_of_norm(f5, 9)) == 1  # (3)
    assert len(ideals_of_norm(f5, 121)) == 3  # p^2, p pbar, pbar^2
    with pytest.raises(QuadFieldError):
        ideals_of_norm(f5, 0)


def test_ideal_labels_round_trip():
    f5 = RealQuadraticField(5)
    for n in (1, 4, 5, 9, 11, 19, 121, 44):
        for ideal in ideals_of_norm(f5, n):
            assert ideal_from_label(f5, ideal_label(ideal)) == ideal
    with pytest.raises(QuadFieldError):
        ideal_from_label(f5, "3.0")
    with pytest.raises(QuadFieldError):
        ideal_from_label(f5, "11.2")


def test_different():
    for d, norm in ((5, 5), (3, 12), (2, 8), (13, 13)):
        field = RealQuadraticField(d)
        assert field.different().norm() == field.disc == norm


def test_ideal_factorisation_round_trip():
    f5 = RealQuadraticField(5)
    rng = random.Random(7)
    pool = [i for n in range(2, 40) for i in ideals_of_norm(f5, n)]
    for _ in range(50):
        ideal = rng.choice(pool) * rng.choice(pool)
        out = f5.maximal_order()
        for p, e in ideal.factor():
            out = out * p ** e
        assert out == ideal


def test_element_arithmetic_and_signs():
    f5 = RealQuadraticField(5)
    w = f5.omega()
    assert w * w == w + 1  # omega^2 = omega + 1 for d = 5
    assert w.norm() == -1 and w.trace() == 1
    x = f5.element(Fraction(3, 2), Fraction(-1, 2))
    assert x * x.inverse() == f5.one()
    assert (x.conjugate().conjugate()) == x
    sqrt5 = f5.sqrt_d()
    assert sqrt5.sign_theta1() == 1 and sqrt5.sign_theta2() == -1
    assert sqrt5 * sqrt5 == f5.element(5)


def test_hnf_invariants():
    f5 = RealQuadraticField(5)
    p, q = primes_above(f5, 11)
    prod = p * q
    assert prod == f5.ideal(f5.element(11))
    n, m, g = prod.hnf()
    assert n % g == 0 and m % g == 0 and 0 <= m < n
    with pytest.raises(QuadFieldError):
        IdealRep(f5, 4, 1, 2)  # g does not divide m


def test_find_generator_rejects_only_on_failure():
    f5 = RealQuadraticField(5)
    for n in (4, 5, 9, 11):
        for ideal in ideals_of_norm(f5, n):
            gen = find_generator(ideal)
            assert f5.ideal(gen) == ideal
