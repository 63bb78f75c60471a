import json
from fractions import Fraction

import pytest

from asailab.coeffs import CoefficientField
from asailab.eigenform import (EigenformError, HilbertEigenform,
                               MissingEigenvalueError, Weight, alpha_coeff,
                               base_change, check_hecke_relations,
                               discriminant_form_ap, is_ordinary, load_eigenform)
from asailab.quadfield import RealQuadraticField, ideal_label
from oracles import tau_oracle

CF = CoefficientField(None)


def test_weight_validation():
    w = Weight(4, 2, 0, 1)
    assert (w.k, w.kprime, w.w) == (2, 0, 4)
    with pytest.raises(EigenformError):
        Weight(3, 4, 0, 0)  # parity
    with pytest.raises(EigenformError):
        Weight(4, 4, 0, 1)  # r1 + 2t1 != r2 + 2t2
    with pytest.raises(EigenformError):
        Weight(1, 1, 0, 0)


def test_tau_table_matches_independent_oracle():
    ours = discriminant_form_ap(200)
    oracle = tau_oracle(200)
    for p, v in ours.items():
        assert v == oracle[p]
    assert ours[2] == -24 and ours[3] == 252 and ours[11] == 534612


def test_base_change_examples(field5):
    ap = discriminant_form_ap(120)
    form = base_change(ap, 12, None, field5, bound=120)
    # inert 2: lambda(2 O_F) = tau(2)^2 - 2 * 2^11
    assert form.lambda_rational(2) == (-24) ** 2 - 2 * 2 ** 11 == -3520
    # split 11: lambda at both primes equals tau(11)
    for p in field5.primes_above(11):
        assert form.stored(p) == tau_oracle(20 ** 2)[11]
    # Galois-conjugation symmetry
    for ell in (11, 19, 29):
        p, q = field5.primes_above(ell)
        assert form.stored(p) == form.stored(q)
        assert q == p.conjugate()


def test_base_change_zero_input():
    field5 = RealQuadraticField(5)
    ap = {p: 0 for p in (2, 3, 5, 7)}
    form = base_change(ap, 2, None, field5, bound=7)
    # inert 3, k_cl = 2: lambda(3 O_F) = 0 - 2 * 3 = -6
    assert form.lambda_rational(3) == -6


def test_base_change_missing_ap():
    field5 = RealQuadraticField(5)
    with pytest.raises(MissingEigenvalueError):
        base_change({2: -24}, 12, None, field5, bound=10)
    with pytest.raises(EigenformError):
        base_change({2: -24}, 1, None, field5, bound=2)


def test_check_hecke_relations(field5, bc_form_500):
    assert check_hecke_relations(bc_form_500, 100) == []
    # perturb lambda(p^2) by +1: exactly one violation at the square
    ap = discriminant_form_ap(150)
    form = base_change(ap, 12, None, field5, bound=150)
    p11 = field5.primes_above(11)[0]
    key = (p11 * p11).hnf()
    form.eigenvalues[key] = form.eigenvalues[key] + 1
    violations = check_hecke_relations(form, 121)
    assert len(violations) == 1
    assert violations[0]["prime"] == ideal_label(p11)
    assert violations[0]["power"] == 2
    # trivial bound
    assert check_hecke_relations(bc_form_500, 1) == []


def test_check_hecke_relations_missing_data(field5):
    ap = discriminant_form_ap(20)
    form = base_change(ap, 12, None, field5, bound=20)
    with pytest.raises(MissingEigenvalueError):
        check_hecke_relations(form, 500)


def test_alpha_coeff(field5, bc_form_500):
    # t = t' = 0: alpha(n) = lambda(n)
    for n in (1, 2, 10, 36):
        assert alpha_coeff(bc_form_500, n) == bc_form_500.lambda_rational(n)
    assert alpha_coeff(bc_form_500, 1) == 1
    # (t, t') = (0, 1) with lambda(2) = 10 gives alpha(2) = 5
    w = Weight(4, 2, 0, 1)
    p2 = field5.primes_above(2)[0]
    eig = {p2.hnf(): CF.element(10),
           (p2 * p2).hnf(): CF.element(100 - 4 ** (w.w - 1))}
    form = HilbertEigenform(field5, w, field5.maximal_order(), CF, eig)
    assert form.alpha(2) == Fraction(5)


def test_alpha_multiplicative(bc_form_500):
    for a, b in ((2, 3), (4, 9), (11, 4), (5, 22)):
        assert bc_form_500.alpha(a * b) == bc_form_500.alpha(a) * bc_form_500.alpha(b)


def test_serialisation_round_trip(tmp_path, field5):
    ap = discriminant_form_ap(50)
    form = base_change(ap, 12, None, field5, bound=50)
    path1 = tmp_path / "form.json"
    path2 = tmp_path / "form2.json"
    form.save(path1)
    reloaded = load_eigenform(str(path1))
    reloaded.save(path2)
    assert path1.read_bytes() == path2.read_bytes()
    assert reloaded.eigenvalues == form.eigenvalues


def test_load_validation_errors(tmp_path, field5):
    ap = discriminant_form_ap(50)
    form = base_change(ap, 12, None, field5, bound=50)
    data = form.to_json()
    # weight parity violation: (k, k') = (1, 2) means weight [3, 4, ...]
    bad = dict(data, weight=[3, 4, 0, 0])
    with pytest.raises(EigenformError):
        load_eigenform(bad)
    # eigenvalue at an ideal that does not exist in the field
    bad = json.loads(json.dumps(data))
    bad["eigenvalues"].append({"ideal": "3.0", "lambda": "1"})
    with pytest.raises(Exception):
        load_eigenform(bad)
    # multiplicativity: store lambda((6)) != lambda((2)) lambda((3))
    bad = json.loads(json.dumps(data))
    six = field5.ideal(6)
    bad["eigenvalues"].append({"ideal": ideal_label(six), "lambda": "1"})
    with pytest.raises(EigenformError):
        load_eigenform(bad)
    # missing schema field
    with pytest.raises(EigenformError):
        load_eigenform({"d": 5})


def test_lambda_of_identity(bc_form_500, field5):
    assert bc_form_500.lambda_of(field5.maximal_order()) == 1
    assert bc_form_500.lambda_rational(1) == 1


def test_is_ordinary_examples(field5):
    p = 5
    w = Weight(2, 2, 0, 0)
    level = field5.ideal(p)
    five = field5.ideal(5)
    # lambda(U(p)) = p: valuation 1, not ordinary
    form = HilbertEigenform(field5, w, level, CF, {five.hnf(): CF.element(p)})
    ordinary, alpha = is_ordinary(form, p)
    assert not ordinary and alpha == p
    # lambda(U(p)) = 1 + p: unit
    form = HilbertEigenform(field5, w, level, CF, {five.hnf(): CF.element(1 + p)})
    ordinary, alpha = is_ordinary(form, p)
    assert ordinary and alpha == 1 + p
    # p does not divide the level
    form = HilbertEigenform(field5, w, field5.maximal_order(), CF,
                            {five.hnf(): CF.element(1 + p)})
    with pytest.raises(EigenformError):
        is_ordinary(form, p)


def test_is_ordinary_quadratic_coefficients(field5):
    # coefficient field Q(sqrt 2), p = 7: sqrt2 = 3 or 4 mod 7
    cf = CoefficientField(2)
    w = Weight(2, 2, 0, 0)
    level = field5.ideal(7)
    seven = field5.ideal(7)
    val = cf.element(4, -1)  # 4 - sqrt2 = 1 mod 7 under sqrt2 -> 3: unit
    form = HilbertEigenform(field5, w, level, cf, {seven.hnf(): val})
    ordinary, _ = is_ordinary(form, 7, v_embedding=3)
    assert ordinary
    ordinary2, _ = is_ordinary(form, 7, v_embedding=4)  # 4 - 4 = 0 mod 7
    assert not ordinary2


def test_nebentype_lookup(field5):
    w = Weight(2, 2, 0, 0)
    p11, q11 = field5.primes_above(11)
    eig = {p11.hnf(): CF.element(1), q11.hnf(): CF.element(1),
           (p11 * p11).hnf(): CF.element(1 - 11 ** (w.w - 1) * -1),
           (q11 * q11).hnf(): CF.element(1 - 11 ** (w.w - 1) * -1)}
    neb = {p11.hnf(): CF.element(-1), q11.hnf(): CF.element(-1)}
    form = HilbertEigenform(field5, w, field5.maximal_order(), CF, eig, neb)
    assert form.eps_of(p11) == -1
    assert form.eps_of(p11 * q11) == 1
    plain = HilbertEigenform(field5, w, field5.maximal_order(), CF, dict(eig))
    assert plain.eps_of(p11) == 1
