import math
from fractions import Fraction

import mpmath
import pytest

from asailab.eisenstein import (EisensteinError, EisensteinPole,
                                diagonal_mellin_check, eisenstein_continued,
                                eisenstein_lattice_sum, kronecker_limit_check,
                                siegel_unit)
from oracles import classical_eisenstein_q_series, shell_ordered_lattice_sum


def test_lattice_cutoff_self_convergence():
    # spec point (k=4, alpha=1/5, tau=i, s=0): cutoffs 200 and 400 agree to
    # 1e-8 relative (the bound is tight by design)
    a2 = eisenstein_lattice_sum(4, Fraction(1, 5), 1j, 0, 200)
    a4 = eisenstein_lattice_sum(4, Fraction(1, 5), 1j, 0, 400)
    assert abs(a2 - a4) / abs(a4) < 1e-8


def test_lattice_alpha_negation_symmetry():
    # exact symmetry of the defining sum; float roundoff only
    for k in (3, 4):
        plus = eisenstein_lattice_sum(k, Fraction(1, 5), 0.3 + 1.1j, 1, 80)
        minus = eisenstein_lattice_sum(k, Fraction(-1, 5), 0.3 + 1.1j, 1, 80)
        assert abs(minus - (-1) ** k * plus) < 1e-9 * (1 + abs(plus))


def test_lattice_reordered_summation_oracle():
    # (k=0, s=2, alpha=1/4, tau=i): independent shell-ordered summation
    sq = eisenstein_lattice_sum(0, Fraction(1, 4), 1j, 2, 120)
    sh = shell_ordered_lattice_sum(0, Fraction(1, 4), 1j, 2, 120)
    assert abs(sq - sh) < 1e-9


def test_lattice_domain_errors():
    with pytest.raises(EisensteinError):
        eisenstein_lattice_sum(0, Fraction(1, 4), 1j, 1, 50)  # k + 2s = 2
    with pytest.raises(EisensteinError):
        eisenstein_lattice_sum(2, Fraction(1, 4), 1j - 2j, 0, 50)  # Im tau <= 0
    with pytest.raises(EisensteinError):
        eisenstein_lattice_sum(2, Fraction(0), 1j, 1, 50)  # alpha = 0


def test_dual_method_agreement():
    # (k=2, s=1, alpha=1/5, tau=2i) within 1e-8: k+2s = 4 truncates like
    # R^{-2}, so this point needs the largest cutoff
    lat = eisenstein_lattice_sum(2, Fraction(1, 5), 2j, 1, 1500)
    con = complex(eisenstein_continued(2, Fraction(1, 5), 2j, 1))
    assert abs(lat - con) < 1e-8
    for k, s, alpha, tau in [(6, 0, Fraction(1, 5), 1j),
                             (3, 2, Fraction(1, 4), 0.3 + 1.2j),
                             (5, 1, Fraction(2, 7), -0.25 + 0.8j),
                             (4, Fraction(3, 2), Fraction(1, 5), 1j),
                             (3, 1.25, Fraction(1, 3), 0.1 + 1.4j)]:
        lat = eisenstein_lattice_sum(k, alpha, tau, float(s), 350)
        con = complex(eisenstein_continued(k, alpha, tau, float(s)))
        assert abs(lat - con) < 1e-8, (k, s)


def test_holomorphic_specialisation_matches_q_series():
    # (k=3, s=0, alpha=1/7, tau=i): classical holomorphic Eisenstein series
    for k, alpha, tau in ((3, Fraction(1, 7), 1j), (4, Fraction(1, 5), 0.2 + 1.0j)):
        got = complex(eisenstein_continued(k, alpha, tau, 0))
        want = classical_eisenstein_q_series(k, alpha, tau)
        assert abs(got - want) < 1e-8
        lat = eisenstein_lattice_sum(k, alpha, tau, 0, 400)
        assert abs(got - lat) < 5e-7  # slower truncation at k = 3


def test_gamma1_invariance():
    tau = 0.23 + 0.9j
    alpha = Fraction(1, 5)
    for (a, b, c, d), (k, s) in [((1, 1, 0, 1), (2, 0)),
                                 ((1, 0, 5, 1), (2, 0)),
                                 ((6, 1, 5, 1), (1, 1))]:
        assert a * d - b * c == 1 and c % 5 == 0 and d % 5 == 1
        gt = (a * tau + b) / (c * tau + d)
        lhs = complex(eisenstein_continued(k, alpha, gt, s))
        rhs = (c * tau + d) ** k * complex(eisenstein_continued(k, alpha, tau, s))
        assert abs(lhs - rhs) < 1e-8


def test_conjugation_symmetry():
    # E_alpha^(k)(-conj(tau), s) = (-1)^k conj(E_alpha^(k)(tau, s)) for real s
    for k, s in ((2, 1), (3, 1), (0, 2)):
        tau = 0.37 + 1.21j
        left = complex(eisenstein_continued(k, Fraction(1, 5), -tau.conjugate(), s))
        right = (-1) ** k * complex(eisenstein_continued(k, Fraction(1, 5), tau, s)).conjugate()
        assert abs(left - right) < 1e-10


def test_pole_reporting():
    with pytest.raises(EisensteinPole):
        eisenstein_continued(0, Fraction(1, 5), 1j, 1)
    # k != 0 has no pole at s = 1
    val = eisenstein_continued(2, Fraction(1, 5), 1j, 1)
    assert mpmath.isfinite(val)


def test_cancelled_half_integer_points():
    # s = (1-k)/2 for even k: individual pieces have poles that cancel
    tau = 0.2 + 1.3j
    for k in (0, 2):
        s0 = (1 - k) / 2
        v0 = complex(eisenstein_continued(k, Fraction(1, 5), tau, s0, prec=80))
        vm = complex(eisenstein_continued(k, Fraction(1, 5), tau, s0 - 1e-7, prec=80))
        vp = complex(eisenstein_continued(k, Fraction(1, 5), tau, s0 + 1e-7, prec=80))
        assert abs((vm + vp) / 2 - v0) < 1e-10


def test_siegel_unit_properties():
    # |g(tau + 1)| = |g(tau)|
    tau = 0.3 + 0.9j
    g1 = siegel_unit(Fraction(1, 5), tau)
    g2 = siegel_unit(Fraction(1, 5), tau + 1)
    assert abs(abs(g1) - abs(g2)) < 1e-10
    # alpha = 1/2, tau = i: real positive, stable between 50 and 100 terms
    a = siegel_unit(Fraction(1, 2), 1j, terms=50)
    b = siegel_unit(Fraction(1, 2), 1j, terms=100)
    assert abs(a - b) < 1e-12
    assert abs(mpmath.im(b)) < 1e-20 and mpmath.re(b) > 0
    with pytest.raises(EisensteinError):
        siegel_unit(Fraction(1, 2), 1j, terms=0)


def test_siegel_truncation_decays_geometrically():
    # |q| = e^{-2 pi 0.25} = 0.2: errors shrink by ~|q|^4 per 4 extra terms
    tau = 0.1 + 0.25j
    vals = [complex(siegel_unit(Fraction(1, 5), tau, terms=t, prec=120))
            for t in (4, 8, 12, 40)]
    errs = [abs(v - vals[-1]) for v in vals[:-1]]
    assert errs[1] < errs[0] * 0.05 and errs[2] < errs[1] * 0.05


KRONECKER_GRID = [(Fraction(1, 4), 1j), (Fraction(1, 4), 2j), (Fraction(1, 4), (1 + 3j) / 2),
                  (Fraction(1, 5), 1j), (Fraction(1, 5), 2j), (Fraction(1, 5), (1 + 3j) / 2),
                  (Fraction(1, 7), 1j), (Fraction(1, 7), 2j), (Fraction(1, 7), (1 + 3j) / 2)]


@pytest.mark.parametrize("alpha,tau", KRONECKER_GRID)
def test_kronecker_limit_identity(alpha, tau):
    resid = float(kronecker_limit_check(alpha, tau))
    assert resid < 1e-8
    if alpha == Fraction(1, 7) and tau == 2j:
        assert resid < 1e-10  # faster q-decay


def test_mellin_check(bc_form_4000):
    lhs, rhs, resid = diagonal_mellin_check(bc_form_4000, 14, y_cutoff=40.0, n_max=600)
    assert resid < 1e-4
    assert lhs != 0
    lhs2, _, _ = diagonal_mellin_check(bc_form_4000, 14, y_cutoff=20.0, n_max=600)
    assert abs(lhs - lhs2) < 1e-6


def test_mellin_zero_form(field5):
    class ZeroForm:
        field = field5

        @staticmethod
        def alpha(n):
            return Fraction(0)

    assert diagonal_mellin_check(ZeroForm(), 14) == (0.0, 0.0, 0.0)


def test_mellin_normalisation_documented(bc_form_500):
    # rhs equals Gamma(s') (sqrt(5)/(4 pi))^{s'} * sum alpha(n) n^{-s'}
    sprime = 13.0
    _, rhs, _ = diagonal_mellin_check(bc_form_500, sprime, n_max=200)
    direct = math.gamma(sprime) * (math.sqrt(5) / (4 * math.pi)) ** sprime \
        * sum(float(bc_form_500.alpha(n)) * n ** -sprime for n in range(1, 201))
    assert abs(rhs - direct) < 1e-12 * abs(direct)

def test_lattice_high_precision_path():
    # explicit prec > 53 routes through the mpmath lattice sum
    lat = eisenstein_lattice_sum(5, Fraction(1, 5), 1j, 0, 60, prec=80)
    con = eisenstein_continued(5, Fraction(1, 5), 1j, 0, prec=80)
    assert abs(complex(lat) - complex(con)) < 1e-9

@pytest.mark.parametrize("k,s", [(1, 0), (3, -1), (2, -2), (4, -1),
                                 (0, -2), (2, 0), (4, 0)])
def test_special_point_branches_are_continuous(k, s):
    # every removable singularity of the expansion (Gamma poles against
    # Bernoulli zeros, the odd-k psi branch at k+2s = 1, the tower limits)
    # must agree with the midpoint of a small neighbourhood
    tau = 0.21 + 1.07j
    v0 = complex(eisenstein_continued(k, Fraction(1, 5), tau, s, prec=90))
    vm = complex(eisenstein_continued(k, Fraction(1, 5), tau, s - 1e-7, prec=90))
    vp = complex(eisenstein_continued(k, Fraction(1, 5), tau, s + 1e-7, prec=90))
    assert abs((vm + vp) / 2 - v0) < 1e-11

