"""Real-analytic Eisenstein series E_alpha^(k)(tau, s), Siegel units, the
Kronecker-limit identity, and the diagonal Mellin/unfolding kernel check.

E_alpha^(k)(tau, s) = (-2 pi i)^{-k} pi^{-s} Gamma(s+k)
                      * sum_{(m,n) in Z^2} y^s / ((m tau + n + alpha)^k
                                                  |m tau + n + alpha|^{2s})

for 0 < alpha < 1 rational, converging for k + 2 Re(s) > 2.  The continuation
is computed from the Fourier expansion: the m = 0 row is a pair of Hurwitz
zetas, the r = 0 tower a Riemann zeta, and the oscillating modes carry
confluent hypergeometric U-factors (incomplete-gamma type; they reduce to
upper incomplete gammas at the integer parameters used in practice).

Poles only occur for k = 0 (at s = 1); every other apparent singularity of
the pieces cancels and the cancelled limits are evaluated analytically.
"""

import math
from fractions import Fraction

import mpmath

from .precision import mp_context, working_precision


class EisensteinError(ValueError):
    pass


class EisensteinPole(EisensteinError):
    """The requested (k, s) sits on a pole of the continuation."""


def _check_alpha(alpha):
    alpha = Fraction(alpha) % 1
    if alpha == 0:
        raise EisensteinError("alpha must be nonzero mod 1")
    return alpha


def _as_tau(tau):
    t = complex(tau)
    if t.imag <= 0:
        raise EisensteinError("tau must have positive imaginary part")
    return t


def eisenstein_lattice_sum(k, alpha, tau, s, cutoff, prec=None):
    """Truncated double sum over |m|, |n| <= cutoff, with the prefactor.

    Requires absolute convergence: k + 2 Re(s) > 2.  Uses double precision
    below 54 bits of working precision, mpmath above.
    """
    k = int(k)
    alpha = _check_alpha(alpha)
    tau_c = _as_tau(tau)
    s_c = complex(s)
    if k + 2 * s_c.real <= 2:
        raise EisensteinError(f"lattice sum diverges at k={k}, Re(s)={s_c.real}")
    # truncation error dominates here, so double precision is the default;
    # pass prec explicitly to force an arbitrary-precision sum
    if prec is None or working_precision(prec) <= 53:
        return _lattice_float(k, float(alpha), tau_c, s_c, int(cutoff))
    return _lattice_mp(k, alpha, tau, s, int(cutoff), prec)


def _lattice_float(k, alpha, tau, s, cutoff):
    import numpy as np
    y = tau.imag
    ns = np.arange(-cutoff, cutoff + 1, dtype=np.complex128)
    tot = 0j
    for m in range(-cutoff, cutoff + 1):
        w = (m * tau + alpha) + ns
        val = np.ones_like(w)
        if k:
            val = w ** (-k)
        if s != 0:
            val = val * (w.real * w.real + w.imag * w.imag) ** (-s)
        tot += complex(val.sum())
    pref = (-2j * math.pi) ** (-k) * math.pi ** (-s) * _gamma_c(s + k)
    return pref * (y + 0j) ** s * tot


def _gamma_c(z):
    return complex(mpmath.gamma(complex(z)))


def _lattice_mp(k, alpha, tau, s, cutoff, prec):
    with mp_context(prec):
        tau = mpmath.mpc(tau)
        s = mpmath.mpc(s)
        y = mpmath.im(tau)
        a = mpmath.mpf(alpha.numerator) / alpha.denominator
        tot = mpmath.mpc(0)
        for m in range(-cutoff, cutoff + 1):
            base = m * tau + a
            for n in range(-cutoff, cutoff + 1):
                w = base + n
                tot += w ** (-k) * abs(w) ** (-2 * s)
        return (-2j * mpmath.pi) ** (-k) * mpmath.pi ** (-s) \
            * mpmath.gamma(s + k) * y ** s * tot


# -- analytic continuation ---------------------------------------------------

def _near_int(x, tol=1e-10):
    r = round(float(x))
    return r if abs(float(x) - r) < tol else None


def _classify_s(s):
    """(is_real, exact integer or None, exact half-integer*2 or None)."""
    s_c = complex(s)
    if s_c.imag != 0:
        return False, None, None
    n = _near_int(s_c.real)
    h = _near_int(2 * s_c.real)
    return True, n, h


def eisenstein_continued(k, alpha, tau, s, prec=None):
    """E_alpha^(k)(tau, s) by the Fourier expansion, valid for all s.

    Agrees with the lattice sum in the convergence region; raises
    EisensteinPole at the k = 0 pole (s = 1).
    """
    k = int(k)
    if k < 0:
        raise EisensteinError("negative weights unsupported; use the alpha -> -alpha symmetry")
    alpha = _check_alpha(alpha)
    _as_tau(tau)
    with mp_context(prec):
        extra = 10 + k
        with mpmath.extraprec(extra * 4):
            tau_m = mpmath.mpc(complex(tau))
            s_m = mpmath.mpc(complex(s)) if complex(s).imag else mpmath.mpf(complex(s).real)
            a_m = mpmath.mpf(alpha.numerator) / alpha.denominator
            val = _continued_impl(k, alpha, a_m, tau_m, s_m)
        return +val


def _continued_impl(k, alpha, a_m, tau, s):
    x, y = mpmath.re(tau), mpmath.im(tau)
    is_real, s_int, s_half2 = _classify_s(s)
    if is_real and s_int is not None:
        s = mpmath.mpf(s_int)
    pref_k = (-2j * mpmath.pi) ** (-k)

    # genuine pole: k = 0 at s = 1 (the zeta(2s+k-1) pole that nothing cancels)
    if k == 0 and is_real and s_int == 1:
        raise EisensteinPole("E^(0) has its pole at s = 1")

    combined_cancel = (k % 2 == 0) and is_real and s_half2 == 1 - k and s_int is None

    total = mpmath.mpc(0)

    # m = 0 row:  Gamma(s+k) [zeta(k+2s, a) + (-1)^k zeta(k+2s, 1-a)] pi^-s y^s
    if not combined_cancel:
        total += _m0_row(k, a_m, y, s, is_real, s_int, pref_k)

    # r = 0 tower (even k): 2 (2pi)^{1-k} pi^-s y^s (2y)^{1-2s-k}
    #                        * Gamma(2s+k-1) zeta(2s+k-1) / Gamma(s)
    if k % 2 == 0 and not combined_cancel:
        total += _r0_tower(k, y, s, is_real, s_int)

    if combined_cancel:
        total += _cancelled_pair(k, a_m, y, s, pref_k)

    total += _oscillating(k, a_m, x, y, s)
    return total


def _m0_row(k, a_m, y, s, is_real, s_int, pref_k):
    outer = pref_k * mpmath.pi ** (-s) * y ** s
    arg = k + 2 * s
    sign = (-1) ** k
    if is_real and s_int is not None and s_int + k <= 0:
        # Gamma pole at s+k = -n against the Bernoulli zero of the bracket
        n = -(s_int + k)
        zp = mpmath.zeta(arg, a_m, 1) + sign * mpmath.zeta(arg, 1 - a_m, 1)
        return outer * Fraction((-1) ** n, math.factorial(n)) * 2 * zp
    if is_real and _near_int(arg) == 1:
        if k % 2 == 0:
            raise EisensteinPole(f"m=0 row pole at k+2s = 1 (k = {k})")
        bracket = mpmath.psi(0, 1 - a_m) - mpmath.psi(0, a_m)
        return outer * mpmath.gamma(s + k) * bracket
    bracket = mpmath.zeta(arg, a_m) + sign * mpmath.zeta(arg, 1 - a_m)
    return outer * mpmath.gamma(s + k) * bracket


def _r0_tower(k, y, s, is_real, s_int):
    w = 2 * s + k - 1
    outer = 2 * (2 * mpmath.pi) ** (1 - k) * mpmath.pi ** (-s) * y ** s \
        * (2 * y) ** (1 - 2 * s - k)
    if is_real:
        w_int = _near_int(w)
        if w_int == 1:
            # zeta pole; finite iff 1/Gamma(s) vanishes (s a nonpositive integer)
            if s_int is None or s_int > 0:
                raise EisensteinPole("r = 0 tower pole at 2s+k = 2")
            npr = -s_int
            return outer * ((-1) ** npr * mpmath.factorial(npr)) / 2
        if w_int is not None and w_int <= 0:
            n = -w_int
            gamma_res = mpmath.mpf((-1) ** n) / mpmath.factorial(n)
            if s_int is not None and s_int <= 0:
                # Gamma(w) pole against the zero of 1/Gamma(s)
                npr = -s_int
                h = gamma_res / 2 * ((-1) ** npr * mpmath.factorial(npr)) * mpmath.zeta(w_int)
                return outer * h
            if n % 2 == 0 and n >= 2:
                # Gamma(w) pole against the trivial zero of zeta
                h = gamma_res * mpmath.zeta(mpmath.mpf(w_int), derivative=1) * mpmath.rgamma(s)
                return outer * h
            raise EisensteinPole(f"r = 0 tower pole at 2s+k-1 = {w_int}")
    return outer * mpmath.gamma(w) * mpmath.zeta(w) * mpmath.rgamma(s)


def _cancelled_pair(k, a_m, y, s, pref_k):
    """m=0 row + r=0 tower at s0 = (1-k)/2 (even k): the poles cancel.

    The finite part is f(s0) * [psi((1+k)/2) + psi((1-k)/2) + 2 log(2y)
                                - psi(alpha) - psi(1-alpha) + 2 gamma - 2 log(2 pi)],
    with f(s0) = (-2 pi i)^{-k} pi^{-s0} y^{s0} Gamma((1+k)/2).
    """
    s0 = mpmath.mpf(1 - k) / 2
    f0 = pref_k * mpmath.pi ** (-s0) * y ** s0 * mpmath.gamma(s0 + k)
    zeta_p0 = -mpmath.log(2 * mpmath.pi) / 2  # zeta'(0)
    bracket = (mpmath.psi(0, (1 + k) / mpmath.mpf(2))
               + mpmath.psi(0, (1 - k) / mpmath.mpf(2))
               + 2 * mpmath.log(2 * y)
               - mpmath.psi(0, a_m) - mpmath.psi(0, 1 - a_m)
               + 2 * mpmath.euler + 4 * zeta_p0)
    return f0 * bracket


def _oscillating(k, a_m, x, y, s):
    """The r != 0 Fourier modes, with hypergeometric-U coefficients.

    Grouped by n = r*m so each U-pair is evaluated once per exponential level;
    U(0, b, z) = 1 and the Pochhammer zero at nonpositive integer s shortcut
    the holomorphic specialisations.
    """
    pref = y ** s * (2 * mpmath.pi) ** (1 - k) * mpmath.pi ** (-s)
    poch = mpmath.rf(s, k)
    s_is_zero = s == 0
    cutoff = (working_precision(None) + 25) * mpmath.log(2)
    two_pi = 2 * mpmath.pi
    n_max = int(cutoff / (two_pi * y))
    acc = mpmath.mpc(0)
    sign = (-1) ** k
    for n in range(1, n_max + 1):
        big_n = n * y
        expo = mpmath.exp(-two_pi * big_n)
        u1 = mpmath.mpf(1) if s_is_zero else mpmath.hyperu(s, 2 * s + k, 4 * mpmath.pi * big_n)
        u2 = None if poch == 0 else mpmath.hyperu(s + k, 2 * s + k, 4 * mpmath.pi * big_n)
        row = mpmath.mpc(0)
        for r in _divisors_of(n):
            base = (two_pi * r) ** (2 * s + k - 1)
            e1 = mpmath.expjpi(2 * (n * x + r * a_m))
            e2 = mpmath.expjpi(2 * (n * x - r * a_m))
            row += base * (u1 * (e1 + sign * e2))
            if u2 is not None:
                row += base * poch * u2 * (mpmath.conj(e1) + sign * mpmath.conj(e2))
        acc += expo * row
    return pref * acc


def _divisors_of(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# -- Siegel units and the Kronecker limit --------------------------------------

def siegel_unit(alpha, tau, terms=200, prec=None):
    """g_{0,alpha}(tau) = q^{1/12} (1 - q_a) prod_{n>=1} (1 - q^n q_a)(1 - q^n/q_a).

    Truncated after `terms` product factors.  Only |g| is canonical (the
    q^{1/12} branch is fixed as exp(2 pi i tau / 12)).
    """
    alpha = _check_alpha(alpha)
    _as_tau(tau)
    if terms < 1:
        raise EisensteinError("need terms >= 1")
    with mp_context(prec):
        tau_m = mpmath.mpc(complex(tau))
        q = mpmath.exp(2j * mpmath.pi * tau_m)
        qa = mpmath.expjpi(2 * mpmath.mpf(alpha.numerator) / alpha.denominator)
        g = mpmath.exp(2j * mpmath.pi * tau_m / 12) * (1 - qa)
        qn = mpmath.mpc(1)
        for _ in range(1, int(terms)):
            qn *= q
            g *= (1 - qn * qa) * (1 - qn / qa)
        return +g


def kronecker_limit_check(alpha, tau, prec=None, terms=200):
    """|E^(0)_alpha(tau, 0) + 2 log |g_{0,alpha}(tau)||; small iff the identity holds."""
    alpha = _check_alpha(alpha)
    with mp_context(prec):
        e0 = eisenstein_continued(0, alpha, tau, 0, prec)
        g = siegel_unit(alpha, tau, terms, prec)
        return abs(mpmath.re(e0) + 2 * mpmath.log(abs(g))) + abs(mpmath.im(e0))


# -- diagonal Mellin / unfolding kernel -----------------------------------------

def diagonal_mellin_check(form, sprime, y_cutoff=40.0, n_max=600, panels=48,
                          nodes_per_panel=24):
    """Mellin transform of the trace-zero modes against the Dirichlet series.

    lhs = integral_0^{y_cutoff} W(y) y^{s'} dy/y with
          W(y) = sum_{n >= 1} alpha(n) exp(-4 pi n y / sqrt(Delta)),
    the x-average of the anti-holomorphic diagonal restriction (trace-zero
    Fourier modes are indexed by -n/sqrt(Delta)); the normalisation
    c(different^{-1}) = Delta^{-(t+t')/2} makes the coefficients exactly
    alpha(n).

    rhs = Gamma(s') (sqrt(Delta)/(4 pi))^{s'} sum alpha(n) n^{-s'}.

    Returns (lhs, rhs, relative residual).  Float64 quadrature on log-spaced
    Gauss-Legendre panels; adequate for the 1e-4 scale checks this supports.
    """
    import numpy as np
    sprime = float(sprime)
    if sprime <= 1:
        raise EisensteinError("need Re(s') > 1 for the kernel integral")
    disc = form.field.disc
    c = 4 * math.pi / math.sqrt(disc)
    alphas = np.array([float(form.alpha(n)) for n in range(1, n_max + 1)])
    ns = np.arange(1, n_max + 1, dtype=float)
    if not alphas.any():
        return 0.0, 0.0, 0.0
    # quadrature nodes: log-spaced panel edges between y_cutoff/2^panels and y_cutoff
    edges = [y_cutoff * 2.0 ** (-i) for i in range(panels, -1, -1)]
    edges[0] = 0.0
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes_per_panel)
    lhs = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = (hi + lo) / 2.0, (hi - lo) / 2.0
        ys = mid + half * gl_x
        wts = half * gl_w
        wvals = np.exp(-c * np.outer(ys, ns)) @ alphas
        lhs += float(np.sum(wts * wvals * ys ** (sprime - 1.0)))
    dirichlet = float(np.sum(alphas * ns ** (-sprime)))
    rhs = math.gamma(sprime) * (math.sqrt(disc) / (4 * math.pi)) ** sprime * dirichlet
    denom = max(abs(lhs), abs(rhs))
    resid = abs(lhs - rhs) / denom if denom else 0.0
    return lhs, rhs, resid
