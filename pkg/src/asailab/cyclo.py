"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Values are polynomials in zeta_M reduced modulo the M-th cyclotomic
polynomial, with Fraction coefficients.  Complex embeddings use
zeta_M = exp(2*pi*i/M).
"""

from fractions import Fraction
from functools import lru_cache

import mpmath

from .precision import mp_context


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m):
    """Coefficient tuple (low degree first) of Phi_m over Z."""
    # x^m - 1 = prod_{d | m} Phi_d
    poly = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    for d in range(1, m):
        if m % d == 0:
            poly = _polydiv_exact(poly, [Fraction(c) for c in cyclotomic_polynomial(d)])
    if any(c.denominator != 1 for c in poly):
        raise ArithmeticError(f"Phi_{m} came out non-integral")
    return tuple(int(c) for c in poly)


def _polydiv_exact(num, den):
    num = list(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] / den[-1]
        out[i] = c
        for j, dc in enumerate(den):
            num[i + j] -= c * dc
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return out


class CyclotomicValue:
    """Element of Q(zeta_M), stored reduced mod Phi_M."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m, coeffs=None):
        self.m = int(m)
        deg = len(cyclotomic_polynomial(self.m)) - 1
        cs = [Fraction(0)] * deg
        if coeffs:
            for i, c in enumerate(coeffs):
                if c:
                    cs[i] = Fraction(c)
        self.coeffs = cs

    @classmethod
    def from_exponents(cls, m, exponent_coeffs):
        """sum c_k zeta_M^k from {exponent: coeff}, exponents mod M."""
        phi = cyclotomic_polynomial(m)
        deg = len(phi) - 1
        dense = [Fraction(0)] * m
        for k, c in exponent_coeffs.items():
            dense[k % m] += Fraction(c)
        return cls(m, _reduce_mod_phi(dense, phi, deg))

    @classmethod
    def rational(cls, m, value):
        return cls(m, [Fraction(value)])

    def zero(self):
        return not any(self.coeffs)

    def rational_value(self):
        """The value as a Fraction, if it is rational."""
        if any(self.coeffs[1:]):
            raise ArithmeticError(f"{self} is not rational")
        return self.coeffs[0]

    def __add__(self, other):
        other = self._coerce(other)
        return CyclotomicValue(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicValue(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        n = len(self.coeffs)
        prod = [Fraction(0)] * (2 * n)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    prod[i + j] += a * b
        phi = cyclotomic_polynomial(self.m)
        return CyclotomicValue(self.m, _reduce_mod_phi(prod, phi, n))

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, CyclotomicValue):
            if other.m != self.m:
                raise ArithmeticError("mixed cyclotomic conductors")
            return other
        return CyclotomicValue.rational(self.m, other)

    def conjugate(self):
        """Complex conjugation zeta -> zeta^{-1}."""
        out = {0: Fraction(0)}
        for i, c in enumerate(self.coeffs):
            if c:
                out[(-i) % self.m] = out.get((-i) % self.m, Fraction(0)) + c
        return CyclotomicValue.from_exponents(self.m, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicValue.rational(self.m, other)
        return isinstance(other, CyclotomicValue) and self.m == other.m \
            and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, tuple(self.coeffs)))

    def __repr__(self):
        bits = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(bits) if bits else "0"

    def to_mpc(self, prec=None):
        with mp_context(prec):
            z = mpmath.exp(2j * mpmath.pi / self.m)
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
            return acc


def _reduce_mod_phi(dense, phi, deg):
    dense = list(dense) + [Fraction(0)] * max(0, deg + 1 - len(dense))
    for i in range(len(dense) - 1, deg - 1, -1):
        c = dense[i]
        if c:
            dense[i] = Fraction(0)
            for j in range(len(phi) - 1):
                dense[i - (len(phi) - 1) + j] -= c * phi[j]
    return dense[:deg]
