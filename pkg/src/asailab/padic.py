"""Ordinary p-stabilisation parameters, the no-exceptional-zero test, and
Perrin-Riou interpolation factors with Gauss sums.

p-adic quantities are (valuation, unit) pairs with the unit carried to a
finite precision (default 20 digits); valuation bookkeeping is exact.  The
Iwasawa algebra is never materialised: every interpolation statement is
exercised through (j, eta) specialisations.
"""

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .coeffs import QuadElt
from .cyclo import CyclotomicValue
from .characters import RootOfUnity


class PadicError(ValueError):
    pass


class NEZFailure(PadicError):
    pass


def _vp_int(n, p):
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _as_fraction(x):
    if isinstance(x, QuadElt):
        return x.as_fraction()
    return Fraction(x)


def vp_fraction(x, p):
    """Exact p-adic valuation of a nonzero rational."""
    x = _as_fraction(x)
    if x == 0:
        raise PadicError("valuation of zero")
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


class PadicNumber:
    """p^val * unit with the unit known mod p^prec."""

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p, val, unit, prec):
        self.p = int(p)
        self.prec = int(prec)
        mod = self.p ** self.prec
        unit = int(unit) % mod
        if unit % self.p == 0:
            raise PadicError("unit part divisible by p")
        self.val = int(val)
        self.unit = unit

    @classmethod
    def from_rational(cls, x, p, prec):
        x = _as_fraction(x)
        if x == 0:
            raise PadicError("zero has no p-adic unit decomposition")
        v = vp_fraction(x, p)
        num = x.numerator // p ** max(0, v)
        den = x.denominator // p ** max(0, -v)
        mod = p ** prec
        unit = (num % mod) * pow(den % mod, -1, mod) % mod
        return cls(p, v, unit, prec)

    def __mul__(self, other):
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        mod = self.p ** prec
        return PadicNumber(self.p, self.val + other.val,
                           (self.unit * other.unit) % mod, prec)

    __rmul__ = __mul__

    def inverse(self):
        mod = self.p ** self.prec
        return PadicNumber(self.p, -self.val, pow(self.unit, -1, mod), self.prec)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __add__(self, other):
        other = self._coerce(other)
        v = min(self.val, other.val)
        # both known mod p^{val + prec}
        known = min(self.val + self.prec, other.val + other.prec)
        mod = self.p ** (known - v)
        tot = (self.unit * self.p ** (self.val - v)
               + other.unit * self.p ** (other.val - v)) % mod
        if tot == 0:
            raise PadicError(f"cancellation exceeds precision p^{known}")
        shift = _vp_int(tot, self.p)
        return PadicNumber(self.p, v + shift, tot // self.p ** shift,
                           known - v - shift)

    __radd__ = __add__

    def __neg__(self):
        mod = self.p ** self.prec
        return PadicNumber(self.p, self.val, (-self.unit) % mod, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise PadicError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.from_rational(other, self.p, self.prec)
        if isinstance(other, QuadElt) and other.is_rational:
            return PadicNumber.from_rational(other.as_fraction(), self.p, self.prec)
        raise PadicError(f"cannot coerce {other!r} to a p-adic number")

    def unit_is(self, target):
        """Whether the unit part equals the rational target to stored precision."""
        t = PadicNumber.from_rational(target, self.p, self.prec)
        if t.val != 0:
            return False
        prec = min(self.prec, t.prec)
        mod = self.p ** prec
        return (self.unit - t.unit) % mod == 0

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except PadicError:
            return NotImplemented
        if self.val != other.val:
            return False
        prec = min(self.prec, other.prec)
        mod = self.p ** prec
        return (self.unit - other.unit) % mod == 0

    def __hash__(self):
        return hash((self.p, self.val, self.unit % self.p ** min(self.prec, 8)))

    def __repr__(self):
        return f"{self.p}^{self.val} * ({self.unit} + O({self.p}^{self.prec}))"


def hensel_sqrt(e, p, prec, root_choice=None):
    """Square root of e mod p^prec (p odd, p not dividing e); None if e is a non-residue.

    root_choice picks the lift: any integer r with r^2 = e mod p.
    """
    e = int(e) % p ** prec
    if p == 2:
        raise PadicError("p = 2 square roots unsupported")
    if e % p == 0:
        raise PadicError("need e a p-adic unit")
    r0 = None
    if root_choice is not None:
        if (root_choice * root_choice - e) % p:
            raise PadicError(f"{root_choice} is not a square root of {e} mod {p}")
        r0 = root_choice % p
    else:
        for r in range(1, p):
            if (r * r - e) % p == 0:
                r0 = r
                break
        if r0 is None:
            return None
    k = 1
    r = r0
    while k < prec:
        k = min(2 * k, prec)
        mod = p ** k
        r = (r - (r * r - e) * pow(2 * r, -1, mod)) % mod
    return r


def hensel_unit_root(trace, const, p, prec):
    """Unit root of X^2 - trace*X + const, for v(trace) = 0 < v(const)."""
    mod = p ** prec
    t = PadicNumber.from_rational(trace, p, prec)
    if t.val != 0:
        raise PadicError("not ordinary: trace is not a p-adic unit")
    c = _as_fraction(const)
    if c != 0 and vp_fraction(c, p) < 1:
        raise PadicError("constant term must have positive valuation")
    tm = t.unit % mod
    cm = int((Fraction(c.numerator) * pow(c.denominator, -1, mod)) % mod) if c else 0
    x = tm % p
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        m = p ** k
        fx = (x * x - tm * x + cm) % m
        dfx = (2 * x - tm) % m
        x = (x - fx * pow(dfx, -1, m)) % m
    return PadicNumber(p, 0, x, prec)


def to_padic(value, p, prec=20, embedding=None):
    """Coerce an exact value (or PadicNumber) into a PadicNumber."""
    if isinstance(value, PadicNumber):
        return value
    if isinstance(value, QuadElt) and not value.is_rational:
        e = value.field.e
        if _vp_int(e, p) not in (0, None):
            raise PadicError(f"sqrt({e}) not a unit at {p}")
        r = hensel_sqrt(e % p ** prec, p, prec, embedding)
        if r is None:
            raise PadicError(f"{e} is not a square mod {p}; embedding undefined")
        # a + b*sqrt(e) -> the exact rational a + b*r, then reduce
        num = value.a + value.b * r
        if num == 0:
            raise PadicError("value vanishes to working precision under the embedding")
        return PadicNumber.from_rational(num, p, prec)
    if isinstance(value, QuadElt):
        value = value.as_fraction()
    return PadicNumber.from_rational(value, p, prec)


def padic_valuation_of_value(value, p, embedding=None, precision=20):
    """Exact p-adic valuation of a nonzero exact value under an embedding."""
    if isinstance(value, PadicNumber):
        return value.val
    if isinstance(value, QuadElt) and not value.is_rational:
        # v(x) <= v(Norm x); lift with enough digits to decide exactly
        nrm = value.norm()
        bound = max(0, vp_fraction(nrm, p)) + precision
        x = to_padic(value, p, bound, embedding)
        return x.val
    if isinstance(value, QuadElt):
        value = value.as_fraction()
    return vp_fraction(value, p)


# -- ordinary stabilisation data ---------------------------------------------


@dataclass
class OrdinaryData:
    """alpha/beta parameters of an ordinary p-stabilised form, p split."""
    p: int
    k: int
    kprime: int
    alpha_p: object            # unit eigenvalue at the prime frak-p
    alpha_q: object            # unit eigenvalue at the conjugate prime
    eps_p: object = 1
    eps_q: object = 1
    m_choice: str = "alpha_p_beta_q"   # quotient used for M_p in the equal case
    eps_rational: object = None        # optional callable n -> eps value on Z
    notes: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        for name, val in (("alpha_p", self.alpha_p), ("alpha_q", self.alpha_q)):
            if padic_valuation_of_value(val, self.p) != 0:
                raise PadicError(f"{name} is not a p-adic unit; form not ordinary")

    @property
    def beta_p(self):
        return _div(_scale_power(self.eps_p, self.p, self.k + 1), self.alpha_p, self.p)

    @property
    def beta_q(self):
        return _div(_scale_power(self.eps_q, self.p, self.kprime + 1), self.alpha_q, self.p)

    def alpha_rational(self):
        """alpha_p(F) = alpha_frak_p * alpha_frak_q."""
        return _mul(self.alpha_p, self.alpha_q, self.p)

    def frobenius_eigenvalues(self):
        """[(name, value)] for the four crystalline Frobenius eigenvalues."""
        return [
            ("alpha_p*alpha_q", _mul(self.alpha_p, self.alpha_q, self.p)),
            ("beta_p*alpha_q", _mul(self.beta_p, self.alpha_q, self.p)),
            ("alpha_p*beta_q", _mul(self.alpha_p, self.beta_q, self.p)),
            ("beta_p*beta_q", _mul(self.beta_p, self.beta_q, self.p)),
        ]

    def m_p_eigenvalue(self):
        """The product attached to the chosen 1-dimensional quotient M_p."""
        if self.m_choice == "alpha_p_beta_q":
            return _mul(self.alpha_p, self.beta_q, self.p)
        if self.m_choice == "beta_p_alpha_q":
            return _mul(self.beta_p, self.alpha_q, self.p)
        raise PadicError(f"unknown m_choice {self.m_choice!r}")

    def valuations(self):
        return sorted(padic_valuation_of_value(v, self.p)
                      for _, v in self.frobenius_eigenvalues())


def _scale_power(eps, p, exp):
    if isinstance(eps, (int, Fraction)):
        return Fraction(eps) * p ** exp
    return eps * Fraction(p ** exp)


def _mul(a, b, p):
    if isinstance(a, PadicNumber) or isinstance(b, PadicNumber):
        a = a if isinstance(a, PadicNumber) else to_padic(a, p, 20)
        return a * b
    return a * b


def _div(a, b, p):
    if isinstance(a, PadicNumber) or isinstance(b, PadicNumber):
        b = b if isinstance(b, PadicNumber) else to_padic(b, p, 20)
        if not isinstance(a, PadicNumber):
            a = to_padic(a, p, b.prec)
        return a / b
    if isinstance(a, QuadElt) or isinstance(b, QuadElt):
        return a / b
    return Fraction(a) / Fraction(b)


def stabilized_params(form, p, precision=20, m_choice="alpha_p_beta_q",
                      frak_p_index=0, embedding=None):
    """OrdinaryData for a split p.

    If p divides the level, the stored U-eigenvalues are used (exactly when the
    coefficient data is rational).  Otherwise the p-stabilisation is performed
    on the fly: alpha at each prime above p is the Hensel unit root of
    X^2 - mu X + p^{k(*)+1} eps, mu the normalised T-eigenvalue.
    """
    p = int(p)
    st = form.field.splitting_type(p)
    if not st.is_split:
        raise PadicError(f"p = {p} is not split in Q(sqrt({form.field.d}))")
    primes = list(st.primes)
    if frak_p_index:
        primes.reverse()
    w = form.weight
    t_by_prime = (w.t1, w.t2)  # per-slot k enters through w.w - 1 - 2*t_slot
    values = []
    eps_vals = []
    stabilised_here = form.rational_level() % p != 0
    for slot, prime in enumerate(primes):
        t_slot = t_by_prime[slot]
        eps_v = form.eps_of(prime)
        eps_vals.append(eps_v)
        lam = form.lambda_of(prime) if stabilised_here else form.stored(prime)
        if lam is None:
            raise PadicError(f"U-eigenvalue missing at a prime above {p}")
        mu = _normalise(lam, p, t_slot)
        if stabilised_here:
            const = _normalise(Fraction(p ** (w.w - 1)) * eps_v, p, 2 * t_slot)
            # const = p^{k_slot + 1} eps up to the t-normalisation
            if isinstance(mu, QuadElt) and not mu.is_rational:
                mu = to_padic(mu, p, precision, embedding)
            if isinstance(mu, PadicNumber):
                alpha = hensel_unit_root_padic(mu, const, p, precision)
            else:
                alpha = hensel_unit_root(mu, const, p, precision)
        else:
            alpha = mu
            if padic_valuation_of_value(alpha, p, embedding, precision) != 0:
                raise PadicError(f"form is not ordinary at {p}")
        values.append(alpha)
    return OrdinaryData(p=p, k=w.k, kprime=w.kprime,
                        alpha_p=values[0], alpha_q=values[1],
                        eps_p=eps_vals[0], eps_q=eps_vals[1],
                        m_choice=m_choice,
                        notes={"stabilised_on_the_fly": stabilised_here,
                               "t_normalisation": "alpha_frak = p^{-t} U(frak) per embedding"})


def _normalise(value, p, t_exp):
    scale = Fraction(1, p ** t_exp) if t_exp >= 0 else Fraction(p ** (-t_exp))
    return scale * value if not isinstance(value, PadicNumber) else \
        value * PadicNumber.from_rational(scale, p, value.prec)


def hensel_unit_root_padic(mu, const, p, prec):
    """Unit root when the trace is only known p-adically."""
    if mu.val != 0:
        raise PadicError("not ordinary: trace is not a unit")
    mod = p ** prec
    cm = to_padic(const, p, prec) if const else None
    c_int = 0 if cm is None else (cm.unit * p ** cm.val) % mod
    tm = mu.unit % mod
    x = tm % p
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        m = p ** k
        fx = (x * x - tm * x + c_int) % m
        dfx = (2 * x - tm) % m
        x = (x - fx * pow(dfx, -1, m)) % m
    return PadicNumber(p, 0, x, min(prec, mu.prec))


# -- (NEZ) ---------------------------------------------------------------------

def check_NEZ(data):
    """(holds?, witness): no Frobenius eigenvalue is +-p^m times a root of unity.

    Roots of unity in the (real) coefficient fields are +-1, so the test is
    whether eigenvalue / p^{v(eigenvalue)} equals +-1.  Shortcut: k != k'
    implies the valuations {0, k+1, k'+1, k+k'+2} are distinct from any
    integral power position only when units match, and (NEZ) is automatic.
    """
    if data.k != data.kprime:
        return True, None
    for name, val in data.frobenius_eigenvalues():
        v = padic_valuation_of_value(val, data.p)
        if isinstance(val, PadicNumber):
            if val.unit_is(1) or val.unit_is(-1):
                return False, name
        else:
            unit = val * Fraction(1, data.p ** v) if v >= 0 else val * Fraction(data.p ** (-v))
            if unit == 1 or unit == -1:
                return False, name
    return True, None


# -- Gauss sums ------------------------------------------------------------------

def gauss_sum(eta, p=None, r=None):
    """G(eta) = sum over a in (Z/p^r)^x of eta(a) zeta_{p^r}^a, exactly.

    Returns a CyclotomicValue in Q(zeta_M), M = lcm(p^r, order of eta).
    """
    modulus = eta.modulus
    if p is not None or r is not None:
        if r == 0:
            raise PadicError("Gauss sums need r >= 1")
        if p is not None and r is not None and p ** r != modulus:
            raise PadicError(f"character modulus {modulus} is not {p}^{r}")
    if modulus < 2:
        raise PadicError("Gauss sums need modulus p^r with r >= 1")
    order = eta.order
    m_root = modulus * order // math.gcd(modulus, order)
    terms = {}
    for a in range(1, modulus):
        if math.gcd(a, modulus) != 1:
            continue
        val = eta(a)
        expo = (val.e * (m_root // val.n) + a * (m_root // modulus)) % m_root
        terms[expo] = terms.get(expo, 0) + 1
    return CyclotomicValue.from_exponents(m_root, terms)


def gauss_sum_inverse(eta):
    """1/G(eta) via G * conj(G), exact; raises if the Gauss sum vanishes."""
    g = gauss_sum(eta)
    norm = (g * g.conjugate()).rational_value()
    if norm == 0:
        raise PadicError("Gauss sum vanishes (imprimitive character)")
    return g.conjugate() * Fraction(norm.denominator, norm.numerator), g, norm


# -- Perrin-Riou interpolation factors -------------------------------------------


@dataclass
class InterpFactor:
    """Scalar of the Perrin-Riou interpolation property at (j, eta)."""
    j: int
    r: int
    eta: object
    scalar: object                 # exact Fraction/QuadElt or PadicNumber
    gauss_inverse: object          # CyclotomicValue or None
    tag: str                       # 'log' or 'exp*'
    tag_constant: Fraction
    meta: dict = dataclass_field(default_factory=dict)

    def numeric(self, prec=None):
        import mpmath
        from .precision import mp_context
        with mp_context(prec):
            if isinstance(self.scalar, PadicNumber):
                raise PadicError("p-adic scalar has no archimedean embedding")
            s = self.scalar.to_mpf() if isinstance(self.scalar, QuadElt) else \
                mpmath.mpf(Fraction(self.scalar).numerator) / Fraction(self.scalar).denominator
            if self.gauss_inverse is not None:
                return s * self.gauss_inverse.to_mpc(prec)
            return mpmath.mpc(s)


def _factorial(n):
    return math.factorial(n)


def pr_interp_factor(data, j, r, eta=None, p=None, kprime=None):
    """The interpolation scalar at twist j and conductor p^r character eta.

    r = 0:  (1 - p^j / A)(1 - A / p^{1+j})^{-1},  A = alpha_frak-p * beta_frak-q,
            requiring (NEZ).
    r >= 1: (p^{1+j} / A)^r * G(eta^{-1})^{-1}.
    Tagged 'log' with (-1)^{k'-j}/(k'-j)! for j <= k', else 'exp*' with
    (j-k'-1)!.

    data is either an OrdinaryData (A, p, k' read off it) or the eigenvalue A
    itself, in which case p and kprime must be supplied.
    """
    j, r = int(j), int(r)
    if isinstance(data, OrdinaryData):
        p, kp, a_val = data.p, data.kprime, data.m_p_eigenvalue()
        if r == 0:
            holds, witness = check_NEZ(data)
            if not holds:
                raise NEZFailure(f"(NEZ) fails at {witness}; r = 0 factor undefined")
    else:
        if p is None or kprime is None:
            raise PadicError("direct eigenvalue input needs p and kprime")
        kp, a_val = int(kprime), data
    if j <= kp:
        tag, tag_const = "log", Fraction((-1) ** (kp - j), _factorial(kp - j))
    else:
        tag, tag_const = "exp*", Fraction(_factorial(j - kp - 1))
    if r == 0:
        den = 1 - _div(a_val, Fraction(p ** (1 + j)), p)
        if den == 0:
            raise NEZFailure(f"eigenvalue equals p^{1 + j}; r = 0 factor undefined")
        num = 1 - _div(Fraction(p ** j), a_val, p)
        scalar = _div(num, den, p)
        return InterpFactor(j, 0, None, scalar, None, tag, tag_const)
    if eta is None:
        raise PadicError("r >= 1 needs a character eta of conductor p^r")
    if eta.modulus != p ** r:
        raise PadicError(f"eta modulus {eta.modulus} != {p}^{r}")
    ginv, g, gnorm = gauss_sum_inverse(eta.inverse())
    ratio = _div(Fraction(p ** ((1 + j) * r)), _pow(a_val, r, p), p)
    return InterpFactor(j, r, eta, ratio, ginv, tag, tag_const,
                        meta={"gauss_norm": gnorm})


def _pow(a, e, p):
    out = None
    for _ in range(e):
        out = a if out is None else _mul(out, a, p)
    return out


class PoleError(PadicError):
    pass


def motivic_padic_L_prefactors(data, c, j, eta=None, eps_c=1):
    """The scalar (c^2 - c^{2j-k-k'} eps(c) eta(c)^2)^{-1} * pr_interp_factor.

    eta is the finite-order part of the specialisation (None = trivial, r = 0).
    Raises PoleError when the specialisation hits a zero of the c-factor.
    """
    c = int(c)
    if c <= 1:
        raise PadicError("need c > 1")
    p = data.p
    r = 0
    eta_c_sq = Fraction(1)
    if eta is not None and not eta.is_trivial():
        cond = eta.conductor()
        r = 0
        while p ** r < cond:
            r += 1
        if p ** r != cond:
            raise PadicError("eta conductor is not a power of p")
        val = eta(c)
        if val is None:
            raise PadicError(f"c = {c} not coprime to the conductor of eta")
        sq = val * val
        if sq.is_real():
            eta_c_sq = sq.as_rational()
        else:
            eta_c_sq = sq  # RootOfUnity; forces numeric handling below
    e = 2 * j - data.k - data.kprime
    scale = Fraction(c ** e) if e >= 0 else Fraction(1, c ** (-e))
    if isinstance(eta_c_sq, RootOfUnity):
        import mpmath
        cfac = c * c - float(scale) * complex(mpmath.mpc(eta_c_sq.to_mpc())) * _as_float(eps_c)
        if abs(cfac) < 1e-12:
            raise PoleError(f"c-factor vanishes at (j, eta) = ({j}, {eta})")
        interp = pr_interp_factor(data, j, r, eta)
        return {"c_factor": cfac, "interp": interp, "exact": False}
    cfac = Fraction(c * c) - scale * eta_c_sq * eps_c
    if cfac == 0:
        raise PoleError(f"c-factor vanishes at (j, eta) = ({j}, {eta}); "
                        f"pole of the motivic p-adic L-function")
    interp = pr_interp_factor(data, j, r, eta)
    scalar = _div(interp.scalar, cfac, p)
    return {"c_factor": cfac, "interp": interp, "combined_scalar": scalar,
            "exact": not isinstance(scalar, PadicNumber)}


def _as_float(x):
    if isinstance(x, QuadElt):
        return float(x)
    return float(Fraction(x))
