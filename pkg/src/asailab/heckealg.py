"""Commutative symbolic Hecke algebra with a confluent rewriting normal form.

Operators are formal symbols T, S, U, diamond <.>, scalar R, and sigma, whose
arguments are products of declared prime labels (each carrying a norm) and
units.  Distinct labels are implicitly coprime.  The rewrite rules are

    T(xy) -> T(x) T(y)                 x, y coprime
    T(u)^2 -> S(u)                     u a unit
    T(p^2) -> T(p)^2 - Norm(p) S(p)    p a prime label
    S(x)  -> <x> R(x)

together with full multiplicativity of S, <.>, R and sigma in their argument.
Diamond, R and sigma are invertible central symbols (negative powers allowed);
prime-label exponents above 2 inside a T-argument have no rewrite rule here
and are rejected.

Normal-form generators are T(p), T(u), U(x), D(p), R(p), sigma and the formal
variable X.  In norm-relation contexts the same symbols denote the covariant
(primed) operators; the commutative algebra relations are identical.
"""

from dataclasses import dataclass
from fractions import Fraction


class HeckeAlgError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeLabel:
    """Formal prime (or unit) label with a declared absolute norm."""
    name: str
    norm: int
    unit: bool = False
    conj: str | None = None

    def __post_init__(self):
        if not self.unit and self.norm < 2:
            raise HeckeAlgError(f"prime label {self.name} needs norm >= 2")


def _canon_arg(arg):
    """Canonicalise an argument into a sorted tuple of (PrimeLabel, exp)."""
    if isinstance(arg, PrimeLabel):
        items = [(arg, 1)]
    elif isinstance(arg, dict):
        items = list(arg.items())
    else:
        items = list(arg)
    merged = {}
    for lab, e in items:
        if not isinstance(lab, PrimeLabel):
            raise HeckeAlgError(f"argument atom {lab!r} is not a PrimeLabel")
        merged[lab] = merged.get(lab, 0) + int(e)
    return tuple(sorted(((lab, e) for lab, e in merged.items() if e),
                        key=lambda it: it[0].name))


# generators are (kind, payload); payload is an argument tuple for T/S/U,
# a PrimeLabel for D/R, an int for sigma, None for X.
_INVERTIBLE = {"D", "R", "G"}


class HeckePolynomial:
    """Integer/rational combination of monomials in Hecke symbols and X."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms or {})
        for mono, c in list(self.terms.items()):
            if c == 0:
                del self.terms[mono]

    @classmethod
    def constant(cls, c):
        c = Fraction(c)
        return cls({(): c} if c else {})

    @classmethod
    def generator(cls, kind, payload, exp=1):
        return cls({(((kind, payload), exp),): Fraction(1)})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HeckePolynomial.constant(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return HeckePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return HeckePolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HeckePolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HeckePolynomial({m: c * Fraction(other) for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _merge_monomials(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return HeckePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            raise HeckeAlgError("negative powers of polynomials unsupported")
        out = HeckePolynomial.constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HeckePolynomial.constant(other)
        return isinstance(other, HeckePolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono, c in sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0])):
            factors = [] if c != 1 or not mono else []
            if c != 1 or not mono:
                factors.append(str(c))
            for (kind, payload), e in mono:
                factors.append(_gen_str(kind, payload) + (f"^{e}" if e != 1 else ""))
            bits.append("*".join(factors))
        return " + ".join(bits).replace("+ -", "- ")

    # -- normal form -------------------------------------------------------

    def _normalize_once(self):
        out = HeckePolynomial()
        for mono, c in self.terms.items():
            piece = HeckePolynomial.constant(c)
            for gen, e in mono:
                piece = piece * _rewrite_power(gen, e)
            out = out + piece
        return out

    def normalize(self):
        # a product of rewritten generators can recreate a reducible power
        # (T(u) * T(u) = T(u)^2 for a unit u), so iterate to the fixed point
        cur = self
        for _ in range(4):
            nxt = cur._normalize_once()
            if nxt == cur:
                return nxt
            cur = nxt
        raise HeckeAlgError("rewriting failed to stabilise")

    def substitute_X(self, value):
        """Replace the formal variable X by another polynomial."""
        out = HeckePolynomial()
        for mono, c in self.terms.items():
            piece = HeckePolynomial.constant(c)
            for gen, e in mono:
                if gen[0] == "X":
                    piece = piece * (value ** e)
                else:
                    piece = piece * HeckePolynomial({((gen, e),): Fraction(1)})
            out = out + piece
        return out

    def sigma_decomposition(self):
        """Split a normalised polynomial by total sigma-exponent."""
        out = {}
        for mono, c in self.terms.items():
            deg = sum(e for (kind, _), e in mono if kind == "G")
            rest = tuple((g, e) for g, e in mono if g[0] != "G")
            out.setdefault(deg, {})
            out[deg][rest] = out[deg].get(rest, Fraction(0)) + c
        return {deg: HeckePolynomial(t) for deg, t in sorted(out.items())}

    def x_coefficients(self):
        """Coefficients by X-degree, as a dict degree -> HeckePolynomial."""
        out = {}
        for mono, c in self.terms.items():
            deg = sum(e for (kind, _), e in mono if kind == "X")
            rest = tuple((g, e) for g, e in mono if g[0] != "X")
            out.setdefault(deg, {})
            out[deg][rest] = out[deg].get(rest, Fraction(0)) + c
        return {deg: HeckePolynomial(t) for deg, t in sorted(out.items())}

    def specialize(self, t_values, s_values, sigma=None, d_values=None, r_values=None):
        """Evaluate a normalised polynomial at eigenvalue data.

        t_values: {label name: value of T(p)};  s_values: {label name: value of
        S(p)} applied to matched D(p)^a R(p)^a pairs.  Unpaired D/R powers need
        explicit d_values/r_values.  X stays formal: the result is a dict
        X-degree -> value.  sigma, if given, maps sigma powers to values.
        """
        out = {}
        for mono, c in self.terms.items():
            val = Fraction(c)
            xdeg = 0
            dr = {}
            for (kind, payload), e in mono:
                if kind == "X":
                    xdeg += e
                elif kind == "T":
                    (lab, k), = payload
                    if k != 1:
                        raise HeckeAlgError("specialize needs a normalised polynomial")
                    val = val * (t_values[lab.name] ** e)
                elif kind in ("D", "R"):
                    dr.setdefault(payload.name, [payload, 0, 0])
                    dr[payload.name][1 if kind == "D" else 2] += e
                elif kind == "G":
                    if sigma is None:
                        raise HeckeAlgError("sigma value missing")
                    val = val * (sigma ** e)
                else:
                    raise HeckeAlgError(f"cannot specialize symbol kind {kind}")
            for name, (lab, dd, rr) in dr.items():
                paired = min(dd, rr)
                if paired:
                    val = val * (s_values[name] ** paired)
                if dd - paired:
                    if not d_values or name not in d_values:
                        raise HeckeAlgError(f"unpaired diamond power at {name}")
                    val = val * (d_values[name] ** (dd - paired))
                if rr - paired:
                    if not r_values or name not in r_values:
                        raise HeckeAlgError(f"unpaired R power at {name}")
                    val = val * (r_values[name] ** (rr - paired))
            out[xdeg] = out.get(xdeg, 0) + val
        return {k: v for k, v in out.items() if v != 0}


def _mono_key(mono):
    return tuple(((kind, _payload_key(payload)), e) for (kind, payload), e in mono)


def _payload_key(payload):
    if isinstance(payload, PrimeLabel):
        return payload.name
    if isinstance(payload, tuple):
        return tuple((lab.name, e) for lab, e in payload)
    return payload


def _gen_str(kind, payload):
    if kind == "X":
        return "X"
    if kind == "G":
        return f"sig({payload})"
    if isinstance(payload, PrimeLabel):
        return f"{kind}({payload.name})"
    arg = "*".join(f"{lab.name}" + (f"^{e}" if e != 1 else "") for lab, e in payload)
    return f"{kind}({arg})"


def _merge_monomials(m1, m2):
    acc = dict(m1)
    for gen, e in m2:
        acc[gen] = acc.get(gen, 0) + e
    out = []
    for gen, e in acc.items():
        if e == 0:
            continue
        if e < 0 and gen[0] not in _INVERTIBLE:
            raise HeckeAlgError(f"negative power of non-invertible symbol {gen[0]}")
        out.append((gen, e))
    return tuple(sorted(out, key=lambda it: (it[0][0], _payload_key(it[0][1]))))


def _monomial(*factors):
    return _merge_monomials((), tuple(factors))


def _rewrite_power(gen, e):
    """Normal form of a single generator power, as a polynomial."""
    kind, payload = gen
    if kind == "X":
        if e < 0:
            raise HeckeAlgError("negative X powers unsupported")
        return HeckePolynomial({_monomial((("X", None), e)): Fraction(1)})
    if kind == "G":
        return HeckePolynomial({_monomial((("G", payload), e)): Fraction(1)})
    if kind == "U":
        if e < 0:
            raise HeckeAlgError("U is not invertible")
        return HeckePolynomial({_monomial((("U", payload), e)): Fraction(1)})
    if kind in ("D", "R"):
        if isinstance(payload, PrimeLabel):
            return HeckePolynomial({_monomial(((kind, payload), e)): Fraction(1)})
        out = HeckePolynomial.constant(1)
        for lab, k in payload:
            out = out * HeckePolynomial({_monomial(((kind, lab), k * e)): Fraction(1)})
        return out
    if kind == "S":
        out = HeckePolynomial.constant(1)
        for lab, k in payload:
            out = out * HeckePolynomial(
                {_monomial((("D", lab), k * e), (("R", lab), k * e)): Fraction(1)})
        return out
    if kind == "T":
        if e < 0:
            raise HeckeAlgError("T is not invertible")
        out = HeckePolynomial.constant(1)
        for lab, k in payload:
            if k < 0:
                raise HeckeAlgError("negative exponent inside a T-argument")
            if lab.unit:
                tot = k * e
                pair = HeckePolynomial({_monomial((("D", lab), 1), (("R", lab), 1)): Fraction(1)})
                out = out * (pair ** (tot // 2))
                if tot % 2:
                    out = out * HeckePolynomial(
                        {_monomial((("T", ((lab, 1),)), 1)): Fraction(1)})
            elif k == 1:
                out = out * HeckePolynomial({_monomial((("T", ((lab, 1),)), e)): Fraction(1)})
            elif k == 2:
                tp = HeckePolynomial({_monomial((("T", ((lab, 1),)), 1)): Fraction(1)})
                sp = HeckePolynomial({_monomial((("D", lab), 1), (("R", lab), 1)): Fraction(1)})
                out = out * ((tp * tp - lab.norm * sp) ** e)
            else:
                raise HeckeAlgError(
                    f"no rewrite rule for T at prime power {lab.name}^{k}")
        return out
    raise HeckeAlgError(f"unknown symbol kind {kind}")


# -- public constructors --------------------------------------------------

def T(arg):
    return HeckePolynomial.generator("T", _canon_arg(arg))


def S(arg):
    return HeckePolynomial.generator("S", _canon_arg(arg))


def U(arg):
    return HeckePolynomial.generator("U", _canon_arg(arg))


def diamond(arg):
    return HeckePolynomial.generator("D", _canon_arg(arg))


def R(arg):
    return HeckePolynomial.generator("R", _canon_arg(arg))


def sigma(ell, exp=1):
    return HeckePolynomial.generator("G", int(ell), exp)


def X():
    return HeckePolynomial.generator("X", None)


def one():
    return HeckePolynomial.constant(1)


def normalize(expr):
    return expr.normalize()


# -- the paper's operator polynomials --------------------------------------

def split_labels(ell, name=None):
    """Conjugate pair of labels for a split rational prime."""
    base = name or f"l{ell}"
    lam = PrimeLabel(base, ell, conj=base + "b")
    lambar = PrimeLabel(base + "b", ell, conj=base)
    return lam, lambar


def inert_label(ell, name=None):
    """Label for the element ell generating an inert prime (norm ell^2)."""
    return PrimeLabel(name or f"q{ell}", ell * ell)


def _rational_prime_arg(ell, splitting, labels=None):
    kind = getattr(splitting, "kind", None)
    kind = kind.value if kind is not None else str(splitting)
    if kind == "split":
        lam, lambar = labels if labels else split_labels(ell)
        return kind, ((lam, 1), (lambar, 1))
    if kind == "inert":
        lab = labels if isinstance(labels, PrimeLabel) else inert_label(ell)
        return kind, ((lab, 1),)
    return kind, None


def asai_euler_symbolic(ell, splitting, labels=None):
    """Degree-4 operator-valued Euler factor at a good rational prime.

    Inert:  (1 - T(l) X + l^2 S(l) X^2)(1 - l^2 S(l) X^2).
    Split:  1 - T(l) X + (T(l)^2 - T(l^2) - l^2 S(l)) X^2
              - l^2 S(l) T(l) X^3 + l^4 S(l)^2 X^4.
    Ramified primes are rejected.  Returns the normalised polynomial.
    """
    ell = int(ell)
    kind, arg = _rational_prime_arg(ell, splitting, labels)
    x = X()
    if kind == "inert":
        p = (one() - T(arg) * x + ell ** 2 * S(arg) * x ** 2) * \
            (one() - ell ** 2 * S(arg) * x ** 2)
        return p.normalize()
    if kind == "split":
        arg2 = tuple((lab, 2 * e) for lab, e in arg)
        p = (one() - T(arg) * x
             + (T(arg) ** 2 - T(arg2) - ell ** 2 * S(arg)) * x ** 2
             - ell ** 2 * S(arg) * T(arg) * x ** 3
             + ell ** 4 * S(arg) ** 2 * x ** 4)
        return p.normalize()
    raise HeckeAlgError(f"Euler factor undefined at a {kind} prime (need ell coprime to Delta)")


def verify_split_x2_identity(lam, lambar):
    """X^2-coefficient identity for split ell = lam*lambar, narrowly principal.

    Checks, after normalisation,
        T(l)^2 - T(l^2) - l^2 S(l)
      = l <lam> R(lam) T(lambar)^2 + l <lambar> R(lambar) T(lam)^2
        - 2 l^2 <l> R(l).
    """
    if lam.unit or lambar.unit or lam.norm != lambar.norm or lam == lambar:
        raise HeckeAlgError("need two distinct conjugate split prime labels")
    ell = lam.norm
    arg = ((lam, 1), (lambar, 1))
    arg2 = ((lam, 2), (lambar, 2))
    lhs = (T(arg) ** 2 - T(arg2) - ell ** 2 * S(arg)).normalize()
    rhs = (ell * diamond(lam) * R(lam) * T(lambar) ** 2
           + ell * diamond(lambar) * R(lambar) * T(lam) ** 2
           - 2 * ell ** 2 * diamond(arg) * R(arg)).normalize()
    return lhs == rhs


def norm_relation_symbolic(ell, j, k, kprime, splitting="inert", labels=None):
    """The Euler-system norm-relation operator, normalised.

    Returns  l^j sigma_l [ (l-1)(1 - l^{-2j} <l^{-1}> R'(l) sigma_l^{-2})
                           - l P'_l(l^{-1-j} sigma_l^{-1}) ]
    as a Laurent polynomial in sigma_l whose coefficients are Hecke
    polynomials.  Symbols denote the covariant operators here; the
    commutative relations used for normalisation are the same.
    """
    ell = int(ell)
    if not 0 <= j <= min(k, kprime):
        raise HeckeAlgError(f"need 0 <= j <= min(k, k'), got j={j}")
    kind, arg = _rational_prime_arg(ell, splitting, labels)
    if arg is None:
        raise HeckeAlgError("norm relation needs an unramified prime")
    labs = tuple(lab for lab, _ in arg) if kind == "split" else arg[0][0]
    p = asai_euler_symbolic(ell, kind, labs)
    sub = Fraction(1, ell ** (1 + j)) * sigma(ell, -1)
    p_at = p.substitute_X(sub)
    bracket = (ell - 1) * (one() - Fraction(1, ell ** (2 * j)) * S(arg) * sigma(ell, -2)) \
        - ell * p_at
    return (ell ** j * sigma(ell) * bracket).normalize()
