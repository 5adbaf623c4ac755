"""Exact coefficient arithmetic in q, t and the stabilization variable a.

Three layers:

  * plain sparse Laurent "polys": dict mapping (e_q, e_t, e_a) -> Fraction|int,
    exponents integers or Fractions (q-exponents pick up denominators 2(n+1)
    transiently, t-exponents denominator 2);
  * Scal: a restricted fraction field poly / (product of binomial atoms);
    denominators never hold anything except cyclotomic-type atoms, which is
    all the pipeline ever produces;
  * FactoredBinomial: products of atoms kept factored so multiset gcd/lcm
    is exact without any bivariate gcd machinery.

Atoms come in two shapes:
  ('c', d, aq, at)  --  Phi_d(q^aq * t^at), the d-th cyclotomic polynomial
                        evaluated at a monomial with gcd(aq, at) = 1, at >= 0
  ('a', mq, mt)     --  1 + q^mq * t^mt * a
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, comb

import sympy


class ZeroPolynomial(Exception):
    pass


class ZeroAtAEqualsZero(Exception):
    pass


class NotABinomialProduct(Exception):
    pass


class InexactDivision(Exception):
    pass


class FractionalResidue(Exception):
    pass


# ---------------------------------------------------------------------------
# exponent / coefficient normalization helpers

def _ex(e):
    """Normalize an exponent: ints stay, integral Fractions collapse to int."""
    if type(e) is int:
        return e
    f = Fraction(e)
    return f.numerator if f.denominator == 1 else f


def _co(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def key_mul(k1, k2):
    return (_ex(k1[0] + k2[0]), _ex(k1[1] + k2[1]), k1[2] + k2[2])


# ---------------------------------------------------------------------------
# plain poly dicts

def pzero():
    return {}

def pone():
    return {(0, 0, 0): 1}

def pmono(eq=0, et=0, ea=0, c=1):
    c = _co(c)
    if c == 0:
        return {}
    return {(_ex(eq), _ex(et), ea): c}

def padd_into(acc, p, scale=1):
    if scale == 0:
        return acc
    for k, c in p.items():
        v = _co(acc.get(k, 0) + c * scale)
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc

def padd(p1, p2):
    return padd_into(dict(p1), p2)

def psub(p1, p2):
    return padd_into(dict(p1), p2, -1)

def pneg(p):
    return {k: -c for k, c in p.items()}

def pscale(p, c, key=(0, 0, 0)):
    c = _co(c)
    if c == 0:
        return {}
    if key == (0, 0, 0):
        return {k: _co(v * c) for k, v in p.items()}
    return {key_mul(k, key): _co(v * c) for k, v in p.items()}

def pmul(p1, p2):
    if len(p1) > len(p2):
        p1, p2 = p2, p1
    acc = {}
    for k1, c1 in p1.items():
        for k2, c2 in p2.items():
            k = key_mul(k1, k2)
            v = _co(acc.get(k, 0) + c1 * c2)
            if v:
                acc[k] = v
            else:
                acc.pop(k, None)
    return acc

def ppow(p, n):
    if n < 0:
        raise ValueError("negative power of a poly")
    out = pone()
    b = p
    while n:
        if n & 1:
            out = pmul(out, b)
        b = pmul(b, b)
        n >>= 1
    return out


def pdivexact(num, den):
    """Exact division of poly dicts; returns quotient or raises InexactDivision.

    Leading-term elimination under lex order on (e_a, e_q, e_t); iteration
    capped, which suffices for every divisor the pipeline produces.
    """
    if not den:
        raise ZeroDivisionError
    if not num:
        return {}
    dlead = max(den)
    dc = den[dlead]
    rem = dict(num)
    quo = {}
    steps = 0
    cap = 64 * (len(num) + len(den)) + 4096
    while rem:
        steps += 1
        if steps > cap:
            raise InexactDivision("division did not terminate")
        lead = max(rem)
        qk = (_ex(lead[0] - dlead[0]), _ex(lead[1] - dlead[1]),
              lead[2] - dlead[2])
        qc = _co(Fraction(rem[lead], dc))
        quo[qk] = qc
        for k, c in den.items():
            kk = key_mul(qk, k)
            v = _co(rem.get(kk, 0) - qc * c)
            if v:
                rem[kk] = v
            else:
                rem.pop(kk, None)
    return quo


def pdivides(num, den):
    try:
        return pdivexact(num, den)
    except InexactDivision:
        return None


def psubstitute(p, q=None, t=None, a=None, strict=False):
    """Substitute monomials-with-sign for the variables.

    Each of q, t, a may be None (identity) or a tuple (c, eq, et, ea) meaning
    the variable maps to c * q^eq * t^et * a^ea with c a rational scalar
    (commonly +-1).  Raises FractionalResidue in strict mode if any resulting
    exponent is fractional.
    """
    subs = []
    for idx, s in enumerate((q, t, a)):
        if s is not None:
            subs.append((idx, s))
    if not subs:
        return dict(p)
    out = {}
    for k, c in p.items():
        eq, et, ea = k
        coeff = c
        parts = [0, 0, 0]
        exps = (eq, et, ea)
        for idx in range(3):
            e = exps[idx]
            s = (q, t, a)[idx]
            if s is None:
                parts[0] += e if idx == 0 else 0
                parts[1] += e if idx == 1 else 0
                parts[2] += e if idx == 2 else 0
                continue
            sc, seq, set_, sea = s
            if sc != 1:
                if e != int(e):
                    raise FractionalResidue("sign raised to fractional power")
                coeff = coeff * Fraction(sc) ** int(e)
            parts[0] += seq * e
            parts[1] += set_ * e
            parts[2] += sea * e
        if coeff == 0:
            continue
        kk = (_ex(parts[0]), _ex(parts[1]), parts[2])
        if strict and not (type(kk[0]) is int and type(kk[1]) is int
                           and type(kk[2]) is int):
            raise FractionalResidue(f"fractional exponent {kk}")
        if type(kk[2]) is not int:
            raise FractionalResidue(f"fractional a-exponent {kk}")
        v = _co(out.get(kk, 0) + coeff)
        if v:
            out[kk] = v
        else:
            out.pop(kk, None)
    return out


def hat_normalize(p):
    """Divide by +-q^i t^j so p(a=0) starts at q^0 t^0 with positive lead.

    Lead sign is taken from the coefficient at (minimal t, then minimal q)
    of p(a=0).  Returns (normalized poly, (sign, eq_shift, et_shift)) where
    p_normalized = sign * q^-eq * t^-et * p.
    """
    if not p:
        raise ZeroPolynomial
    a0 = {k: c for k, c in p.items() if k[2] == 0}
    if not a0:
        raise ZeroAtAEqualsZero
    eq0 = min(k[0] for k in a0)
    et0 = min(k[1] for k in a0)
    lead = min(a0, key=lambda k: (k[1], k[0]))
    sign = 1 if a0[lead] > 0 else -1
    shift = (-eq0 if type(eq0) is int else -eq0,
             -et0 if type(et0) is int else -et0, 0)
    out = pscale(p, sign, (_ex(shift[0]), _ex(shift[1]), 0))
    return out, (sign, eq0, et0)


# ---------------------------------------------------------------------------
# atoms

@lru_cache(maxsize=None)
def _cyclo_coeffs(d):
    x = sympy.Symbol('x')
    poly = sympy.Poly(sympy.cyclotomic_poly(d, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))  # low to high


@lru_cache(maxsize=None)
def atom_expand_cached(atom):
    if atom[0] == 'c':
        _, d, aq, at = atom
        acc = {}
        for j, c in enumerate(_cyclo_coeffs(d)):
            if c:
                acc[(_ex(aq * j), _ex(at * j), 0)] = c
        return acc
    if atom[0] == 'a':
        _, mq, mt = atom
        return {(0, 0, 0): 1, (_ex(mq), _ex(mt), 1): 1}
    raise ValueError(atom)


def atom_expand(atom):
    return dict(atom_expand_cached(atom))


def binomial_atoms(eq, et, plus=False):
    """Factor 1 -+ q^eq t^et into atoms; returns (coeff, mono_key, atoms).

    The value equals coeff * q^.. t^.. * prod(atoms).  For the minus shape the
    direction is normalized so atoms carry at >= 0 (and aq > 0 when at == 0).
    """
    eq = _ex(eq)
    et = _ex(et)
    if eq == 0 and et == 0:
        if plus:
            return (2, (0, 0, 0), ())
        raise ZeroPolynomial("1 - 1")
    coeff = 1
    key = (0, 0, 0)
    # normalize direction: want (at > 0) or (at == 0 and aq > 0)
    if (et, eq) < (0, 0) or (et == 0 and eq < 0):
        if not plus:
            # 1 - x^-g = -x^-g (1 - x^g)
            coeff = -1
            key = (eq, et, 0)
        else:
            # 1 + x^-g = x^-g (1 + x^g)
            key = (eq, et, 0)
        eq, et = -eq, -et
    if isinstance(eq, Fraction) or isinstance(et, Fraction):
        den = 1
        for e in (eq, et):
            if isinstance(e, Fraction):
                den = den * e.denominator // gcd(den, e.denominator)
        aq, at = eq * den, et * den
        g = gcd(int(aq), int(at))
        # fractional direction: keep a single unsplit "cyclotomic" in the
        # fractional monomial; use d over integer part of multiplicity
        aqp, atp = _ex(Fraction(aq, g * den)), _ex(Fraction(at, g * den))
        if plus:
            atoms = tuple(('c', d, aqp, atp) for d in _divisors(2 * g)
                          if g % d != 0)
        else:
            coeff = -coeff
            atoms = tuple(('c', d, aqp, atp) for d in _divisors(g))
        return (coeff, key, atoms)
    g = gcd(eq, et)
    aq, at = eq // g, et // g
    if plus:
        atoms = tuple(('c', d, aq, at) for d in _divisors(2 * g) if g % d != 0)
    else:
        # 1 - x^g = -(x^g - 1) = -prod_{d|g} Phi_d(x)
        coeff = -coeff
        atoms = tuple(('c', d, aq, at) for d in _divisors(g))
    return (coeff, key, atoms)


def _divisors(n):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def a_atom(mq, mt):
    return ('a', _ex(mq), _ex(mt))


# ---------------------------------------------------------------------------
# Scal: poly / product-of-atoms

class Scal:
    """num / prod(den atoms); auto-cancels atoms that divide the numerator."""

    __slots__ = ('num', 'den')

    def __init__(self, num, den=(), reduce=True):
        if isinstance(num, (int, Fraction)):
            num = pmono(c=num)
        if den and num and reduce:
            den = list(den)
            i = 0
            while i < len(den):
                quo = pdivides(num, atom_expand_cached(den[i]))
                if quo is not None:
                    num = quo
                    den.pop(i)
                else:
                    i += 1
            den = tuple(sorted(den))
        elif den:
            den = tuple(sorted(den)) if num else ()
        self.num = num
        self.den = den

    @staticmethod
    def one():
        return Scal(pone())

    @staticmethod
    def zero():
        return Scal({})

    @staticmethod
    def mono(eq=0, et=0, ea=0, c=1):
        return Scal(pmono(eq, et, ea, c))

    def is_zero(self):
        return not self.num

    def is_poly(self):
        return not self.den

    def __eq__(self, other):
        if not isinstance(other, Scal):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.sub(other).is_zero()

    def __hash__(self):
        raise TypeError("Scal is unhashable")

    def add(self, other):
        if self.den == other.den:
            return Scal(padd(self.num, other.num), self.den)
        common = _multiset_union(self.den, other.den)
        n1 = self.num
        for atm in _multiset_sub(common, self.den):
            n1 = pmul(n1, atom_expand_cached(atm))
        n2 = other.num
        for atm in _multiset_sub(common, other.den):
            n2 = pmul(n2, atom_expand_cached(atm))
        return Scal(padd(n1, n2), common)

    def sub(self, other):
        return self.add(other.neg())

    def neg(self):
        return Scal(pneg(self.num), self.den, reduce=False)

    def mul(self, other):
        return Scal(pmul(self.num, other.num), self.den + other.den)

    def scale(self, c, key=(0, 0, 0)):
        return Scal(pscale(self.num, c, key), self.den)

    def div_atoms(self, atoms):
        return Scal(self.num, self.den + tuple(atoms))

    def inv(self):
        """Invert; requires the numerator to factor into a unit times atoms."""
        c, key, atoms = factor_binomials(self.num)
        inv_key = (_ex(-key[0]), _ex(-key[1]), -key[2])
        num = pone()
        for atm in self.den:
            num = pmul(num, atom_expand_cached(atm))
        num = pscale(num, Fraction(1, 1) / c, inv_key)
        return Scal(num, atoms)

    def div(self, other):
        return self.mul(other.inv())

    def as_poly(self):
        if self.den:
            raise InexactDivision(f"uncancelled denominator {self.den}")
        return self.num

    def expand_den(self):
        d = pone()
        for atm in self.den:
            d = pmul(d, atom_expand_cached(atm))
        return d

    def __repr__(self):
        if self.is_poly():
            return f"Scal({poly_text(self.num)})"
        return f"Scal(({poly_text(self.num)})/{self.den})"


def _multiset_union(a, b):
    out = list(a)
    pool = list(a)
    for x in b:
        if x in pool:
            pool.remove(x)
        else:
            out.append(x)
    return tuple(sorted(out))

def _multiset_sub(a, b):
    out = list(a)
    for x in b:
        out.remove(x)
    return tuple(out)

def _multiset_min(a, b):
    out = []
    pool = list(b)
    for x in a:
        if x in pool:
            pool.remove(x)
            out.append(x)
    return tuple(sorted(out))


def factor_binomials(p):
    """Write p as c * q^. t^. a^. * prod(atoms); NotABinomialProduct if not.

    Handles products of (1 +- q^i t^j) binomials and (1 + mono * a) factors
    times a monomial, which covers leading coefficients of symmetrizations and
    all evaluation products.
    """
    if not p:
        raise ZeroPolynomial
    if len(p) == 1:
        (k, c), = p.items()
        return (Fraction(c), k, ())
    # peel a-linear factors first: if max a-degree > 0 try candidates from
    # the a-degree-1 part
    amax = max(k[2] for k in p)
    if amax > 0:
        low = min((k for k in p if k[2] == 0), default=None)
        if low is None:
            raise NotABinomialProduct("pure a-divisible input")
        for k in sorted(p):
            if k[2] != 1:
                continue
            atm = a_atom(k[0], k[1])
            quo = pdivides(p, atom_expand_cached(atm))
            if quo is not None:
                c, key, atoms = factor_binomials(quo)
                return (c, key, tuple(sorted(atoms + (atm,))))
        raise NotABinomialProduct("no a-linear factor divides input")
    # a-free: strip monomial so the minimal (et, eq) term is the constant
    lead = min(p, key=lambda k: (k[1], k[0]))
    c0 = Fraction(p[lead])
    work = pscale(p, 1 / c0, (_ex(-lead[0]), _ex(-lead[1]), 0))
    atoms = []
    while len(work) > 1:
        cands = sorted((k for k in work if k != (0, 0, 0)),
                       key=lambda k: (abs(k[0]) + abs(k[1]), k))
        done = False
        for k in cands:
            sgn = work[k]
            plus = sgn > 0
            try:
                bc, bk, batoms = binomial_atoms(k[0], k[1], plus=plus)
            except ZeroPolynomial:
                continue
            div = pmono(bk[0], bk[1], 0, bc)
            for atm in batoms:
                div = pmul(div, atom_expand_cached(atm))
            quo = pdivides(work, div)
            if quo is None and len(cands) > 1:
                continue
            if quo is None:
                break
            work = quo
            c0 = c0 * bc
            lead = key_mul(lead, bk)
            atoms.extend(batoms)
            done = True
            break
        if not done:
            # fall back to single cyclotomic factors Phi_d(q^i t^j); these
            # arise in Poincare-polynomial leading coefficients (1 + t + t^2)
            for k in cands:
                if isinstance(k[0], Fraction) or isinstance(k[1], Fraction):
                    continue
                g = gcd(abs(k[0]), abs(k[1]))
                if g == 0:
                    continue
                aq, at = k[0] // g, k[1] // g
                if (at, aq) < (0, 0) or (at == 0 and aq < 0):
                    aq, at = -aq, -at
                step = abs(aq) + abs(at)
                span = max((abs(j[0]) + abs(j[1])) // step for j in work)
                for d in range(2, 2 * span + 3):
                    atm = ('c', d, aq, at)
                    quo = pdivides(work, atom_expand_cached(atm))
                    if quo is not None:
                        work = quo
                        atoms.append(atm)
                        done = True
                        break
                if done:
                    break
        if not done:
            raise NotABinomialProduct(poly_text(p))
    if (0, 0, 0) not in work:
        raise NotABinomialProduct(poly_text(p))
    c0 = c0 * work[(0, 0, 0)]
    return (c0, lead, tuple(sorted(atoms)))


# ---------------------------------------------------------------------------
# FactoredBinomial

class FactoredBinomial:
    """coeff * q^eq t^et a^ea * product of atoms, kept factored."""

    __slots__ = ('coeff', 'key', 'atoms')

    def __init__(self, coeff=1, key=(0, 0, 0), atoms=()):
        self.coeff = Fraction(coeff)
        self.key = key
        self.atoms = tuple(sorted(atoms))

    @staticmethod
    def from_poly(p):
        c, key, atoms = factor_binomials(p)
        return FactoredBinomial(c, key, atoms)

    @staticmethod
    def one():
        return FactoredBinomial()

    def mul(self, other):
        return FactoredBinomial(self.coeff * other.coeff,
                                key_mul(self.key, other.key),
                                self.atoms + other.atoms)

    def div(self, other):
        atoms = list(self.atoms)
        for x in other.atoms:
            atoms.remove(x)
        return FactoredBinomial(
            self.coeff / other.coeff,
            (_ex(self.key[0] - other.key[0]), _ex(self.key[1] - other.key[1]),
             self.key[2] - other.key[2]),
            atoms)

    def gcd(self, other):
        c = Fraction(gcd(self.coeff.numerator, other.coeff.numerator),
                     _lcm(self.coeff.denominator, other.coeff.denominator))
        key = (min(self.key[0], other.key[0]), min(self.key[1], other.key[1]),
               min(self.key[2], other.key[2]))
        return FactoredBinomial(c, key, _multiset_min(self.atoms, other.atoms))

    def lcm(self, other):
        g = self.gcd(other)
        return self.mul(other).div(g)

    def expand(self):
        p = pmono(self.key[0], self.key[1], self.key[2], self.coeff)
        for atm in self.atoms:
            p = pmul(p, atom_expand_cached(atm))
        return p

    def __eq__(self, other):
        return (self.coeff == other.coeff and self.key == other.key
                and self.atoms == other.atoms)

    def __repr__(self):
        return (f"FactoredBinomial({self.coeff}, {self.key}, "
                f"{list(self.atoms)})")


def _lcm(a, b):
    return a * b // gcd(a, b)


def binomial_factor_ops(x, y=None, kind='factor'):
    if kind == 'factor':
        p = x.expand() if isinstance(x, FactoredBinomial) else x
        return FactoredBinomial.from_poly(p)
    if kind == 'expand':
        return x.expand()
    if kind == 'gcd':
        return x.gcd(y)
    if kind == 'lcm':
        return x.lcm(y)
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# truncated series

def series_divide(p, p_t=0, p_q=0, cutoff=12):
    """Expand p / ((1-t)^p_t (1-q)^p_q) up to t- and q-order `cutoff`.

    Returns a poly dict holding all terms with e_t <= cutoff and
    e_q <= cutoff; those coefficients are exact.
    """
    out = dict(p)
    if p_t:
        ser = {(0, _ex(j), 0): comb(j + p_t - 1, p_t - 1)
               for j in range(cutoff + 1)}
        out = _trunc(pmul(out, ser), cutoff)
    if p_q:
        ser = {(_ex(j), 0, 0): comb(j + p_q - 1, p_q - 1)
               for j in range(cutoff + 1)}
        out = _trunc(pmul(out, ser), cutoff)
    return _trunc(out, cutoff)


def _trunc(p, cutoff):
    return {k: c for k, c in p.items() if k[0] <= cutoff and k[1] <= cutoff}


def series_nonnegative(p, cutoff, margin):
    """True if no kept coefficient below the reliable order is negative.

    Terms with e_t or e_q above cutoff - margin may be polluted by the
    truncation and are ignored.
    """
    lim = cutoff - margin
    return all(c >= 0 for k, c in p.items()
               if k[0] <= lim and k[1] <= lim)


# ---------------------------------------------------------------------------
# canonical text form

def _fmt_exp(e):
    if isinstance(e, Fraction):
        return f"^({e})"
    if e == 1:
        return ""
    return f"^{e}"


def poly_text(p):
    """Canonical text: terms ascending by (a-exp, t-exp, q-exp)."""
    if not p:
        return "0"
    parts = []
    for k in sorted(p, key=lambda k: (k[2], k[1], k[0])):
        eq, et, ea = k
        c = p[k]
        factors = []
        if ea:
            factors.append("a" + _fmt_exp(ea))
        if eq:
            factors.append("q" + _fmt_exp(eq))
        if et:
            factors.append("t" + _fmt_exp(et))
        mag = abs(c) if not isinstance(c, Fraction) else abs(c)
        if not factors or mag != 1:
            factors.insert(0, str(mag))
        term = "*".join(factors)
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append((" + " if c > 0 else " - ") + term)
    return "".join(parts)


def poly_parse(s):
    """Parse the canonical text form back into a poly dict."""
    s = s.strip()
    if s == "0":
        return {}
    s = s.replace("- ", "+ -").replace(" ", "")
    out = {}
    for term in s.split("+"):
        if not term:
            continue
        sign = 1
        while term.startswith("-"):
            sign = -sign
            term = term[1:]
        coeff = Fraction(1)
        eq = et = ea = 0
        for fac in term.split("*"):
            if not fac:
                continue
            if fac[0] in "qta":
                var = fac[0]
                rest = fac[1:]
                if rest.startswith("^"):
                    rest = rest[1:]
                    if rest.startswith("(") and rest.endswith(")"):
                        rest = rest[1:-1]
                    e = Fraction(rest)
                else:
                    e = 1
                if var == 'q':
                    eq += e
                elif var == 't':
                    et += e
                else:
                    ea += int(e)
            else:
                coeff = coeff * Fraction(fac)
        k = (_ex(eq), _ex(et), ea)
        v = _co(out.get(k, 0) + sign * coeff)
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out
