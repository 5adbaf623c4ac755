"""The polynomial representation of the double affine Hecke algebra of A_n.

An XPoly is a dict mapping weight keys (fundamental-coordinate tuples) to
Scal coefficients.  Operators act through Atom sequences:

    ('T', i, s)   T_i^s, 0 <= i <= n, s = +-1
    ('P', r, s)   pi_r^s, 1 <= r <= n
    ('X', b)      multiplication by X_b

An HWord is a list of (Scal coefficient, tuple of atoms); the leftmost atom
is applied last.  tau-words act through per-atom image tables built from the
generator images

    tau_+ : X fixed, T_{i>0} fixed, T_0 -> q^-1 X_theta T_0^-1,
            pi_r -> q^{-(w_r,w_r)/2} X_r pi_r
    tau_- : T, pi fixed, X_r -> q^{(w_r,w_r)/2} Y_r X_r

with inverse letters obtained by formal inversion (locked by round-trip
tests), and Y_r = pi_r T_{i_1} ... T_{i_l} along a reduced word for
u_r = w_0 w_0^r.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .scalars import Scal, pmono, _ex, InexactDivision
from . import weights as wt


HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# XPoly helpers

def xp_zero():
    return {}

def xp_one(n):
    return {wt.zero(n): Scal.one()}

def xp_mono(b, coeff=None):
    return {tuple(b): coeff if coeff is not None else Scal.one()}

def xp_add_into(acc, f, scale=None):
    for b, c in f.items():
        v = c if scale is None else c.mul(scale)
        cur = acc.get(b)
        s = v if cur is None else cur.add(v)
        if s.is_zero():
            acc.pop(b, None)
        else:
            acc[b] = s
    return acc

def xp_add(f, g):
    return xp_add_into(dict(f), g)

def xp_scale(f, scal):
    if scal.is_zero():
        return {}
    return {b: c.mul(scal) for b, c in f.items()}

def xp_mul(f, g):
    acc = {}
    for b1, c1 in f.items():
        for b2, c2 in g.items():
            b = wt.wt_add(b1, b2)
            v = c1.mul(c2)
            cur = acc.get(b)
            s = v if cur is None else cur.add(v)
            if s.is_zero():
                acc.pop(b, None)
            else:
                acc[b] = s
    return acc

def xp_eq(f, g):
    if set(f) != set(g):
        ks = set(f) | set(g)
    else:
        ks = set(f)
    zero = Scal.zero()
    for b in ks:
        if not f.get(b, zero).sub(g.get(b, zero)).is_zero():
            return False
    return True

def xp_eval(f, point):
    """Evaluate at an EvalPoint; returns Scal."""
    acc = Scal.zero()
    for b, c in f.items():
        eq, et = point.exponents(b)
        acc = acc.add(c.scale(1, (eq, et, 0)))
    return acc


# ---------------------------------------------------------------------------
# the representation at fixed rank

class Rep:

    def __init__(self, n):
        self.n = n
        self.n1 = n + 1
        self.theta = wt.theta(n)
        self.mtheta = wt.wt_neg(self.theta)
        self.omegas = [None] + [wt.fundamental(n, i) for i in range(1, n + 1)]
        self.rho_pt = wt.minus_rho_k(n)
        # s_i key maps via epsilon swaps
        self._uinv = [None] + [wt.perm_inv(wt.u_perm(self.n1, r))
                               for r in range(1, n + 1)]
        self._uword = [None] + [wt.reduced_word(wt.u_perm(self.n1, r))
                                for r in range(1, n + 1)]
        self._omega2 = [None] + [wt.norm2(self.omegas[r])
                                 for r in range(1, n + 1)]
        self._img_memo = {}
        self.t_half = Scal.mono(et=HALF)
        self.t_mhalf = Scal.mono(et=-HALF)
        self.t_diff = self.t_half.sub(self.t_mhalf)

    # -- elementary symmetries -------------------------------------------

    def s_i_key(self, i, b):
        v = list(wt.to_eps(b))
        v[i - 1], v[i] = v[i], v[i - 1]
        return wt.from_eps(tuple(v))

    def s_theta_key(self, b):
        v = list(wt.to_eps(b))
        v[0], v[-1] = v[-1], v[0]
        return wt.from_eps(tuple(v))

    # -- generator actions -----------------------------------------------

    def refl_op(self, i, f):
        """s_i for i >= 1; for i == 0 the affine reflection with its q-power."""
        out = {}
        if i >= 1:
            for b, c in f.items():
                xp_add_into(out, {self.s_i_key(i, b): c})
        else:
            for b, c in f.items():
                e = sum(b)  # (b, theta)
                xp_add_into(out, {self.s_theta_key(b): c.scale(1, (e, 0, 0))})
        return out

    def _div_binomial(self, g, w, cq=0):
        """Divide g exactly by (q^cq X_w - 1)."""
        quo = {}
        g = dict(g)
        steps = 0
        cap = 64 * len(g) + 4096
        while g:
            steps += 1
            if steps > cap:
                raise InexactDivision("string division did not terminate")
            m = None
            for b in g:
                p = wt.pairing(b, w)
                if m is None or p > m:
                    m = p
                    top = b
            c = g.pop(top).scale(1, (_ex(-cq), 0, 0))
            h = wt.wt_add(top, wt.wt_neg(w))
            cur = quo.get(h)
            s = c if cur is None else cur.add(c)
            if s.is_zero():
                quo.pop(h, None)
            else:
                quo[h] = s
            cur = g.get(h)
            s = c if cur is None else cur.add(c)
            if s.is_zero():
                g.pop(h, None)
            else:
                g[h] = s
        return quo

    def t_op(self, i, f, sign=1):
        if sign == -1:
            return xp_add_into(self.t_op(i, f), f, self.t_diff.neg())
        sf = self.refl_op(i, f)
        diff = xp_add_into(dict(sf), f, Scal.mono(c=-1))
        if i >= 1:
            quo = self._div_binomial(diff, wt.alpha(self.n, i))
        else:
            quo = self._div_binomial(diff, self.mtheta, cq=1)
        out = xp_scale(sf, self.t_half)
        return xp_add_into(out, quo, self.t_diff)

    def pi_op(self, r, f, sign=1):
        if sign == -1:
            r = self.n1 - r    # pi_r^{-1} = pi_{n+1-r}
        uinv = self._uinv[r]
        omega_i = self.omegas[self.n1 - r]
        out = {}
        for b, c in f.items():
            e = wt.pairing(omega_i, b)
            b2 = wt.from_eps(wt.perm_act_eps(uinv, wt.to_eps(b)))
            xp_add_into(out, {b2: c.scale(1, (e, 0, 0))})
        return out

    def xmul(self, b, f):
        b = tuple(b)
        return {wt.wt_add(b, b2): c for b2, c in f.items()}

    def apply_atom(self, atom, f):
        kind = atom[0]
        if kind == 'T':
            return self.t_op(atom[1], f, atom[2])
        if kind == 'P':
            return self.pi_op(atom[1], f, atom[2])
        if kind == 'X':
            return self.xmul(atom[1], f)
        raise ValueError(atom)

    def apply_atoms(self, atoms, f):
        for atom in reversed(atoms):
            f = self.apply_atom(atom, f)
        return f

    def apply_hword(self, hword, f):
        out = {}
        for coeff, atoms in hword:
            xp_add_into(out, self.apply_atoms(atoms, f), coeff)
        return out

    # -- Y operators -----------------------------------------------------

    def y_atoms(self, r, sign=1):
        word = self._uword[r]
        if sign == 1:
            return (('P', r, 1),) + tuple(('T', i, 1) for i in word)
        return tuple(('T', i, -1) for i in reversed(word)) + (('P', r, -1),)

    def y_op(self, b, f):
        for r in range(1, self.n1):
            l = b[r - 1]
            s = 1 if l > 0 else -1
            for _ in range(abs(l)):
                f = self.apply_atoms(self.y_atoms(r, s), f)
        return f

    # -- coinvariant -----------------------------------------------------

    def coinvariant(self, f):
        return xp_eval(f, self.rho_pt)

    # -- tau-letter images -----------------------------------------------

    def _img_letter(self, letter, atom):
        """Image of a single atom under one tau letter, as an HWord."""
        kind, sgn = letter          # kind in {'+', '-'}
        a0 = atom[0]
        one = Scal.one()
        if a0 == 'T' and atom[1] != 0:
            return [(one, (atom,))]
        if kind == '-':
            if a0 in ('T', 'P'):
                return [(one, (atom,))]
            b = atom[1]
            # factor X_b through the fundamental images:
            #   tau_-^sgn(X_r) = q^{sgn c} Y_r^sgn X_r,  c = (w_r, w_r)/2,
            # and the formal inverse for negative exponents
            coeff = one
            atoms = ()
            for r in range(1, self.n1):
                l = b[r - 1]
                if not l:
                    continue
                s = 1 if l > 0 else -1
                c2 = Scal.mono(eq=_ex(s * sgn * self._omega2[r] * HALF))
                if s == 1:
                    seq = self.y_atoms(r, sgn) + (('X', self.omegas[r]),)
                else:
                    seq = ((('X', wt.wt_neg(self.omegas[r])),)
                           + self.y_atoms(r, -sgn))
                for _ in range(abs(l)):
                    coeff = coeff.mul(c2)
                    atoms = atoms + seq
            return [(coeff, atoms)]
        # tau_+ letters
        if a0 == 'X':
            return [(one, (atom,))]
        if a0 == 'T':            # T_0
            th, mth = self.theta, self.mtheta
            if sgn == 1:
                if atom[2] == 1:   # T_0 -> q^-1 X_theta T_0^-1
                    return [(Scal.mono(eq=-1), (('X', th), ('T', 0, -1)))]
                return [(Scal.mono(eq=1), (('T', 0, 1), ('X', mth)))]
            if atom[2] == 1:       # tau_+^-1: T_0 -> q^-1 T_0^-1 X_theta
                return [(Scal.mono(eq=-1), (('T', 0, -1), ('X', th)))]
            return [(Scal.mono(eq=1), (('X', mth), ('T', 0, 1)))]
        # pi_r
        r, s = atom[1], atom[2]
        c = _ex(self._omega2[r] * HALF)
        om, mom = self.omegas[r], wt.wt_neg(self.omegas[r])
        if sgn == 1:
            if s == 1:      # tau_+(pi_r) = q^-c X_r pi_r
                return [(Scal.mono(eq=-c), (('X', om), ('P', r, 1)))]
            return [(Scal.mono(eq=c), (('P', r, -1), ('X', mom)))]
        if s == 1:          # tau_+^-1(pi_r) = q^c X_r^-1 pi_r
            return [(Scal.mono(eq=c), (('X', mom), ('P', r, 1)))]
        return [(Scal.mono(eq=-c), (('P', r, -1), ('X', om)))]

    def image_atom(self, word, atom):
        """Image of one atom under a tau-word (rightmost letter first)."""
        word = tuple(word)
        key = (word, atom)
        memo = self._img_memo
        hit = memo.get(key)
        if hit is not None:
            return hit
        if not word:
            out = [(Scal.one(), (atom,))]
        else:
            inner = self._img_letter(word[-1], atom)
            rest = word[:-1]
            out = []
            for coeff, atoms in inner:
                term = [(coeff, ())]
                for a in atoms:
                    img = self.image_atom(rest, a)
                    term = [(c1.mul(c2), s1 + s2)
                            for c1, s1 in term for c2, s2 in img]
                out.extend(term)
        memo[key] = out
        return out


def _inv_atoms(rep, atoms):
    return tuple((a[0], a[1], -a[2]) if a[0] in ('T', 'P')
                 else ('X', wt.wt_neg(a[1])) for a in reversed(atoms))


@lru_cache(maxsize=None)
def get_rep(n):
    return Rep(n)


# ---------------------------------------------------------------------------
# tau words

class NotCoprime(Exception):
    pass


TAU_MATS = {('+', 1): (1, 1, 0, 1), ('+', -1): (1, -1, 0, 1),
            ('-', 1): (1, 0, 1, 1), ('-', -1): (1, 0, -1, 1)}


def word_matrix(word):
    m = (1, 0, 0, 1)
    for letter in word:
        a, b, c, d = m
        e, f, g, h = TAU_MATS[letter]
        m = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    return m


_MINUS_ID = (('+', 1), ('-', -1), ('+', 1)) * 2       # matrix -identity
_S_WORD = (('-', 1), ('+', -1), ('-', 1))             # first column (0, 1)


def word_of_rs(r, s):
    """A det +1 tau-word whose matrix has first column (r, s).

    Continued-fraction peeling: tau_+^k.(r', s) has first column (r'+ks, s),
    tau_-^k.(r, s') has first column (r, s'+kr).  Exact-quotient steps are
    shortened by one so the recursion passes through (1, 1)-type corners,
    matching the lifts used for the printed examples.
    """
    from math import gcd
    if (r, s) == (0, 0) or gcd(abs(r), abs(s)) != 1:
        raise NotCoprime((r, s))

    def build(r, s):
        if s == 0:
            return () if r == 1 else _MINUS_ID
        if r == 0:
            return _S_WORD if s == 1 else _MINUS_ID + _S_WORD
        if abs(r) > abs(s):
            k = r // s
            rr = r - k * s
            if rr == 0 and abs(k) > 1:
                k -= 1 if k > 0 else -1
                rr = r - k * s
            return (('+', 1 if k > 0 else -1),) * abs(k) + build(rr, s)
        k = s // r
        ss = s - k * r
        if ss == 0 and abs(k) > 1:
            k -= 1 if k > 0 else -1
            ss = s - k * r
        return (('-', 1 if k > 0 else -1),) * abs(k) + build(r, ss)

    out = build(r, s)
    m = word_matrix(out)
    if (m[0], m[2]) != (r, s):
        raise AssertionError(f"word construction failed for {(r, s)}: {m}")
    return out


# ---------------------------------------------------------------------------
# the projection gamma-hat(Q) evaluated at 1

def gamma_hat_project(word, Q, rep, tau_dot=None, optimize=True):
    """Apply the tau-word lift to a polynomial and project back to V.

    With optimize=True trailing tau_+ letters are stripped (they fix X) and a
    maximal leading tau_- run of net exponent m is peeled and applied at the
    end through `tau_dot` (a callable f, m -> XPoly), when one is supplied.
    """
    word = tuple(word)
    if not Q:
        return {}
    core = word
    if optimize:
        while core and core[-1][0] == '+':
            core = core[:-1]
    m = 0
    if optimize and tau_dot is not None:
        i = 0
        while i < len(core) and core[i][0] == '-':
            m += core[i][1]
            i += 1
        core = core[i:]
    out = _core_project(core, Q, rep)
    if m:
        out = tau_dot(out, m)
    return out


def _core_project(word, Q, rep):
    if not word:
        return dict(Q)
    imgs = {}
    for r in range(1, rep.n1):
        imgs[(r, 1)] = rep.image_atom(word, ('X', rep.omegas[r]))
        imgs[(r, -1)] = rep.image_atom(word, ('X', wt.wt_neg(rep.omegas[r])))
    memo = {wt.zero(rep.n): xp_one(rep.n)}

    def value(b):
        hit = memo.get(b)
        if hit is not None:
            return hit
        r = next(i + 1 for i, l in enumerate(b) if l)
        s = 1 if b[r - 1] > 0 else -1
        prev = list(b)
        prev[r - 1] -= s
        f = rep.apply_hword(imgs[(r, s)], value(tuple(prev)))
        memo[b] = f
        return f

    out = {}
    for b, c in Q.items():
        xp_add_into(out, value(b), c)
    return out
