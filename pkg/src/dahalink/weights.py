"""Type-A weight and Young-diagram combinatorics.

Weights of A_n are stored as integer tuples in the fundamental-weight basis
(l_1, ..., l_n).  Internally most computations pass through epsilon
coordinates v = (v_1, ..., v_{n+1}) with v_i = l_i + ... + l_n, v_{n+1} = 0;
the pairing is shift-invariant so the choice of representative is harmless.

Permutations of S_{n+1} are tuples w with w[i] = image of position i
(0-indexed); they act on epsilon coordinates by permuting places.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .scalars import _ex, FactoredBinomial, binomial_atoms, a_atom


class RankMismatch(Exception):
    pass


class RankTooSmall(Exception):
    pass


class UnsupportedSystem(Exception):
    pass


# ---------------------------------------------------------------------------
# coordinates

@lru_cache(maxsize=None)
def to_eps(l):
    n = len(l)
    v = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        v[i] = v[i + 1] + l[i]
    return tuple(v)


def from_eps(v):
    return tuple(v[i] - v[i + 1] for i in range(len(v) - 1))


def fundamental(n, i):
    """omega_i for 1 <= i <= n."""
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def zero(n):
    return (0,) * n


def wt_add(b, c):
    return tuple(x + y for x, y in zip(b, c))


def wt_neg(b):
    # -b in fundamental coordinates via epsilon flip
    return from_eps(tuple(-x for x in to_eps(b)))


def theta(n):
    """Highest root eps_1 - eps_{n+1}."""
    return from_eps((1,) + (0,) * (n - 1) + (-1,))


def alpha(n, i):
    """Simple root alpha_i = eps_i - eps_{i+1}."""
    v = [0] * (n + 1)
    v[i - 1] = 1
    v[i] = -1
    return from_eps(tuple(v))


def iota(b):
    """b -> -w_0(b): reverses the fundamental coordinates."""
    return tuple(reversed(b))


@lru_cache(maxsize=None)
def pairing(b, c):
    if len(b) != len(c):
        raise RankMismatch
    n1 = len(b) + 1
    v, u = to_eps(b), to_eps(c)
    sv, su = sum(v), sum(u)
    dot = sum(x * y for x, y in zip(v, u))
    return _ex(Fraction(dot * n1 - sv * su, n1))


def norm2(b):
    return pairing(b, b)


def rho_eps(n):
    """rho in epsilon coordinates (up to the constant shift): (n, ..., 0)."""
    return tuple(range(n, -1, -1))


def dominant(b):
    return all(x >= 0 for x in b)


# ---------------------------------------------------------------------------
# permutations

def perm_id(n1):
    return tuple(range(n1))

def perm_mul(w1, w2):
    """(w1 w2)(i) = w1(w2(i))."""
    return tuple(w1[w2[i]] for i in range(len(w1)))

def perm_inv(w):
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[x] = i
    return tuple(out)

def perm_len(w):
    n1 = len(w)
    return sum(1 for i in range(n1) for j in range(i + 1, n1) if w[i] > w[j])

def perm_act_eps(w, v):
    out = [0] * len(v)
    for i in range(len(v)):
        out[w[i]] = v[i]
    return tuple(out)

def perm_act(w, b):
    return from_eps(perm_act_eps(w, to_eps(b)))


def simple_refl(n1, i):
    """s_i swapping epsilon_i, epsilon_{i+1} (1 <= i <= n)."""
    w = list(range(n1))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def reduced_word(w):
    """Indices i_1..i_l with w = s_{i_1} ... s_{i_l}."""
    w = list(w)
    word = []
    while True:
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i + 1)
                break
        else:
            break
    word.reverse()
    return tuple(word)


def longest_element(n1):
    return tuple(range(n1 - 1, -1, -1))


def u_perm(n1, r):
    """The Weyl part u_r of the translation by omega_r (1 <= r <= n)."""
    return tuple(i + (n1 - r) if i < r else i - r for i in range(n1))


def sort_perm_maximal(b):
    """Maximal-length w with w(b) in P_+; returns (b_plus, w).

    Ties inside equal coordinate blocks are broken so that earlier positions
    land in later slots, which maximizes the number of inversions.
    """
    v = to_eps(b)
    n1 = len(v)
    order = sorted(range(n1), key=lambda i: (-v[i], -i))
    w = [0] * n1
    for slot, i in enumerate(order):
        w[i] = slot
    w = tuple(w)
    return from_eps(perm_act_eps(w, v)), w


# ---------------------------------------------------------------------------
# evaluation points

class EvalPoint:
    """X_b evaluates to q^{(b,beta)} t^{(b,kappa)} (epsilon coordinates)."""

    __slots__ = ('beta', 'kappa')

    def __init__(self, beta, kappa):
        self.beta = tuple(beta)
        self.kappa = tuple(kappa)

    def exponents(self, b):
        """(q-exponent, t-exponent) of the value of X_b."""
        v = to_eps(b)
        n1 = len(v)
        if len(self.beta) != n1:
            raise RankMismatch
        sv = sum(v)
        eq = Fraction(sum(x * y for x, y in zip(v, self.beta)) * n1
                      - sv * sum(self.beta), n1)
        et = Fraction(sum(x * y for x, y in zip(v, self.kappa)) * n1
                      - sv * sum(self.kappa), n1)
        return _ex(eq), _ex(et)


def minus_rho_k(n):
    """The point q^{-rho_k}: X_a -> t^{-(rho,a)}."""
    return EvalPoint((0,) * (n + 1), tuple(-x for x in rho_eps(n)))


def sharp_point(b):
    """(b_plus, w_b, b-sharp) with b-sharp = b + w_b^{-1}(rho_k)."""
    b_plus, w = sort_perm_maximal(b)
    n1 = len(b) + 1
    rho = rho_eps(len(b))
    kappa = tuple(rho[w[i]] for i in range(n1))  # w^{-1}(rho)
    return b_plus, w, EvalPoint(to_eps(b), kappa)


# ---------------------------------------------------------------------------
# Young diagrams

def to_diagram(b):
    """lambda(b) for dominant b; trailing zeros stripped."""
    if not dominant(b):
        raise ValueError("diagram of a non-dominant weight")
    lam = [x for x in to_eps(b) if x > 0]
    return tuple(lam)


def to_weight(lam, n):
    if len(lam) > n:
        raise RankTooSmall(f"diagram {lam} needs rank >= {len(lam)}")
    v = tuple(lam) + (0,) * (n + 1 - len(lam))
    return from_eps(v)


def transpose(lam):
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def diagram_union(l1, l2):
    r = max(len(l1), len(l2))
    a = tuple(l1) + (0,) * (r - len(l1))
    b = tuple(l2) + (0,) * (r - len(l2))
    return tuple(x for x in (max(p, q) for p, q in zip(a, b)) if x > 0)


def diagram_convert(x, kind, y=None):
    if kind == 'to_diagram':
        return to_diagram(x)
    if kind == 'to_weight':
        return to_weight(x, y)
    if kind == 'transpose':
        return transpose(x)
    if kind == 'union':
        return diagram_union(x, y)
    raise ValueError(kind)


def arm_leg(lam):
    """Yields (arm, leg) over the boxes of lam."""
    lt = transpose(lam)
    for r, row in enumerate(lam):
        for c in range(row):
            yield row - c - 1, lt[c] - r - 1


# ---------------------------------------------------------------------------
# Lambda_b^+ and the integrality factor

def lambda_plus_set(b):
    """Pairs ((l, m), j) indexing the evaluation product for E_b."""
    n1 = len(b) + 1
    b_plus, w, _ = sharp_point(b)
    vplus = to_eps(b_plus)
    winv = perm_inv(w)
    out = []
    for l in range(n1):
        for m in range(l + 1, n1):
            pv = vplus[l] - vplus[m]          # (b_+, alpha) for alpha=eps_lm
            pos = winv[l] < winv[m]           # w^{-1}(alpha) positive?
            top = pv - 1 if pos else pv
            for j in range(1, top + 1):
                out.append(((l + 1, m + 1), j))
    return frozenset(out)


def _binomial_fb(eq, et):
    c, key, atoms = binomial_atoms(eq, et)
    return FactoredBinomial(c, key, atoms)


def eval_products(b):
    """(num, den) FactoredBinomials of the closed E_b(q^{-rho_k}) formula.

    E_b(q^{-rho_k}) = t^{-(rho, b_+)} * num/den with
    num = prod (1 - q^j t^{1+(alpha,rho)}), den = prod (1 - q^j t^{(alpha,rho)})
    over Lambda_b^+.
    """
    num = FactoredBinomial.one()
    den = FactoredBinomial.one()
    for (l, m), j in lambda_plus_set(b):
        p = m - l                              # (alpha, rho)
        num = num.mul(_binomial_fb(j, p + 1))
        den = den.mul(_binomial_fb(j, p))
    return num, den


def poincare(n):
    """Poincare polynomial sum_{w in W} t^{l(w)} of S_{n+1}, factored."""
    out = FactoredBinomial.one()
    for i in range(2, n + 2):
        out = out.mul(_binomial_fb(0, i)).div(_binomial_fb(0, 1))
    return out


def h_lambda(lam):
    """prod over boxes (1 - q^arm t^{leg+1}) as a FactoredBinomial."""
    out = FactoredBinomial.one()
    for arm, leg in arm_leg(lam):
        out = out.mul(_binomial_fb(arm, leg + 1))
    return out


def pi_dagger(lam):
    """prod_p prod_{v<lambda_p} (1 + q^v t^{1-p} a), rows p = 1, 2, ..."""
    out = FactoredBinomial.one()
    for p, row in enumerate(lam, start=1):
        for v in range(row):
            out = out.mul(FactoredBinomial(1, (0, 0, 0),
                                           (a_atom(v, 1 - p),)))
    return out


def tilde_N(b):
    """gcd(N_b, truncated N_inf/D_inf) as a factored multiset (type A)."""
    n = len(b)
    from collections import Counter
    nb = Counter()
    jmax = 0
    for (l, m), j in lambda_plus_set(b):
        p = m - l
        nb.update(_binomial_fb(j, p + 1).atoms)
        jmax = max(jmax, j)
    ratio = Counter()
    for p in range(1, n + 1):                  # Coxeter exponents m_p = p
        for j in range(1, jmax + 1):
            ratio.update(_binomial_fb(j, p + 1).atoms)
    for j in range(1, jmax + 1):
        den = Counter(_binomial_fb(j, 1).atoms)
        for atm, mult in den.items():
            have = ratio.get(atm, 0)
            ratio[atm] = max(0, have - mult * n)
    g = Counter()
    for atm, mult in nb.items():
        m2 = min(mult, ratio.get(atm, 0))
        if m2:
            g[atm] = m2
    sign = (-1) ** sum(m for atm, m in g.items() if atm[1] == 1)  # Phi_1(0) = -1
    atoms = []
    for atm, mult in g.items():
        atoms.extend([atm] * mult)
    return FactoredBinomial(sign, (0, 0, 0), atoms)


# ---------------------------------------------------------------------------
# affine exponent catalogue (data tables only)

AFFINE_EXPONENTS = {
    'ADE': {
        'rational': ['(m_i+1)k + j + 1  (i = 1..n, j >= 0)'],
        'non_rational': ['(m_i+1)(k+j+1) ~> k + j + 1'],
    },
    'B': {
        'rational': ['2m*k_lng + 2j + 2  (2 <= m <= n, j+1 not in m*Z_+)',
                     '2m*k_lng + 2k_sht + 2j + 1  (0 <= m < n)'],
        'non_rational': [
            '4m*k_lng + 2k_sht + 2j + 2 ~> 2m*k_lng + k_sht + j + 1  (1 <= m < n)',
            'm(2k_lng + 2j + 2) ~> 2k_lng + j + 1  (2 <= m <= n)'],
    },
    'C': {
        'rational': ['m*k_sht + j + 1  (2 <= m <= n, j+1 not in m*Z_+)',
                     'delta_m(2m*k_sht + 2k_lng + 2j + 1)  (0 <= m < n; '
                     'delta_m = 2 if m < n/2 else 1)'],
        'non_rational': [],
    },
    'G2': {
        'rational': ['2k_sht + 2j + 1', '6k_lng + 6j + 3',
                     '3k_lng + 3k_sht + 3j + 1', '3k_lng + 3k_sht + 3j + 2'],
        'non_rational': ['2(3k_lng + 3k_sht + 3j + 3) ~> '
                         '3k_lng + 3k_sht + 3j + 3'],
    },
    'F4': {
        'rational': ['2k_sht + 2j + 1', '6k_sht + 2j + 1 (j+1 not in 3Z_+)',
                     '2k_lng + 2j + 2 (j+1 not in 2Z_+)',
                     '6k_lng + 6j + 6 (pair series)',
                     '6k_lng + 6k_sht + 2j + 1', '8k_lng + 4k_sht + 4j + 2'],
        'non_rational': [
            '2(k_sht + j + 1) ~> k_sht + j + 1',
            '3(k_sht + j + 1) ~> k_sht + j + 1',
            '4(k_lng + j + 1) ~> 2(k_lng + j + 1)',
            '6(k_lng + j + 1) ~> 2(k_lng + j + 1)',
            '4k_lng + 4k_sht + 4j + 4 ~> 2k_lng + 2k_sht + 2j + 2',
            '8k_lng + 2k_sht + 2j + 2 ~> 4k_lng + k_sht + j + 1',
            '8k_lng + 4k_sht + 4j + 4 ~> 2k_lng + k_sht + j + 1',
            '12k_lng + 6k_sht + 2j + 2 ~> 6k_lng + 3k_sht + j + 1'],
    },
    'D_even_note': 'D_{2m} reserves multiplicity 2 for the coinciding '
                   'Coxeter exponents 2m-1, 2m-1.',
}


def affine_exponents(system):
    key = {'A': 'ADE', 'D': 'ADE', 'E': 'ADE', 'ADE': 'ADE',
           'B': 'B', 'B_n': 'B', 'C': 'C', 'C_n': 'C',
           'G2': 'G2', 'G_2': 'G2', 'F4': 'F4', 'F_4': 'F4'}.get(system)
    if key is None:
        raise UnsupportedSystem(system)
    out = dict(AFFINE_EXPONENTS[key])
    if system in ('D', 'ADE'):
        out['multiplicity_note'] = AFFINE_EXPONENTS['D_even_note']
    return out
