"""End-to-end invariants of colored iterated torus links.

Pre-polynomials via the tree recursion, fixed-rank polynomials, their
a-stabilization, specializations (HOMFLY-PT, Alexander, Khovanov recipes)
and the symmetry / positivity checkers.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from . import weights as wt
from .scalars import (
    Scal, InexactDivision, hat_normalize, pone, pmono, padd_into, psub, pmul,
    pscale, pdivexact, psubstitute, poly_text, series_divide,
)
from .weights import RankTooSmall
from .daha import (
    get_rep, xp_one, xp_mul, xp_scale, xp_add_into, word_of_rs,
    gamma_hat_project,
)
from .macdonald import get_mac
from .links import (
    LinkPair, ColoredForest, Path, lower_twist, deg_a_bound,
    classify_positive, normalize_moves, MoveNotApplicable,
)


class StabilizationFailed(Exception):
    pass


class CheckFailed(Exception):
    pass


MAX_WINDOW_SHIFTS = 3


# ---------------------------------------------------------------------------
# pre-polynomials

def pre_polynomial(forest, rank, form="J"):
    """Product over subtrees of the projected tower of cable words.

    Every vertex applies the lift of its [r, s] column to the product of the
    deeper factors and projects back to the polynomial module; arrowheads
    seed the recursion with the integral (or spherical) Macdonald form.
    """
    mac = get_mac(rank)
    rep = get_rep(rank)
    seed = mac.J if form == "J" else mac.P_spherical
    paths = forest.paths

    def factor(lam):
        if not lam:
            return xp_one(rank)
        return seed(lam)

    def block(lo, hi, depth):
        out = None
        k = lo
        while k <= hi:
            p = paths[k]
            if len(p.labels) == depth:
                f = factor(p.color)
                k += 1
            else:
                end = k
                while end + 1 <= hi and paths[end + 1].share >= depth + 1:
                    end += 1
                inner = block(k, end, depth + 1)
                r, s = p.labels[depth]
                f = gamma_hat_project(word_of_rs(r, s), inner, rep)
                k = end + 1
            out = f if out is None else xp_mul(out, f)
        return out

    return block(0, len(paths) - 1, 0)


# ---------------------------------------------------------------------------
# fixed-rank invariants

def _all_colors(pair):
    return [p.color for f in pair.forests() for p in f.paths]


def _apply_fY(rep, f, g, sign=1):
    """f(Y^{-sign}) applied to g, monomial by monomial through Y-operators."""
    out = {}
    for b, c in f.items():
        bb = wt.wt_neg(b) if sign == 1 else b
        xp_add_into(out, rep.y_op(bb, g), c)
    return out


def _j_eval(mac, lam):
    """J-form evaluation at the coinvariant point."""
    if not lam:
        return Scal.one()
    return mac.P_eval(lam).mul(Scal(wt.h_lambda(lam).expand()))


def _norm_scalar(pair, mac, norm):
    if norm == "none":
        return Scal.one()
    colors = _all_colors(pair)
    if norm == "min":
        union = reduce(wt.diagram_union, colors, ())
        return _j_eval(mac, union)
    kind, idx = norm
    if kind != "j_o":
        raise ValueError(f"bad normalization {norm!r}")
    return _j_eval(mac, colors[idx])


def jd_raw(pair, rank, norm="min", form="J", nested_twist=False):
    """The coinvariant value divided by the normalization, as a Scal."""
    if pair.twist is not None and nested_twist:
        return _jd_nested(pair, rank, norm, form)
    if pair.twist is not None:
        pair = lower_twist(pair)
    mac = get_mac(rank)
    rep = get_rep(rank)
    f = pre_polynomial(pair.first, rank, form)
    if pair.second is not None:
        g = pre_polynomial(pair.second, rank, form)
        f = _apply_fY(rep, g, f, sign=-1 if pair.vee else 1)
    val = rep.coinvariant(f)
    return val.div(_norm_scalar(pair, mac, norm))


def _jd_nested(pair, rank, norm, form):
    """Twist route that applies the extra column inside the coinvariant.

    Equivalent to lowering the twist into the second tree; kept as an
    independent code path for cross-checking.
    """
    low = lower_twist(pair)          # fixes colors and the vee flag
    alpha, beta = pair.twist
    if not pair.vee:
        alpha, beta = -alpha, -beta
    mac = get_mac(rank)
    rep = get_rep(rank)
    f = pre_polynomial(pair.first, rank, form)
    if pair.second is not None:
        g = pre_polynomial(pair.second, rank, form)
    else:
        g = pre_polynomial(ColoredForest((Path((), (1,)),)), rank, form)
    g = gamma_hat_project(word_of_rs(beta, alpha), g, rep)
    f = _apply_fY(rep, g, f, sign=-1)
    val = rep.coinvariant(f)
    return val.div(_norm_scalar(low, mac, norm))


@dataclass(frozen=True)
class RankInvariant:
    rank: int
    poly: dict
    shift: tuple
    norm: object


def jd(pair, rank, norm="min", form="J"):
    val = jd_raw(pair, rank, norm, form)
    poly, shift = hat_normalize(val.as_poly())
    return RankInvariant(rank, poly, shift, norm)


# ---------------------------------------------------------------------------
# a-stabilization

@dataclass(frozen=True)
class SuperPoly:
    poly: dict
    shift: tuple
    norm: object
    ranks: tuple
    verified_rank: int
    link: object
    deg_a: int


def _interpolate_a(vals, ranks):
    """Laurent-coefficient interpolation at the nodes a = -t^{m+1}.

    Newton divided differences; every division is by a binomial in t and
    must be exact, otherwise the window does not stabilize.
    """
    n = len(vals)
    table = [dict(v) for v in vals]
    newton = [table[0]]
    for k in range(1, n):
        nxt = []
        for i in range(n - k):
            num = psub(table[i + 1], table[i])
            # x_{i+k} - x_i = t^{ranks[i]+1} - t^{ranks[i+k]+1}
            den = {(0, ranks[i] + 1, 0): 1, (0, ranks[i + k] + 1, 0): -1}
            nxt.append(pdivexact(num, den))
        table = nxt
        newton.append(table[0])
    out = {}
    basis = pone()
    for k, c in enumerate(newton):
        padd_into(out, pmul(c, basis))
        # a - x_k = a + t^{ranks[k]+1}
        basis = pmul(basis, {(0, 0, 1): 1, (0, ranks[k] + 1, 0): 1})
    return out


def _at_rank(poly, m):
    """Specialize a = -t^{m+1} and hat-normalize."""
    return hat_normalize(psubstitute(poly, a=(-1, 0, m + 1, 0)))[0]


def superpolynomial(pair, norm="min"):
    low = lower_twist(pair)
    bound, exact = deg_a_bound(pair, norm)
    deg = exact if exact is not None else bound
    m0 = max([1] + [len(c) for c in _all_colors(low)])
    for attempt in range(MAX_WINDOW_SHIFTS + 1):
        ranks = list(range(m0, m0 + deg + 1))
        try:
            vals = [jd(low, m, norm).poly for m in ranks]
            out = _interpolate_a(vals, ranks)
        except InexactDivision:
            out = None
        if out is not None:
            extra = m0 + deg + 1
            check = jd(low, extra, norm).poly
            if _at_rank(out, extra) == check:
                poly, shift = hat_normalize(out)
                da = max((k[2] for k in poly), default=0)
                if da > bound:
                    raise StabilizationFailed(
                        f"a-degree {da} exceeds the bound {bound}")
                return SuperPoly(poly, shift, norm, tuple(ranks), extra,
                                 pair, da)
        if deg < bound:
            deg = bound
        else:
            m0 += 1
    raise StabilizationFailed(f"window retries exhausted for {pair}")


def generalized_twist(pair, norm="min", nested=False):
    """Superpolynomial of a pair carrying a twist column.

    The default route lowers the column into the second tree; the nested
    route applies it inside the coinvariant (same value by construction).
    """
    if pair.twist is None:
        return superpolynomial(pair, norm)
    if not nested:
        return superpolynomial(pair, norm)
    low = lower_twist(pair)
    bound, exact = deg_a_bound(pair, norm)
    deg = exact if exact is not None else bound
    m0 = max([1] + [len(c) for c in _all_colors(low)])
    for attempt in range(MAX_WINDOW_SHIFTS + 1):
        ranks = list(range(m0, m0 + deg + 1))
        try:
            vals = []
            for m in ranks:
                v = jd_raw(pair, m, norm, nested_twist=True)
                vals.append(hat_normalize(v.as_poly())[0])
            out = _interpolate_a(vals, ranks)
        except InexactDivision:
            out = None
        if out is not None:
            extra = m0 + deg + 1
            check = hat_normalize(
                jd_raw(pair, extra, norm, nested_twist=True).as_poly())[0]
            if _at_rank(out, extra) == check:
                poly, shift = hat_normalize(out)
                da = max((k[2] for k in poly), default=0)
                return SuperPoly(poly, shift, norm, tuple(ranks), extra,
                                 pair, da)
        if deg < bound:
            deg = bound
        else:
            m0 += 1
    raise StabilizationFailed(f"twist window retries exhausted for {pair}")


# ---------------------------------------------------------------------------
# Hopf star / vertex

@dataclass(frozen=True)
class VertexValue:
    super: SuperPoly
    dagger: Scal
    c_num: dict


def hopf_star(diagrams, meridian=None, vee=True):
    """The [1,-1]-star link over the given colors, optionally paired with a
    [1,0]-tree colored by `meridian`."""
    paths = tuple(Path(((1, -1),), lam, 1 if i else 0)
                  for i, lam in enumerate(diagrams))
    first = ColoredForest(paths)
    second = None
    if meridian is not None:
        second = ColoredForest((Path(((1, 0),), meridian),))
    return LinkPair(first, second, vee and second is not None)


def hopf_vertex(diagrams, meridian=None, vee=True):
    pair = hopf_star(diagrams, meridian, vee)
    sup = superpolynomial(pair, "min")
    union = reduce(wt.diagram_union, diagrams, ())
    dag_den = [wt.pi_dagger(lam) for lam in diagrams]
    dag = Scal(pmul(sup.poly, wt.pi_dagger(union).expand()))
    for fb in dag_den:
        dag = dag.div(Scal(fb.expand()))
    top = max(k[2] for k in sup.poly)
    lead = {(k[0], k[1], 0): c for k, c in sup.poly.items() if k[2] == top}
    c_num = hat_normalize(psubstitute(lead, t=(1, 1, 0, 0)))[0]
    return VertexValue(sup, dag, c_num)


# ---------------------------------------------------------------------------
# specializations

def _kappa(pair):
    return len(lower_twist(pair).first.paths) + \
        (len(pair.second.paths) if pair.second is not None else 0)


def _den_jo(pair, jo=0):
    """Reduced-HOMFLY denominator: hook products of the other colors times
    the dagger-product mismatch of the jo-th color against the union."""
    colors = _all_colors(lower_twist(pair))
    union = reduce(wt.diagram_union, colors, ())
    num = wt.pi_dagger(colors[jo]).expand()
    den = Scal(wt.pi_dagger(union).expand())
    for j, lam in enumerate(colors):
        if j != jo:
            num = pmul(num, wt.h_lambda(lam).expand())
    out = Scal(num).div(den)
    return Scal(psubstitute(out.num, t=(1, 1, 0, 0)),
                tuple(_sub_tq_atom(a) for a in out.den))


def _sub_tq_atom(atom):
    kind = atom[0]
    if kind == 'a':
        _, mq, mt = atom
        return ('a', mq + mt, 0)
    _, d, aq, at = atom
    return ('c', d, aq + at, 0)


def _unknot_value(lam):
    """Stable colored-unknot value: dagger rows over hook binomials."""
    from .scalars import binomial_atoms
    num = wt.pi_dagger(lam).expand()
    atoms = []
    for a, l in wt.arm_leg(lam):
        c, key, ats = binomial_atoms(a + 1, l)
        num = pscale(num, Fraction(1, c), tuple(-e for e in key))
        atoms.extend(ats)
    return Scal(num, tuple(atoms))


def spec_homfly(sup, jo=0, reduced=True):
    """t -> q, a -> -a, divided by the reduced denominator; unreduced
    multiplies back the stable value of the jo-colored unknot."""
    pair = sup.link
    p = psubstitute(sup.poly, t=(1, 1, 0, 0), a=(-1, 0, 0, 1))
    out = Scal(p).div(_den_jo(pair, jo))
    if not reduced:
        colors = _all_colors(lower_twist(pair))
        lam = colors[jo] or (1,)
        val = _unknot_value(lam)
        val = Scal(psubstitute(val.num, t=(1, 1, 0, 0), a=(-1, 0, 0, 1)),
                   tuple(_sub_tq_atom(a) for a in val.den))
        out = out.mul(val)
    return out


def spec_alexander(sup):
    """q -> q is kept, t -> q, a -> -1, divided by (1-q)^{kappa-[kappa=1]}."""
    kappa = _kappa(sup.link)
    p = psubstitute(sup.poly, t=(1, 1, 0, 0), a=(-1, 0, 0, 0))
    power = kappa - (1 if kappa == 1 else 0)
    den = pone()
    for _ in range(power):
        den = pmul(den, {(0, 0, 0): 1, (1, 0, 0): -1})
    out = pdivexact(p, den)
    return hat_normalize(out)[0]


def spec_khovanov(sup, N, variant="A", cutoff=None):
    """Khovanov-recipe substitutions; exact when the division comes out
    polynomial, otherwise a truncated series (cutoff required).

    Variant A: ((1+a) * sup / (1-t)^kappa) in topological parameters with
    a -> -q^{2(N+1)}.  Variant B: switch to the modified parameters
    (q -> (qt)^2, t -> q^2, a -> -a^2), then ((1-a^2) * sup / (1-q^2)^kappa)
    at a = q^N.  Either division is exact only after the substitution."""
    kappa = _kappa(sup.link)
    if variant == "A":
        num = pmul(sup.poly, {(0, 0, 0): 1, (0, 0, 1): 1})
        num = psubstitute(num, q=(1, 2, 2, 0), t=(1, 2, 0, 0),
                          a=(-1, 2 * (N + 1), 0, 0))
    elif variant == "B":
        num = psubstitute(sup.poly, q=(1, 2, 2, 0), t=(1, 2, 0, 0),
                          a=(-1, 0, 0, 2))
        num = pmul(num, {(0, 0, 0): 1, (0, 0, 2): -1})
        num = psubstitute(num, a=(1, N, 0, 0))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    den = pone()
    for _ in range(kappa):
        den = pmul(den, {(0, 0, 0): 1, (2, 0, 0): -1})
    try:
        quo = pdivexact(num, den)
    except InexactDivision:
        if cutoff is None:
            raise
        quo = _series_q2(num, kappa, cutoff)
    return hat_normalize(quo)[0]


def _series_q2(num, power, cutoff):
    """num / (1-q^2)^power as a q-truncated series."""
    from math import comb
    geo = {(2 * i, 0, 0): comb(i + power - 1, power - 1)
           for i in range(cutoff // 2 + 1)}
    full = pmul(num, geo)
    base = min(k[0] for k in num)
    return {k: c for k, c in full.items() if k[0] <= base + cutoff}


def to_standard(p):
    """Topological parameters: q -> (q t)^2, t -> q^2, a -> a^2 t (the
    a-slot counts the standard a)."""
    return psubstitute(p, q=(1, 2, 2, 0), t=(1, 2, 0, 0), a=(1, 0, 1, 2))


# ---------------------------------------------------------------------------
# checkers

def _hat_eq(p1, p2):
    return hat_normalize(p1)[0] == hat_normalize(p2)[0]


def check_positivity(sup, p_t, p_q=0, cutoff=12, margin=0):
    """Expand sup / ((1-t)^p_t (1-q)^p_q) and report the first negative
    coefficient, if any, among the reliably computed terms."""
    ser = series_divide(sup.poly, p_t=p_t, p_q=p_q, cutoff=cutoff)
    lim = cutoff - margin
    bad = sorted((k, c) for k, c in ser.items()
                 if c < 0 and k[0] <= lim and k[1] <= lim)
    if bad:
        k, c = bad[0]
        return {"ok": False,
                "first_negative": {"q": k[0], "t": k[1], "a": k[2],
                                   "coeff": c}}
    return {"ok": True, "cutoff": cutoff}


def _swap(pair):
    low = lower_twist(pair)
    if low.second is None:
        return low
    return LinkPair(low.second, low.first, low.vee)


def check_symmetries(pair, suite, rank=1, norm="min", sup=None):
    """Run the requested identity checks; returns {name: report}."""
    out = {}
    for name in suite:
        try:
            out[name] = _CHECKS[name](pair, rank, norm, sup)
        except MoveNotApplicable:
            out[name] = {"ok": True, "skipped": "no applicable site"}
    return out


def _check_lifts(pair, rank, norm, sup):
    low = lower_twist(pair)
    base = jd(low, rank, norm).poly
    forest = low.first
    labels = [l for p in forest.paths for l in p.labels]
    if not labels:
        return {"ok": True, "skipped": "no vertices"}
    # same matrix, different words: extra trailing tau_+ and a prepended
    # identity pair must not change the projection
    mac = get_mac(rank)
    rep = get_rep(rank)
    r, s = labels[0]
    w = word_of_rs(r, s)
    alt = (('+', 1), ('+', -1)) + w + (('+', 1), ('+', -1))
    probe = mac.J((1,))
    f1 = gamma_hat_project(w, probe, rep, tau_dot=mac.tau_minus_dot)
    f2 = gamma_hat_project(alt, probe, rep, optimize=False)
    from .daha import xp_eq
    ok = xp_eq(f1, f2)
    return {"ok": ok, "word": w, "base": poly_text(base)}


def _check_moves(pair, rank, norm, sup):
    low = lower_twist(pair)
    base = jd(low, rank, norm).poly
    tried = []
    for comp, forest in enumerate(low.forests()):
        if forest is None:
            continue
        for j, p in enumerate(forest.paths):
            for i, (r, s) in enumerate(p.labels, start=1):
                move = {0: "drop_r0", 1: "contract_r1"}.get(r)
                if move is None:
                    continue
                if move == "contract_r1" and i == 1:
                    continue        # changes the closed link component-wise
                try:
                    moved = normalize_moves(low, move, (comp, j, i))
                except MoveNotApplicable:
                    continue
                got = jd(moved, rank, norm).poly
                tried.append((move, (comp, j, i), got == base))
    ok = all(t[2] for t in tried)
    return {"ok": ok, "tried": tried} if tried else \
        {"ok": True, "skipped": "no applicable site"}


def _check_duality(pair, rank, norm, sup):
    s = sup if sup is not None else superpolynomial(pair, norm)
    flipped = psubstitute(s.poly, q=(1, 0, -1, 0), t=(1, -1, 0, 0))
    tr = _transpose_pair(pair)
    s2 = superpolynomial(tr, norm)
    ok = _hat_eq(flipped, s2.poly)
    return {"ok": ok}


def _transpose_pair(pair):
    def tf(forest):
        if forest is None:
            return None
        return ColoredForest(tuple(
            Path(p.labels, wt.transpose(p.color), p.share)
            for p in forest.paths))
    return LinkPair(tf(pair.first), tf(pair.second), pair.vee, pair.twist)


def _check_phi_swap(pair, rank, norm, sup):
    low = lower_twist(pair)
    if low.second is None or low.vee:
        return {"ok": True, "skipped": "needs a plain pair"}
    a = jd_raw(low, rank, norm)
    b = jd_raw(_swap(low), rank, norm)
    return {"ok": a == b}


def _check_q1(pair, rank, norm, sup):
    """q = 1 factors into the component (knot) values up to a cofactor of
    the shape (1+a)^i q^j t^k."""
    s = sup if sup is not None else superpolynomial(pair, norm)
    whole = psubstitute(s.poly, q=(1, 0, 0, 0))
    low = lower_twist(pair)
    prod = pone()
    for forest, flip in ((low.first, False), (low.second, False)):
        if forest is None:
            continue
        for lo, hi, sub in _component_trees(forest):
            ksup = superpolynomial(LinkPair(sub), norm)
            prod = pmul(prod, psubstitute(ksup.poly, q=(1, 0, 0, 0)))
    ok = _cofactor_ok(whole, prod)
    return {"ok": ok, "lhs": poly_text(whole), "rhs": poly_text(prod)}


def _component_trees(forest):
    """Each path as its own one-component tree (colors kept)."""
    for j, p in enumerate(forest.paths):
        yield j, j, ColoredForest((Path(p.labels, p.color, 0),))


def _cofactor_ok(p1, p2):
    """p1 == (1+a)^i * q^j t^k * p2 for some i >= 0, j, k (either way)."""
    for a, b in ((p1, p2), (p2, p1)):
        cur = dict(b)
        for i in range(9):
            try:
                q = pdivexact(dict(a), cur)
            except InexactDivision:
                q = None
            if q is not None and len(q) == 1:
                c = next(iter(q.values()))
                if c in (1, -1):
                    return True
            cur = pmul(cur, {(0, 0, 0): 1, (0, 0, 1): 1})
    return False


def _check_stab_extra(pair, rank, norm, sup):
    s = sup if sup is not None else superpolynomial(pair, norm)
    m = s.verified_rank + 1
    try:
        got = jd(lower_twist(pair), m, norm).poly
    except RankTooSmall:
        return {"ok": True, "skipped": "rank"}
    return {"ok": _at_rank(s.poly, m) == got, "rank": m}


_CHECKS = {
    "lifts": _check_lifts,
    "moves": _check_moves,
    "duality": _check_duality,
    "phi_swap": _check_phi_swap,
    "q1": _check_q1,
    "stab_extra": _check_stab_extra,
}
