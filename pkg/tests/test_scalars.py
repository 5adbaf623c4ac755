"""Exact scalar arithmetic: Laurent polys, binomial atoms, restricted fractions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dahalink.scalars import (
    Scal, FactoredBinomial, ZeroPolynomial, ZeroAtAEqualsZero,
    NotABinomialProduct, InexactDivision, FractionalResidue,
    pzero, pone, pmono, padd, psub, pmul, ppow, pscale, pdivexact, pdivides,
    psubstitute, hat_normalize, binomial_atoms, a_atom, atom_expand_cached,
    factor_binomials, binomial_factor_ops, series_divide, series_nonnegative,
    poly_text, poly_parse,
)


def P(text):
    return poly_parse(text)


# ---------------------------------------------------------------------------
# polynomial layer

def test_pmono_zero_coeff_dropped():
    assert pmono(c=0) == {}


def test_add_sub_roundtrip():
    f = P("1 + 2*q - t^2")
    g = P("3*q*t + a*q^-1")
    assert psub(padd(f, g), g) == f


def test_mul_example():
    f = P("1 - q*t")
    g = P("1 + q*t")
    assert pmul(f, g) == P("1 - q^2*t^2")


def test_pow():
    f = P("1 + q")
    assert ppow(f, 3) == P("1 + 3*q + 3*q^2 + q^3")
    assert ppow(f, 0) == pone()


def test_divexact():
    num = pmul(P("1 - q*t"), P("1 + q + t^3"))
    assert pdivexact(num, P("1 - q*t")) == P("1 + q + t^3")


def test_divexact_fails_on_remainder():
    with pytest.raises(InexactDivision):
        pdivexact(P("1 + q + q^3"), P("1 - q*t"))


def test_pdivides_none():
    assert pdivides(P("1 + q"), P("1 + t")) is None


# fractional exponents
def test_fractional_exponents_arithmetic():
    f = pmono(Fraction(1, 2), Fraction(-1, 2))
    assert pmul(f, f) == pmono(1, -1)


# ---------------------------------------------------------------------------
# canonical text form

def test_poly_text_ordering():
    p = P("1 + q*t - q*t^2")
    assert poly_text(p) == "1 + q*t - q*t^2"


def test_poly_text_parse_roundtrip_fractional():
    p = pmono(Fraction(1, 2), Fraction(-3, 2), 1, -2)
    assert poly_parse(poly_text(p)) == p


coeffs = st.integers(min_value=-6, max_value=6)
expos = st.integers(min_value=-4, max_value=4)
aexpos = st.integers(min_value=0, max_value=2)


@st.composite
def polys(draw):
    n = draw(st.integers(min_value=0, max_value=5))
    out = {}
    for _ in range(n):
        k = (draw(expos), draw(expos), draw(aexpos))
        c = draw(coeffs)
        if c:
            out[k] = c
    return out


@given(polys())
@settings(max_examples=60, deadline=None)
def test_text_roundtrip(p):
    assert poly_parse(poly_text(p)) == p


@given(polys(), polys(), polys())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(f, g, h):
    assert pmul(f, padd(g, h)) == padd(pmul(f, g), pmul(f, h))
    assert pmul(pmul(f, g), h) == pmul(f, pmul(g, h))


# ---------------------------------------------------------------------------
# hat-normalization

def test_hat_normalize_examples():
    # q(1+qt) -> 1+qt ; -t(1+q) -> 1+q ; qt+q^2t^2 -> 1+qt
    for src, want in [("q + q^2*t", "1 + q*t"),
                      ("-t - q*t", "1 + q"),
                      ("q*t + q^2*t^2", "1 + q*t")]:
        p, _ = hat_normalize(P(src))
        assert poly_text(p) == want


def test_hat_normalize_idempotent():
    p, shift = hat_normalize(P("-q^2*t + q^3*t^3 + a*q^2"))
    p2, shift2 = hat_normalize(p)
    assert p2 == p and shift2[0] == 1 and shift2[1] == 0 and shift2[2] == 0


def test_hat_normalize_errors():
    with pytest.raises(ZeroPolynomial):
        hat_normalize({})
    with pytest.raises(ZeroAtAEqualsZero):
        hat_normalize(P("a*q"))


# ---------------------------------------------------------------------------
# binomial atoms / factored products

def test_difference_of_squares():
    c, key, atoms = binomial_atoms(2, 2)
    # 1 - q^2 t^2 = -(qt-1)(qt+1): atoms Phi_1(qt), Phi_2(qt)
    assert set(atoms) == {('c', 1, 1, 1), ('c', 2, 1, 1)}
    fb = FactoredBinomial(c, key, atoms)
    assert fb.expand() == P("1 - q^2*t^2")


def test_expand_factor_roundtrip():
    p = pmul(pmul(P("1 - q*t"), P("1 - q^2*t")), pmono(1, -2, 0, 3))
    c, key, atoms = factor_binomials(p)
    assert FactoredBinomial(c, key, atoms).expand() == p


def test_factor_cyclotomic_fallback():
    # 1+t+t^2 = Phi_3(t): not a binomial product but still a single atom
    c, key, atoms = factor_binomials(P("1 + t + t^2"))
    assert atoms == (('c', 3, 0, 1),) and c == 1


def test_factor_rejects_non_product():
    with pytest.raises(NotABinomialProduct):
        factor_binomials(P("1 + q + q^3*t"))


def test_gcd_lcm_product():
    x = binomial_factor_ops(P("1 - q^2*t^2"), None, 'factor')
    y = binomial_factor_ops(P("1 - q*t"), None, 'factor')
    g = binomial_factor_ops(x, y, 'gcd')
    assert g.atoms == (('c', 1, 1, 1),)
    l = binomial_factor_ops(x, y, 'lcm')
    assert g.mul(l).atoms == x.mul(y).atoms


def test_pi_dagger_lcm():
    # (1+a)(1+qa) vs (1+a)(1+a/t) -> (1+a)(1+qa)(1+a/t)
    x = FactoredBinomial(1, (0, 0, 0), (a_atom(0, 0), a_atom(1, 0)))
    y = FactoredBinomial(1, (0, 0, 0), (a_atom(0, 0), a_atom(0, -1)))
    l = binomial_factor_ops(x, y, 'lcm')
    assert sorted(l.atoms) == sorted((a_atom(0, 0), a_atom(1, 0),
                                      a_atom(0, -1)))


def test_a_atom_expand():
    assert atom_expand_cached(a_atom(1, -2)) == P("1 + a*q*t^-2")


# ---------------------------------------------------------------------------
# Scal fraction ring

def test_scal_auto_cancel():
    s = Scal(P("1 - q^2*t^2"), (('c', 1, 1, 1),))
    assert s.is_poly()
    assert s.num == pscale(P("1 + q*t"), -1)


def test_scal_add_different_dens():
    a = Scal(pone(), (('c', 1, 1, 1),))       # 1/(qt-1)
    b = Scal(pone(), (('c', 2, 1, 1),))       # 1/(qt+1)
    s = a.add(b)
    assert s.mul(Scal(P("1 - q^2*t^2"))).sub(Scal(P("-2*q*t"))).is_zero()


def test_scal_inv_roundtrip():
    s = Scal(P("1 - q*t^2"), (('c', 1, 0, 1),))
    assert s.mul(s.inv()).sub(Scal.one()).is_zero()


def test_scal_eq_cross_multiplied():
    a = Scal(P("1 - q^2*t^2"), (('c', 2, 1, 1),))
    b = Scal(pscale(P("1 - q*t"), 1))
    assert a == b


def test_scal_unhashable():
    with pytest.raises(TypeError):
        hash(Scal.one())


# ---------------------------------------------------------------------------
# substitution

def test_substitute_trefoil_homfly_style():
    # (1+qt+aq) at a=-1, t=q -> 1-q+q^2
    p = P("1 + a*q + q*t")
    got = psubstitute(psubstitute(p, a=(-1, 0, 0, 0)), t=(1, 1, 0, 0))
    assert got == P("1 - q + q^2")


def test_substitute_identity():
    p = P("2 - q*t^2 + a*q^-1")
    assert psubstitute(p) == p


def test_substitute_fractional_residue():
    p = pmono(Fraction(1, 2))
    with pytest.raises(FractionalResidue):
        psubstitute(p, q=(1, 1, 0, 0), strict=True)


# ---------------------------------------------------------------------------
# truncated series

def test_series_divide_trivial():
    assert series_divide(P("1 - t"), 1, 0, 3) == pone()


def test_series_geometric():
    got = series_divide(pone(), 1, 0, 3)
    assert got == P("1 + t + t^2 + t^3")


def test_series_long_division():
    got = series_divide(P("1 - t + q*t"), 1, 0, 2)
    assert got == P("1 + q*t + q*t^2")


def test_series_divide_reproduces_truncation():
    p = P("1 + q*t - t^3")
    prod = pmul(p, ppow(P("1 - t"), 2))
    assert series_divide(prod, 2, 0, 3) == {k: v for k, v in p.items()
                                            if k[1] <= 3}


def test_series_nonnegative():
    assert series_nonnegative(P("1 + q*t"), 4, 0)
    assert not series_nonnegative(P("1 - q*t^2"), 4, 0)
    # the polluted tail above cutoff-margin is ignored
    assert series_nonnegative(P("1 - q*t^4"), 4, 1)
