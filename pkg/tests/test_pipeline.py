"""End-to-end invariants: rank polynomials, a-stabilization, specializations."""

import pytest

from dahalink.links import Path, ColoredForest, LinkPair, parse_dsl, lower_twist
from dahalink.scalars import (
    Scal, poly_parse, poly_text, pmul, psubstitute, hat_normalize,
)
from dahalink import pipeline as pl


TREFOIL = "{[3,2]->(1)}"
T22 = "{[1,1]->(1) | [1,1]->(1)}"
T42 = "{[2,1]->(1) | [2,1]->(1)}"
NEG_HOPF = "{[1,-1]->(1) | [1,-1]->(1)}"
THREE_CHAIN = "{[1,0]->(1) | [1,0]->(1)} ; vee {[1,0]->(1)}"
T32_MERIDIAN = "{[3,2]->(1)} ; {[1,0]->(1)}"
T32_MERIDIAN_V = "{[3,2]->(1)} ; vee {[1,0]->(1)}"
CABLE_32_11 = "{[1,1],[2,1]->(1) | ^1 [1,1]->(1)}"
TWIST_11 = "twist [1,1] {[1,0]->(1)} ; vee {[2,1]->(1)}"


from functools import lru_cache


@lru_cache(maxsize=None)
def sup(dsl, norm="min"):
    return pl.superpolynomial(parse_dsl(dsl), norm)


# ---------------------------------------------------------------------------
# fixed-rank values

def test_trefoil_rank1():
    inv = pl.jd(parse_dsl(TREFOIL), 1)
    assert inv.poly == poly_parse("1 + q*t - q*t^2")


def test_unknot_any_rank():
    for m in (1, 2, 3):
        assert pl.jd(parse_dsl("{[1,0]->(1)}"), m).poly == poly_parse("1")


def test_jd_matches_superpolynomial_specialization():
    s = sup(T42)
    for m in (1, 2, 3):
        assert pl._at_rank(s.poly, m) == pl.jd(parse_dsl(T42), m).poly


# ---------------------------------------------------------------------------
# superpolynomials

GOLDEN = {
    TREFOIL: "1 + q*t + a*q",
    T22: "1 - t + q*t + a*q",
    T42: "1 - t + q*t - q*t^2 + q^2*t^2 + a*q - a*q*t + a*q^2*t",
    NEG_HOPF: "1 + a*q + a*t^-1 - a*q*t^-1",
    THREE_CHAIN: ("1 + a^2*q^2 - 2*t + 2*q*t + t^2 - 2*q*t^2 + q^2*t^2"
                  " + 2*a*q - 2*a*q*t + 2*a*q^2*t"),
    T32_MERIDIAN: ("1 + a^2*q^2 - a^2*q^2*t^-2 + a^2*q^3*t^-2 + a^2*q*t^-1"
                   " - a^2*q^3*t^-1 + q*t + 2*a*q + a*t^-1 - a*q^2*t^-1"
                   " + a*q^2*t"),
    T32_MERIDIAN_V: ("1 - t + q*t + q^2*t - q*t^2 + q^3*t^2 - q^2*t^3"
                     " + q^3*t^3 - q^3*t^4 + q^4*t^4 + a^2*q^3 - a^2*q^3*t"
                     " + a^2*q^4*t + a*q + a*q^2 - a*q*t + 2*a*q^3*t"
                     " - a*q^2*t^2 + a*q^4*t^2 - a*q^3*t^3 + a*q^4*t^3"),
    CABLE_32_11: ("1 + a^2*q^3 - t + q*t + q^2*t - q*t^2 + q^2*t^2"
                  " - q^2*t^3 + q^3*t^3 + a*q + a*q^2 - a*q*t + a*q^2*t"
                  " + a*q^3*t - a*q^2*t^2 + a*q^3*t^2"),
}


@pytest.mark.parametrize("dsl", sorted(GOLDEN))
def test_superpolynomial_golden(dsl):
    assert sup(dsl).poly == poly_parse(GOLDEN[dsl])


def test_three_chain_is_hopf_square():
    hopf = poly_parse("1 + a*q - t + q*t")
    assert sup(THREE_CHAIN).poly == pmul(hopf, hopf)


def test_twist_column_equals_cable():
    # the twisted pair encodes the same link as the iterated cable
    assert sup(TWIST_11).poly == poly_parse(GOLDEN[CABLE_32_11])


def test_twist_nested_route_agrees():
    pair = parse_dsl(TWIST_11)
    assert pl.generalized_twist(pair, nested=True).poly == sup(TWIST_11).poly


def test_deg_a_recorded():
    assert sup(TREFOIL).deg_a == 1
    assert sup(T32_MERIDIAN).deg_a == 2


def test_torus_family_positive():
    # 2-fold T(m,1): (1-t)(1 + qt + ... ) + q^m t^m + a(...)
    for m in (1, 2, 3):
        s = sup(f"{{[1,{m}]->(1) | [1,{m}]->(1)}}")
        want = {}
        for i in range(m):
            for k, c in {(i, i, 0): 1, (i, i + 1, 0): -1}.items():
                want[k] = want.get(k, 0) + c
        want[(m, m, 0)] = want.get((m, m, 0), 0) + 1
        for i in range(1, m):
            for k, c in {(i, i - 1, 1): 1, (i, i, 1): -1}.items():
                want[k] = want.get(k, 0) + c
        want[(m, m - 1, 1)] = want.get((m, m - 1, 1), 0) + 1
        assert s.poly == {k: c for k, c in want.items() if c}


def test_torus_family_negative_m2():
    s = sup("{[1,-2]->(1) | [1,-2]->(1)}")
    assert s.poly == poly_parse(
        "1 - q + q*t + a*t^-1 - a*q*t^-1 + a*q - a*q^2 + a*q^2*t")


# ---------------------------------------------------------------------------
# Hopf star and the 2-vertex

def test_hopf_star_row_box():
    v = pl.hopf_vertex(((2,), (1,)))
    assert v.super.poly == poly_parse("1 + a*q^2 + a*t^-1 - a*q^2*t^-1")
    assert v.c_num == poly_parse("1 - q^2 + q^3")


def test_hopf_star_mixed_self_dual():
    v = pl.hopf_vertex(((1, 1), (2,)))
    p = v.super.poly
    assert p == poly_parse("1 + a*q^2 + a*t^-2 - a*q^2*t^-2")
    flipped = psubstitute(p, q=(1, 0, -1, 0), t=(1, -1, 0, 0))
    assert hat_normalize(flipped)[0] == p


def test_hopf_star_order_symmetric():
    a = pl.hopf_vertex(((1, 1), (2,))).super.poly
    b = pl.hopf_vertex(((2,), (1, 1))).super.poly
    assert a == b


def test_hopf_dagger_unknot():
    v = pl.hopf_vertex(((1,), (1,)))
    assert v.super.poly == poly_parse("1 + a*q + a*t^-1 - a*q*t^-1")
    # dagger form divides by (1+a): (1 + a(q + 1/t - q/t)) rescaled
    num = Scal(pmul(v.super.poly, poly_parse("1")))
    assert v.dagger.mul(Scal(poly_parse("1 + a"))).as_poly() == v.super.poly


def test_hopf_triple_uncolored():
    s = sup("{[1,-1]->(1) | [1,-1]->(1) | ^1 [1,-1]->(1)}")
    assert s.poly == poly_parse(
        "1 + a*q + a*q^2 + a*t^-2 - 2*a*q*t^-2 + a*q^2*t^-2 + a*t^-1"
        " + a*q*t^-1 - 2*a*q^2*t^-1 + a^2*q^3 + a^2*t^-3 - 2*a^2*q*t^-3"
        " + a^2*q^2*t^-3 + a^2*q*t^-2 - 2*a^2*q^2*t^-2 + a^2*q^3*t^-2"
        " + a^2*q*t^-1 + a^2*q^2*t^-1 - 2*a^2*q^3*t^-1")


def test_hopf_pair_with_vee_meridian():
    s = sup("{[1,-1]->(1) | [1,-1]->(1)} ; vee {[1,0]->(1)}")
    assert s.poly == poly_parse(
        "2 - q - 2*t + 2*q*t + 3*a*q - a*q^2 + a*t^-1 - a*q*t^-1 - a*t"
        " + a*q^2*t + a^2*q^2 + a^2*q*t^-1 - a^2*q^2*t^-1")


# ---------------------------------------------------------------------------
# specializations

def _times(scal, text):
    return scal.mul(Scal(poly_parse(text))).as_poly()


def test_homfly_t22():
    h = pl.spec_homfly(sup(T22))
    assert _times(h, "1 - q") == poly_parse("1 - q + q^2 - a*q")


def test_homfly_unknot_unreduced():
    h = pl.spec_homfly(sup("{[1,0]->(1)}"), reduced=False)
    assert _times(h, "1 - q") == poly_parse("1 - a")


def test_homfly_trefoil_reduced_polynomial():
    h = pl.spec_homfly(sup(TREFOIL))
    assert h.as_poly() == poly_parse("1 + q^2 - a*q")


def test_alexander_values():
    assert pl.spec_alexander(sup(TREFOIL)) == poly_parse("1 - q + q^2")
    assert pl.spec_alexander(sup(T32_MERIDIAN_V)) == poly_parse("1 + q^3 + q^6")
    assert pl.spec_alexander(sup(CABLE_32_11)) == poly_parse("1 + q^4")


def test_khovanov_variant_a():
    assert pl.spec_khovanov(sup(T22), 1, "A") == poly_parse(
        "1 + q^2 + q^4*t^2 + q^6*t^2")
    assert pl.spec_khovanov(sup(T42), 1, "A") == poly_parse(
        "1 + q^2 + q^4*t^2 - q^8*t^2 + q^8*t^4 + q^10*t^4")


def test_khovanov_variant_b():
    assert pl.spec_khovanov(sup(NEG_HOPF), 5, "B") == poly_parse(
        "1 + 2*q^2 + 3*q^4 + 4*q^6 + 4*q^8 + 3*q^10 + 2*q^12 + q^14"
        " + q^10*t^2 + q^12*t^2 + q^14*t^2 + q^16*t^2 + q^18*t^2")


def test_standard_parameters_t42():
    st = pl.to_standard(sup(T42).poly)
    assert hat_normalize(st)[0] == poly_parse(
        "1 - q^2 + q^4*t^2 - q^6*t^2 + q^8*t^4"
        " + a^2*q^2*t^3 - a^2*q^4*t^3 + a^2*q^6*t^5")


# ---------------------------------------------------------------------------
# structural checks

def test_phi_swap_exact():
    rep = pl.check_symmetries(parse_dsl(T32_MERIDIAN), ["phi_swap"], rank=1)
    assert rep["phi_swap"]["ok"]


def test_duality_t42():
    rep = pl.check_symmetries(parse_dsl(T42), ["duality"])
    assert rep["duality"]["ok"]


def test_moves_on_padded_word():
    pair = parse_dsl("{[3,2],[1,0]->(1)}")
    rep = pl.check_symmetries(pair, ["moves"], rank=1)
    assert rep["moves"]["ok"] and rep["moves"]["tried"]


def test_lift_independence():
    rep = pl.check_symmetries(parse_dsl(TREFOIL), ["lifts"], rank=1)
    assert rep["lifts"]["ok"]


def test_q1_factorization():
    rep = pl.check_symmetries(parse_dsl(T32_MERIDIAN_V), ["q1"])
    assert rep["q1"]["ok"]


def test_stab_extra_rank():
    rep = pl.check_symmetries(parse_dsl(TREFOIL), ["stab_extra"])
    assert rep["stab_extra"]["ok"]


def test_positivity_algebraic():
    rep = pl.check_positivity(sup(T32_MERIDIAN_V), p_t=1)
    assert rep["ok"]


def test_positivity_fails_non_algebraic():
    rep = pl.check_positivity(sup(T32_MERIDIAN), p_t=1)
    assert not rep["ok"]


def test_deg_a_bound_respected():
    for dsl in (TREFOIL, T22, T42, T32_MERIDIAN, CABLE_32_11):
        s = sup(dsl)
        from dahalink.links import deg_a_bound
        bound, exact = deg_a_bound(lower_twist(parse_dsl(dsl)), "min")
        assert s.deg_a <= bound
        if exact is not None:
            assert s.deg_a == exact


def test_stabilization_window_recorded():
    s = sup(T22)
    assert s.verified_rank == s.ranks[-1] + 1
    assert pl._at_rank(s.poly, s.verified_rank) == \
        pl.jd(parse_dsl(T22), s.verified_rank).poly
