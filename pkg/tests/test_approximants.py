from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclolog import approximants as ap
from cyclolog.errors import DomainError, InternalConsistencyError, UsageError
from cyclolog.numtheory import lcm_upto


def alpha_oracle(delta, nu):
    n = nu * delta
    return [(-1) ** (nu + n + k) * math.comb(n, k) * math.comb(n + k, n - nu) for k in range(n + 1)]


def laurent_product(delta, nu, extra):
    """alpha(w) * sum_{j >= 1} w^-j / j, as {exponent: coefficient}, truncated at w^-extra."""
    a = ap.alpha_poly(delta, nu)
    out: dict[int, Fraction] = {}
    for e, c in a.coefficients.items():
        for j in range(1, e + extra + 1):
            out[e - j] = out.get(e - j, 0) + c / j
    return out


def test_delta_params():
    p = ap.DeltaParams(5)
    assert (p.delta0, p.d1, p.d2, p.gamma1) == (Fraction(1, 5), 4, 6, Fraction(2, 3))
    with pytest.raises(UsageError):
        ap.DeltaParams(1)


@pytest.mark.parametrize(
    "delta, nu, want",
    [(2, 1, (-2, 6, -4)), (5, 1, (5, -75, 350, -700, 630, -210))],
)
def test_alpha_coeff_examples(delta, nu, want):
    assert ap.alpha_coeffs(delta, nu).alpha_star == want


@pytest.mark.parametrize("delta", range(2, 9))
@pytest.mark.parametrize("nu", [1, 2, 5, 13, 40])
def test_alpha_coeffs_against_oracle(delta, nu):
    t = ap.alpha_coeffs(delta, nu)
    assert list(t.alpha_star) == alpha_oracle(delta, nu)
    assert sum(t.alpha_star) == 0
    assert len(t.alpha_star) == nu * delta + 1


def test_coeff_table_json_roundtrip():
    t = ap.alpha_coeffs(7, 9)
    text = t.to_json()
    assert '"' + str(t.alpha_star[3]) + '"' in text
    assert ap.CoeffTable.from_json(text) == t


def test_coeff_table_rejects_bad_tables():
    with pytest.raises(InternalConsistencyError):
        ap.CoeffTable(ap.DeltaParams(2), 1, (1, 2, 3))
    with pytest.raises(InternalConsistencyError):
        ap.CoeffTable(ap.DeltaParams(2), 1, (1, -1))


def test_alpha_poly_example():
    a = ap.alpha_poly(2, 1)
    assert a == ap.RationalPoly({1: 2, 2: -6, 3: 4})
    assert a(1) == 0
    assert a.degree == 3 and a.is_integral()


@pytest.mark.parametrize("delta", [2, 3, 5, 7])
@pytest.mark.parametrize("nu", [1, 4, 11, 20])
def test_two_alpha_constructions(delta, nu):
    assert ap.alpha_poly(delta, nu) == ap.f1_closed_form(delta, nu)
    assert ap.alpha_poly(delta, nu).degree == nu * (delta + 1)


def test_alpha_mismatch_raises(monkeypatch):
    monkeypatch.setattr(ap, "f1_closed_form", lambda params, nu: ap.RationalPoly({0: 1}))
    ap._alpha_poly.cache_clear()
    with pytest.raises(InternalConsistencyError):
        ap.alpha_poly(3, 2)


def test_phi_constant_term_delta2_nu1():
    # (-1)^nu sum_k a_k/(1 + k) with a = (-2, 6, -4)
    phi = ap.phi_poly(2, 1)
    assert phi[0] == -(Fraction(-2, 1) + Fraction(6, 2) + Fraction(-4, 3))
    assert phi[0] == Fraction(1, 3)
    assert phi == ap.RationalPoly({0: Fraction(1, 3), 1: -4, 2: 4})


@pytest.mark.parametrize("delta", [2, 3, 5, 7])
@pytest.mark.parametrize("nu", [1, 2, 3, 6])
def test_phi_is_pade_polynomial_part(delta, nu):
    # independent oracle: expand alpha(w) (-log(1 - 1/w)) in w^-1 and keep the polynomial part
    prod = laurent_product(delta, nu, nu * delta + 2)
    poly = ap.RationalPoly({e: c for e, c in prod.items() if e >= 0})
    assert ap.phi_poly(delta, nu) == poly
    assert ap.phi_poly_direct(delta, nu) == poly
    # the remainder starts at w^(nu - nu*Delta - 1): R0 vanishes on nu < t <= nu*Delta
    for e in range(-1, nu - nu * delta - 1, -1):
        assert prod.get(e, 0) == 0
    lead = prod[nu - nu * delta - 1]
    assert lead == (-1) ** nu * ap.r0_eval(delta, nu, nu * delta + 1)


@pytest.mark.parametrize("delta", [5, 7])
@pytest.mark.parametrize("nu", [1, 7, 20])
def test_phi_denominators(delta, nu):
    phi = ap.phi_poly(delta, nu)
    assert lcm_upto(nu * (delta + 1)) % phi.denominator_lcm() == 0
    assert (phi * lcm_upto(nu * (delta + 1))).is_integral()
    assert phi.degree <= nu * (delta + 1) - 1


@pytest.mark.parametrize("delta, nu", [(2, 1), (5, 1), (5, 2)])
@pytest.mark.parametrize("t", [Fraction(1, 2), Fraction(3, 7), Fraction(11)])
def test_r0_partial_fractions_examples(delta, nu, t):
    assert ap.r0_eval(delta, nu, t) == ap.r0_partial_fractions(delta, nu, t)


@given(
    st.sampled_from([2, 5, 7]),
    st.integers(1, 6),
    st.fractions(min_value=-60, max_value=60, max_denominator=50),
)
def test_r0_partial_fractions_random(delta, nu, t):
    if t.denominator == 1 and -nu * delta <= t <= 0:
        with pytest.raises(DomainError):
            ap.r0_eval(delta, nu, t)
        return
    assert ap.r0_eval(delta, nu, t) == ap.r0_partial_fractions(delta, nu, t)


@pytest.mark.parametrize("delta, nu", [(2, 1), (5, 2), (7, 3)])
def test_r0_degree_gap(delta, nu):
    # deg numerator - deg denominator = -nu - 1
    n = nu * delta
    c = Fraction(math.factorial(n), math.factorial(nu * (delta - 1)))
    big = 10**12
    assert abs(ap.r0_eval(delta, nu, big) * Fraction(big) ** (nu + 1) / c - 1) < Fraction(1, 10**9)


def test_r0_pole():
    with pytest.raises(DomainError):
        ap.r0_eval(5, 1, -3)


def test_delta_op_examples():
    assert not ap.delta_op(ap.RationalPoly({0: 7}))
    assert ap.delta_op(ap.RationalPoly({1: 2, 2: -6, 3: 4})) == ap.RationalPoly({1: 2, 2: -12, 3: 12})


polys = st.dictionaries(st.integers(0, 8), st.fractions(max_denominator=9, min_value=-9, max_value=9), max_size=6).map(
    ap.RationalPoly
)


@given(polys, polys, st.fractions(max_denominator=7, min_value=-5, max_value=5))
def test_rational_poly_ring(p, q, x):
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)
    assert ap.delta_op(p + q) == ap.delta_op(p) + ap.delta_op(q)
    # Leibniz rule for w d/dw
    assert ap.delta_op(p * q) == ap.delta_op(p) * q + p * ap.delta_op(q)


def test_ode_example_by_hand():
    # w (delta + 2)(delta - 3) f = delta(delta - 1) f for f = 2w - 6w^2 + 4w^3
    rhs = ap.RationalPoly({2: -12, 3: 24})
    f = ap.alpha_poly(2, 1)
    assert ap.delta_op(ap.affine_delta(f, -1)) == rhs
    assert ap.check_ode(2, 1)


@pytest.mark.parametrize("delta", [2, 3, 5, 7])
@pytest.mark.parametrize("nu", [1, 2, 3])
def test_ode_and_contiguous(delta, nu):
    assert ap.check_ode(delta, nu)
    assert ap.check_contiguous(delta, nu)


def test_contiguous_detects_wrong_index():
    left, _ = ap.contiguous_sides(5, 2)
    _, right = ap.contiguous_sides(5, 1)
    assert left != right


def test_f0_composition_at_two():
    a, phi = ap.alpha_poly(5, 1), ap.phi_poly(5, 1)
    with mpmath.mp.workprec(200):
        want = int(a(2)) * mpmath.log(2) - mpmath.mpf(phi(2).numerator) / phi(2).denominator
    got = ap.f0_eval(5, 1, 2, 128)
    with mpmath.mp.workprec(200):
        assert abs(got - want) <= abs(want) * mpmath.mpf(2) ** -120


@pytest.mark.parametrize("nu", range(1, 9))
def test_f0_matches_series_at_three(nu):
    f = ap.f0_eval(5, nu, 3, 128)
    s = ap.f2_series_eval(5, nu, 3, precision=128)
    with mpmath.mp.workprec(200):
        assert abs(f - s.value) <= 1e-25 * abs(s.value)


@given(st.integers(1, 6), st.floats(0, 6.28), st.floats(1.3, 4))
def test_f0_matches_series_random(nu, arg, radius):
    w = mpmath.mpc(radius) * mpmath.expj(arg)
    f = ap.f0_eval(3, nu, w, 96)
    s = ap.f2_series_eval(3, nu, w, precision=96)
    with mpmath.mp.workprec(160):
        assert abs(f - s.value) <= s.tail_bound + abs(s.value) * mpmath.mpf(2) ** -88


def test_f0_reports_cancellation():
    # at nu = 60 the two terms are ~2^270 times larger than their difference at w = 3
    d = ap.f0_eval_detail(5, 60, 3, 128)
    assert d.lost_bits > 200
    assert d.working_bits - d.lost_bits >= 128
    s = ap.f2_series_eval(5, 60, 3, precision=128)
    with mpmath.mp.workprec(200):
        assert abs(d.value - s.value) <= abs(s.value) * mpmath.mpf(2) ** -120


def test_f0_domain():
    with pytest.raises(DomainError):
        ap.f0_eval(5, 1, Fraction(1, 2))


def test_f0_at_root_of_unity_point():
    from cyclolog.cyclotomic import theta0_value

    v = ap.f0_at_root_of_unity(5, 3, 3, 1, 128)
    w = theta0_value(3, 1, 256)
    with mpmath.mp.workprec(256):
        w = mpmath.mpc(w)
        # direct: alpha(w) (-log(2 + zeta)) - phi(w), at 256 bits
        a = ap.alpha_poly(5, 3)
        phi = ap.phi_poly(5, 3)
        A = mpmath.polyval([mpmath.mpf(c.numerator) / c.denominator for c in reversed(a.dense())], w)
        P = mpmath.polyval([mpmath.mpf(c.numerator) / c.denominator for c in reversed(phi.dense())], w)
        want = A * -mpmath.log(1 - 1 / w) - P
        assert abs(v.value - want) <= abs(want) * mpmath.mpf(2) ** -100


def test_series_examples():
    s = ap.f2_series_eval(2, 1, 2, terms=200)
    assert s.tail_bound < mpmath.mpf(2) ** -150
    with pytest.raises(DomainError):
        ap.f2_series_eval(5, 1, Fraction(9, 10))
    with pytest.raises(UsageError):
        ap.f2_series_eval(5, 3, 2, terms=3)


def test_series_leading_behaviour():
    w = mpmath.mpf(10) ** 8
    s = ap.f2_series_eval(5, 2, w)
    lead = ap.r0_eval(5, 2, 11)
    with mpmath.mp.workprec(128):
        approx = mpmath.mpf(lead.numerator) / lead.denominator * w ** (2 - 11)
        assert abs(s.value / approx - 1) < 1e-6


def test_surface_point():
    with mpmath.mp.workprec(128):
        psi = mpmath.pi / 5
        z = ap.SurfacePoint.evaluation_point(psi)
        assert abs(z.theta0() + (1 + 1j * mpmath.tan(psi)) / 2) < mpmath.mpf(2) ** -120
        assert abs(mpmath.exp(z.log()) - z.theta0()) < mpmath.mpf(2) ** -120
    with pytest.raises(DomainError):
        ap.SurfacePoint(mpmath.mpf(0), mpmath.mpf(1))
