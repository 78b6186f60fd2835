from fractions import Fraction as F

import pytest
import sympy as sp

import oracles as o
from stabwall.charge import (
    StabParams,
    bogomolov,
    charge,
    heart_generator_charges,
    in_quiver_region,
    q_form,
    slope,
    support_margin,
)
from stabwall.errors import ChargeVanishes, InputError
from stabwall.kclass import KClass, hilbert_poly, line_bundle

O_LAMBDA = KClass(0, 1, F(-1, 2), F(1, 6))


def test_euler_charge_examples():
    p = StabParams.euler_at(0)
    assert tuple(charge(p, line_bundle(0))) == (F(11, 6), 1)
    assert tuple(charge(p, -line_bundle(-1))) == (F(-1, 3), 0)


@pytest.mark.parametrize("t, u", [(0, 0), (F(1, 2), F(1, 3)), (F(-7, 3), 2)])
@pytest.mark.parametrize("v", [KClass(0, 0, 3, -5), KClass(0, 0, 4, -7), KClass(0, 0, 1, 0)])
def test_tu_slope_of_one_dimensional_class(v, t, u):
    assert slope(StabParams.tu(t, u), v) == t + v.chi / v.m
    assert o.frac(o.tu_slope(list(v), o.q(t), o.q(u))) == t + v.chi / v.m


def test_slope_infinite_and_vanishing():
    p = StabParams.euler_at(0)
    s = slope(p, -line_bundle(-1))
    assert s.infinite and s > slope(p, line_bundle(0))
    with pytest.raises(ChargeVanishes, match="charge vanishes"):
        slope(p, KClass(0, 0, 0, 0))


def test_bogomolov_examples():
    for k in (-3, 0, 2):
        for beta in (F(-1, 2), 0, 5):
            assert bogomolov(line_bundle(k), beta) == 0
    assert bogomolov(KClass(0, 0, 3, -5), F(7, 3)) == 0
    assert bogomolov(O_LAMBDA, 0) == 1


def test_q_form_examples():
    assert q_form(line_bundle(0), F(1, 3)) == 0
    assert q_form(KClass(0, 0, 3, -5), F(2, 5)) == 36
    v = O_LAMBDA
    b = 2  # t = 0
    c0, c1, c2, c3 = v
    brute = (c1**2 - 2 * c0 * c2) * (F(1, 3) + b * b) + (6 * c0 * c3 - 2 * c1 * c2) * (-b) - 6 * c1 * c3 + 4 * c2**2
    assert q_form(v, 0) == brute and brute >= 0


def test_q_form_strict_reading_differs():
    v = KClass(1, 2, 1, 0)
    assert q_form(v, 0, strict=True) != q_form(v, 0, strict=False)


def test_generator_charges_at_zero():
    gens = heart_generator_charges(0)
    assert tuple(gens[0].charge) == (F(11, 6), 1)
    for g in gens[1:]:
        assert g.on_real_axis and g.charge.re < 0 and g.in_half_plane


@pytest.mark.parametrize("t", [F(9, 10), F(1, 2)])
def test_support_margin_positive(t):
    assert support_margin(t).margin > 0


def test_quiver_region_examples():
    assert in_quiver_region(F(-1, 2), F(7, 10))
    assert not in_quiver_region(0, F(1, 10))
    assert in_quiver_region(0.5, 0.1) and not in_quiver_region(0.5, 0.8)


def test_doubletilt_specialises_to_euler_symbolically():
    # both sides are linear in v and cubic in t: check on a basis with a symbolic t
    t = o.t
    for v in ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]):
        chi = o.hilbert(v)
        beta = -t - 2
        tw = [sum(o.q(v[j]) * (-beta) ** (i - j) / sp.factorial(i - j) for j in range(i + 1)) for i in range(4)]
        a2, s = sp.Rational(1, 3), sp.Rational(1, 3)
        re = -tw[3] + (s + sp.Rational(1, 6)) * a2 * tw[1]
        im = tw[2] - a2 / 2 * tw[0]
        assert sp.expand(re + chi) == 0
        assert sp.expand(im - sp.diff(chi, t)) == 0
    # and the implementation agrees at sample points
    for tt in (F(-3, 2), 0, F(1, 3), 2):
        p = StabParams.build("doubletilt", alpha="sqrt(1/3)", beta=-tt - 2, s=F(1, 3))
        for v in (KClass(1, -2, F(1, 2), 3), KClass(0, 0, 3, -5), O_LAMBDA):
            h = hilbert_poly(v)
            assert tuple(charge(p, v)) == (-h(tt), h.derivative()(tt))


def test_params_validation():
    with pytest.raises(InputError, match="family"):
        StabParams("nope")
    with pytest.raises(InputError, match="u"):
        StabParams.tu(0, -1)
    with pytest.raises(InputError):
        StabParams.build("doubletilt", alpha="0")
    assert StabParams.build("doubletilt", alpha="1/2").alpha_sq == F(1, 4)
