from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import oracles as o
from stabwall.errors import InputError
from stabwall.kclass import (
    KClass,
    conj,
    derivative,
    dual_class,
    euler_pairing,
    hilbert_poly,
    line_bundle,
    twist,
)
from stabwall.ratpoly import RatPoly

I_C1 = KClass(-1, 0, 3, -5)
O = line_bundle(0)
O_LAMBDA = KClass(0, 1, F(-1, 2), F(1, 6))
F1 = KClass(0, -1, F(7, 2), F(-31, 6))


@pytest.mark.parametrize(
    "k, expected",
    [(0, (1, 0, 0, 0)), (-1, (1, -1, F(1, 2), F(-1, 6))), (-4, (1, -4, 8, F(-32, 3)))],
)
def test_line_bundle(k, expected):
    assert tuple(line_bundle(k)) == expected
    assert list(line_bundle(k)) == o.line_bundle(k)


def test_twist_examples():
    assert twist(KClass(0, 0, 3, -7), 1) == KClass(0, 0, 3, -4)
    assert twist(line_bundle(2), -3) == line_bundle(-1)


@pytest.mark.parametrize(
    "v, poly",
    [
        (KClass(1, 0, 0, 0), [1, F(11, 6), 1, F(1, 6)]),
        (KClass(0, 0, 3, -5), [1, 3]),
        (KClass(0, 2, -2, F(4, 3)), [1, 2, 1]),
    ],
)
def test_hilbert_examples(v, poly):
    assert hilbert_poly(v) == RatPoly(poly)
    assert list(hilbert_poly(v).coeffs) == o.coeffs(o.hilbert(list(v)))


def test_structure_sheaf_roots():
    p = hilbert_poly(O)
    assert [p(k) for k in (-1, -2, -3)] == [0, 0, 0]


def test_derivative():
    p = hilbert_poly(O)
    assert derivative(RatPoly([1, 3]), 1) == RatPoly([3])
    assert derivative(p, 2) == RatPoly([2, 1])
    assert derivative(p, 4).is_zero()
    with pytest.raises(InputError):
        derivative(p, -1)


@pytest.mark.parametrize(
    "a, b, chi",
    [
        (O, O, 1),
        (I_C1, O, 10),
        (I_C1, I_C1, -11),
        (KClass(-1, 0, 3, -5), O, 10),
        (F1, O_LAMBDA, 5),
        (O_LAMBDA, F1, -1),
        (O_LAMBDA, O_LAMBDA, -2),
        (F1, F1, -2),
    ],
)
def test_euler_pairing_table(a, b, chi):
    assert euler_pairing(a, b) == chi
    assert o.frac(o.euler(list(a), list(b))) == chi


def test_dual_class_examples():
    assert dual_class(O) == line_bundle(-4)
    assert dual_class(KClass(0, 0, 3, -5)) == KClass(0, 0, 3, -7)
    assert twist(dual_class(KClass(0, 0, 3, -5)), 1) == KClass(0, 0, 3, -4)
    assert conj(conj(F1)) == F1


def test_parse_and_json():
    v = KClass.parse("0, -1, 7/2, -31/6")
    assert v == F1 and KClass.from_json(v.to_json()) == v
    with pytest.raises(InputError, match="class"):
        KClass.parse("1,2,3")
    with pytest.raises(InputError):
        KClass.parse("1,2,3,x")


def test_lattice_versus_denominators():
    assert O_LAMBDA.is_lattice() and O_LAMBDA.satisfies_denominators()
    odd = KClass(0, 0, 1, F(1, 6))  # denominators fine, but chi_t(0) = 13/6
    assert odd.satisfies_denominators() and not odd.is_lattice()


def test_one_dimensional_invariants():
    v = KClass(0, 0, 3, -5)
    assert v.is_one_dimensional() and v.m == 3 and v.chi == 1
    assert not O.is_one_dimensional()


ints = st.integers(-5, 5)


@settings(max_examples=100, derandomize=True, deadline=None)
@given(ints, ints, ints, ints, ints)
def test_euler_pairing_matches_oracle(a0, a1, a2, a3, k):
    a = line_bundle(k) * a0 + line_bundle(k - 1) * a1
    b = line_bundle(-k) * a2 - line_bundle(1) * a3
    assert euler_pairing(a, b) == o.frac(o.euler(list(a), list(b)))
