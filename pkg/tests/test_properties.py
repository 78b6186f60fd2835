"""Randomised invariants: exact JSON round trips and algebraic identities."""

import json

from hypothesis import given, settings, strategies as st

from stabwall.kclass import KClass, dual_class, hilbert_poly, line_bundle, twist
from stabwall.kronecker import MPoly
from stabwall.quiverheart import DimVector, class_of, dimvec_of
from stabwall.ratpoly import RatPoly

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)
classes = st.builds(KClass, rats, rats, rats, rats)
lattice = st.lists(st.integers(-5, 5), min_size=4, max_size=4).map(
    lambda c: sum((line_bundle(-i) * k for i, k in enumerate(c)), KClass(0, 0, 0, 0))
)
fast = settings(max_examples=100, derandomize=True, deadline=None)


@fast
@given(classes)
def test_kclass_json_round_trip(v):
    assert KClass.from_json(json.loads(json.dumps(v.to_json()))) == v


@fast
@given(st.lists(rats, max_size=6))
def test_ratpoly_json_round_trip(cs):
    p = RatPoly(cs)
    assert RatPoly.from_json(json.loads(json.dumps(p.to_json()))) == p


@fast
@given(st.dictionaries(st.tuples(*[st.integers(0, 3)] * 4), rats, max_size=5))
def test_mpoly_json_round_trip(terms):
    p = MPoly()
    for e, c in terms.items():
        mono = MPoly.const(c)
        for k, d in enumerate(e):
            mono = mono * MPoly.var(k) ** d
        p = p + mono
    assert MPoly.from_json(json.loads(json.dumps(p.to_json()))) == p


@fast
@given(classes, st.integers(-4, 4))
def test_twist_shifts_hilbert_polynomial(v, k):
    assert hilbert_poly(twist(v, k)) == hilbert_poly(v).compose(RatPoly([k, 1]))


@fast
@given(classes, rats, rats)
def test_twist_is_additive(v, a, b):
    assert twist(twist(v, a), b) == twist(v, a + b)


@fast
@given(classes)
def test_dual_is_an_involution_up_to_sign(v):
    assert dual_class(dual_class(v)) == v


@fast
@given(st.tuples(*[st.integers(0, 9)] * 4), st.integers(-2, 3))
def test_dimvec_inverts_class_of(a, n):
    d = DimVector(n, a)
    assert dimvec_of(class_of(d), n) == d


@fast
@given(lattice)
def test_lattice_classes_have_integer_hilbert_values(v):
    p = hilbert_poly(v)
    assert all(p(k).denominator == 1 for k in range(-10, 11))


@fast
@given(st.tuples(*[st.integers(0, 9)] * 4), st.tuples(*[st.integers(0, 9)] * 4))
def test_class_of_is_additive(a, b):
    da, db = DimVector(1, a), DimVector(1, b)
    assert class_of(da + db) == class_of(da) + class_of(db)
