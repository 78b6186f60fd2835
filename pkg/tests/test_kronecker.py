from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from stabwall.errors import InputError
from stabwall.kronecker import (
    FormMatrix,
    KroneckerRep,
    MPoly,
    check_complex,
    classify_stratum,
    compose,
    expected_dim,
    koszul_chain,
    load_fixtures,
    maximal_minors,
    mgcd,
    resolution_class,
    restrict_to_plane,
    theta_stable_23,
)

X = sp.symbols("x0:4")
FIX = load_fixtures()


def to_sympy(p: MPoly) -> sp.Expr:
    return sp.sympify(str(p).replace("^", "**"), locals={f"x{i}": X[i] for i in range(4)})


def mat_sympy(m: FormMatrix) -> sp.Matrix:
    return sp.Matrix(m.rows, m.cols, lambda i, j: to_sympy(m.entries[i][j]))


def test_mpoly_parse_print_round_trip():
    p = MPoly.parse("x0*x2 - x1^2 + 3/2*x3^2")
    assert MPoly.parse(str(p)) == p
    assert MPoly.from_json(p.to_json()) == p
    assert p.is_homogeneous(2) and p.degree == 2
    with pytest.raises(InputError):
        MPoly.parse("x4 + 1")


def test_mgcd_matches_sympy():
    f = MPoly.parse("x0 + x1")
    g1 = MPoly.parse("x0*x2 - x1*x3")
    g2 = MPoly.parse("x2^2 + x3*x0")
    a, b = f * g1, f * g2 * MPoly.parse("x1 - x3")
    g = mgcd(a, b)
    assert sp.simplify(to_sympy(g) / sp.gcd(to_sympy(a), to_sympy(b))).is_constant()
    assert mgcd(g1, g2).degree == 0


polys = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)),
                 min_size=1, max_size=4)


def build(terms):
    p = MPoly()
    for a, b, c, k in terms:
        p = p + MPoly.var(0) ** a * MPoly.var(1) ** b * MPoly.var(2) ** c * MPoly.const(k)
    return p


@settings(max_examples=100, derandomize=True, deadline=None)
@given(polys, polys, polys)
def test_mgcd_property(a, b, c):
    pa, pb, pc = build(a), build(b), build(c)
    if pc.is_zero():
        return
    f, g = pa * pc, pb * pc
    got = mgcd(f, g)
    want = sp.gcd(to_sympy(f), to_sympy(g))
    if want == 0:
        assert got.is_zero()
        return
    assert sp.Poly(to_sympy(got), *X).total_degree() == sp.Poly(want, *X).total_degree()
    assert sp.rem(to_sympy(f), to_sympy(got), *X) == 0 if not got.is_zero() else True


def test_compose_matches_sympy_and_checks_shapes():
    s, t = FIX["appendix"]["maps"][2], FIX["appendix"]["augmentation"]
    assert mat_sympy(compose(s, t)).expand() == (mat_sympy(s) * mat_sympy(t)).expand()
    with pytest.raises(InputError):
        compose(t, s)


def test_canonical_classification():
    mats = FIX["canonical"]
    assert len(mats) == 9
    for i, m in enumerate(mats, 1):
        st_ = classify_stratum(m)
        assert st_.stability.verdict == "stable"
        assert st_.kind == ("torsion" if i == 9 else "curve")
    assert str(classify_stratum(mats[8]).plane) == "x1"


def test_twisted_cubic_minors():
    minors = {str(p) for p in maximal_minors(FIX["canonical"][0])}
    assert minors == {"x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"}
    g = sp.gcd(sp.gcd(*[to_sympy(p) for p in maximal_minors(FIX["canonical"][0])][:2]),
               to_sympy(maximal_minors(FIX["canonical"][0])[2]))
    assert g == 1


def test_zero_row_is_unstable():
    m = FormMatrix.of([["x0", "x1", "x2"], [0, 0, 0]], 1)
    v = theta_stable_23(KroneckerRep.from_matrix(m))
    assert v.verdict == "unstable" and v.sub_dims == (1, 0) and v.theta == -3
    assert v.w == (0, 1)
    assert classify_stratum(m).kind == "unstable"


def test_rank_drop_is_unstable():
    # every w has a 2-dimensional image, but all images miss the last coordinate
    m = FormMatrix.of([["x0", "x1", 0], ["x2", "x3", 0]], 1)
    v = theta_stable_23(KroneckerRep.from_matrix(m))
    assert v.verdict == "unstable" and v.sub_dims == (2, 2) and v.theta == -2


def test_kronecker_rep_round_trip():
    m = FIX["canonical"][3]
    assert KroneckerRep.from_matrix(m).to_matrix() == m


def test_expected_dim():
    assert expected_dim(4, (2, 3)) == 12
    assert expected_dim(1, (1, 1)) == 0


def test_koszul_complex():
    chain = koszul_chain()
    check_complex(chain)
    aug = FormMatrix.column(["x0", "x1", "x2", "x3"])
    assert compose(chain[-1], aug).is_zero()
    for f, g in zip(chain, chain[1:]):
        assert (mat_sympy(f) * mat_sympy(g)).expand() == sp.zeros(f.rows, g.cols)
    d, v = resolution_class(chain, [-4, -3, -2, -1])
    assert d.a == (1, 4, 6, 4) and tuple(v) == (1, 0, 0, 0)


@pytest.mark.parametrize(
    "name, dims, klass",
    [
        ("appendix", (2, 8, 11, 5), (0, 1, F(1, 2), F(-5, 6))),
        ("o_q", (1, 4, 7, 4), (0, 2, -2, F(4, 3))),
        ("f1", (0, 2, 3, 1), (0, -1, F(7, 2), F(-31, 6))),
        ("point", (1, 3, 3, 1), (0, 0, 0, 1)),
    ],
)
def test_resolution_classes(name, dims, klass):
    fx = FIX[name]
    for f, g in zip(fx["maps"], fx["maps"][1:]):
        assert (mat_sympy(f) * mat_sympy(g)).expand() == sp.zeros(f.rows, g.cols)
    d, v = resolution_class(fx["maps"], fx["twists"])
    assert d.a == dims and tuple(v) == klass


def test_appendix_augmentation_vanishes_on_the_plane():
    fx = FIX["appendix"]
    st_ = compose(fx["maps"][-1], fx["augmentation"])
    assert not st_.is_zero()
    prod = mat_sympy(fx["maps"][-1]) * mat_sympy(fx["augmentation"])
    assert all(sp.expand(e).subs(X[0], 0) == 0 for e in prod)
    assert restrict_to_plane(st_, MPoly.var(0)).is_zero()


def test_not_a_complex():
    bad = [FormMatrix.of([["x0"]], 1), FormMatrix.of([["x1"]], 1)]
    with pytest.raises(InputError, match="not a complex"):
        check_complex(bad)
    with pytest.raises(InputError, match="twists"):
        resolution_class(koszul_chain(), [-4, -3, -2, 0])


def test_form_matrix_json_round_trip():
    m = FIX["canonical"][0]
    assert FormMatrix.from_json(m.to_json()) == m
