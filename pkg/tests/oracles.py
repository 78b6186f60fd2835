"""Independent reference computations built on sympy, used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy as sp

t, s, u = sp.symbols("t s u", real=True)
H = sp.Symbol("H")
TODD = 1 + 2 * H + sp.Rational(11, 6) * H**2 + H**3


def q(x) -> sp.Rational:
    x = Fraction(x)
    return sp.Rational(x.numerator, x.denominator)


def frac(x) -> Fraction:
    r = sp.Rational(x)
    return Fraction(int(r.p), int(r.q))


def _trunc(expr) -> sp.Expr:
    p = sp.Poly(sp.expand(expr), H)
    return sum(p.coeff_monomial(H**k) * H**k for k in range(4))


def ch_series(v) -> sp.Expr:
    return sum(q(c) * H**i for i, c in enumerate(v))


def hilbert(v, var=t) -> sp.Expr:
    """chi(O(var) (x) v) by integrating ch * exp(var H) * Td over P^3."""
    expo = sum(var**k * H**k / sp.factorial(k) for k in range(4))
    return sp.expand(sp.Poly(sp.expand(_trunc(ch_series(v) * expo) * TODD), H).coeff_monomial(H**3))


def euler(a, b) -> sp.Rational:
    dual = [q(c) * (-1) ** i for i, c in enumerate(a)]
    prod = _trunc(sum(c * H**i for i, c in enumerate(dual)) * ch_series(b))
    return sp.Poly(sp.expand(prod * TODD), H).coeff_monomial(H**3)


def coeffs(expr, var=t) -> list[Fraction]:
    p = sp.Poly(sp.expand(expr), var)
    return [frac(p.coeff_monomial(var**k)) for k in range(p.degree() + 1)] if not p.is_zero else []


def line_bundle(k):
    return [Fraction(k) ** i / Fraction(sp.factorial(i)) for i in range(4)]


def tu_slope(v, tt, uu) -> sp.Expr:
    chi = hilbert(v)
    re = -chi + uu**2 * sp.diff(chi, t, 2) / 2
    im = sp.diff(chi, t)
    return (-re / im).subs(t, tt)


def koszul_closed_dimvecs(drop=frozenset()) -> set[tuple[int, ...]]:
    """All dimension vectors of coordinate subrepresentations of the Koszul quotient.

    Brute force over every subset of basis vectors; ``drop`` removes a kernel
    given as a set of index sets. Arrows send ``e_S`` to ``e_{S - i}``.
    """
    basis = [frozenset(c) for k in range(1, 5) for c in combinations(range(4), k)]
    basis = [b for b in basis if b not in drop]
    present = set(basis)
    out = set()
    for mask in range(1 << len(basis)):
        chosen = {basis[i] for i in range(len(basis)) if mask >> i & 1}
        if all(S - {i} in chosen for S in chosen if len(S) > 1 for i in S if S - {i} in present):
            a = [0, 0, 0, 0]
            for S in chosen:
                a[4 - len(S)] += 1
            out.add(tuple(a))
    return out


def koszul_kernels(target) -> list[frozenset]:
    """Every coordinate subrepresentation of the Koszul representation with dimension vector ``[1464] - target``."""
    basis = [frozenset(c) for k in range(1, 5) for c in combinations(range(4), k)]
    want = tuple(a - b for a, b in zip((1, 4, 6, 4), target))
    out = []
    for mask in range(1 << len(basis)):
        chosen = frozenset(basis[i] for i in range(len(basis)) if mask >> i & 1)
        a = [0, 0, 0, 0]
        for S in chosen:
            a[4 - len(S)] += 1
        if tuple(a) != want:
            continue
        if all(S - {i} in chosen for S in chosen if len(S) > 1 for i in S):
            out.append(chosen)
    return out


def grid_destabilizers(subdims, parent, n_grid=2000) -> set[tuple[int, ...]]:
    """Subvectors whose Euler slope beats the parent's somewhere on an interior grid of (0,1).

    Float evaluation on a grid; a vanishing ``chi`` of the sub counts as slope +infinity.
    """
    from stabwall.quiverheart import DimVector, class_of

    def fns(d):
        p = hilbert(list(class_of(DimVector(1, tuple(d)))))
        return sp.lambdify(t, p, "math"), sp.lambdify(t, sp.diff(p, t), "math")

    f_p, df_p = fns(parent)
    bad = set()
    for d in subdims:
        if not any(d) or tuple(d) == tuple(parent):
            continue
        f, df = fns(d)
        for k in range(1, n_grid):
            x = k / n_grid
            c, cp = f(x), df(x)
            if abs(c) < 1e-12:
                if cp < 0:
                    bad.add(tuple(d))
                    break
                continue
            if -df(x) / c > -df_p(x) / f_p(x) + 1e-9:
                bad.add(tuple(d))
                break
    return bad
