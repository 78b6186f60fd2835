"""Numerical walls in the (t, u)-plane.

The wall between a parent ``E`` and an actor ``A`` is the locus where their
tu-plane slopes agree. Clearing denominators gives ``u^2 = 2 P(t) / Q(t)`` with

    P = chi(A) chi'(E) - chi(E) chi'(A),   Q = chi''(A) chi'(E) - chi''(E) chi'(A).

For a one-dimensional parent ``(0, 0, m, ch3)`` this is
``P = m chi(A) - (m t + chi) chi'(A)`` and ``Q = m chi''(A)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from .errors import CoincidentWalls, DegenerateError, InputError
from .kclass import KClass, hilbert_poly
from .ratpoly import (
    Interval,
    RatPoly,
    RealRoot,
    fraction_str,
    real_roots,
    sqrt_real,
    to_fraction,
)

Kind = Literal["Type1", "Type2", "Type3", "Degenerate", "General"]


@dataclass(frozen=True)
class Endpoint:
    """One end of a wall component: a zero of ``P``, a pole of ``Q`` or infinity."""

    kind: Literal["zero", "pole", "inf"]
    at: RealRoot | None = None
    sign: int = 0  # direction of an infinite end

    def approx(self) -> float:
        if self.at is None:
            return math.copysign(math.inf, self.sign)
        return self.at.midpoint

    def to_json(self) -> dict[str, object]:
        out: dict[str, object] = {"kind": self.kind}
        if self.at is not None:
            out["t"] = self.at.to_json()
        else:
            out["t"] = "+inf" if self.sign > 0 else "-inf"
        return out


@dataclass(frozen=True)
class Component:
    """A maximal t-interval on which ``u^2(t) >= 0``."""

    lo: Endpoint
    hi: Endpoint

    @property
    def bounded(self) -> bool:
        return self.lo.kind == "zero" and self.hi.kind == "zero"

    def to_json(self) -> dict[str, object]:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json(), "bounded": self.bounded}


@dataclass(frozen=True)
class WallCurve:
    parent: KClass
    actor: KClass
    num: RatPoly
    den: RatPoly
    kind: Kind
    center_t: Fraction | None
    asymptote_t: Fraction | None
    components: tuple[Component, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    def u_squared(self, t) -> Fraction | float:
        """``2P/Q`` at ``t`` (exact for rationals)."""
        return 2 * self.num(t) / self.den(t)

    def residual(self, t, u):
        """``Q(t) u^2 - 2 P(t)``; zero exactly on the curve."""
        return self.den(t) * u * u - 2 * self.num(t)

    @property
    def radius_sq(self) -> Fraction | None:
        """Squared radius of a Type2 semicircle, else ``None``."""
        if self.kind != "Type2" or self.center_t is None:
            return None
        return self.u_squared(self.center_t)

    def to_json(self) -> dict[str, object]:
        return {
            "parent": self.parent.to_json(),
            "actor": self.actor.to_json(),
            "P": self.num.to_json(),
            "Q": self.den.to_json(),
            "kind": self.kind,
            "center_t": None if self.center_t is None else fraction_str(self.center_t),
            "asymptote_t": None if self.asymptote_t is None else fraction_str(self.asymptote_t),
            "components": [c.to_json() for c in self.components],
            "warnings": list(self.warnings),
        }


def wall_polys(parent: KClass, actor: KClass) -> tuple[RatPoly, RatPoly]:
    """``(P, Q)`` with the wall given by ``u^2 = 2P/Q``."""
    pe, pa = hilbert_poly(parent), hilbert_poly(actor)
    de, da = pe.derivative(), pa.derivative()
    num = pa * de - pe * da
    den = pa.derivative(2) * de - pe.derivative(2) * da
    return num, den


def _sample_between(a: RealRoot, b: RealRoot) -> Fraction:
    """A rational strictly between two distinct certified reals ``a < b``."""
    while a.hi >= b.lo:
        a, b = a.bisect(), b.bisect()
    return (a.hi + b.lo) / 2


def _components(num: RatPoly, den: RatPoly) -> tuple[Component, ...]:
    crit: list[tuple[RealRoot, str]] = []
    for r in real_roots(num):
        crit.append((r, "zero"))
    if den.degree >= 1:
        for r in real_roots(den):
            crit.append((r, "pole"))
    crit.sort(key=lambda c: c[0].midpoint)
    # merge coincident zero/pole pairs (common factors of P and Q)
    merged: list[tuple[RealRoot, str]] = []
    for r, kind in crit:
        if merged and merged[-1][0].compare(r) == 0:
            prev_r, prev_kind = merged[-1]
            merged[-1] = (prev_r, "pole" if "pole" in (prev_kind, kind) else "zero")
            continue
        merged.append((r, kind))

    def sign_at(x: Fraction) -> int:
        n, d = num(x), den(x)
        v = n * d
        return (v > 0) - (v < 0)

    # sample points in each open cell
    samples: list[Fraction] = []
    if not merged:
        samples.append(Fraction(0))
    else:
        first = merged[0][0]
        samples.append(first.refine(Fraction(1, 2)).lo - 1)
        for (a, _), (b, _) in zip(merged, merged[1:]):
            samples.append(_sample_between(a, b))
        samples.append(merged[-1][0].refine(Fraction(1, 2)).hi + 1)
    signs = [sign_at(x) for x in samples]

    comps: list[Component] = []
    start: Endpoint | None = None
    for i, s in enumerate(signs):
        left = Endpoint("inf", None, -1) if i == 0 else Endpoint(merged[i - 1][1], merged[i - 1][0])
        right = Endpoint("inf", None, 1) if i == len(signs) - 1 else Endpoint(merged[i][1], merged[i][0])
        if s > 0:
            if start is None:
                start = left
            # a zero of P between two positive cells keeps the curve connected
            if right.kind == "zero" and i + 1 < len(signs) and signs[i + 1] > 0:
                continue
            comps.append(Component(start, right))
            start = None
    return tuple(comps)


def _classify(parent: KClass, actor: KClass) -> tuple[Kind, Fraction | None, Fraction | None, tuple[str, ...]]:
    if not parent.is_one_dimensional():
        return "General", None, None, ()
    center = -parent.chi / parent.m
    if actor.ch0 == 0 and actor.ch1 == 0:
        return "Degenerate", center, None, ()
    if actor.ch0 == 0:
        return "Type2", center, None, ()
    asym = -actor.ch1 / actor.ch0 - 2
    if asym < center:
        return "Type1", center, asym, ()
    if asym > center:
        return "Type3", center, asym, ()
    msg = f"asymptote coincides with center t={fraction_str(center)}; Type1/Type3 undecided"
    warnings.warn(msg, stacklevel=3)
    return "Degenerate", center, asym, (msg,)


def wall_between(v: KClass, a: KClass) -> WallCurve:
    """Numerical wall of actor ``a`` against a one-dimensional parent ``v``."""
    if not v.is_one_dimensional():
        raise InputError("parent: must be one-dimensional (ch0 = ch1 = 0, ch2 > 0)")
    return _build(v, a)


def general_wall(e: KClass, a: KClass) -> WallCurve:
    """Same construction for an arbitrary parent; ``kind`` is ``"General"`` unless ``e`` is one-dimensional."""
    return _build(e, a)


def _build(e: KClass, a: KClass) -> WallCurve:
    num, den = wall_polys(e, a)
    kind, center, asym, notes = _classify(e, a)
    comps: tuple[Component, ...] = ()
    if not num.is_zero() and not den.is_zero():
        comps = _components(num, den)
    return WallCurve(e, a, num, den, kind, center, asym, comps, notes)


def wall_at_u0(v: KClass, a: KClass, window: Interval | None = None, tol: object = None) -> list[RealRoot]:
    """Zeros of ``P`` in ``window``: the wall points on the line ``u = 0``."""
    num, _ = wall_polys(v, a)
    if num.is_zero():
        raise DegenerateError("degenerate: proportional slopes")
    return real_roots(num, window) if tol is None else real_roots(num, window, tol)


def interval_eval(p: RatPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Rigorous enclosure of ``p`` over ``[lo, hi]`` by interval Horner."""
    a, b = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def _sqrt_bounds(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    scale = 10**12
    lo = max(lo, Fraction(0))
    s_lo = Fraction(math.isqrt(math.floor(lo * scale * scale)), scale)
    s_hi = Fraction(math.isqrt(math.ceil(hi * scale * scale)) + 1, scale)
    return s_lo, s_hi


@dataclass(frozen=True)
class WallPoint:
    """A certified point of the (t, u)-plane: ``t`` exact, ``u`` enclosed in a box."""

    t: RealRoot
    u_sq_box: tuple[Fraction, Fraction]
    box: tuple[Fraction, Fraction, Fraction, Fraction]  # t_lo, t_hi, u_lo, u_hi

    @property
    def u(self) -> float:
        lo, hi = self.u_sq_box
        return math.sqrt(max(float((lo + hi) / 2), 0.0))

    def to_json(self) -> dict[str, object]:
        return {
            "t": self.t.to_json(),
            "u_approx": round(self.u, 12),
            "box": [fraction_str(x) for x in self.box],
        }


def _point_on(w: WallCurve, t: RealRoot, tol: Fraction) -> WallPoint:
    t = t.refine(tol)
    while True:
        n_lo, n_hi = interval_eval(w.num, t.lo, t.hi)
        d_lo, d_hi = interval_eval(w.den, t.lo, t.hi)
        if d_lo > 0 or d_hi < 0:
            cands = [2 * n / d for n in (n_lo, n_hi) for d in (d_lo, d_hi)]
            lo, hi = min(cands), max(cands)
            if hi - lo <= tol or t.exact is not None:
                break
        t = t.bisect()
    u_lo, u_hi = _sqrt_bounds(lo, hi)
    return WallPoint(t, (lo, hi), (t.lo, t.hi, u_lo, u_hi))


def intersect_walls(w1: WallCurve, w2: WallCurve, tol: object = Fraction(1, 10**9)) -> list[WallPoint]:
    """Points with ``u > 0`` lying on both walls."""
    if w1.parent != w2.parent:
        raise InputError("walls: parents differ")
    tol = to_fraction(tol, "tol")
    resultant = w1.num * w2.den - w2.num * w1.den
    if resultant.is_zero():
        raise CoincidentWalls("coincident walls")
    out = []
    for r in real_roots(resultant, None, tol):
        if r.sign_of(w1.den) == 0 or r.sign_of(w2.den) == 0:
            continue
        if r.sign_of(w1.num * w1.den) <= 0:
            continue
        out.append(_point_on(w1, r, tol))
    return out


def passes_through(w: WallCurve, point: WallPoint, via: WallCurve) -> bool:
    """Exact test that ``w`` contains ``point``, a point already certified on ``via``."""
    cross = w.num * via.den - via.num * w.den
    return cross.is_zero() or point.t.sign_of(cross) == 0


def residual_enclosure(w: WallCurve, box: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Enclosure of ``Q(t) u^2 - 2P(t)`` over a (t, u) box."""
    t_lo, t_hi, u_lo, u_hi = box
    q_lo, q_hi = interval_eval(w.den, t_lo, t_hi)
    p_lo, p_hi = interval_eval(w.num, t_lo, t_hi)
    usq = (u_lo * u_lo, u_hi * u_hi)
    prods = [q * s for q in (q_lo, q_hi) for s in usq]
    return min(prods) - 2 * p_hi, max(prods) - 2 * p_lo


@dataclass(frozen=True)
class SearchRegion:
    center: Fraction
    lo: RealRoot
    hi: RealRoot

    def contains(self, x: RealRoot | Fraction) -> bool:
        if not isinstance(x, RealRoot):
            x = RealRoot.rational(x)
        return x.compare(self.lo) >= 0 and x.compare(self.hi) <= 0

    def to_json(self) -> dict[str, object]:
        return {"center": fraction_str(self.center), "lo": self.lo.to_json(), "hi": self.hi.to_json()}


def wall_search_region(v: KClass) -> SearchRegion:
    """``|t - chi/m| <= m + 2 sqrt(2m)`` with certified endpoints."""
    if not v.is_one_dimensional():
        raise InputError("class: must be one-dimensional")
    m, c = v.m, v.chi / v.m
    # right end is the larger root of (x - c - m)^2 - 8m, left the smaller of (x - c + m)^2 - 8m
    s = sqrt_real(8 * m)
    if s.exact is not None:
        return SearchRegion(c, RealRoot.rational(c - m - s.exact), RealRoot.rational(c + m + s.exact))
    x = RatPoly.x()
    hi = real_roots((x - c - m) ** 2 - 8 * m)[-1]
    lo = real_roots((x - c + m) ** 2 - 8 * m)[0]
    return SearchRegion(c, lo, hi)


@dataclass(frozen=True)
class CriticalU:
    u_sq: Fraction
    u: RealRoot | None  # None when u_sq < 0: no real critical point
    printed: Fraction  # the closed form as usually stated, equal to u_sq / 2


def critical_u(v: KClass, h: KClass, t: object) -> CriticalU:
    """Solve ``lambda_{t,u}(h) = t + chi/m`` for ``u^2``."""
    t = to_fraction(t, "t")
    p = hilbert_poly(h)
    c0, c1, c2 = p(t), p.derivative()(t), p.derivative(2)(t)
    if c2 == 0:
        raise DegenerateError("no finite critical u")
    target = t + v.chi / v.m
    printed = (target * c1 - c0) / (-c2)
    u_sq = 2 * printed
    return CriticalU(u_sq, sqrt_real(u_sq) if u_sq >= 0 else None, printed)


def default_b2(t: object, v: KClass) -> Fraction:
    """``1/(b m)`` for ``t = a/b`` in lowest terms."""
    t = to_fraction(t, "t")
    return Fraction(1, t.denominator) / v.m


def gieseker_u_bound(B1: object, B2: object, t: object, v: KClass) -> Fraction:
    B1, B2, t = to_fraction(B1, "B1"), to_fraction(B2, "B2"), to_fraction(t, "t")
    if B2 <= 0:
        raise InputError("B2: must be positive")
    return 2 / B2 * (B1 - t - v.chi / v.m)


@dataclass(frozen=True)
class ExistenceInterval:
    lo: RealRoot | None
    hi: RealRoot | None
    reason: str = ""

    @property
    def empty(self) -> bool:
        return self.lo is None

    @property
    def width(self) -> float:
        return 0.0 if self.empty else self.hi.midpoint - self.lo.midpoint

    def to_json(self) -> dict[str, object]:
        if self.empty:
            return {"empty": True, "reason": self.reason}
        return {"empty": False, "lo": self.lo.to_json(), "hi": self.hi.to_json()}


def complex_existence_interval(R: int, C: int, D: object, m: object) -> ExistenceInterval:
    """Admissible ``t`` for a complex with ``chi'' = C + (t+2) R``.

    ``f2 = R x^2/2 + C x + D - R/6`` in ``x = t + 2`` is non-decreasing where
    ``chi'' >= 0``, so the admissible set is one closed interval.
    """
    R, C = to_fraction(R, "R"), to_fraction(C, "C")
    D, m = to_fraction(D, "D"), to_fraction(m, "m")
    if m <= 0:
        raise InputError("m: must be positive")
    if R == 0 and C <= 0:
        raise InputError("C: must be positive when R = 0")
    x = RatPoly.x()
    f2 = RatPoly((D - R / 6, C, R / 2))
    f1 = f2 - m

    def to_t(r: RealRoot) -> RealRoot:
        return RealRoot(r.poly.compose(x + 2).monic(), r.lo - 2, r.hi - 2, r.multiplicity)

    if R == 0:
        return ExistenceInterval(RealRoot.rational(-D / C - 2), RealRoot.rational((m - D) / C - 2))
    edge = -C / R  # chi'' = 0 here; admissible side is x >= edge for R > 0
    side = Interval(edge, None) if R > 0 else Interval(None, edge)
    z2 = real_roots(f2, side)
    z1 = real_roots(f1, side)
    e = RealRoot.rational(edge)
    if R > 0:
        if f2(edge) >= 0:
            lo = e
        else:
            lo = z2[-1]
        if f1(edge) > 0:
            return ExistenceInterval(None, None, "no admissible t")
        hi = z1[-1]
    else:
        if f2(edge) < 0:
            return ExistenceInterval(None, None, "no admissible t")
        lo = z2[0]
        hi = e if f1(edge) <= 0 else z1[0]
    return ExistenceInterval(to_t(lo), to_t(hi))


def sample_component(w: WallCurve, comp: Component, t_min: float, t_max: float, n: int = 512) -> list[tuple[float, float]]:
    """``n`` points ``(t, u)`` with ``u >= 0`` along a component clipped to ``[t_min, t_max]``."""
    lo = max(comp.lo.approx(), t_min)
    hi = min(comp.hi.approx(), t_max)
    if not lo < hi:
        return []
    pts = []
    for i in range(n):
        t = lo + (hi - lo) * i / (n - 1)
        d = w.den(t)
        if d == 0:
            continue
        usq = 2 * w.num(t) / d
        pts.append((t, math.sqrt(usq) if usq > 0 else 0.0))
    return pts


def walls_for(v: KClass, actors: Iterable[KClass]) -> list[WallCurve]:
    return [wall_between(v, a) for a in actors]
