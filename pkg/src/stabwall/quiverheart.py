"""Dimension vectors in the Euler hearts ``A_n`` and slope scans over them.

``A_n`` is generated by ``O(-n-3)[3], ..., O(-n)``; a dimension vector is
written ``[a3, a2, a1, a0]`` with ``a_i`` counting copies of ``O(-n-i)[i]``.
The Euler slope at ``t`` is ``-chi'_t / chi_t``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from . import kernels
from .errors import InputError, NotRepresentable
from .kclass import KClass, _line_bundle_coordinates, hilbert_poly, line_bundle
from .ratpoly import Interval, RatPoly, RealRoot, fraction_str, real_roots
from .wallmap import _sample_between

KOSZUL = (1, 4, 6, 4)


@dataclass(frozen=True, order=False)
class DimVector:
    n: int
    a: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        a = tuple(self.a)
        if len(a) != 4 or not all(isinstance(x, int) for x in a):
            raise InputError(f"dimvec: expected four integers, got {self.a!r}")
        if min(a) < 0:
            raise InputError(f"dimvec: entries must be non-negative, got {list(a)}")
        if not isinstance(self.n, int):
            raise InputError("heart: index must be an integer")
        object.__setattr__(self, "a", a)

    @classmethod
    def parse(cls, text: str, n: int = 1) -> DimVector:
        """``"1,6,9,4"``; a bare four-digit string such as ``"1694"`` also works."""
        s = text.strip().strip("[]").replace(" ", "")
        parts = s.split(",") if "," in s else list(s)
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            raise InputError(f"dimvec: cannot parse {text!r}") from None
        if len(vals) != 4:
            raise InputError(f"dimvec: expected four entries in {text!r}")
        return cls(n, tuple(vals))

    def __iter__(self):
        yield from self.a

    def __getitem__(self, i: int) -> int:
        return self.a[i]

    def __add__(self, other: DimVector) -> DimVector:
        self._same_heart(other)
        return DimVector(self.n, tuple(x + y for x, y in zip(self.a, other.a)))

    def __sub__(self, other: DimVector) -> DimVector:
        self._same_heart(other)
        return DimVector(self.n, tuple(x - y for x, y in zip(self.a, other.a)))

    def _same_heart(self, other: DimVector) -> None:
        if self.n != other.n:
            raise InputError(f"dimvec: hearts differ (A_{self.n} vs A_{other.n})")

    def fits_in(self, other: DimVector) -> bool:
        """Componentwise ``self <= other``."""
        return self.n == other.n and all(x <= y for x, y in zip(self.a, other.a))

    @property
    def is_zero(self) -> bool:
        return not any(self.a)

    def to_json(self) -> dict[str, object]:
        return {"n": self.n, "a": list(self.a)}

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.a)) + "]"


def class_of(d: DimVector) -> KClass:
    total = KClass(0, 0, 0, 0)
    for i in range(4):
        coeff = d.a[3 - i] * (-1) ** i
        if coeff:
            total = total + line_bundle(-d.n - i) * coeff
    return total


def dimvec_of(v: KClass, n: int) -> DimVector:
    coords = _line_bundle_coordinates(v, n)
    a = [c * (-1) ** i for i, c in enumerate(coords)]
    if any(x.denominator != 1 or x < 0 for x in a):
        raise NotRepresentable(f"not representable in A_{n}")
    return DimVector(n, tuple(int(x) for x in reversed(a)))


def reverse(d: DimVector) -> DimVector:
    """Dimension vector of the derived dual shifted by one, in ``A_{1-n}``."""
    return DimVector(1 - d.n, tuple(reversed(d.a)))


@functools.lru_cache(maxsize=4096)
def euler_poly(d: DimVector) -> RatPoly:
    return hilbert_poly(class_of(d))


def slope_poly(sub: DimVector, parent: DimVector) -> RatPoly:
    """``chi'(sub) chi(parent) - chi(sub) chi'(parent)``; it vanishes where slopes agree."""
    ps, pp = euler_poly(sub), euler_poly(parent)
    return ps.derivative() * pp - ps * pp.derivative()


def _as_root(t) -> RealRoot:
    return t if isinstance(t, RealRoot) else RealRoot.rational(t)


def in_heart_at(p: RatPoly, t) -> bool:
    """Charge ``(chi', chi)`` in the half-plane: ``chi > 0``, or ``chi = 0`` and ``chi' < 0``."""
    r = _as_root(t)
    s = r.sign_of(p)
    if s:
        return s > 0
    return r.sign_of(p.derivative()) < 0


def compare_slopes(p1: RatPoly, p2: RatPoly, t) -> int:
    """Sign of ``lambda_t(1) - lambda_t(2)`` for charges in the heart; ``+inf`` is the top slope."""
    r = _as_root(t)
    s1, s2 = r.sign_of(p1), r.sign_of(p2)
    if s1 == 0 and s2 == 0:
        return 0
    if s1 == 0:
        return 1
    if s2 == 0:
        return -1
    w = r.sign_of(p1.derivative() * p2 - p1 * p2.derivative())
    return -w * s1 * s2


# --- monomial representations -------------------------------------------------


@dataclass(frozen=True)
class MonomialRep:
    """A representation in which every arrow sends a basis vector to a basis vector or zero.

    ``level[i]`` is the slot (0 for ``a3`` ... 3 for ``a0``) of vector ``i``;
    ``succ[i]`` is the bitmask of arrow targets. Successors always have
    smaller indices, which is what the closed-subset kernel expects.
    """

    n: int
    level: tuple[int, ...]
    succ: tuple[int, ...]
    labels: tuple[str, ...]

    @classmethod
    def koszul(cls, n: int = 1) -> MonomialRep:
        """The Koszul complex of ``O(1-n)``: basis ``e_S`` for nonempty ``S`` in ``{0,1,2,3}``."""
        sets = [frozenset(c) for k in range(1, 5) for c in combinations(range(4), k)]
        index = {s: i for i, s in enumerate(sets)}
        succ = []
        for s in sets:
            mask = 0
            if len(s) > 1:
                for i in s:
                    mask |= 1 << index[s - {i}]
            succ.append(mask)
        labels = tuple("e" + "".join(map(str, sorted(s))) for s in sets)
        return cls(n, tuple(4 - len(s) for s in sets), tuple(succ), labels)

    @property
    def size(self) -> int:
        return len(self.level)

    def dim_of(self, mask: int) -> DimVector:
        a = [0, 0, 0, 0]
        for i, lv in enumerate(self.level):
            if mask >> i & 1:
                a[lv] += 1
        return DimVector(self.n, tuple(a))

    @property
    def dimvec(self) -> DimVector:
        return self.dim_of((1 << self.size) - 1)

    def closed_masks(self) -> list[int]:
        return kernels.closed_subsets(list(self.succ))

    def sub_dimvecs(self) -> set[DimVector]:
        """Dimension vectors of all subrepresentations spanned by basis vectors."""
        return {self.dim_of(m) for m in self.closed_masks()}

    def quotient(self, kernel: int) -> MonomialRep:
        keep = [i for i in range(self.size) if not kernel >> i & 1]
        pos = {old: new for new, old in enumerate(keep)}
        succ = []
        for i in keep:
            m = 0
            for j in range(self.size):
                if self.succ[i] >> j & 1 and j in pos:
                    m |= 1 << pos[j]
            succ.append(m)
        return MonomialRep(
            self.n,
            tuple(self.level[i] for i in keep),
            tuple(succ),
            tuple(self.labels[i] for i in keep),
        )


@functools.lru_cache(maxsize=256)
def koszul_quotient(target: DimVector) -> MonomialRep:
    """Quotient of the Koszul representation by a basis-spanned subrepresentation.

    Several kernels may share a dimension vector; the one whose quotient has
    the fewest distinct subobject dimension vectors (the most generic) is
    chosen, ties broken by the smallest kernel bitmask.
    """
    full = DimVector(target.n, KOSZUL)
    if not target.fits_in(full):
        raise NotRepresentable(f"{target} is not a quotient of {full}")
    kos = MonomialRep.koszul(target.n)
    want = full - target
    best: tuple[int, int, MonomialRep] | None = None
    for mask in kos.closed_masks():
        if kos.dim_of(mask) != want:
            continue
        q = kos.quotient(mask)
        key = (len(q.sub_dimvecs()), mask)
        if best is None or key[:2] < best[:2]:
            best = (key[0], key[1], q)
    if best is None:
        raise NotRepresentable(f"{target} is not a basis quotient of {full}")
    return best[2]


def default_rep(parent: DimVector) -> MonomialRep | None:
    """The model used when no subobject list is given: Koszul quotients, else none."""
    if parent.fits_in(DimVector(parent.n, KOSZUL)):
        try:
            return koszul_quotient(parent)
        except NotRepresentable:
            return None
    return None


# --- scans --------------------------------------------------------------------


def _check_window(parent: DimVector, window: Interval | None) -> Interval:
    n = parent.n
    if window is None:
        return Interval.half_open(n - 1, n)
    lo_ok = window.lo is not None and (window.lo > n - 1 or (window.lo == n - 1 and not window.lo_closed))
    hi_ok = window.hi is not None and window.hi <= n
    if not (lo_ok and hi_ok):
        raise InputError(f"window: {window} is not inside ({n - 1},{n}] for A_{n}")
    return window


def _check_subs(parent: DimVector, subs: Iterable[DimVector]) -> list[DimVector]:
    out = []
    for s in subs:
        if s.n != parent.n or not s.fits_in(parent) or s.is_zero or s == parent:
            raise InputError(f"subs: {s} is not a proper nonzero subvector of {parent}")
        out.append(s)
    return out


def _generator_cubics(n: int) -> list[list[int]]:
    """Integer coefficients of ``6 chi_t`` for the signed generators, in slot order."""
    rows = []
    for slot in range(4):
        i = 3 - slot
        p = hilbert_poly(line_bundle(-n - i)) * (6 * (-1) ** i)
        rows.append([int(c) for c in (list(p.coeffs) + [0] * 4)[:4]])
    return rows


def box_candidates(parent: DimVector) -> list[tuple[DimVector, RatPoly]]:
    """Box subvectors whose slope polynomial may vanish on the heart interval, with that polynomial."""
    screened = kernels.box_wall_screen(list(parent.a), _generator_cubics(parent.n), parent.n - 1)
    return [(DimVector(parent.n, d), RatPoly(w)) for d, w, bound, _ in screened if bound >= 0]


@dataclass(frozen=True)
class ScanHit:
    sub: DimVector
    t: RealRoot
    side: str  # "sub" or "parent" dominates just above t, or "tangential"
    multiplicity: int
    realizable: bool | None  # None when no representation model applies

    @property
    def numerical_only(self) -> bool:
        return self.realizable is False

    def to_json(self) -> dict[str, object]:
        return {
            "sub": list(self.sub.a),
            "t": self.t.to_json(),
            "side": self.side,
            "multiplicity": self.multiplicity,
            "numerical_only": self.numerical_only,
        }


def _side(w: RatPoly, ps: RatPoly, pp: RatPoly, r: RealRoot) -> tuple[str, int]:
    f = -(w * ps * pp)
    k = 0
    while True:
        s = r.sign_of(f.derivative(k))
        if s:
            break
        k += 1
    if k % 2 == 0:
        return "tangential", k
    return ("sub" if s > 0 else "parent"), k


def scan_walls(
    parent: DimVector,
    window: Interval | None = None,
    *,
    subs: Sequence[DimVector] | None = None,
    rep: MonomialRep | None | str = "auto",
    heart_filter: bool = True,
    between: DimVector | None = None,
) -> list[ScanHit]:
    """Roots in ``window`` of the slope-equality polynomial for candidate subvectors.

    Candidates are ``subs`` when given, else every box subvector. Hits are kept
    when sub and quotient both lie in the heart at the root. ``between`` adds
    the chain filter ``T -> A -> parent``: ``T <= A`` componentwise,
    ``T < A < parent`` lexicographically, and ``lambda(T) <= lambda(A)`` at the root.
    """
    window = _check_window(parent, window)
    if rep == "auto":
        rep = default_rep(parent)
    realizable = rep.sub_dimvecs() if isinstance(rep, MonomialRep) else None
    if subs is not None:
        cands = [(s, slope_poly(s, parent)) for s in _check_subs(parent, subs)]
    else:
        cands = box_candidates(parent)
    pp = euler_poly(parent)
    hits: list[ScanHit] = []
    for s, w in cands:
        if w.is_zero():
            continue
        if between is not None and not (
            between.fits_in(s) and between.a < s.a < parent.a
        ):
            continue
        ps = euler_poly(s)
        quot = euler_poly(parent - s)
        for r in real_roots(w, window):
            if heart_filter and not (in_heart_at(ps, r) and in_heart_at(quot, r)):
                continue
            if between is not None and compare_slopes(euler_poly(between), ps, r) > 0:
                continue
            side, _ = _side(w, ps, pp, r)
            real = None if realizable is None else s in realizable
            hits.append(ScanHit(s, r, side, r.multiplicity, real))
    hits.sort(key=lambda h: (h.t.midpoint, h.sub.a))
    return hits


def table2_candidates(parent: DimVector, t_sub: DimVector, window: Interval | None = None) -> list[ScanHit]:
    """Intermediate subobjects ``A`` with ``t_sub -> A -> parent`` whose wall with ``parent`` lies in the window."""
    return scan_walls(parent, window, between=t_sub, rep=None)


# --- stable ranges ------------------------------------------------------------


@dataclass(frozen=True)
class StablePiece:
    lo: RealRoot
    hi: RealRoot
    lo_closed: bool
    hi_closed: bool

    def to_json(self) -> dict[str, object]:
        return {
            "lo": self.lo.to_json(),
            "hi": self.hi.to_json(),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    def __str__(self) -> str:
        def fmt(r: RealRoot) -> str:
            return fraction_str(r.exact) if r.exact is not None else f"{r.midpoint:.4f}"

        return f"{'[' if self.lo_closed else '('}{fmt(self.lo)},{fmt(self.hi)}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True)
class StableRange:
    parent: DimVector
    window: Interval
    pieces: tuple[StablePiece, ...]
    breakpoint: RealRoot | None  # infimum of the destabilized set
    destabilizers: tuple[DimVector, ...]  # subs strictly above the parent just past the breakpoint
    equal_slope_points: tuple[RealRoot, ...]  # stable-window points where some sub ties the parent
    model: str

    @property
    def everywhere(self) -> bool:
        return self.breakpoint is None

    def to_json(self) -> dict[str, object]:
        return {
            "parent": list(self.parent.a),
            "window": str(self.window),
            "model": self.model,
            "pieces": [p.to_json() for p in self.pieces],
            "breakpoint": None if self.breakpoint is None else self.breakpoint.to_json(),
            "destabilizers": [list(d.a) for d in self.destabilizers],
            "equal_slope_points": [r.to_json() for r in self.equal_slope_points],
        }


def _sorted_unique(points: list[RealRoot]) -> tuple[list[RealRoot], list[int]]:
    order = sorted(range(len(points)), key=functools.cmp_to_key(lambda i, j: points[i].compare(points[j])))
    uniq: list[RealRoot] = []
    index = [0] * len(points)
    for i in order:
        if not uniq or points[i].compare(uniq[-1]) != 0:
            uniq.append(points[i])
        index[i] = len(uniq) - 1
    return uniq, index


def _candidate_profile(
    s: DimVector, parent: DimVector, window: Interval, heart_filter: bool
) -> tuple[list[RealRoot], list[bool], list[bool], list[bool]]:
    """Critical points of one candidate and which cells/points it destabilizes.

    Returns ``(points, bad_cells, bad_points, tie_points)``; the points include
    both window ends and ``bad_cells[k]`` concerns the gap after point ``k``.
    """
    ps, pp = euler_poly(s), euler_poly(parent)
    quot = euler_poly(parent - s)
    w = slope_poly(s, parent)
    crit = ps * pp * (w if not w.is_zero() else RatPoly.const(1))
    if heart_filter:
        crit = crit * quot
    lo, hi = RealRoot.rational(window.lo), RealRoot.rational(window.hi)
    pts = [lo, *real_roots(crit, Interval.open(window.lo, window.hi)), hi]

    def ok(r) -> bool:
        return not heart_filter or (in_heart_at(ps, r) and in_heart_at(quot, r))

    cells = []
    for a, b in zip(pts, pts[1:]):
        q = _sample_between(a, b)
        cells.append(ok(q) and compare_slopes(ps, pp, q) > 0)
    bad, tie = [], []
    for r in pts:
        c = compare_slopes(ps, pp, r) if ok(r) else -1
        bad.append(c > 0)
        tie.append(c == 0)
    return pts, cells, bad, tie


def stable_range(
    parent: DimVector,
    window: Interval | None = None,
    *,
    subs: Sequence[DimVector] | None = None,
    rep: MonomialRep | None | str = "auto",
) -> StableRange:
    """The part of ``window`` where no candidate subobject has strictly larger slope.

    With ``rep="auto"`` a quotient of the Koszul representation uses its
    basis-spanned subobjects; other parents fall back to the full box with the
    heart filter. An explicit ``subs`` list is trusted as genuine subobjects.
    """
    window = _check_window(parent, window)
    if rep == "auto" and subs is None:
        rep = default_rep(parent)
    if subs is not None:
        cands, heart_filter, model = _check_subs(parent, subs), False, "given"
    elif isinstance(rep, MonomialRep):
        cands = sorted((d for d in rep.sub_dimvecs() if not d.is_zero and d != parent), key=lambda d: d.a)
        heart_filter, model = False, "monomial"
    else:
        cands = [DimVector(parent.n, d) for d in _box(parent.a)]
        heart_filter, model = True, "box"

    profiles = [_candidate_profile(s, parent, window, heart_filter) for s in cands]
    flat = [r for pts, *_ in profiles for r in pts]
    uniq, index = _sorted_unique(flat)
    m = len(uniq)
    bad_gap = [False] * (m - 1)
    bad_pt = [False] * m
    tie_pt = [False] * m
    why: list[list[DimVector]] = [[] for _ in range(2 * m)]  # element 2k = point k, 2k+1 = gap k
    pos = 0
    for s, (pts, cells, bad, tie) in zip(cands, profiles):
        g = index[pos : pos + len(pts)]
        pos += len(pts)
        for k, flag in enumerate(bad):
            if flag:
                bad_pt[g[k]] = True
                why[2 * g[k]].append(s)
            tie_pt[g[k]] |= tie[k]
        for k, flag in enumerate(cells):
            if flag:
                for j in range(g[k], g[k + 1]):
                    bad_gap[j] = True
                    why[2 * j + 1].append(s)
                for j in range(g[k] + 1, g[k + 1]):
                    bad_pt[j] = True
                    why[2 * j].append(s)

    # window ends obey the window's own closedness
    present = [True] * (2 * m - 1)
    present[0] = window.lo_closed
    present[2 * m - 2] = window.hi_closed
    good = [present[e] and not (bad_pt[e // 2] if e % 2 == 0 else bad_gap[e // 2]) for e in range(2 * m - 1)]

    pieces = []
    e = 0
    while e < 2 * m - 1:
        if not good[e]:
            e += 1
            continue
        start = e
        while e + 1 < 2 * m - 1 and good[e + 1]:
            e += 1
        lo_pt = uniq[start // 2]
        hi_pt = uniq[(e + 1) // 2]
        pieces.append(StablePiece(lo_pt, hi_pt, start % 2 == 0, e % 2 == 0))
        e += 1

    first = next((e for e in range(2 * m - 1) if present[e] and not good[e]), None)
    if first is None:
        breakpoint, who = None, ()
    else:
        breakpoint = uniq[first // 2]
        who = tuple(sorted(set(why[first]), key=lambda d: d.a))
    ties = tuple(
        uniq[k] for k in range(m) if tie_pt[k] and present[2 * k] and good[2 * k]
    )
    return StableRange(parent, window, tuple(pieces), breakpoint, who, ties, model)


def _box(a: Sequence[int]):
    for d in product(*(range(x + 1) for x in a)):
        if any(d) and tuple(d) != tuple(a):
            yield tuple(d)


# --- appendix scan ------------------------------------------------------------


@dataclass(frozen=True)
class AppendixRow:
    sub: DimVector
    comparison: int  # sign of lambda(sub) - lambda(parent)

    def to_json(self) -> dict[str, object]:
        return {"sub": list(self.sub.a), "comparison": self.comparison}


@dataclass(frozen=True)
class AppendixReport:
    parent: DimVector
    t: RealRoot
    rows: tuple[AppendixRow, ...]

    @property
    def violators(self) -> tuple[DimVector, ...]:
        return tuple(r.sub for r in self.rows if r.comparison >= 0)

    @property
    def verdict(self) -> str:
        return "all strictly smaller" if not self.violators else "violators found"

    def to_json(self) -> dict[str, object]:
        return {
            "parent": list(self.parent.a),
            "t": self.t.to_json(),
            "verdict": self.verdict,
            "violators": [list(d.a) for d in self.violators],
            "rows": [r.to_json() for r in self.rows],
        }


def appendix_scan(parent: DimVector, subs: Sequence[DimVector], t) -> AppendixReport:
    subs = _check_subs(parent, subs)
    r = _as_root(t)
    pp = euler_poly(parent)
    rows = tuple(AppendixRow(s, compare_slopes(euler_poly(s), pp, r)) for s in subs)
    return AppendixReport(parent, r, rows)


def _fam(prefix: Sequence[int], ns: Iterable[int], ms: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    ns = list(ns)
    if ms is None:
        return [(*prefix, n) for n in ns]
    return [(*prefix, n, m) for n in ns for m in ms]


def appendix_subcomplexes(n: int = 1) -> list[DimVector]:
    """Subcomplex dimension vectors of the ``[2,8,11,5]`` resolution, families expanded."""
    r = range
    vecs: list[tuple[int, ...]] = [
        (0, 6, 10, 5), (0, 7, 11, 5), (0, 8, 11, 5), (1, 5, 8, 4), (1, 5, 8, 5),
        (1, 6, 10, 5), (1, 6, 11, 5), (1, 7, 11, 5), (1, 8, 11, 5),
        (0, 4, 8, 4), (0, 4, 8, 5), (0, 5, 8, 4),
    ]
    vecs += _fam((0, 0, 0), r(1, 6))
    vecs += _fam((0, 0, 2), r(2, 6)) + _fam((0, 0, 3), r(2, 6))
    vecs += _fam((0, 0, 4), r(3, 6)) + _fam((0, 0, 5), r(3, 6))
    vecs += _fam((0, 0), r(6, 9), (4, 5)) + [(0, 0, k, 5) for k in r(9, 12)]
    vecs += _fam((0, 1, 3), r(2, 6)) + _fam((0, 1, 4), r(3, 6)) + _fam((0, 1, 5), r(3, 6))
    vecs += _fam((0, 1), r(6, 9), (4, 5)) + [(0, 1, k, 5) for k in r(9, 12)]
    vecs += _fam((0, 2), r(6, 9), (4, 5)) + [(0, 2, k, 5) for k in r(9, 12)] + _fam((0, 2, 5), r(3, 6))
    vecs += _fam((0, 3), r(7, 9), (4, 5)) + [(0, 3, k, 5) for k in r(9, 12)]
    vecs += [(0, 4, k, 5) for k in r(9, 12)] + [(0, 5, k, 5) for k in r(8, 12)]
    vecs += _fam((1, 4), r(6, 9), (4, 5)) + [(1, 5, k, 5) for k in r(9, 12)]
    seen: dict[tuple[int, ...], None] = dict.fromkeys(vecs)
    return [DimVector(n, v) for v in seen]


APPENDIX_PARENT = DimVector(1, (2, 8, 11, 5))
