"""Exact univariate polynomials over the rationals and certified real roots.

Roots are isolated with Sturm sequences on square-free factors (Yun's
decomposition) and refined by bisection. A root is returned as a
:class:`RealRoot`: a square-free polynomial together with a rational interval
containing exactly one of its roots. Signs of other polynomials at such a
root are decided exactly via gcd tests and further refinement, so no float
ever enters a comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence, Union

from .errors import DegenerateError, InputError

Number = Union[int, Fraction]

DEFAULT_TOL = Fraction(1, 10**9)


def to_fraction(x: object, field: str = "value") -> Fraction:
    """Convert ints, Fractions and strings like ``"-3/4"`` or ``"0.25"`` exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"{field}: booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InputError(f"{field}: non-finite float {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{field}: malformed rational {x!r}") from None
    raise InputError(f"{field}: cannot interpret {x!r} as a rational")


def fraction_str(x: Fraction) -> str:
    """Canonical string form: integers bare, otherwise ``p/q``."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _sign(x: Number) -> int:
    return (x > 0) - (x < 0)


class RatPoly:
    """Polynomial with exact rational coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[object] = ()) -> None:
        cs = [to_fraction(c, "coefficient") for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("RatPoly is immutable")

    @classmethod
    def x(cls) -> RatPoly:
        return cls((0, 1))

    @classmethod
    def const(cls, c: object) -> RatPoly:
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            mag = abs(c)
            body = fraction_str(mag) if (mag != 1 or not mono) else ""
            term = f"{body}*{mono}" if body and mono else (body or mono)
            sign = "-" if c < 0 else "+"
            terms.append((sign, term))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, term in terms[1:]:
            out += f" {s} {term}"
        return out

    def __call__(self, x):
        acc = 0
        if isinstance(x, float):
            for c in reversed(self.coeffs):
                acc = acc * x + float(c)
            return float(acc)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return Fraction(acc)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coeffs)

    @staticmethod
    def _coerce(other: object) -> RatPoly:
        if isinstance(other, RatPoly):
            return other
        return RatPoly.const(other)

    def __add__(self, other: object) -> RatPoly:
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> RatPoly:
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: object) -> RatPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> RatPoly:
        return self._coerce(other) - self

    def __mul__(self, other: object) -> RatPoly:
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> RatPoly:
        out = RatPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: RatPoly) -> tuple[RatPoly, RatPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        inv = 1 / other.lead
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv
            if c:
                quo[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return RatPoly(quo), RatPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: RatPoly) -> RatPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: RatPoly) -> RatPoly:
        return divmod(self, other)[1]

    def derivative(self, k: int = 1) -> RatPoly:
        cs = list(self.coeffs)
        for _ in range(k):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return RatPoly(cs)

    def compose(self, inner: RatPoly) -> RatPoly:
        """Return ``self(inner(t))``."""
        out = RatPoly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def reflect(self) -> RatPoly:
        """``p(-t)``."""
        return RatPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def monic(self) -> RatPoly:
        if self.is_zero():
            return self
        return RatPoly(c / self.lead for c in self.coeffs)

    def integer_coeffs(self) -> tuple[int, ...]:
        """Primitive integer multiple with positive leading coefficient."""
        if self.is_zero():
            return ()
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return tuple(i // g for i in ints)

    def to_json(self) -> list[str]:
        return [fraction_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[object]) -> RatPoly:
        if not isinstance(data, (list, tuple)):
            raise InputError("polynomial: expected an array of rational strings")
        return cls(to_fraction(c, f"coeffs[{i}]") for i, c in enumerate(data))


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd (zero only when both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def square_free_decomposition(p: RatPoly) -> list[tuple[RatPoly, int]]:
    """Yun's algorithm: ``p = c * prod f_i^i`` with pairwise coprime square-free ``f_i``."""
    if p.degree < 1:
        return []
    out: list[tuple[RatPoly, int]] = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def square_free_part(p: RatPoly) -> RatPoly:
    if p.degree < 1:
        return p.monic()
    return (p // poly_gcd(p, p.derivative())).monic()


def sturm_sequence(p: RatPoly) -> list[RatPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _variations(seq: Sequence[RatPoly], x: Fraction) -> int:
    count, prev = 0, 0
    for q in seq:
        s = _sign(q(x))
        if s:
            if prev and s != prev:
                count += 1
            prev = s
    return count


def count_roots(p: RatPoly, lo: Fraction, hi: Fraction, seq: Sequence[RatPoly] | None = None) -> int:
    """Number of distinct real roots of square-free ``p`` in ``(lo, hi]``."""
    if lo >= hi:
        return 0
    seq = seq if seq is not None else sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


def root_bound(p: RatPoly) -> Fraction:
    """Strict Cauchy bound: every root has absolute value below it."""
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class Interval:
    """A real interval with rational (or infinite, ``None``) endpoints."""

    lo: Fraction | None
    hi: Fraction | None
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if self.lo is not None:
            object.__setattr__(self, "lo", to_fraction(self.lo, "window.lo"))
        if self.hi is not None:
            object.__setattr__(self, "hi", to_fraction(self.hi, "window.hi"))
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise InputError(f"window: lower end {self.lo} exceeds upper end {self.hi}")

    @classmethod
    def open(cls, lo, hi) -> Interval:
        return cls(lo, hi, False, False)

    @classmethod
    def half_open(cls, lo, hi) -> Interval:
        """``(lo, hi]``, the shape of a unit heart interval."""
        return cls(lo, hi, False, True)

    @classmethod
    def parse(cls, text: str) -> Interval:
        """Parse ``"0,1"`` (read as ``(0,1]``) or bracketed forms like ``"[0,1)"``."""
        s = text.strip()
        lo_closed, hi_closed = False, True
        if s and s[0] in "([":
            lo_closed = s[0] == "["
            if s[-1] not in ")]":
                raise InputError(f"window: unbalanced brackets in {text!r}")
            hi_closed = s[-1] == "]"
            s = s[1:-1]
        parts = s.split(",")
        if len(parts) != 2:
            raise InputError(f"window: expected two endpoints in {text!r}")

        def end(x: str) -> Fraction | None:
            x = x.strip()
            if x in ("-inf", "inf", "+inf"):
                return None
            return to_fraction(x, "window")

        return cls(end(parts[0]), end(parts[1]), lo_closed, hi_closed)

    def contains(self, x: Fraction) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else fraction_str(self.lo)
        hi = "inf" if self.hi is None else fraction_str(self.hi)
        return f"{'[' if self.lo_closed else '('}{lo},{hi}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True)
class RealRoot:
    """A certified real number: the unique root of ``poly`` in ``(lo, hi]``.

    ``poly`` is square-free. When ``lo == hi`` the root is the rational ``lo``.
    ``multiplicity`` records the multiplicity in the polynomial the root came from.
    """

    poly: RatPoly
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @classmethod
    def rational(cls, x: object, multiplicity: int = 1) -> RealRoot:
        q = to_fraction(x)
        return cls(RatPoly((-q, 1)), q, q, multiplicity)

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.lo == self.hi else None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __float__(self) -> float:
        return self.midpoint

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"RealRoot({fraction_str(self.exact)})"
        return f"RealRoot(~{self.midpoint:.12g} of {self.poly})"

    def bisect(self) -> RealRoot:
        """Halve the isolating interval once (may land exactly on the root)."""
        if self.exact is not None:
            return self
        p, lo, hi = self.poly, self.lo, self.hi
        mid = (lo + hi) / 2
        fm = p(mid)
        if fm == 0:
            return RealRoot(p, mid, mid, self.multiplicity)
        if _sign(fm) == _sign(p(hi)):
            return RealRoot(p, lo, mid, self.multiplicity)
        return RealRoot(p, mid, hi, self.multiplicity)

    def refine(self, tol: Fraction = DEFAULT_TOL) -> RealRoot:
        r = self
        while r.exact is None and (r.width > tol or r.poly(r.lo) == 0):
            r = r.bisect()
        return r

    def sign_of(self, q: RatPoly) -> int:
        """Exact sign of ``q`` at this root."""
        if q.is_zero():
            return 0
        if self.exact is not None:
            return _sign(q(self.exact))
        g = poly_gcd(self.poly, q)
        if g.degree >= 1 and count_roots(g, self.lo, self.hi) > 0:
            return 0
        qs = square_free_part(q)
        seq = sturm_sequence(qs) if qs.degree >= 1 else None
        r = self
        while r.exact is None and seq is not None and count_roots(qs, r.lo, r.hi, seq) > 0:
            r = r.bisect()
        if r.exact is not None:
            return _sign(q(r.exact))
        return _sign(q(r.hi))

    def compare(self, other: RealRoot | Number) -> int:
        """Exact three-way comparison with a rational or another root."""
        if not isinstance(other, RealRoot):
            x = to_fraction(other)
            return self._cmp_rational(x)
        return self._cmp_root(other)

    def _cmp_rational(self, x: Fraction) -> int:
        r = self
        while True:
            if r.exact is not None:
                return _sign(r.exact - x)
            if x <= r.lo:
                return 1
            if x >= r.hi:
                if x == r.hi:
                    return 0 if r.poly(x) == 0 else -1
                return -1
            if r.poly(x) == 0:
                return 0
            r = r.bisect()

    def _cmp_root(self, other: RealRoot) -> int:
        a, b = self, other
        if b.exact is not None:
            return a._cmp_rational(b.exact)
        if a.exact is not None:
            return -b._cmp_rational(a.exact)
        g = poly_gcd(a.poly, b.poly)
        if g.degree >= 1:
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if lo < hi and count_roots(g, lo, hi) > 0:
                return 0
        while True:
            if a.exact is not None or b.exact is not None:
                return a._cmp_root(b)
            if a.hi <= b.lo:
                return -1
            if b.hi <= a.lo:
                return 1
            a, b = a.bisect(), b.bisect()

    def __lt__(self, other: RealRoot | Number) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: RealRoot | Number) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: RealRoot | Number) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: RealRoot | Number) -> bool:
        return self.compare(other) >= 0

    def to_json(self) -> dict[str, object]:
        return {
            "approx": round(self.midpoint, 12),
            "interval": [fraction_str(self.lo), fraction_str(self.hi)],
            "multiplicity": self.multiplicity,
            "poly": self.poly.to_json(),
        }


def _try_rational(f: RatPoly, lo: Fraction, hi: Fraction) -> Fraction | None:
    """Snap to a small-denominator rational root inside ``[lo, hi]`` if there is one."""
    mid = (lo + hi) / 2
    for bound in (10, 1000, 10**6):
        cand = mid.limit_denominator(bound)
        if lo <= cand <= hi and f(cand) == 0:
            return cand
    return None


def _isolate(f: RatPoly, tol: Fraction) -> list[RealRoot]:
    """Isolate all real roots of a square-free polynomial of degree >= 1."""
    seq = sturm_sequence(f)
    b = root_bound(f)
    out: list[RealRoot] = []
    stack = [(-b, b, count_roots(f, -b, b, seq))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(RealRoot(f, lo, hi))
            continue
        mid = (lo + hi) / 2
        left = count_roots(f, lo, mid, seq)
        stack.append((mid, hi, n - left))
        stack.append((lo, mid, left))
    done = []
    for r in out:
        if r.poly(r.hi) == 0:
            done.append(RealRoot(f, r.hi, r.hi))
            continue
        r = r.refine(tol)
        if r.exact is None:
            q = _try_rational(f, r.lo, r.hi)
            if q is not None:
                r = RealRoot(f, q, q)
        done.append(r)
    done.sort(key=lambda r: (r.lo, r.hi))
    return done


def _in_window(r: RealRoot, window: Interval) -> bool:
    for end, closed, is_lo in ((window.lo, window.lo_closed, True), (window.hi, window.hi_closed, False)):
        if end is None:
            continue
        c = r.compare(end)
        if c == 0 and not closed:
            return False
        if (is_lo and c < 0) or (not is_lo and c > 0):
            return False
    return True


def real_roots(p: RatPoly, window: Interval | None = None, tol: object = DEFAULT_TOL) -> list[RealRoot]:
    """All real roots of ``p`` inside ``window``, sorted, with multiplicities.

    Raises :class:`DegenerateError` for the zero polynomial.
    """
    if p.is_zero():
        raise DegenerateError("identically zero")
    tol = to_fraction(tol, "tol")
    if tol <= 0:
        raise InputError("tol: must be positive")
    window = window or Interval(None, None)
    roots: list[RealRoot] = []
    for factor, mult in square_free_decomposition(p):
        for r in _isolate(factor, tol):
            if _in_window(r, window):
                roots.append(RealRoot(r.poly, r.lo, r.hi, mult).refine(tol))
    roots.sort(key=_sort_key)
    return roots


def _sort_key(r: RealRoot):
    return (r.lo + r.hi) / 2


def sqrt_real(x: object) -> RealRoot:
    """Certified non-negative square root of a non-negative rational."""
    q = to_fraction(x)
    if q < 0:
        raise InputError(f"sqrt of negative rational {q}")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return RealRoot.rational(Fraction(rn, rd))
    f = RatPoly((-q, 0, 1))
    hi = max(q, Fraction(1))
    return RealRoot(f, Fraction(0), hi).refine(DEFAULT_TOL)
