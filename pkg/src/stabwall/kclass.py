"""Numerical K-classes on P^3.

A class is stored by its Chern character ``(ch0, ch1, ch2, ch3)`` written
against powers of the hyperplane class. Twisting multiplies by ``exp(beta*H)``;
the twisted character ``ch^beta`` used in tilt stability is ``twist(v, -beta)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import InputError
from .ratpoly import (
    Interval,
    RatPoly,
    RealRoot,
    fraction_str,
    real_roots,
    to_fraction,
)

__all__ = [
    "KClass",
    "RatPoly",
    "RealRoot",
    "Interval",
    "TODD",
    "line_bundle",
    "twist",
    "conj",
    "shift",
    "shift_one",
    "hilbert_poly",
    "derivative",
    "euler_pairing",
    "dual_class",
    "real_roots",
]

TODD: tuple[Fraction, ...] = (Fraction(1), Fraction(2), Fraction(11, 6), Fraction(1))


@dataclass(frozen=True, slots=True)
class KClass:
    ch0: Fraction
    ch1: Fraction
    ch2: Fraction
    ch3: Fraction

    def __post_init__(self) -> None:
        for name in ("ch0", "ch1", "ch2", "ch3"):
            object.__setattr__(self, name, to_fraction(getattr(self, name), name))

    @classmethod
    def of(cls, *chs: object) -> KClass:
        if len(chs) == 1 and isinstance(chs[0], (list, tuple)):
            chs = tuple(chs[0])
        if len(chs) != 4:
            raise InputError(f"class: expected 4 Chern characters, got {len(chs)}")
        return cls(*chs)

    @classmethod
    def parse(cls, text: str) -> KClass:
        """``"0,0,3,-5"`` or ``"1,-1,1/2,-1/6"``."""
        parts = [p for p in text.replace(" ", "").split(",") if p != ""]
        if len(parts) != 4:
            raise InputError(f"class: expected 4 comma-separated rationals in {text!r}")
        return cls(*(to_fraction(p, f"ch{i}") for i, p in enumerate(parts)))

    def __iter__(self) -> Iterator[Fraction]:
        yield from (self.ch0, self.ch1, self.ch2, self.ch3)

    def __getitem__(self, i: int) -> Fraction:
        return self.as_tuple()[i]

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.ch0, self.ch1, self.ch2, self.ch3)

    def __add__(self, other: KClass) -> KClass:
        return KClass(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: KClass) -> KClass:
        return KClass(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> KClass:
        return KClass(*(-a for a in self))

    def __mul__(self, k: object) -> KClass:
        c = to_fraction(k)
        return KClass(*(c * a for a in self))

    __rmul__ = __mul__

    @property
    def m(self) -> Fraction:
        """Degree ``ch2`` of a one-dimensional class."""
        return self.ch2

    @property
    def chi(self) -> Fraction:
        """Constant term ``2*ch2 + ch3`` of the Hilbert polynomial of a one-dimensional class."""
        return 2 * self.ch2 + self.ch3

    def is_one_dimensional(self) -> bool:
        return self.ch0 == 0 and self.ch1 == 0 and self.ch2 > 0

    def satisfies_denominators(self) -> bool:
        """The necessary conditions ch0, ch1, 2ch2, 6ch3 integral."""
        return all((c * d).denominator == 1 for c, d in zip(self, (1, 1, 2, 6)))

    def is_lattice(self) -> bool:
        """True when the class is an integer combination of line bundles.

        This is the exact integrality condition (it implies an integer-valued
        Hilbert polynomial); the denominator test alone is weaker.
        """
        return all(x.denominator == 1 for x in _line_bundle_coordinates(self))

    def to_json(self) -> list[str]:
        return [fraction_str(c) for c in self]

    @classmethod
    def from_json(cls, data: Sequence[object]) -> KClass:
        if not isinstance(data, (list, tuple)) or len(data) != 4:
            raise InputError("class: expected an array of four rational strings")
        return cls(*(to_fraction(c, f"ch{i}") for i, c in enumerate(data)))

    def __str__(self) -> str:
        return "(" + ",".join(fraction_str(c) for c in self) + ")"


def line_bundle(k: int) -> KClass:
    k = Fraction(k)
    return KClass(1, k, k * k / 2, k**3 / 6)


def twist(v: KClass, beta: object) -> KClass:
    """Tensor by ``exp(beta*H)``."""
    b = to_fraction(beta, "beta")
    c0, c1, c2, c3 = v
    return KClass(
        c0,
        c1 + b * c0,
        c2 + b * c1 + b * b * c0 / 2,
        c3 + b * c2 + b * b * c1 / 2 + b**3 * c0 / 6,
    )


def conj(v: KClass) -> KClass:
    """Negate the odd-degree parts (the Chern character of the derived dual)."""
    return KClass(v.ch0, -v.ch1, v.ch2, -v.ch3)


def shift(v: KClass, k: int = 1) -> KClass:
    return v if k % 2 == 0 else -v


def shift_one(v: KClass) -> KClass:
    return -v


def _multiply(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Product in Q[H]/(H^4)."""
    return [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(4)]


def _top_degree(c: Sequence[Fraction]) -> Fraction:
    """Integrate a truncated series against the Todd class."""
    return sum((c[i] * TODD[3 - i] for i in range(4)), Fraction(0))


def hilbert_poly(v: KClass) -> RatPoly:
    """``chi_t(v)``: the H^3 coefficient of ``ch(v) * exp(tH) * Td``."""
    t = RatPoly.x()
    expt = [RatPoly.const(1), t, t * t * Fraction(1, 2), t**3 * Fraction(1, 6)]
    out = RatPoly()
    for i, c in enumerate(v):
        if c:
            # ch_i * sum_{j+k = 3-i} t^j/j! * Td_k
            tail = RatPoly()
            for j in range(4 - i):
                tail = tail + expt[j] * TODD[3 - i - j]
            out = out + tail * c
    return out


def derivative(p: RatPoly, k: int = 1) -> RatPoly:
    if k < 0:
        raise InputError("k: derivative order must be non-negative")
    return p.derivative(k)


def euler_pairing(a: KClass, b: KClass) -> Fraction:
    """Riemann-Roch value of ``sum (-1)^i dim Ext^i(a, b)``."""
    return _top_degree(_multiply(tuple(conj(a)), tuple(b)))


def dual_class(v: KClass) -> KClass:
    """Class of ``RHom(E, omega)``, i.e. ``conj`` followed by a twist by -4.

    The shift ``[2]`` in the derived dual acts trivially on classes. Note that
    ``twist(dual_class(v), 1)`` is a second normalisation in common use.
    """
    return twist(conj(v), -4)


def _line_bundle_coordinates(v: KClass, n: int = 0) -> list[Fraction]:
    """Coefficients ``c_i`` with ``v = sum_i c_i ch(O(-n-i))``, i = 0..3."""
    w = twist(v, n)
    basis = [line_bundle(-i) for i in range(4)]
    rows = [[basis[i][j] for i in range(4)] + [w[j]] for j in range(4)]
    for col in range(4):
        piv = next(r for r in range(col, 4) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(4):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][4] for i in range(4)]
