"""Central charges, slopes and the numeric heart/support predicates.

All charges here are exact: the double-tilt family is parametrised by
``alpha**2`` so that the common choice ``alpha = 1/sqrt(3)`` stays rational.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import ChargeVanishes, InputError, SupportFailure
from .kclass import KClass, hilbert_poly, line_bundle, shift, twist
from .ratpoly import fraction_str, to_fraction

Family = Literal["euler", "tilt1", "tilt2", "doubletilt", "tu-plane"]
FAMILIES: tuple[str, ...] = ("euler", "tilt1", "tilt2", "doubletilt", "tu-plane")


def _parse_alpha_sq(text: str) -> Fraction:
    """``"1/2"`` gives 1/4; ``"sqrt(1/3)"`` gives 1/3 exactly."""
    s = text.strip().replace(" ", "")
    if s.startswith("sqrt(") and s.endswith(")"):
        return to_fraction(s[5:-1], "alpha")
    a = to_fraction(s, "alpha")
    return a * a


@dataclass(frozen=True)
class StabParams:
    family: str
    t: Fraction = Fraction(0)
    u: Fraction = Fraction(0)
    alpha_sq: Fraction = Fraction(1, 3)
    beta: Fraction = Fraction(-2)
    s: Fraction = Fraction(1, 3)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise InputError(f"family: unknown family {self.family!r}")
        for name in ("t", "u", "alpha_sq", "beta", "s"):
            object.__setattr__(self, name, to_fraction(getattr(self, name), name))
        if self.u < 0:
            raise InputError("u: must be non-negative")
        if self.family == "doubletilt" and (self.alpha_sq <= 0 or self.s <= 0):
            raise InputError("alpha/s: doubletilt needs alpha > 0 and s > 0")

    @classmethod
    def build(cls, family: str, *, t=0, u=0, alpha: str | None = None, beta=None, s=None) -> StabParams:
        """Flag-style constructor; ``alpha`` may be ``"sqrt(p/q)"``."""
        kwargs: dict[str, object] = {"t": t, "u": u}
        if alpha is not None:
            kwargs["alpha_sq"] = _parse_alpha_sq(str(alpha))
        if beta is not None:
            kwargs["beta"] = beta
        if s is not None:
            kwargs["s"] = s
        return cls(family, **kwargs)

    @classmethod
    def euler_at(cls, t) -> StabParams:
        return cls("euler", t=t)

    @classmethod
    def tu(cls, t, u) -> StabParams:
        return cls("tu-plane", t=t, u=u)


@dataclass(frozen=True)
class ChargePoint:
    re: Fraction
    im: Fraction

    def __iter__(self):
        yield from (self.re, self.im)

    def in_half_plane(self) -> bool:
        """Closed upper half-plane with the negative real axis, origin excluded."""
        return self.im > 0 or (self.im == 0 and self.re < 0)

    def to_json(self) -> list[str]:
        return [fraction_str(self.re), fraction_str(self.im)]


def charge(params: StabParams, v: KClass) -> ChargePoint:
    fam = params.family
    if fam == "doubletilt":
        c0, c1, c2, c3 = twist(v, -params.beta)
        a2 = params.alpha_sq
        return ChargePoint(-c3 + (params.s + Fraction(1, 6)) * a2 * c1, c2 - a2 / 2 * c0)
    p = hilbert_poly(v)
    t = params.t
    d = [p.derivative(k)(t) for k in range(4)]
    if fam == "euler":
        return ChargePoint(d[1], d[0])
    if fam == "tu-plane":
        return ChargePoint(-d[0] + params.u**2 * d[2] / 2, d[1])
    if fam == "tilt1":
        return ChargePoint(-d[2], d[3])
    return ChargePoint(-d[1], d[2])  # tilt2


@dataclass(frozen=True, order=False)
class Slope:
    """``-Re/Im`` kept exact; an infinite slope remembers the sign of ``Re``."""

    value: Fraction | None
    re_sign: int = 0

    @property
    def infinite(self) -> bool:
        return self.value is None

    def _key(self) -> tuple[int, Fraction]:
        return (1, Fraction(0)) if self.value is None else (0, self.value)

    def __lt__(self, other: Slope) -> bool:
        return self._key() < other._key()

    def __le__(self, other: Slope) -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: Slope) -> bool:
        return self._key() > other._key()

    def __ge__(self, other: Slope) -> bool:
        return self._key() >= other._key()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Slope):
            return self._key() == other._key()
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key())

    def to_json(self) -> str:
        return "+inf" if self.value is None else fraction_str(self.value)

    def __float__(self) -> float:
        return math.inf if self.value is None else float(self.value)


def slope(params: StabParams, v: KClass) -> Slope:
    z = charge(params, v)
    if z.im == 0:
        if z.re == 0:
            raise ChargeVanishes("charge vanishes")
        return Slope(None, 1 if z.re > 0 else -1)
    return Slope(-z.re / z.im)


def bogomolov(v: KClass, beta: object) -> Fraction:
    c0, c1, c2, _ = twist(v, -to_fraction(beta, "beta"))
    return c1 * c1 - 2 * c0 * c2


def q_form(v: KClass, t: object, *, strict: bool | None = None) -> Fraction:
    """Support-property quadratic form of the second tilt.

    ``strict=True`` reads the printed token ``ch_12`` literally as ``ch1*ch2``;
    the default is the corrected ``ch2``. ``STABWALL_QFORM=strict`` flips the default.
    """
    if strict is None:
        strict = os.environ.get("STABWALL_QFORM", "corrected").lower() == "strict"
    t = to_fraction(t, "t")
    c0, c1, c2, c3 = v
    c12 = c1 * c2 if strict else c2
    b = t + 2
    return (
        (c1 * c1 - 2 * c0 * c12) * (Fraction(1, 3) + b * b)
        + (6 * c0 * c3 - 2 * c1 * c2) * (-b)
        - 6 * c1 * c3
        + 4 * c2 * c2
    )


def ceil_frac(t: Fraction) -> int:
    return -((-t.numerator) // t.denominator)


def heart_generators(t: object) -> list[KClass]:
    """Classes ``O(-n-i)[i]``, i = 0..3, with ``n = ceil(t)``."""
    n = ceil_frac(to_fraction(t, "t"))
    return [shift(line_bundle(-n - i), i) for i in range(4)]


@dataclass(frozen=True)
class GeneratorCharge:
    index: int
    klass: KClass
    charge: ChargePoint

    @property
    def in_half_plane(self) -> bool:
        return self.charge.in_half_plane()

    @property
    def on_real_axis(self) -> bool:
        return self.charge.im == 0


def heart_generator_charges(t: object) -> list[GeneratorCharge]:
    t = to_fraction(t, "t")
    params = StabParams.euler_at(t)
    return [GeneratorCharge(i, g, charge(params, g)) for i, g in enumerate(heart_generators(t))]


def lattice_norm(v: KClass) -> Fraction:
    """``max |(ch0, ch1, 2ch2, 6ch3)|``; at least 1 on nonzero lattice points."""
    return max(abs(c) * w for c, w in zip(v, (1, 1, 2, 6)))


@dataclass(frozen=True)
class SupportMargin:
    t: Fraction
    margin: float
    a_t: float
    b_t: Fraction
    width: float  # angular width of the cone, radians


def support_margin(t: object) -> SupportMargin:
    """Ratio ``a_t / b_t`` for the generator cone at ``t``.

    ``a_t`` is the least projection of a generator charge onto the bisector
    of the cone; ``b_t`` the largest generator norm.
    """
    t = to_fraction(t, "t")
    gens = heart_generator_charges(t)
    angles = sorted(math.atan2(float(g.charge.im), float(g.charge.re)) % (2 * math.pi) for g in gens)
    # largest circular gap between consecutive rays; the cone is its complement
    gaps = [(angles[(i + 1) % 4] - angles[i]) % (2 * math.pi) for i in range(4)]
    k = max(range(4), key=lambda i: gaps[i])
    width = 2 * math.pi - gaps[k]
    if width >= math.pi:
        raise SupportFailure(f"support property unverifiable at t={fraction_str(t)}")
    start = angles[(k + 1) % 4]
    bis = start + width / 2
    nx, ny = math.cos(bis), math.sin(bis)
    a_t = min(float(g.charge.re) * nx + float(g.charge.im) * ny for g in gens)
    b_t = max(lattice_norm(g.klass) for g in gens)
    if a_t <= 0:
        raise SupportFailure(f"support property unverifiable at t={fraction_str(t)}")
    return SupportMargin(t, a_t / float(b_t), a_t, b_t, width)


def in_quiver_region(t, u) -> bool:
    """Below both hyperbolas bounding the quiver region, periodic in ``t``.

    Exact for rational inputs; floats are accepted for plotting.
    """
    if isinstance(t, float) or isinstance(u, float):
        tp = t - math.ceil(t)
    else:
        t, u = to_fraction(t, "t"), to_fraction(u, "u")
        tp = t - ceil_frac(t)
    if u < 0:
        raise InputError("u: must be non-negative")
    return (tp + 2) ** 2 - 2 * u * u - 1 >= 0 and (tp - 1) ** 2 - 2 * u * u - 1 >= 0

