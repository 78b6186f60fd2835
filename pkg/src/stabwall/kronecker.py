"""Matrices of forms in ``x0..x3``, theta-stability for the 4-arrow (2,3)
Kronecker quiver, torsion/curve strata and resolution bookkeeping.

Row-vector convention throughout: a map ``C^r (x) O(d) -> C^c (x) O(d+k)``
is an ``r x c`` matrix and composition ``f then g`` is the product ``f*g``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .kclass import KClass
from .quiverheart import DimVector, class_of
from .ratpoly import RatPoly, fraction_str, poly_gcd, real_roots, to_fraction

NVARS = 4
Exp = tuple[int, int, int, int]


class MPoly:
    """Sparse polynomial in ``x0..x3`` with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exp, object] | None = None) -> None:
        clean: dict[Exp, Fraction] = {}
        for e, c in (terms or {}).items():
            c = to_fraction(c)
            if c:
                clean[tuple(e)] = clean.get(tuple(e), Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def var(cls, k: int) -> MPoly:
        e = [0] * NVARS
        e[k] = 1
        return cls({tuple(e): 1})

    @classmethod
    def const(cls, c: object) -> MPoly:
        return cls({(0,) * NVARS: c})

    @classmethod
    def parse(cls, text: str) -> MPoly:
        """Parse sums of terms like ``"-x3 + 2*x0*x1 - 1/2*x2^2"``."""
        s = text.replace(" ", "").replace("-", "+-")
        out = cls()
        for term in filter(None, s.split("+")):
            coeff, e = Fraction(1), [0] * NVARS
            if term.startswith("-"):
                coeff, term = -coeff, term[1:]
            for f in term.split("*"):
                m = re.fullmatch(r"x([0-3])(?:\^(\d+))?", f)
                if m:
                    e[int(m.group(1))] += int(m.group(2) or 1)
                elif f:
                    coeff *= to_fraction(f, "form")
                else:
                    raise InputError(f"form: cannot parse {text!r}")
            out = out + cls({tuple(e): coeff})
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        return isinstance(other, MPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: MPoly) -> MPoly:
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return MPoly(t)

    def __neg__(self) -> MPoly:
        return MPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: MPoly) -> MPoly:
        return self + (-other)

    def __mul__(self, other: MPoly | int | Fraction) -> MPoly:
        if not isinstance(other, MPoly):
            c = to_fraction(other)
            return MPoly({e: c * v for e, v in self.terms.items()})
        t: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return MPoly(t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MPoly:
        out = MPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        """Total degree; -1 for zero."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int) -> bool:
        return all(sum(e) == d for e in self.terms)

    def deg_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=-1)

    def leading(self) -> tuple[Exp, Fraction]:
        """Lex-leading term with ``x0 > x1 > x2 > x3``."""
        e = max(self.terms)
        return e, self.terms[e]

    def monic(self) -> MPoly:
        if self.is_zero():
            return self
        return self * (1 / self.leading()[1])

    def coefficient(self, e: Exp) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def substitute(self, sub: Sequence[MPoly]) -> MPoly:
        out = MPoly()
        for e, c in self.terms.items():
            term = MPoly.const(c)
            for k, p in enumerate(e):
                if p:
                    term = term * sub[k] ** p
            out = out + term
        return out

    def evaluate(self, point: Sequence[object]) -> Fraction:
        pt = [to_fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, p in zip(pt, e):
                v *= x**p
            total += v
        return total

    def to_json(self) -> dict[str, str]:
        return {_exp_key(e): fraction_str(c) for e, c in sorted(self.terms.items(), reverse=True)}

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> MPoly:
        if not isinstance(data, Mapping):
            raise InputError("entries: each entry must be a monomial-coefficient map")
        return cls({_parse_exp(k): to_fraction(v, "entries") for k, v in data.items()})

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{k}" + (f"^{p}" if p > 1 else "") for k, p in enumerate(e) if p)
            mag = abs(c)
            if not mono:
                body = fraction_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{fraction_str(mag)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _exp_key(e: Exp) -> str:
    if max(e) <= 9:
        return "".join(map(str, e))
    return ",".join(map(str, e))


def _parse_exp(key: str) -> Exp:
    parts = key.split(",") if "," in key else list(key)
    if len(parts) != NVARS or not all(p.isdigit() for p in parts):
        raise InputError(f"entries: bad monomial key {key!r}")
    return tuple(int(p) for p in parts)


# --- multivariate gcd ---------------------------------------------------------


def _coeffs_in(p: MPoly, k: int) -> dict[int, MPoly]:
    out: dict[int, dict[Exp, Fraction]] = {}
    for e, c in p.terms.items():
        rest = list(e)
        rest[k] = 0
        out.setdefault(e[k], {})[tuple(rest)] = c
    return {d: MPoly(t) for d, t in out.items()}


def _xpow(k: int, d: int) -> MPoly:
    return MPoly.var(k) ** d


def exact_divide(p: MPoly, q: MPoly) -> MPoly:
    """``p / q``; raises ``ValueError`` when ``q`` does not divide ``p``."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    eq, cq = q.leading()
    quot, rem = MPoly(), p
    while rem:
        er, cr = rem.leading()
        if any(a < b for a, b in zip(er, eq)):
            raise ValueError("not divisible")
        t = MPoly({tuple(a - b for a, b in zip(er, eq)): cr / cq})
        quot = quot + t
        rem = rem - t * q
    return quot


def _prem(f: MPoly, g: MPoly, k: int) -> MPoly:
    """Pseudo-remainder of ``f`` by ``g`` in the variable ``x_k``."""
    dg = g.deg_in(k)
    lc = _coeffs_in(g, k)[dg]
    r = f
    while r and r.deg_in(k) >= dg:
        dr = r.deg_in(k)
        lr = _coeffs_in(r, k)[dr]
        r = r * lc - g * lr * _xpow(k, dr - dg)
    return r


def _content(p: MPoly, k: int) -> MPoly:
    g = MPoly()
    for c in _coeffs_in(p, k).values():
        g = mgcd(g, c)
    return g


def mgcd(f: MPoly, g: MPoly) -> MPoly:
    """Monic (lex) greatest common divisor over ``Q[x0..x3]``.

    Recursive: split off contents in the highest live variable, then run a
    primitive pseudo-remainder sequence on the primitive parts.
    """
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    live = [k for k in range(NVARS) if f.deg_in(k) > 0 or g.deg_in(k) > 0]
    if not live:
        return MPoly.const(1)
    k = live[0]
    if f.deg_in(k) <= 0 or g.deg_in(k) <= 0:
        # one side is free of x_k: the gcd divides every x_k-coefficient of the other
        h, other = (f, g) if f.deg_in(k) <= 0 else (g, f)
        return mgcd(h, _content(other, k))
    cf, cg = _content(f, k), _content(g, k)
    c = mgcd(cf, cg)
    a, b = exact_divide(f, cf), exact_divide(g, cg)
    if a.deg_in(k) < b.deg_in(k):
        a, b = b, a
    while b and b.deg_in(k) > 0:
        r = _prem(a, b, k)
        a = b
        b = r if r.is_zero() or r.deg_in(k) <= 0 else exact_divide(r, _content(r, k))
    if b:  # nonzero remainder free of x_k: the primitive parts are coprime
        return c.monic()
    a = exact_divide(a, _content(a, k))
    return (c * a).monic()


def mgcd_all(polys: Iterable[MPoly]) -> MPoly:
    g = MPoly()
    for p in polys:
        g = mgcd(g, p)
    return g


# --- form matrices ------------------------------------------------------------


@dataclass(frozen=True)
class FormMatrix:
    rows: int
    cols: int
    degree: int
    entries: tuple[tuple[MPoly, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise InputError("rows/cols: must be positive")
        if self.degree < 0:
            raise InputError("degree: must be non-negative")
        ent = tuple(tuple(r) for r in self.entries)
        if len(ent) != self.rows or any(len(r) != self.cols for r in ent):
            raise InputError(f"entries: expected a {self.rows}x{self.cols} array")
        for r in ent:
            for p in r:
                if not p.is_homogeneous(self.degree):
                    raise InputError(f"entries: {p} is not homogeneous of degree {self.degree}")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def of(cls, rows: Sequence[Sequence[str | MPoly | int]], degree: int | None = None) -> FormMatrix:
        """Build from strings such as ``[["x0", "-x1"], ["0", "x2"]]``; degree inferred if omitted."""
        ent = [[e if isinstance(e, MPoly) else MPoly.parse(str(e)) for e in r] for r in rows]
        if degree is None:
            degree = max((p.degree for r in ent for p in r), default=0)
            degree = max(degree, 0)
        return cls(len(ent), len(ent[0]) if ent else 0, degree, tuple(map(tuple, ent)))

    @classmethod
    def column(cls, entries: Sequence[str], degree: int | None = None) -> FormMatrix:
        return cls.of([[e] for e in entries], degree)

    def __getitem__(self, ij: tuple[int, int]) -> MPoly:
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.entries for p in r)

    def transpose(self) -> FormMatrix:
        return FormMatrix(self.cols, self.rows, self.degree, tuple(zip(*self.entries)))

    def substitute(self, sub: Sequence[MPoly]) -> FormMatrix:
        return FormMatrix(
            self.rows, self.cols, self.degree, tuple(tuple(p.substitute(sub) for p in r) for r in self.entries)
        )

    def to_json(self) -> dict[str, object]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "degree": self.degree,
            "entries": [[p.to_json() for p in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> FormMatrix:
        try:
            rows, cols, degree = int(data["rows"]), int(data["cols"]), int(data["degree"])
            ent = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"matrix: missing or malformed field ({exc})") from None
        if not isinstance(ent, list):
            raise InputError("entries: expected a list of rows")
        return cls(rows, cols, degree, tuple(tuple(MPoly.from_json(e) for e in r) for r in ent))

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(p) for p in r) + "]" for r in self.entries)


def constant_matrix(rows: Sequence[Sequence[object]]) -> FormMatrix:
    return FormMatrix.of([[MPoly.const(c) for c in r] for r in rows], 0)


def compose(f: FormMatrix, g: FormMatrix) -> FormMatrix:
    """``f`` followed by ``g``: the product ``f*g``."""
    if f.cols != g.rows:
        raise InputError(f"compose: shape mismatch {f.rows}x{f.cols} * {g.rows}x{g.cols}")
    ent = []
    for i in range(f.rows):
        row = []
        for j in range(g.cols):
            acc = MPoly()
            for k in range(f.cols):
                if f.entries[i][k] and g.entries[k][j]:
                    acc = acc + f.entries[i][k] * g.entries[k][j]
            row.append(acc)
        ent.append(tuple(row))
    return FormMatrix(f.rows, g.cols, f.degree + g.degree, tuple(ent))


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


# --- Kronecker representations ------------------------------------------------


@dataclass(frozen=True)
class KroneckerRep:
    """Coefficient slices of a linear ``a x b`` form matrix.

    ``slices[k][i][j]`` is the ``x_k``-coefficient of entry ``(i, j)``, so
    ``w * slices[k]`` is the image of the row vector ``w`` under arrow ``k``.
    """

    dims: tuple[int, int]
    slices: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @classmethod
    def from_matrix(cls, m: FormMatrix) -> KroneckerRep:
        if m.degree != 1:
            raise InputError("matrix: Kronecker data must be linear forms")
        slices = []
        for k in range(NVARS):
            e = tuple(1 if i == k else 0 for i in range(NVARS))
            slices.append(tuple(tuple(m.entries[i][j].coefficient(e) for j in range(m.cols)) for i in range(m.rows)))
        return cls((m.rows, m.cols), tuple(slices))

    def to_matrix(self) -> FormMatrix:
        a, b = self.dims
        ent = [[MPoly() for _ in range(b)] for _ in range(a)]
        for k, sl in enumerate(self.slices):
            for i in range(a):
                for j in range(b):
                    if sl[i][j]:
                        ent[i][j] = ent[i][j] + MPoly.var(k) * sl[i][j]
        return FormMatrix(a, b, 1, tuple(map(tuple, ent)))

    def images(self, w: Sequence[object]) -> list[list[Fraction]]:
        w = [to_fraction(x) for x in w]
        return [[sum((w[i] * sl[i][j] for i in range(self.dims[0])), Fraction(0)) for j in range(self.dims[1])]
                for sl in self.slices]


THETA = (-3, 2)


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: str  # "stable", "semistable" or "unstable"
    sub_dims: tuple[int, int] | None = None
    theta: int | None = None
    w: tuple[Fraction, Fraction] | None = None
    w_form: RatPoly | None = None  # the common root locus in (s:1) when w is irrational

    def to_json(self) -> dict[str, object]:
        out: dict[str, object] = {"verdict": self.verdict}
        if self.sub_dims is not None:
            out["witness"] = {
                "sub_dims": list(self.sub_dims),
                "theta": self.theta,
                "w": None if self.w is None else [fraction_str(x) for x in self.w],
                "w_form": None if self.w_form is None else self.w_form.to_json(),
            }
        return out


def _binary_minors(rep: KroneckerRep) -> list[tuple[Fraction, Fraction, Fraction]]:
    """2x2 minors of the stacked images of ``w = (s, t)``, as ``(s^2, st, t^2)`` coefficients."""
    e0 = rep.images((1, 0))
    e1 = rep.images((0, 1))
    vecs = [(u, v) for u, v in zip(e0, e1)]  # image = s*u + t*v
    out = []
    for (u1, v1), (u2, v2) in combinations(vecs, 2):
        for j1, j2 in combinations(range(rep.dims[1]), 2):
            # det [[s u1_j1 + t v1_j1, s u1_j2 + t v1_j2], [... row 2 ...]]
            ss = u1[j1] * u2[j2] - u1[j2] * u2[j1]
            tt = v1[j1] * v2[j2] - v1[j2] * v2[j1]
            st = u1[j1] * v2[j2] + v1[j1] * u2[j2] - u1[j2] * v2[j1] - v1[j2] * u2[j1]
            out.append((ss, st, tt))
    return out


def _common_root(forms: list[tuple[Fraction, Fraction, Fraction]]) -> tuple[bool, tuple | None, RatPoly | None]:
    """Whether binary quadratics share a projective root; a rational one if available."""
    forms = [f for f in forms if any(f)]
    if not forms:
        return True, (Fraction(1), Fraction(0)), None
    # root at infinity (s:t) = (1:0): every s^2 coefficient vanishes
    if all(f[0] == 0 for f in forms):
        return True, (Fraction(1), Fraction(0)), None
    g = RatPoly()
    for ss, st, tt in forms:
        g = poly_gcd(g, RatPoly((tt, st, ss))) if g else RatPoly((tt, st, ss)).monic()
    if g.degree < 1:
        return False, None, None
    rational = [r.exact for r in real_roots(g) if r.exact is not None]
    if rational:
        return True, (rational[0], Fraction(1)), None
    return True, None, g


def theta_stable_23(rep: KroneckerRep) -> StabilityVerdict:
    """King stability for ``theta = (-3, 2)`` on dimension vector ``(2, 3)``.

    Only ``(0,0)`` and ``(2,3)`` have ``theta = 0``, so semistable and stable agree.
    """
    if rep.dims != (2, 3) or len(rep.slices) != 4:
        raise InputError("rep: expected dimension vector (2,3) with four arrows")
    hit, w, form = _common_root(_binary_minors(rep))
    if hit:
        b = 1
        if w is not None:
            b = _rank(rep.images(w))
        return StabilityVerdict("unstable", (1, b), THETA[0] + THETA[1] * b, w, form)
    total = _rank([list(r) for sl in rep.slices for r in sl])
    if total < 3:
        return StabilityVerdict("unstable", (2, total), 2 * THETA[0] + THETA[1] * total)
    return StabilityVerdict("stable")


def maximal_minors(m: FormMatrix) -> list[MPoly]:
    if m.rows != 2:
        raise InputError("matrix: expected two rows")
    return [
        m.entries[0][i] * m.entries[1][j] - m.entries[0][j] * m.entries[1][i]
        for i, j in combinations(range(m.cols), 2)
    ]


@dataclass(frozen=True)
class Stratum:
    kind: str  # "curve", "torsion" or "unstable"
    plane: MPoly | None
    minors: tuple[MPoly, ...]
    stability: StabilityVerdict

    def to_json(self) -> dict[str, object]:
        return {
            "kind": self.kind,
            "plane": None if self.plane is None else str(self.plane),
            "minors": [str(p) for p in self.minors],
            "stability": self.stability.to_json(),
        }


def classify_stratum(m: FormMatrix) -> Stratum:
    if (m.rows, m.cols, m.degree) != (2, 3, 1):
        raise InputError("matrix: expected a 2x3 matrix of linear forms")
    verdict = theta_stable_23(KroneckerRep.from_matrix(m))
    minors = tuple(maximal_minors(m))
    if verdict.verdict == "unstable":
        return Stratum("unstable", None, minors, verdict)
    g = mgcd_all(minors)
    if g.degree >= 1:
        return Stratum("torsion", g, minors, verdict)
    return Stratum("curve", None, minors, verdict)


def expected_dim(k: int, dims: tuple[int, int]) -> int:
    a, b = dims
    if a < 1 or b < 1 or k < 0:
        raise InputError("dims: need a, b >= 1 and k >= 0")
    return k * a * b - a * a - b * b + 1


# --- resolutions --------------------------------------------------------------


def restrict_to_plane(m: FormMatrix, plane: MPoly) -> FormMatrix:
    """Reduce entries modulo a linear form by eliminating its lex-leading variable."""
    if plane.degree != 1 or not plane.is_homogeneous(1):
        raise InputError("plane: expected a nonzero linear form")
    e, c = plane.leading()
    k = e.index(1)
    solved = (MPoly.var(k) * c - plane) * (1 / c)  # x_k expressed in the other variables
    sub = [solved if i == k else MPoly.var(i) for i in range(NVARS)]
    return m.substitute(sub)


def check_complex(chain: Sequence[FormMatrix]) -> None:
    for f, g in zip(chain, chain[1:]):
        if not compose(f, g).is_zero():
            raise InputError("chain: not a complex")


def resolution_class(chain: Sequence[FormMatrix], twists: Sequence[int], n: int = 1) -> tuple[DimVector, KClass]:
    """Dimension vector and class of ``C^{r_0}(t_0) -> C^{r_1}(t_1) -> ...`` in ``A_n``."""
    if not chain:
        raise InputError("chain: empty")
    ranks = [chain[0].rows] + [m.cols for m in chain]
    if len(twists) != len(ranks):
        raise InputError(f"twists: expected {len(ranks)} values, got {len(twists)}")
    for f, g in zip(chain, chain[1:]):
        if f.cols != g.rows:
            raise InputError("chain: consecutive shapes do not match")
    for i, m in enumerate(chain):
        if twists[i + 1] - twists[i] != m.degree:
            raise InputError(f"twists: step {i} does not match the degree {m.degree} of its map")
    check_complex(chain)
    a = [0, 0, 0, 0]
    for r, tw in zip(ranks, twists):
        slot = -n - tw  # O(-n-slot)[slot]
        if not 0 <= slot <= 3:
            raise InputError(f"twists: O({tw}) is not a generator of A_{n}")
        a[3 - slot] += r
    d = DimVector(n, tuple(a))
    return d, class_of(d)


def koszul_chain() -> list[FormMatrix]:
    """Koszul resolution ``O(-4) -> O(-3)^4 -> O(-2)^6 -> O(-1)^4`` of ``O`` (augmentation omitted)."""
    levels = [[frozenset(c) for c in combinations(range(4), k)] for k in (4, 3, 2, 1)]
    chain = []
    for src, dst in zip(levels, levels[1:]):
        index = {s: j for j, s in enumerate(dst)}
        rows = []
        for s in src:
            row = [MPoly() for _ in dst]
            for pos, i in enumerate(sorted(s)):
                row[index[s - {i}]] = MPoly.var(i) * (-1) ** pos
            rows.append(row)
        chain.append(FormMatrix.of(rows, 1))
    return chain


# --- fixtures -----------------------------------------------------------------


def load_fixtures() -> dict[str, object]:
    """Canonical matrices and resolution chains shipped with the package."""
    text = resources.files("stabwall").joinpath("data/kronecker_fixtures.json").read_text()
    raw = json.loads(text)
    out: dict[str, object] = {"canonical": [FormMatrix.from_json(m) for m in raw["canonical"]]}
    for name, chain in raw["chains"].items():
        out[name] = {
            "maps": [FormMatrix.from_json(m) for m in chain["maps"]],
            "twists": chain["twists"],
            "augmentation": None if chain.get("augmentation") is None else FormMatrix.from_json(chain["augmentation"]),
        }
    return out
