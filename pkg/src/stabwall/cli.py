"""Command-line interface.

Exit status: 0 on success (mathematical outcomes such as "unstable" are
ordinary results), 2 on input errors, 3 on internal invariant violations.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence, TypeVar

import click

from . import __version__
from .charge import StabParams, charge as charge_of, in_quiver_region, slope, support_margin
from .errors import ChargeVanishes, DegenerateError, InputError, InvariantViolation, NotRepresentable, StabwallError
from .kclass import KClass, conj, dual_class, hilbert_poly, line_bundle, twist
from .kronecker import FormMatrix, classify_stratum, load_fixtures
from .quiverheart import DimVector, class_of, default_rep, reverse, scan_walls, stable_range
from .ratpoly import Interval, RatPoly, fraction_str, real_roots, to_fraction
from .svg import Annotation, Viewport, emit_svg
from .wallmap import (
    WallCurve,
    general_wall,
    intersect_walls,
    sample_component,
    wall_at_u0,
    wall_between,
    wall_search_region,
)

T = TypeVar("T")
R = TypeVar("R")


def _threads() -> int:
    raw = os.environ.get("STABWALL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"STABWALL_THREADS: expected an integer, got {raw!r}") from None


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Order-preserving map, parallel up to ``STABWALL_THREADS`` workers."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# --- output -------------------------------------------------------------------


def dumps(data: object) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        click.echo(text, nl=False)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _stamp(data: dict, stamp: bool) -> dict:
    if stamp:
        data = dict(data, version=__version__)
    return data


# --- config -------------------------------------------------------------------


def read_config(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; ``cmd.key`` targets one subcommand."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line {lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _default_map(group: click.Group, conf: dict[str, str]) -> dict[str, dict[str, object]]:
    dm: dict[str, dict[str, object]] = {}
    for name, cmd in group.commands.items():
        params = {p.name: p for p in cmd.params}
        sub: dict[str, object] = {}
        for key, val in conf.items():
            scope, _, bare = key.rpartition(".")
            if scope and scope != name:
                continue
            if bare in params:
                p = params[bare]
                sub[bare] = val.split(",") if p.multiple else val
        if sub:
            dm[name] = sub
    return dm


# --- parsing helpers ----------------------------------------------------------


def _klass(text: str, field: str) -> KClass:
    try:
        return KClass.parse(text)
    except InputError as exc:
        raise InputError(f"{field}: {str(exc).removeprefix('class: ')}") from None


def _window(text: str | None) -> Interval | None:
    return None if text is None else Interval.parse(text)


# --- main group ---------------------------------------------------------------


class _Group(click.Group):
    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (InputError, NotRepresentable) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)
        except InvariantViolation as exc:
            click.echo(f"internal error: {exc}", err=True)
            ctx.exit(3)
        except StabwallError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)
        except (click.exceptions.Exit, click.ClickException, click.exceptions.Abort):
            raise
        except Exception as exc:  # noqa: BLE001 - anything else is a bug
            click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
            ctx.exit(3)


@click.group(cls=_Group)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="key=value defaults file.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Walls, chambers and quiver-heart scans for one-dimensional classes on P^3."""
    if config_path:
        try:
            ctx.default_map = _default_map(main, read_config(config_path))
        except InputError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)


_stamp_opt = click.option("--stamp", is_flag=True, help="Include the version in JSON output.")
_out_opt = click.option("--output", "-o", default=None, help="Output file (default stdout).")


@main.command()
@click.option("--v", "v", required=True, help="Chern character, e.g. 0,0,3,-5.")
@click.option("--at", "at", default=None, help="Evaluate chi_t and its derivatives at t.")
@_out_opt
@_stamp_opt
def hilbert(v: str, at: str | None, output: str | None, stamp: bool) -> None:
    """Hilbert polynomial chi_t(v)."""
    k = _klass(v, "v")
    p = hilbert_poly(k)
    data: dict[str, object] = {"class": k.to_json(), "poly": p.to_json(), "text": str(p)}
    if at is not None:
        t = to_fraction(at, "at")
        data["at"] = fraction_str(t)
        data["values"] = [fraction_str(p.derivative(i)(t)) for i in range(4)]
    _write(dumps(_stamp(data, stamp)), output)


@main.command()
@click.option("--v", "v", required=True)
@click.option("--family", type=click.Choice(["euler", "tilt1", "tilt2", "doubletilt", "tu-plane"]), default="euler")
@click.option("--t", "t", default="0")
@click.option("--u", "u", default="0")
@click.option("--alpha", default=None, help='alpha, or "sqrt(p/q)" for an exact square root.')
@click.option("--beta", default=None)
@click.option("--s", "s", default=None)
@_out_opt
@_stamp_opt
def charge(v, family, t, u, alpha, beta, s, output, stamp) -> None:
    """Central charge and slope of v."""
    k = _klass(v, "v")
    params = StabParams.build(family, t=t, u=u, alpha=alpha, beta=beta, s=s)
    z = charge_of(params, k)
    try:
        sl = slope(params, k).to_json()
    except ChargeVanishes:
        sl = None
    data = {"class": k.to_json(), "family": family, "charge": z.to_json(), "slope": sl,
            "in_half_plane": z.in_half_plane()}
    _write(dumps(_stamp(data, stamp)), output)


def _wall_report(w: WallCurve, window: Interval | None) -> dict[str, object]:
    out = w.to_json()
    try:
        roots = wall_at_u0(w.parent, w.actor, window)
        out["u0_roots"] = [r.to_json() for r in roots]
    except DegenerateError as exc:
        out["u0_roots"] = []
        out["note"] = str(exc)
    return out


def _curves_csv(curves: Sequence[WallCurve], vp: Viewport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["wall", "component", "t", "u"])
    for i, w in enumerate(curves):
        for j, comp in enumerate(w.components):
            for t, u in sample_component(w, comp, vp.t_min, vp.t_max):
                wr.writerow([i, j, f"{t:.6g}", f"{u:.6g}"])
    return buf.getvalue()


def _build_wall(v: KClass, a: KClass) -> WallCurve:
    return wall_between(v, a) if v.is_one_dimensional() else general_wall(v, a)


@main.command()
@click.option("--v", "v", required=True, help="Parent class.")
@click.option("--a", "actors", multiple=True, required=True, help="Actor class (repeatable).")
@click.option("--window", default=None, help="t-window for u=0 roots, e.g. 0,1.")
@click.option("--svg", "svg_path", default=None, help="Also write an SVG drawing here.")
@click.option("--csv", "csv_path", default=None, help="Also write sampled curves as CSV here.")
@click.option("--region/--no-region", default=False, help="Shade the quiver region in the SVG.")
@click.option("--tmin", default="-3")
@click.option("--tmax", default="1")
@click.option("--umax", default="1.5")
@_out_opt
@_stamp_opt
def wall(v, actors, window, svg_path, csv_path, region, tmin, tmax, umax, output, stamp) -> None:
    """Numerical walls of the actors against v."""
    k = _klass(v, "v")
    acts = [_klass(a, "a") for a in actors]
    win = _window(window)
    curves = pmap(lambda a: _build_wall(k, a), acts)
    data: dict[str, object] = {"parent": k.to_json(), "walls": [_wall_report(w, win) for w in curves]}
    pts = []
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            try:
                for p in intersect_walls(curves[i], curves[j]):
                    pts.append({"walls": [i, j], "point": p.to_json()})
            except StabwallError as exc:
                pts.append({"walls": [i, j], "note": str(exc)})
    data["intersections"] = pts
    vp = Viewport(float(to_fraction(tmin, "tmin")), float(to_fraction(tmax, "tmax")), float(to_fraction(umax, "umax")))
    if svg_path:
        notes = []
        for w in curves:
            try:
                for r in wall_at_u0(w.parent, w.actor):
                    notes.append(Annotation(r.midpoint, 0.0, f"({r.midpoint:.3f},0)"))
            except DegenerateError:
                pass
        Path(svg_path).write_text(emit_svg(curves, region=region, annotations=notes, viewport=vp), encoding="utf-8")
    if csv_path:
        Path(csv_path).write_text(_curves_csv(curves, vp), encoding="utf-8")
    _write(dumps(_stamp(data, stamp)), output)


def _load_subs(path: str, n: int) -> list[DimVector]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"subs: cannot read {path}: {exc}") from None
    if isinstance(raw, dict):
        raw = raw.get("subs")
    if not isinstance(raw, list):
        raise InputError("subs: expected a list of dimension vectors")
    out = []
    for item in raw:
        if isinstance(item, str):
            out.append(DimVector.parse(item, n))
        elif isinstance(item, list) and all(isinstance(x, int) for x in item):
            out.append(DimVector(n, tuple(item)))
        else:
            raise InputError(f"subs: bad entry {item!r}")
    return out


def _scan_table(parent: DimVector, hits, rng) -> str:
    lines = [f"parent {parent} in A_{parent.n}", f"{'sub':<16}{'t':<14}{'side':<12}note"]
    for h in hits:
        note = "numerical-only" if h.numerical_only else ""
        lines.append(f"{str(h.sub):<16}{h.t.midpoint:<14.6f}{h.side:<12}{note}".rstrip())
    if rng is not None:
        pieces = ", ".join(str(p) for p in rng.pieces) or "empty"
        lines.append(f"stable for t in {pieces} ({rng.model} model)")
        if rng.breakpoint is not None:
            subs = " ".join(str(d) for d in rng.destabilizers)
            lo = rng.window.lo
            edge = " (window start)" if lo is not None and rng.breakpoint.midpoint == float(lo) else ""
            lines.append(f"breakpoint {rng.breakpoint.midpoint:.6f}{edge} destabilized by {subs}")
        if rng.equal_slope_points:
            pts = ", ".join(f"{r.midpoint:.6f}" for r in rng.equal_slope_points)
            lines.append(f"equal slopes at t = {pts}")
    return "\n".join(lines) + "\n"


@main.command()
@click.option("--parent", required=True, help="Dimension vector a3,a2,a1,a0.")
@click.option("--heart", default=1, type=int, help="Heart index n of A_n.")
@click.option("--window", default=None, help="t-window inside (n-1, n]; default the whole interval.")
@click.option("--subs", "subs_path", default=None, help="JSON file listing candidate subvectors.")
@click.option("--range/--no-range", "with_range", default=None,
              help="Report the stable range (default: only with a representation model or --subs).")
@click.option("--realizable", is_flag=True, help="Drop hits that no subrepresentation realizes.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@_out_opt
@_stamp_opt
def scan(parent, heart, window, subs_path, with_range, realizable, fmt, output, stamp) -> None:
    """Slope-equality roots of candidate subobjects of a quiver-heart object."""
    p = DimVector.parse(parent, heart)
    win = _window(window)
    subs = _load_subs(subs_path, heart) if subs_path else None
    hits = scan_walls(p, win, subs=subs)
    if realizable:
        hits = [h for h in hits if not h.numerical_only]
    if with_range is None:
        with_range = subs is not None or default_rep(p) is not None
    rng = stable_range(p, win, subs=subs) if with_range else None
    if fmt == "text":
        _write(_scan_table(p, hits, rng), output)
        return
    data: dict[str, object] = {
        "parent": p.to_json(),
        "class": class_of(p).to_json(),
        "hits": [h.to_json() for h in hits],
    }
    if rng is not None:
        data["stable_range"] = rng.to_json()
    _write(dumps(_stamp(data, stamp)), output)


@main.command()
@click.option("--v", "v", default=None, help="One-dimensional class: report the wall search region.")
@click.option("--t", "t", default=None)
@click.option("--u", "u", default=None)
@_out_opt
@_stamp_opt
def region(v, t, u, output, stamp) -> None:
    """Search region for walls and quiver-region membership."""
    data: dict[str, object] = {}
    if v is not None:
        data["search_region"] = wall_search_region(_klass(v, "v")).to_json()
    if t is not None:
        tt = to_fraction(t, "t")
        data["t"] = fraction_str(tt)
        if u is not None:
            data["u"] = fraction_str(to_fraction(u, "u"))
            data["in_quiver_region"] = in_quiver_region(tt, to_fraction(u, "u"))
        try:
            m = support_margin(tt)
            data["support_margin"] = round(m.margin, 12)
        except StabwallError as exc:
            data["support_margin"] = None
            data["note"] = str(exc)
    if not data:
        raise InputError("region: give --v and/or --t")
    _write(dumps(_stamp(data, stamp)), output)


@main.command()
@click.option("--v", "v", default=None, help="Class to dualize.")
@click.option("--dimvec", default=None, help="Dimension vector to reverse.")
@click.option("--heart", default=1, type=int)
@_out_opt
@_stamp_opt
def dual(v, dimvec, heart, output, stamp) -> None:
    """Derived-dual class and dimension-vector reversal."""
    data: dict[str, object] = {}
    if v is not None:
        k = _klass(v, "v")
        d = dual_class(k)
        data.update(
            {"class": k.to_json(), "dual_class": d.to_json(), "dual_twisted": twist(d, 1).to_json(),
             "conj": conj(k).to_json()}
        )
    if dimvec is not None:
        dv = DimVector.parse(dimvec, heart)
        rv = reverse(dv)
        data["dimvec"] = dv.to_json()
        data["reverse"] = rv.to_json()
        data["reverse_class"] = class_of(rv).to_json()
    if not data:
        raise InputError("dual: give --v and/or --dimvec")
    _write(dumps(_stamp(data, stamp)), output)


@main.group()
def kronecker() -> None:
    """Kronecker-module stability and strata."""


@kronecker.command("check")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@_out_opt
def kronecker_check(path: str, fmt: str, output: str | None) -> None:
    """Classify a 2x3 matrix of linear forms given as JSON."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix: invalid JSON ({exc})") from None
    mats = raw if isinstance(raw, list) else [raw]
    results = [classify_stratum(FormMatrix.from_json(m)) for m in mats]
    if fmt == "json":
        _write(dumps([r.to_json() for r in results]), output)
        return
    lines = []
    for r in results:
        line = f"{r.stability.verdict} {r.kind}"
        if r.plane is not None:
            line += f" plane {r.plane} = 0"
        wit = r.stability.to_json().get("witness")
        if wit:
            line += f" witness sub_dims={wit['sub_dims']} w={wit['w']}"
        lines.append(line)
    _write("\n".join(lines) + "\n", output)


@kronecker.command("canonical")
@_out_opt
def kronecker_canonical(output: str | None) -> None:
    """Classify the shipped canonical matrices."""
    mats = load_fixtures()["canonical"]
    _write(dumps([dict(classify_stratum(m).to_json(), index=i) for i, m in enumerate(mats, 1)]), output)


# --- figures ------------------------------------------------------------------

O_LAMBDA = KClass(0, 1, Fraction(-1, 2), Fraction(1, 6))
O_Q = KClass(0, 2, -2, Fraction(4, 3))
I_P_LAMBDA_1 = KClass(0, 1, Fraction(1, 2), Fraction(-5, 6))


def _preset(name: str):
    if name == "quartic":
        v = KClass(0, 0, 4, -7)
        i_c = KClass(-1, 0, 4, -7)
        curves = [
            wall_between(v, line_bundle(0)),
            wall_between(v, O_Q),
            general_wall(O_Q, line_bundle(0)),
            general_wall(i_c, -line_bundle(-2)),
        ]
        names = ["W1", "W2", "W3", "W4"]
        notes = []
        s_pts = [p for p in intersect_walls(curves[0], curves[1]) if 0 < p.t.midpoint < 1]
        for p in s_pts:
            notes.append(Annotation(p.t.midpoint, p.u, "S"))
        for r in wall_at_u0(v, O_Q):
            if r.compare(0) > 0:
                notes.append(Annotation(r.midpoint, 0.0, "T"))
        # W2 meets the left hyperbola (t+1)^2 - 2u^2 - 1 = 0 of the first cell
        w2, x = curves[1], RatPoly.x()
        meet = w2.num * 4 - w2.den * ((x + 1) ** 2 - 1)
        for r in real_roots(meet, Interval.open(0, Fraction(1, 2))):
            notes.append(Annotation(r.midpoint, math.sqrt(max(float(w2.u_squared(r.midpoint)), 0.0)), "P"))
        return curves, names, notes, Viewport(-1.5, 1.0, 1.0), True
    if name == "v3":
        v = KClass(0, 0, 3, -5)
        curves = [wall_between(v, line_bundle(0)), wall_between(v, O_LAMBDA)]
        return curves, ["W1", "W2"], _u0_notes(curves), Viewport(-3.0, 1.0, 1.5), False
    if name == "v3-dual":
        v = KClass(0, 0, 3, -4)
        curves = [wall_between(v, line_bundle(-3)), wall_between(v, I_P_LAMBDA_1)]
        return curves, ["W1'", "W2'"], _u0_notes(curves), Viewport(-2.0, 2.0, 1.5), False
    raise InputError(f"preset: unknown preset {name!r}")


def _u0_notes(curves: Sequence[WallCurve]) -> list[Annotation]:
    notes = []
    for w in curves:
        for r in wall_at_u0(w.parent, w.actor):
            notes.append(Annotation(r.midpoint, 0.0, f"({r.midpoint:.3f},0)"))
    return notes


@main.command()
@click.option("--preset", type=click.Choice(["quartic", "v3", "v3-dual"]), required=True)
@click.option("--format", "fmt", type=click.Choice(["svg", "json", "csv"]), default="svg")
@_out_opt
def figure(preset: str, fmt: str, output: str | None) -> None:
    """Preset wall diagrams."""
    curves, names, notes, vp, region = _preset(preset)
    if fmt == "svg":
        _write(emit_svg(curves, region=region, annotations=notes, viewport=vp, labels=names), output)
    elif fmt == "csv":
        _write(_curves_csv(curves, vp), output)
    else:
        data = {
            "preset": preset,
            "walls": [dict(w.to_json(), name=n) for w, n in zip(curves, names)],
            "points": [{"label": a.label, "t": round(a.t, 9), "u": round(a.u, 9)} for a in notes],
        }
        _write(dumps(data), output)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
