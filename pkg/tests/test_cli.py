import json

import pytest
from click.testing import CliRunner

from stabwall import cli
from stabwall.errors import InvariantViolation
from stabwall.kclass import KClass
from stabwall.ratpoly import RatPoly


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args, env=None):
        return runner.invoke(cli.main, list(args), env=env, catch_exceptions=False)

    return go


def test_hilbert(run):
    r = run("hilbert", "--v", "0,0,3,-5", "--at", "1")
    assert r.exit_code == 0
    data = json.loads(r.output)
    assert RatPoly.from_json(data["poly"]) == RatPoly([1, 3]) and data["values"][:2] == ["4", "3"]


def test_wall_with_svg_and_csv(run, tmp_path):
    svg, csv_ = tmp_path / "out.svg", tmp_path / "out.csv"
    r = run("wall", "--v", "0,0,3,-5", "--a", "1,0,0,0", "--svg", str(svg), "--csv", str(csv_))
    assert r.exit_code == 0
    (w,) = json.loads(r.output)["walls"]
    assert w["kind"] == "Type1"
    roots = [x["approx"] for x in w["u0_roots"]]
    for end in (-1.324, 0.349):
        assert any(abs(r - end) < 2e-3 for r in roots)
    text = svg.read_text()
    assert "(-1.324,0)" in text and "(0.349,0)" in text
    rows = csv_.read_text().splitlines()
    assert rows[0] == "wall,component,t,u" and len(rows) > 500
    digits = [c.split("e")[0].replace("-", "").replace(".", "").lstrip("0") for row in rows[1:50] for c in row.split(",")[2:]]
    assert all(len(d) <= 6 for d in digits)


def test_wall_json_round_trips(run):
    r = run("wall", "--v", "0,0,4,-7", "--a", "0,2,-2,4/3")
    w = json.loads(r.output)["walls"][0]
    assert KClass.from_json(w["actor"]) == KClass(0, 2, -2, "4/3")
    assert w["u0_roots"][-1]["interval"] == ["1/2", "1/2"]


def test_scan_two_wall_report(run, tmp_path):
    subs = tmp_path / "subs.json"
    subs.write_text('["1,4,6,4", [1, 4, 6, 3]]')
    r = run("scan", "--parent", "1,6,9,4", "--heart", "1", "--window", "0,1", "--subs", str(subs))
    data = json.loads(r.output)
    assert [h["sub"] for h in data["hits"]] == [[1, 4, 6, 4], [1, 4, 6, 3]]
    r = run("scan", "--parent", "1,6,9,4", "--heart", "1", "--window", "0,1")
    subs_found = {tuple(h["sub"]) for h in json.loads(r.output)["hits"]}
    assert {(1, 4, 6, 4), (1, 4, 6, 3)} <= subs_found


def test_scan_text_table(run):
    r = run("scan", "--parent", "1,4,6,1", "--format", "text", "--realizable")
    assert r.exit_code == 0
    assert "breakpoint 0.540833" in r.output and "[0,1,3,0]" in r.output


def test_region_and_dual(run):
    r = run("region", "--t", "-1/2", "--u", "7/10")
    assert json.loads(r.output)["in_quiver_region"] is True
    r = run("region", "--t", "0", "--u", "1/10")
    assert json.loads(r.output)["in_quiver_region"] is False
    r = run("dual", "--v", "0,0,3,-5", "--dimvec", "1464")
    data = json.loads(r.output)
    assert data["dual_twisted"] == ["0", "0", "3", "-4"]
    assert data["reverse"] == {"n": 0, "a": [4, 6, 4, 1]}


def test_kronecker_commands(run, tmp_path):
    r = run("kronecker", "canonical")
    kinds = [x["kind"] for x in json.loads(r.output)]
    assert kinds == ["curve"] * 8 + ["torsion"]
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"rows": 2, "cols": 3, "degree": 1,
                             "entries": [[{"1000": "1"}, {"0100": "1"}, {"0010": "1"}], [{}, {}, {}]]}))
    r = run("kronecker", "check", str(m))
    assert r.exit_code == 0 and r.output.startswith("unstable unstable")


def test_figure_presets(run, tmp_path):
    out = tmp_path / "q.svg"
    assert run("figure", "--preset", "quartic", "-o", str(out)).exit_code == 0
    doc = out.read_text()
    assert doc.count('class="wall"') == 4 and 'class="quiver-region"' in doc
    assert ">S<" in doc and ">T<" in doc
    pts = {p["label"]: p for p in json.loads(run("figure", "--preset", "quartic", "--format", "json").output)["points"]}
    assert abs(pts["S"]["t"] - 0.189) < 2e-3 and abs(pts["S"]["u"] - 0.608) < 2e-3 and pts["T"]["t"] == 0.5
    for preset in ("v3", "v3-dual"):
        assert run("figure", "--preset", preset).exit_code == 0


@pytest.mark.parametrize(
    "args, field",
    [
        (["hilbert", "--v", "0,0,3,x"], "ch3"),
        (["hilbert", "--v", "0,0,3"], "v"),
        (["charge", "--v", "0,0,3,-5", "--t", "1/0"], "t"),
        (["scan", "--parent", "1,4,6,4", "--window", "2,3"], "window"),
        (["scan", "--parent", "1,4,6"], "dimvec"),
    ],
)
def test_input_errors_exit_2(run, args, field):
    r = CliRunner().invoke(cli.main, args)
    assert r.exit_code == 2
    assert field in r.output and r.output.count("\n") == 1


def test_invariant_violation_exits_3(monkeypatch):
    def boom(*a, **k):
        raise InvariantViolation("broken")

    monkeypatch.setattr(cli, "hilbert_poly", boom)
    r = CliRunner().invoke(cli.main, ["hilbert", "--v", "1,0,0,0"])
    assert r.exit_code == 3 and "broken" in r.output


def test_config_file_and_flag_precedence(run, tmp_path):
    conf = tmp_path / "c.conf"
    conf.write_text("# defaults\nv = 0,0,3,-5\nhilbert.at = 2\ncharge.family = tu-plane\n")
    data = json.loads(run("--config", str(conf), "hilbert").output)
    assert data["at"] == "2" and data["poly"] == ["1", "3"]
    data = json.loads(run("--config", str(conf), "hilbert", "--at", "3").output)
    assert data["at"] == "3"
    data = json.loads(run("--config", str(conf), "charge", "--t", "1").output)
    assert data["family"] == "tu-plane"
    bad = tmp_path / "bad.conf"
    bad.write_text("novalue\n")
    r = CliRunner().invoke(cli.main, ["--config", str(bad), "hilbert", "--v", "1,0,0,0"])
    assert r.exit_code == 2 and "config line 1" in r.output


def test_determinism_and_stamp(run):
    a = run("wall", "--v", "0,0,4,-7", "--a", "1,0,0,0", "--a", "0,2,-2,4/3").output
    b = run("wall", "--v", "0,0,4,-7", "--a", "1,0,0,0", "--a", "0,2,-2,4/3",
            env={"STABWALL_THREADS": "4"}).output
    assert a == b and a.endswith("}\n") and "version" not in a
    assert '"version": "0.1.0"' in run("hilbert", "--v", "1,0,0,0", "--stamp").output


def test_bad_thread_count(run):
    r = CliRunner().invoke(cli.main, ["wall", "--v", "0,0,3,-5", "--a", "1,0,0,0", "--a", "0,1,0,0"],
                           env={"STABWALL_THREADS": "many"})
    assert r.exit_code == 2 and "STABWALL_THREADS" in r.output
