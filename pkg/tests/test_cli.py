import json
from importlib import resources

import pytest

from twistkit import cli

FIXTURES = resources.files("twistkit") / "fixtures"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def fixture(name):
    return str(FIXTURES / name)


@pytest.mark.parametrize("name", ["locfree_trivial.json", "twist_valid.json", "path_constant.json",
                                  "horn_identity.json", "map_identity.json", "cocycle_conjugated.json"])
def test_valid_fixtures(capsys, name):
    code, out, _ = run(capsys, "validate", fixture(name))
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_dropped_component_fixture(capsys):
    code, out, _ = run(capsys, "validate", fixture("twist_dropped.json"))
    assert code == 1
    recs = json.loads(out)["records"]
    assert len(recs) == 1 and recs[0]["kind"] == "incomplete"


def test_malformed_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(open(fixture("twist_valid.json")).read()[:200])
    assert run(capsys, "validate", str(bad))[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2
    other = tmp_path / "other.json"
    other.write_text(json.dumps({"format": "something-else", "version": 1}))
    assert run(capsys, "validate", str(other))[0] == 2
    assert run(capsys, "validate", fixture("twist_valid.json"), "--kind", "path")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2


@pytest.mark.parametrize("kind", ["twist", "mc", "locfree", "path", "horn", "map", "cocycle"])
def test_gen_then_validate(capsys, tmp_path, kind):
    out = tmp_path / f"{kind}.json"
    assert run(capsys, "gen", "--kind", kind, "--seed", "3", "-o", str(out))[0] == 0
    assert run(capsys, "validate", str(out))[0] == 0


def test_gen_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "gen", "--kind", "twist", "--seed", "9", "-o", str(a))
    run(capsys, "gen", "--kind", "twist", "--seed", "9", "-o", str(b))
    assert a.read_text() == b.read_text()


def test_gen_out_of_range(capsys):
    assert run(capsys, "gen", "--openings", "7")[0] == 2
    assert run(capsys, "gen", "--field", "x")[0] == 2


def test_gen_over_prime_field(capsys, tmp_path):
    out = tmp_path / "m.json"
    assert run(capsys, "gen", "--kind", "mc", "--field", "5", "--simplex", "2", "-o", str(out))[0] == 0
    assert json.loads(out.read_text())["field"] == {"prime": 5}
    assert run(capsys, "validate", str(out))[0] == 0


@pytest.mark.parametrize("index", [0, 1, 2])
def test_fill_horn(capsys, tmp_path, index):
    h, g = tmp_path / "h.json", tmp_path / "g.json"
    run(capsys, "gen", "--kind", "horn", "--index", str(index), "--seed", "2", "-o", str(h))
    assert run(capsys, "fill-horn", str(h), "-o", str(g))[0] == 0
    assert run(capsys, "validate", str(g), "--kind", "gtt")[0] == 0


def test_fill_horn_green_needs_isomorphisms(capsys, tmp_path):
    code, _, _ = run(capsys, "fill-horn", fixture("horn_identity.json"), "--mode", "green", "-o",
                     str(tmp_path / "g.json"))
    assert code == 0
    h = tmp_path / "h.json"
    for seed in range(10):
        run(capsys, "gen", "--kind", "horn", "--seed", str(seed), "-o", str(h))
        code, out, _ = run(capsys, "fill-horn", str(h), "--mode", "green")
        if code == 1:
            assert json.loads(out)["records"][0]["kind"] == "refused"
            return
    pytest.fail("every random horn had isomorphism edges")


def test_strictify(capsys, tmp_path):
    m, s = tmp_path / "m.json", tmp_path / "s.json"
    run(capsys, "gen", "--kind", "map", "--seed", "4", "--amp", "2", "-o", str(m))
    assert run(capsys, "strictify", str(m), "-o", str(s))[0] == 0
    check = json.loads(s.read_text())["payload"]["check"]
    assert check["iii_isomorphism"] and check["iv_restriction"]


def test_weq_from_path(capsys, tmp_path):
    w = tmp_path / "w.json"
    assert run(capsys, "weq-from-path", fixture("path_constant.json"), "-o", str(w))[0] == 0
    assert run(capsys, "validate", str(w))[0] == 0


def test_convert_round_trip(capsys, tmp_path):
    m, n, m2 = tmp_path / "m.json", tmp_path / "n.json", tmp_path / "m2.json"
    run(capsys, "gen", "--kind", "mc", "--openings", "3", "--seed", "1", "-o", str(m))
    assert run(capsys, "convert", str(m), "--to", "nerve", "-o", str(n))[0] == 0
    assert run(capsys, "validate", str(n))[0] == 0
    assert run(capsys, "convert", str(n), "--to", "mc", "-o", str(m2))[0] == 0
    assert m.read_text() == m2.read_text()


@pytest.mark.parametrize("argv,first", [
    (["-p", "2", "--what", "faces"], "3 3 1"),
    (["-p", "2", "--what", "pair"], "7 9 3"),
    (["-p", "2", "--what", "bary", "-q", "0"], "7"),
    (["-p", "1", "--what", "prism"], "4 5 2"),
    (["-p", "2", "--what", "horn", "-i", "0"], "3 2 0"),
])
def test_enum(capsys, argv, first):
    code, out, _ = run(capsys, "enum", *argv)
    assert code == 0 and out.splitlines()[0] == first


def test_enum_listing_and_errors(capsys):
    code, out, _ = run(capsys, "enum", "--what", "faces", "-p", "1", "--list")
    assert out.splitlines()[1:] == ["0\t0", "0\t1", "1\t01"]
    assert run(capsys, "enum", "--what", "faces", "-p", "-1")[0] == 2
    assert run(capsys, "enum", "--what", "horn", "-p", "2")[0] == 2


def test_threads_env(monkeypatch):
    monkeypatch.setenv("TWISTKIT_THREADS", "3")
    assert cli.threads() == 3
    monkeypatch.setenv("TWISTKIT_THREADS", "x")
    assert cli.threads() == 1


def _write(path, kind, payload):
    from twistkit import serialize as sz
    from twistkit.linalg import field_from_spec
    path.write_text(sz.dumps(sz.envelope(field_from_spec("QQ"), kind, payload)))
    return str(path)


def test_identity_horn_fills_with_identities(capsys, tmp_path):
    from twistkit import homalg as ha
    from twistkit import serialize as sz
    out = tmp_path / "g.json"
    assert run(capsys, "fill-horn", fixture("horn_identity.json"), "-o", str(out))[0] == 0
    K, kind, payload = sz.read(str(out))
    L = sz.decode(K, kind, payload)
    c = L.central()
    assert all(c.label(I) == ha.identity(c.objects[0]) for I in [(0, 1), (0, 2), (1, 2)])
    assert c.label((0, 1, 2)).is_zero()


def test_mismatched_horn(capsys, tmp_path):
    from twistkit import gtt
    from twistkit import homalg as ha
    from twistkit import serialize as sz
    from twistkit.linalg import field_from_spec
    QQ = field_from_spec("QQ")
    A, B = ha.span(QQ, 1, 0), ha.Complex.concentrated(QQ, 1, 0)
    e1 = gtt.edge_labelling(A, A, ha.identity(A), gtt.trivial(A), gtt.trivial(A))
    e2 = gtt.edge_labelling(B, B, ha.identity(B), gtt.trivial(B), gtt.trivial(B))
    f = _write(tmp_path / "h.json", "horn", {"faces": [sz.enc_gtt(e1), sz.enc_gtt(e2)], "index": 1})
    assert run(capsys, "fill-horn", f, "-o", str(tmp_path / "g.json"))[0] == 1
    assert run(capsys, "validate", f)[0] == 1
    assert not (tmp_path / "g.json").exists()


def test_strictify_identity_and_non_quasi_iso(capsys, tmp_path):
    from twistkit import homalg as ha
    from twistkit import serialize as sz
    from twistkit.linalg import field_from_spec
    C = ha.Complex.concentrated(field_from_spec("QQ"), 1, 0)
    f = _write(tmp_path / "i.json", "map", sz.enc_qmap(ha.identity(C)))
    out = tmp_path / "s.json"
    assert run(capsys, "strictify", f, "-o", str(out))[0] == 0
    payload = json.loads(out.read_text())["payload"]
    assert payload["decl_A"] == [] and payload["decl_B"] == []
    z = _write(tmp_path / "z.json", "map", sz.enc_qmap(ha.zero_map(C, C)))
    assert run(capsys, "strictify", z)[0] == 1


def test_invalid_path_and_non_mc(capsys, tmp_path):
    doc = json.loads(open(fixture("path_constant.json")).read())
    entry = next(e for e in doc["payload"]["maps"] if len(e["tuple"]) == 2
                 and e["tuple"][0][1] != e["tuple"][1][1] and e["map"]["comps"])
    entry["map"]["comps"] = {}
    bad = tmp_path / "p.json"
    bad.write_text(json.dumps(doc))
    assert run(capsys, "weq-from-path", str(bad))[0] == 1
    m = tmp_path / "m.json"
    for seed in range(10):
        run(capsys, "gen", "--kind", "mc", "--seed", str(seed), "-o", str(m))
        doc = json.loads(m.read_text())
        live = [e for e in doc["payload"]["maps"] if len(e["tuple"]) == 2 and e["map"]["comps"]]
        if live:
            live[0]["map"]["comps"] = {}
            m.write_text(json.dumps(doc))
            assert run(capsys, "convert", str(m), "--to", "nerve")[0] == 1
            return
    pytest.fail("no generated MC element had a live edge")


def test_single_opening_and_single_simplex(capsys, tmp_path):
    m = tmp_path / "m.json"
    assert run(capsys, "gen", "--kind", "mc", "--openings", "1", "-o", str(m))[0] == 0
    assert json.loads(m.read_text())["payload"]["maps"] == []
    s, n = tmp_path / "s.json", tmp_path / "n.json"
    assert run(capsys, "gen", "--kind", "mc", "--simplex", "3", "-o", str(s))[0] == 0
    assert run(capsys, "convert", str(s), "--to", "nerve", "-o", str(n))[0] == 0
    assert run(capsys, "validate", str(n))[0] == 0
