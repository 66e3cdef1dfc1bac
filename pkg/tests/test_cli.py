import json

import pytest

from modpimage.cli import main
from modpimage.heckeio import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "--d", "2", "--m", "1", "--json")
    assert code == 0
    tab = json.loads(out)["tables"][0]
    assert tab["grid"] == [[4, 7, 13], [16, None, None]]


def test_tables_text(capsys):
    code, out, _ = run(capsys, "tables", "--d", "2", "3", "--m", "1")
    assert code == 0 and out.count("alpha") == 2


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--d", "2", "--m", "1", "--beta", "1", "--bruteforce", "--D", "full")
    rep = json.loads(out)
    assert code == 0 and rep["formula"] == rep["bruteforce"] == 7 and rep["agree"]
    code, out, _ = run(capsys, "census", "--p", "7", "--d", "1", "--m", "1", "--bruteforce")
    assert json.loads(out)["bruteforce"] == 49


def test_census_capacity(capsys):
    code, _, err = run(capsys, "census", "--d", "2", "--m", "2", "--alpha", "2", "--bruteforce", "--cap", "1000")
    assert code == 3 and json.loads(err)["error"] == "capacity"


def test_infer(capsys):
    code, out, _ = run(capsys, "infer", "--d", "2", "--m", "1", "--t", "13")
    rep = json.loads(out)
    assert code == 0 and rep["hypothesis"]["beta"] == 2 and rep["extension"]["degree"] == 4
    code, _, err = run(capsys, "infer", "--d", "2", "--m", "1", "--t", "8")
    err = json.loads(err)
    assert code == 2 and (err["below"], err["above"]) == (7, 13)


def test_ingest_and_synth(capsys, tmp_path):
    a = str(fixture_path("level67_b1000.json"))
    code, out, _ = run(capsys, "ingest", a)
    assert code == 0 and json.loads(out)["hypothesis"]["t"] == 7
    synth = tmp_path / "s.json"
    assert run(capsys, "synth", "--d", "2", "--m", "1", "--alpha", "1", "--count", "900", "--seed", "2",
               "--out", str(synth))[0] == 0
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, "ingest", a, str(synth), "--report", str(report))
    reps = json.loads(report.read_text())
    assert code == 0 and [r["observed"]["t_tilde"] for r in reps] == [7, 16]


def test_ingest_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"field":{"p":2,"d":2,"modulus":[1,1,1]},"m":1,"level":5,"weight":2,'
                   '"records":[{"ell":5,"trace":[[0,0],[0,0]]}]}')
    code, _, err = run(capsys, "ingest", str(bad))
    assert code == 2 and json.loads(err)["code"] == "ell-divides-Np"


@pytest.mark.parametrize("suite,count", [("modules", None), ("normal", None), ("appendix", 10), ("corollary", 4)])
def test_verify(capsys, suite, count):
    argv = ["verify", "--suite", suite]
    if count:
        argv += ["--count", str(count)]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and json.loads(out)["passed"]


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "nope"])
