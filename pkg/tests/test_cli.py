import itertools
import json

import pytest

from kelleyscope.cli import main
from kelleyscope.errors import DomainError
from kelleyscope.report import Report


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def b2(tmp_path):
    return write(tmp_path, "b2.json", {"ground": 2, "elements": [[0], [1], [0, 1]]})


def test_inum_atoms4(tmp_path, capsys):
    inst = write(tmp_path, "a4.json", {"ground": 4, "elements": [[0], [1], [2], [3]]})
    code, out, _ = run(["inum", inst, "--oracle-check"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["value"] == "1/4"
    assert rep["result"]["bruteforce"]["value"] == "1/4"
    assert rep["result"]["oracle_check"]["agrees"]


def test_inum_singleton_and_brute(tmp_path, capsys):
    inst = write(tmp_path, "s.json", {"ground": 3, "elements": [[0, 2]]})
    code, out, _ = run(["inum", inst, "--brute", "3"], capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["value"] == "1/1" and res["bruteforce"]["value"] == "1/1"


def test_inum_empty_element_exit_2(tmp_path, capsys):
    inst = write(tmp_path, "e.json", {"ground": 2, "elements": [[0], []]})
    code, _, err = run(["inum", inst], capsys)
    assert code == 2 and "elements[1]" in err


def test_inum_empty_family_convention(tmp_path, capsys):
    inst = write(tmp_path, "e.json", {"ground": 2, "elements": []})
    code, out, _ = run(["inum", inst], capsys)
    assert code == 0 and json.loads(out)["result"]["value"] == "1/1"


def test_inum_malformed(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["inum", str(p)], capsys)[0] == 2
    assert run(["inum", str(tmp_path / "missing.json")], capsys)[0] == 2
    inst = write(tmp_path, "g.json", {"elements": [[0]]})
    code, _, err = run(["inum", inst], capsys)
    assert code == 2 and "ground" in err


def test_inum_budget_exit_3(tmp_path, capsys):
    inst = write(tmp_path, "k.json", {"ground": 6, "elements": [[a, b, c] for a in range(6) for b in range(a + 1, 6) for c in range(b + 1, 6)]})
    code, _, err = run(["inum", inst, "--brute", "6", "--budget", "100"], capsys)
    assert code == 3 and "budget" in err


def test_mn_exact(b2, capsys):
    code, out, _ = run(["mn", b2, "--epsilon", "2/5", "--mode", "exact"], capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["k"] == 2 and res["optimal"] and res["epsilon"] == "2/5"


def test_mn_epsilon_out_of_range(b2, capsys):
    assert run(["mn", b2, "--epsilon", "1/1"], capsys)[0] == 2
    assert run(["mn", b2, "--epsilon", "0.4"], capsys)[0] == 2


def test_mn_singleton(tmp_path, capsys):
    inst = write(tmp_path, "s.json", {"ground": 2, "elements": [[1]]})
    for eps in ("1/100", "1/2", "99/100"):
        code, out, _ = run(["mn", inst, "--epsilon", eps, "--mode", "greedy"], capsys)
        assert code == 0 and json.loads(out)["result"]["k"] == 1


def test_mn_budget_exit_3(tmp_path, capsys):
    triples = [list(t) for t in itertools.combinations(range(6), 3)]
    inst = write(tmp_path, "t6.json", {"ground": 6, "elements": triples})
    code, _, err = run(["mn", inst, "--epsilon", "2/5", "--budget", "3"], capsys)
    assert code == 3 and "greedy" in err


def two_point_cover():
    return {
        "classes": [[0, 2], [1]],
        "thresholds": ["1/1", "1/1"],
        "witnesses": [["1/1", "0/1"], ["0/1", "1/1"]],
    }


def test_kelley_verify_two_point_masses(b2, tmp_path, capsys):
    cover = write(tmp_path, "c.json", two_point_cover())
    code, out, _ = run(["kelley-verify", b2, cover], capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["measure"] == ["2/3", "1/3"]
    assert res["strictly_positive"] and res["covers_all"]
    assert res["class_verdicts"] == [True, True]


def test_kelley_verify_bad_index(b2, tmp_path, capsys):
    c = two_point_cover()
    c["classes"][1] = [7]
    assert run(["kelley-verify", b2, write(tmp_path, "c.json", c)], capsys)[0] == 2
    c = two_point_cover()
    c["classes"] = [[0]]
    c["thresholds"] = ["1/1"]
    c["witnesses"] = [["1/1", "0/1"]]
    c["covers_all"] = True
    assert run(["kelley-verify", b2, write(tmp_path, "c2.json", c)], capsys)[0] == 2


def test_kelley_verify_tampered_witness(b2, tmp_path, capsys):
    c = two_point_cover()
    c["witnesses"][1] = ["1/1", "0/1"]
    code, out, err = run(["kelley-verify", b2, write(tmp_path, "c.json", c)], capsys)
    assert code == 4 and "class 1" in err
    assert json.loads(out)["result"]["failed_classes"] == [1]


def test_mn_report_feeds_kelley_verify(b2, tmp_path, capsys):
    rep = tmp_path / "mn.json"
    assert run(["mn", b2, "--epsilon", "2/5", "--out", str(rep)], capsys)[0] == 0
    code, out, _ = run(["kelley-verify", b2, str(rep)], capsys)
    assert code == 0 and json.loads(out)["result"]["strictly_positive"]


def test_cover_command(tmp_path, capsys):
    inst = write(tmp_path, "t.json", {"ground": 3, "elements": [[0, 1], [0, 2], [1, 2]]})
    cover_path = tmp_path / "cover.json"
    code, out, _ = run(["cover", inst, "--grid", "2/3,1/3", "--cover-out", str(cover_path)], capsys)
    assert code == 0
    res = json.loads(out)["result"]["cover"]
    assert res["classes"][0] == [0, 1, 2] and res["covers_all"]
    assert run(["kelley-verify", inst, str(cover_path)], capsys)[0] == 0


def test_gen_atoms3(tmp_path, capsys):
    out = tmp_path / "a3.json"
    assert run(["gen", "--kind", "atoms", "--param", "n=3", "--out", str(out)], capsys)[0] == 0
    assert json.loads(out.read_text()) == {"ground": 3, "elements": [[0], [1], [2]]}


def test_gen_from_spec_file(tmp_path, capsys):
    spec = write(tmp_path, "spec.json", {"kind": "random", "params": {"n": 6, "m": 5, "p": "1/2"}, "seed": 42})
    code, out, _ = run(["gen", spec], capsys)
    assert code == 0
    assert json.loads(out)["elements"] == [[1, 4], [2, 3, 4], [2, 3, 5], [3], [1, 2, 3, 4]]


def test_gen_invalid(capsys):
    assert run(["gen", "--kind", "ksubsets", "--param", "n=2", "--param", "k=3"], capsys)[0] == 2


def test_sweep_atoms_csv(tmp_path, capsys):
    outdir = tmp_path / "sw"
    code, _, _ = run(["sweep", "--kind", "atoms", "--param", "n=1", "--from", "2", "--to", "5", "--out", str(outdir)], capsys)
    assert code == 0
    rows = (outdir / "sweep.csv").read_text().splitlines()[1:]
    assert [(r.split(",")[2], r.split(",")[3]) for r in rows] == [("1", "2"), ("1", "3"), ("1", "4"), ("1", "5")]
    rep = Report.loads((outdir / "report.json").read_text())
    assert [r["value"] for r in rep.result["series"]] == ["1/2", "1/3", "1/4", "1/5"]


def test_sweep_flags_unsatisfiable_row(capsys):
    argv = ["sweep", "--kind", "ideal_truncation", "--param", "ideal=summable", "--param", "theta=2",
            "--param", "N=1", "--from", "3", "--to", "5", "--format", "csv"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    statuses = [line.split(",")[1] for line in out.splitlines()[1:]]
    assert statuses == ["error", "ok", "ok"]


def test_sweep_all_fail(capsys):
    argv = ["sweep", "--kind", "ideal_truncation", "--param", "ideal=summable", "--param", "theta=9",
            "--param", "N=1", "--from", "2", "--to", "3"]
    assert run(argv, capsys)[0] == 2


def test_format_csv_only_for_sweep(b2, capsys):
    assert run(["inum", b2, "--format", "csv"], capsys)[0] == 2


def test_timings_opt_in(b2, capsys):
    _, out, _ = run(["inum", b2], capsys)
    assert json.loads(out)["timings"] == {}
    _, out, _ = run(["inum", b2, "--timings"], capsys)
    assert "exact" in json.loads(out)["timings"]


def test_report_round_trip(b2, capsys):
    _, out, _ = run(["mn", b2, "--epsilon", "2/5"], capsys)
    assert Report.loads(out).dumps() == out


def test_report_rejects_unknown_version(b2, capsys):
    _, out, _ = run(["inum", b2], capsys)
    d = json.loads(out)
    d["schema_version"] = "99"
    with pytest.raises(DomainError):
        Report.loads(json.dumps(d))
