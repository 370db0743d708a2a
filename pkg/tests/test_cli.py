import json

import pytest

from sawbox import io
from sawbox.cli import main


@pytest.fixture(autouse=True)
def cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SAWBOX_CACHE", str(tmp_path / "cache"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def values(text):
    s, _ = io.parse_series(text)
    return [t.value for t in s.terms]


def test_enumerate_oracle(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "anywhere", "--engine", "oracle", "--max-L", "4")
    assert code == 0 and values(out) == [12, 322, 14248, 1530196]


def test_enumerate_tm_and_cache(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--class", "exact-bbox", "--engine", "tm", "--max-L", "6")
    assert code == 0 and values(out)[:4] == [8, 176, 9172, 1151156]
    assert (tmp_path / "cache" / "rect_walks.json").exists()
    _, warm, _ = run(capsys, "enumerate", "--class", "exact-bbox", "--engine", "tm", "--max-L", "6")
    _, cold, _ = run(capsys, "enumerate", "--class", "exact-bbox", "--engine", "tm", "--max-L", "6", "--no-cache")
    assert warm == cold == out


def test_cache_dir_flag(capsys, tmp_path):
    run(capsys, "enumerate", "--class", "anywhere", "--max-L", "2", "--cache-dir", str(tmp_path / "other"))
    assert (tmp_path / "other" / "rect_walks.json").exists()


def test_enumerate_cycles(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "cycles", "--engine", "oracle", "--max-L", "2")
    assert values(out) == [1, 13]


def test_enumerate_limits(capsys):
    code, _, err = run(capsys, "enumerate", "--engine", "oracle", "--max-L", "6")
    assert code == 2 and "capped at side 5" in err
    code, _, err = run(capsys, "enumerate", "--engine", "tm", "--max-L", "99")
    assert code == 2 and "cap" in err
    code, _, err = run(capsys, "enumerate", "--class", "sides", "--engine", "tm", "--max-L", "2")
    assert code == 2 and "oracle" in err


def test_enumerate_rect(capsys):
    _, out, _ = run(capsys, "enumerate", "--class", "rect", "--max-L", "2")
    rows = [line.split("\t") for line in out.splitlines() if not line.startswith("#")]
    assert ["1", "1", "12", "8"] in rows


def test_ingest_validates_corner_series(capsys, tmp_path):
    b = tmp_path / "wcas.b"
    b.write_text("# corner walks, indexed by grid points\n1 1\n2 2\n3 12\n4 184\n")
    code, out, _ = run(capsys, "ingest", str(b), "--class", "corners", "--index-shift", "-1")
    assert code == 0 and "# validated: 1,2,3" in out
    code, _, err = run(capsys, "ingest", str(b), "--class", "corners")
    assert code == 2 and "oracle gives" in err


def test_ingest_reports_bad_lines(capsys, tmp_path):
    b = tmp_path / "bad.b"
    b.write_text("1 1\n2 2\n4 3\n")
    code, _, err = run(capsys, "ingest", str(b))
    assert code == 2 and "bad.b:3" in err


def test_analyze_lambda_fits(capsys, tmp_path):
    out_dir = tmp_path / "lf"
    code, _, _ = run(capsys, "analyze", "bundled:table1", "--pipeline", "lambda-fits", "--output", str(out_dir))
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["job"]["pipeline"] == "lambda-fits"
    assert report["precision_digits"] == 120
    assert len(report["inputs"]["bundled:table1"]) == 64
    assert abs(float(report["results"]["fits"]["degree_2"]["intercept"]) - 1.74411) < 5e-4
    assert (out_dir / "lambda_degree_3.csv").read_text().startswith("L,abscissa,c0\n")
    first = (out_dir / "report.json").read_bytes()
    run(capsys, "analyze", "bundled:table1", "--pipeline", "lambda-fits", "--output", str(out_dir))
    assert (out_dir / "report.json").read_bytes() == first


def test_analyze_hadamard(capsys):
    code, out, _ = run(capsys, "analyze", "bundled:table2", "bundled:table1", "--pipeline", "hadamard")
    res = json.loads(out)["results"]
    assert res["quotient_last_exact"]["L"] == 17
    assert abs(float(res["quotient_last_exact"]["value"]) - 0.99971757) < 1e-7
    code, _, err = run(capsys, "analyze", "bundled:table1", "--pipeline", "hadamard")
    assert code == 2


def test_analyze_other_pipelines(capsys):
    for p in ("ratio-of-ratios", "d-pipeline"):
        code, out, _ = run(capsys, "analyze", "bundled:table1", "--pipeline", p, "--precision", "80")
        assert code == 0 and json.loads(out)["results"]["pipeline"] == p


def test_extend_command(capsys, tmp_path):
    s = tmp_path / "cat.txt"
    cat = [1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012]
    s.write_text("".join(f"{i}\t{v}\n" for i, v in enumerate(cat, 1)))
    code, out, _ = run(capsys, "extend", str(s), "--terms", "2", "--precision", "60",
                       "--ensemble-orders", "1,2", "--ensemble-degrees", "0-1")
    assert code == 0
    series, errors = io.parse_series(out)
    assert abs(float(series[13]) / 742900 - 1) < 1e-8
    assert set(errors) == {13, 14}


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0 and "10/10 claims passed" in out


def test_verify_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick", "--corrupt")
    assert code == 1
    assert "FAIL  engine equivalence" in out and "reconstruction" in out
