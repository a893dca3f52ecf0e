import io
import re

import pytest

from scriptometrics.cli import main
from scriptometrics.notation import bundled_path
from scriptometrics.report import fmt, read_histogram_tsv, svg_bar_chart

from conftest import TABLE2, TOY_TSV

VAI = str(bundled_path("vai_table1.tsv"))


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_check_vai():
    code, out = run("check", VAI)
    assert code == 1
    assert out.splitlines() == [
        "id\ttranslit\tstated\tcomputed",
        "23\tbu\t25\t29",
        "32\tdε\t46\t44",
        "78\thī\t26\t36",
        "90\tke\t39\t33",
    ]


def test_check_toy_and_missing(toy_path, tmp_path):
    assert run("check", str(toy_path)) == (0, "id\ttranslit\tstated\tcomputed\n")
    assert run("check", str(tmp_path / "nope.tsv"))[0] == 2


def test_check_load_error(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text(TOY_TSV + "4\tx\t1×9\t—\t2\n", encoding="utf-8")
    assert run("check", str(bad))[0] == 2
    assert "line 5" in capsys.readouterr().err


def test_runtest_vai():
    code, out = run("runtest")
    assert code == 0
    assert "E = 229/45 ≈ 5.09" in out
    assert "n1 = 26" in out and "n2 = 19" in out and "r = 11" in out
    z = float(re.search(r"z = ([\d.]+) REJECT", out).group(1))
    assert z == pytest.approx(3.55, abs=0.01)
    _, precise = run("runtest", "--precision", "4")
    assert "z = 3.5426 REJECT" in precise


def test_runtest_toy(tmp_path):
    path = tmp_path / "two.tsv"
    path.write_text(
        "id\ttranslit\tcomponents\tconnections\tcomplexity\n1\ta\t1×2\t1×1\t3\n2\tb\t1×3\t1×2\t5\n",
        encoding="utf-8",
    )
    code, out = run("runtest", str(path))
    assert code == 0 and "R = 2" in out and "RETAIN" in out


def test_runtest_tie(tmp_path):
    path = tmp_path / "tie.tsv"
    rows = ["id\ttranslit\tcomponents\tconnections\tcomplexity"]
    # complexities 2,2,2,3,4 -> counts (3,1,1), E = 5/3: no tie; 2,2,3,4,4,4 -> (2,1,3), E = 2: tie at 2
    for i, c in enumerate([2, 2, 3, 4, 4, 4], start=1):
        rows.append(f"{i}\tg\t1×1\t—\t{c}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    assert run("runtest", str(path))[0] == 3
    code, out = run("runtest", str(path), "--tie-policy", "exclude")
    assert code == 0 and "excluded (tied) = 2" in out


def test_runtest_computed_column():
    code, out = run("runtest", "--column", "computed")
    assert code == 0 and "I = 229" in out


def test_fit_poisson_cli():
    code, out = run("fit", "--model", "poisson", "--target", "components", "--shift", "auto", "--convention", "auto")
    assert code == 0
    lam = float(re.search(r"lambda = ([\d.]+)", out).group(1))
    chi2 = float(re.search(r"^chi2 = ([\d.]+)", out, re.M).group(1))
    assert 3.46 <= lam <= 3.50
    assert chi2 == pytest.approx(4.39, abs=0.5)
    assert "DF = 7" in out and "selected: tailpool" in out
    assert re.search(r"P = 0\.7\d", out)


def test_fit_hyper_poisson_cli():
    code, out = run("fit", "--model", "hyper-poisson", "--target", "connections", "--convention", "auto")
    assert code == 0
    chi2 = float(re.search(r"^chi2 = ([\d.]+)", out, re.M).group(1))
    assert chi2 <= 18.87 and "DF = 12" in out


def test_fit_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fit", "--model", "hyper-poisson", "--target", "connections", "--shift", "2"])
    assert exc.value.code == 2
    single = tmp_path / "single.tsv"
    single.write_text(
        "id\ttranslit\tcomponents\tconnections\tcomplexity\n1\ta\t2×2\t1×1\t5\n2\tb\t1×1+1×3\t1×2\t6\n",
        encoding="utf-8",
    )
    code, _ = run("fit", str(single), "--model", "poisson", "--target", "components", "--convention", "truncate")
    assert code == 3
    assert "overparameterized" in capsys.readouterr().err


def test_parse_cli():
    code, out = run("parse", "4×1+1×2+2×3")
    assert code == 0 and "canonical\t4×1+1×2+2×3" in out
    assert run("parse", "1×2*", "--context", "connections")[0] == 2


def test_report(tmp_path):
    out_dir = tmp_path / "rep"
    code, out = run("report", "--out", str(out_dir))
    assert code == 0
    names = {p.name for p in out_dir.iterdir()}
    assert {"report.txt", "complexity_hist.tsv", "complexity_hist.svg", "fits.tsv", "calibration.tsv"} <= names
    hist = read_histogram_tsv(out_dir / "complexity_hist.tsv")
    svg = (out_dir / "complexity_hist.svg").read_text(encoding="utf-8")
    assert svg.count('class="bar"') == 45
    heights = {int(m.group(1)): float(m.group(2))
               for m in re.finditer(r'data-count="(\d+)" x="\d+" y="[\d.]+" width="\d+" height="([\d.]+)"', svg)}
    unit = heights[13] / 13
    assert all(h == pytest.approx(f * unit, abs=0.01) for f, h in heights.items())
    assert hist.support_min == 4 and hist.total() == 229
    # determinism
    again = tmp_path / "again"
    run("report", "--out", str(again))
    for name in names:
        assert (out_dir / name).read_bytes() == (again / name).read_bytes()


def test_report_formats_and_default_dir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _ = run("report", "--format", "tsv")
    assert code == 0
    assert (tmp_path / "report" / "complexity_hist.tsv").exists()
    assert not (tmp_path / "report" / "complexity_hist.svg").exists()


def test_report_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run("report", "--out", str(blocker / "sub"))[0] == 2


def test_histogram_tsv_roundtrip(tmp_path):
    from scriptometrics.report import histogram_tsv

    path = tmp_path / "h.tsv"
    path.write_text(histogram_tsv(TABLE2, "C", "f_c"), encoding="utf-8")
    assert read_histogram_tsv(path) == TABLE2


def test_fmt_half_even():
    assert fmt(0.125, 2) == "0.12" and fmt(0.135, 2) == "0.14" and fmt(2.5, 0) == "2"
    assert fmt(3.5425883, 2) == "3.54"


def test_svg_deterministic():
    assert svg_bar_chart(TABLE2, title="t") == svg_bar_chart(TABLE2, title="t")
