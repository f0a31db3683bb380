import json

import pytest

from gbbench.bench import parse_report_csv
from gbbench.cli import main
from gbbench.ordering import degrevlex_weight_matrix, identity_weight_matrix, subtotal_weight_matrix

FAST = ["--min-measure", "1e-9", "--orders", "degrevlex,subtotal", "--reference", "degrevlex"]


def _write_matrix(tmp_path, name, w):
    path = tmp_path / name
    path.write_text(w.to_text())
    return str(path)


def test_run_text_to_stdout(capsys):
    code = main(["run", "--cyclic", "3"] + FAST)
    out = capsys.readouterr().out
    assert code == 0
    assert "cyclic-3" in out
    assert "subtotal/degrevlex" in out


def test_run_csv_to_file(tmp_path, capsys):
    dest = tmp_path / "report.csv"
    code = main(["run", "--cyclic", "3", "--katsura", "3",
                 "--format", "csv", "-o", str(dest)] + FAST)
    assert code == 0
    assert capsys.readouterr().out == ""
    rows = parse_report_csv(dest.read_text())
    assert {r["name"] for r in rows} == {"cyclic-3", "katsura-3"}
    for r in rows:
        assert r["degrevlex aborted"] is False


def test_run_jsonl_format(capsys):
    code = main(["run", "--katsura", "2", "--format", "jsonl"] + FAST)
    assert code == 0
    recs = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert recs[0]["type"] == "config"
    assert recs[1]["name"] == "katsura-2"


def test_run_bundled_system(capsys):
    code = main(["run", "--bundled", "lichtblau2"] + FAST)
    assert code == 0
    assert "Lichtblau 2" in capsys.readouterr().out


def test_run_system_file(tmp_path, capsys):
    path = tmp_path / "toy.txt"
    path.write_text("vars: x y\npoly: x^2 - y\npoly: x*y - 1\n")
    code = main(["run", "--system", str(path)] + FAST)
    assert code == 0
    assert "toy" in capsys.readouterr().out


def test_run_system_directory(tmp_path, capsys):
    (tmp_path / "a.txt").write_text("vars: x y\npoly: x^2 - y\npoly: x*y - 1\n")
    (tmp_path / "b.txt").write_text("vars: u v\npoly: u + v\npoly: u*v - 2\n")
    code = main(["run", "--systems", str(tmp_path)] + FAST)
    out = capsys.readouterr().out
    assert code == 0
    assert "a" in out.split() and "b" in out.split()
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(SystemExit) as exc:
        main(["run", "--systems", str(empty)] + FAST)
    assert exc.value.code == 2


def test_run_rational_system_needs_flag(tmp_path, capsys):
    path = tmp_path / "half.txt"
    path.write_text("vars: x\npoly: 1/2 x^2 - 1\n")
    with pytest.raises(SystemExit) as exc:
        main(["run", "--system", str(path)] + FAST)
    assert exc.value.code == 2
    capsys.readouterr()
    code = main(["run", "--system", str(path), "--clear-denominators"] + FAST)
    assert code == 0


def test_run_all_aborted_exit_code(capsys):
    code = main(["run", "--cyclic", "6", "--time-limit", "1e-6"] + FAST)
    assert code == 3
    assert "ABORTED" in capsys.readouterr().out


def test_run_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["run"] + FAST)  # no systems selected
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["run", "--cyclic", "3", "--orders", "degrevlex,plex"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["run", "--cyclic", "3", "--orders", "degrevlex",
              "--reference", "subtotal"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["run", "--bundled", "nosuch"] + FAST)
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["run", "--system", str(tmp_path / "missing.txt")] + FAST)
    assert exc.value.code == 2


def test_verify_small_system(capsys):
    code = main(["verify", "--cyclic", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "cyclic-3: OK" in out
    assert "bases=identical" in out
    assert "verified=yes" in out
    assert "weight-audit=clean" in out


def test_verify_single_strategy(capsys):
    code = main(["verify", "--katsura", "2", "--strategies", "induced-order"])
    out = capsys.readouterr().out
    assert code == 0
    assert "configs=6" in out


def test_verify_aborted_exit_code(capsys):
    code = main(["verify", "--cyclic", "6", "--time-limit", "1e-6"])
    assert code == 3
    assert "ABORTED" in capsys.readouterr().out


def test_microbench(capsys):
    code = main(["microbench", "--vars", "3", "--samples", "10000"])
    out = capsys.readouterr().out
    assert code == 0
    assert "ratio subtotal/degrevlex:" in out
    with pytest.raises(SystemExit) as exc:
        main(["microbench", "--vars", "0"])
    assert exc.value.code == 2


def test_check_matrix_admissible(tmp_path, capsys):
    path = _write_matrix(tmp_path, "sub3.txt", subtotal_weight_matrix(3))
    code = main(["check-matrix", path])
    out = capsys.readouterr().out
    assert code == 0
    assert "admissible=yes" in out
    assert "same order as subtotal(n=3): yes" in out
    assert "same order as degrevlex(n=3): yes" in out


def test_check_matrix_family_mismatch_is_informational(tmp_path, capsys):
    path = _write_matrix(tmp_path, "lex3.txt", identity_weight_matrix(3))
    code = main(["check-matrix", path])
    out = capsys.readouterr().out
    assert code == 0  # lex is a fine order, just not these families
    assert "admissible=yes" in out
    assert "same order as subtotal(n=3): no" in out
    assert "same order as degrevlex(n=3): no" in out


def test_check_matrix_inadmissible(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2\n1 1\n1 1\n")  # singular, so no order at all
    code = main(["check-matrix", str(path)])
    out = capsys.readouterr().out
    assert code == 1
    assert "admissible=no" in out
    assert "same order as subtotal(n=2): no" in out


def test_check_matrix_equivalence(tmp_path, capsys):
    sub = _write_matrix(tmp_path, "sub3.txt", subtotal_weight_matrix(3))
    grev = _write_matrix(tmp_path, "grev3.txt", degrevlex_weight_matrix(3))
    code = main(["check-matrix", sub, "--against", grev, "--oracle-degree", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "yes (lower-triangular certificate)" in out
    assert "orders agree" in out


def test_check_matrix_inequivalence(tmp_path, capsys):
    grev = _write_matrix(tmp_path, "grev3.txt", degrevlex_weight_matrix(3))
    lex = _write_matrix(tmp_path, "lex3.txt", identity_weight_matrix(3))
    code = main(["check-matrix", grev, "--against", lex, "--oracle-degree", "2"])
    out = capsys.readouterr().out
    assert code == 1
    assert "no certificate" in out
    assert "orders differ" in out


def test_check_matrix_input_errors(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["check-matrix", str(tmp_path / "missing.txt")])
    assert exc.value.code == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n1 2 3\n")
    with pytest.raises(SystemExit) as exc:
        main(["check-matrix", str(bad)])
    assert exc.value.code == 2
    two = _write_matrix(tmp_path, "two.txt", subtotal_weight_matrix(2))
    three = _write_matrix(tmp_path, "three.txt", subtotal_weight_matrix(3))
    with pytest.raises(SystemExit) as exc:
        main(["check-matrix", two, "--against", three])
    assert exc.value.code == 2
