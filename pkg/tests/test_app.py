import json

import pytest

from frobzeta import app
from frobzeta.frobenius_core import InvariantViolationError, frobenius_matrix
from frobzeta.matrix import RingMatrix
from frobzeta.padic_ring import ring_create
from frobzeta.reference_data import SESSION_MATRIX, SESSION_N, SESSION_P
from frobzeta.zeta import point_count_naive


def test_count_command(capsys) -> None:
    assert app.main(["count", "--p", "3", "--k", "1", "--Q", "0,1,0,1"]) == 0
    assert capsys.readouterr().out.strip() == "4"


def test_precision_violation_exit_code(capsys) -> None:
    assert app.main(["frobenius", "--p", "7", "--N", "3", "--Q", "1,2,0,0,0,1"]) == 3
    err = capsys.readouterr().err
    assert err.startswith("frobzeta: error:")
    assert "(2N-1)(2g+1)" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["frobenius", "--p", "9", "--N", "1", "--Q", "1,1,0,1"],
        ["frobenius", "--p", "101", "--N", "1", "--Q", "0,0,0,1"],
        ["frobenius", "--p", "101", "--N", "1", "--Q", "1,1,1"],
        ["count", "--p", "1009", "--k", "2", "--Q", "1,1,0,1"],
    ],
)
def test_invalid_input_exit_code(capsys, argv) -> None:
    assert app.main(argv) == 2
    assert "frobzeta: error:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["frobenius", "--p", "101", "--N", "1", "--Q", "1,x,0,1"],
        ["frobenius", "--p", "101", "--N", "0", "--Q", "1,1,0,1"],
        ["frobenius", "--p", "101", "--N", "1", "--Q", "1,1,0,1", "--threads", "0"],
        ["zeta", "--p", "101"],
    ],
)
def test_parse_errors(argv) -> None:
    with pytest.raises(SystemExit) as excinfo:
        app.main(argv)
    assert excinfo.value.code == 2


def test_frobenius_json_output(capsys) -> None:
    assert app.main(["frobenius", "--p", "101", "--N", "2", "--Q", "1,1,0,1", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    expected = frobenius_matrix(101, 2, [1, 1, 0, 1])
    assert (payload["p"], payload["N"], payload["g"]) == (101, 2, 1)
    assert [[int(x) for x in row] for row in payload["matrix"]] == expected.to_rows()


def test_frobenius_text_output(capsys) -> None:
    assert app.main(["frobenius", "--p", "101", "--N", "1", "--Q", "1,1,0,1", "--engine", "naive"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    assert all(line.startswith("[") and line.endswith("]") for line in lines)


def test_format_matrix_aligns_columns() -> None:
    ctx = ring_create(101, 2)
    text = app.format_matrix(RingMatrix.from_rows(ctx, [[1, 2345], [678, 9]]))
    assert text == "[   1 2345]\n[ 678    9]"


def test_zeta_json_picks_exact_precision(capsys) -> None:
    assert app.main(["zeta", "--p", "101", "--Q", "1,1,0,1", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["N"] == 1
    assert isinstance(payload["p"], int) and payload["g"] == 1
    assert payload["zeta"]["exact"] == [True]
    assert int(payload["zeta"]["jacobian_order"]) == point_count_naive(101, [1, 1, 0, 1])


def test_zeta_text_output(capsys) -> None:
    assert app.main(["zeta", "--p", "101", "--N", "2", "--Q", "1,1,0,1"]) == 0
    out = capsys.readouterr().out
    assert "charpoly mod 101^2" in out
    assert f"#J = {point_count_naive(101, [1, 1, 0, 1])}" in out


def test_internal_failure_exit_code(monkeypatch, capsys) -> None:
    def broken(*args, **kwargs):
        raise InvariantViolationError("vertical block M_1 is not zero modulo p")

    monkeypatch.setattr(app, "frobenius_matrix", broken)
    assert app.main(["frobenius", "--p", "101", "--N", "2", "--Q", "1,1,0,1"]) == 4
    assert "not zero modulo p" in capsys.readouterr().err


def test_selftest_with_reference_matrix(monkeypatch, capsys) -> None:
    reference = RingMatrix.from_rows(ring_create(SESSION_P, SESSION_N), SESSION_MATRIX)
    monkeypatch.setattr(app, "frobenius_matrix", lambda *args, **kwargs: reference)
    assert app.main(["selftest"]) == 0
    assert "passed" in capsys.readouterr().out


def test_selftest_detects_mismatch(monkeypatch, capsys) -> None:
    wrong = RingMatrix.zeros(ring_create(SESSION_P, SESSION_N), 4, 4)
    monkeypatch.setattr(app, "frobenius_matrix", lambda *args, **kwargs: wrong)
    assert app.main(["selftest"]) == 4
    assert "FAILED" in capsys.readouterr().out


def test_resolve_thread_count(monkeypatch) -> None:
    monkeypatch.delenv("FROBZETA_THREADS", raising=False)
    assert app.resolve_thread_count(None) == 1
    assert app.resolve_thread_count(3) == 3
    monkeypatch.setenv("FROBZETA_THREADS", "4")
    assert app.resolve_thread_count(None) == 4
    monkeypatch.setenv("FROBZETA_THREADS", "many")
    assert app.resolve_thread_count(None) == 1


@pytest.mark.parametrize("command", ["frobenius", "zeta"])
def test_json_output_is_canonical(capsys, command: str) -> None:
    argv = [command, "--p", "10007", "--N", "3", "--Q", "1,2,0,0,0,1", "--format", "json"]
    assert app.main(argv) == 0
    out = capsys.readouterr().out.strip()
    payload = json.loads(out)
    assert json.dumps(payload, sort_keys=True) == out
    assert (payload["p"], payload["N"], payload["g"]) == (10007, 3, 2)
    assert payload["matrix"][0][0] == "844821791581"
    assert all(isinstance(x, str) for row in payload["matrix"] for x in row)
