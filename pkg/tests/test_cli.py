from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclolog import cli
from cyclolog.errors import UsageError
from cyclolog.verify import Failure


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out)
    return code, out.getvalue()


def test_constants_json():
    code, text = run(["constants", "--delta", "5", "--m", "3"])
    assert code == 0
    data = json.loads(text)
    assert data["beta"].startswith("3.11122")
    assert data["outside_theorem_range"] is False
    for key in ("m", "delta", "c_delta", "v_star", "v_m", "l0_omega", "l1_omega", "l1_one", "g0", "g1", "h", "beta", "alpha"):
        assert key in data
    assert all(isinstance(data[k], str) for k in ("beta", "alpha", "h"))
    assert len(data["beta"].replace(".", "").lstrip("0")) == 12


def test_constants_m6_is_flagged():
    code, text = run(["constants", "--delta", "5", "--m", "6"])
    data = json.loads(text)
    assert code == 0 and data["outside_theorem_range"] is True
    assert data["h"].startswith("-")


@pytest.mark.parametrize(
    "argv",
    [
        ["constants", "--delta", "5", "--m", "2"],
        ["constants", "--delta", "1", "--m", "3"],
        ["constants", "--delta", "5"],
        ["table", "--m", "1..4"],
        ["table", "--m", "x"],
        ["table", "--m", "9..3"],
        ["verify", "--suite", "bogus"],
        ["verify", "--pmax", "2"],
        ["constants", "--delta", "5", "--m", "3", "--precision-bits", "32"],
        ["constants", "--delta", "5", "--m", "3", "--workers", "0"],
        [],
    ],
)
def test_usage_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_table_rows():
    code, text = run(["table", "--delta", "5,7", "--m", "3..26"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["m", "delta", "beta", "alpha"]
    body = rows[1:]
    assert len(body) == 46
    assert body[0] == ["3", "5", "3.111228", "3.111228"]
    assert ["10", "7", "35.648682", "38.043440"] in body
    assert all(r[0] != "6" for r in body)
    keys = [(int(r[0]), int(r[1])) for r in body]
    assert keys == sorted(keys)


def test_table_formats():
    code, text = run(["table", "--m", "3..4", "--format", "json"])
    assert code == 0 and json.loads(text)[0] == {"m": 3, "delta": 5, "beta": "3.111228", "alpha": "3.111228"}
    code, text = run(["table", "--m", "3", "--format", "text"])
    assert code == 0 and "3.111228" in text


def test_table_deterministic_with_workers():
    a = run(["table", "--m", "3..12"])[1]
    b = run(["table", "--m", "3..12", "--workers", "2"])[1]
    assert a == b
    assert a == run(["table", "--m", "3..12"])[1]


def test_precision_env_and_flag(monkeypatch):
    monkeypatch.setenv(cli.PRECISION_ENV, "40")
    assert run(["constants", "--delta", "5", "--m", "3"])[0] == 2
    # the flag wins over the environment
    assert run(["constants", "--delta", "5", "--m", "3", "--precision-bits", "96"])[0] == 0
    monkeypatch.setenv(cli.PRECISION_ENV, "192")
    code, text = run(["constants", "--delta", "5", "--m", "3"])
    assert code == 0
    monkeypatch.setenv(cli.PRECISION_ENV, "abc")
    assert run(["constants", "--delta", "5", "--m", "3"])[0] == 2


def test_resolve_precision():
    assert cli.resolve_precision(None, {}) == 128
    assert cli.resolve_precision(None, {cli.PRECISION_ENV: "200"}) == 200
    assert cli.resolve_precision(80, {cli.PRECISION_ENV: "200"}) == 80


@given(st.lists(st.integers(0, 60), min_size=1, max_size=6, unique=True))
def test_parse_int_list_roundtrip(values):
    assert cli.parse_int_list(",".join(map(str, values))) == tuple(values)


@given(st.integers(0, 50), st.integers(0, 20))
def test_parse_int_list_range(lo, n):
    assert cli.parse_int_list(f"{lo}..{lo + n}") == tuple(range(lo, lo + n + 1))


def test_parse_int_list_mixed():
    assert cli.parse_int_list("3..5,8,4") == (3, 4, 5, 8)
    with pytest.raises(UsageError):
        cli.parse_int_list(",")


def test_verify_padic_pass():
    code, text = run(["verify", "--suite", "padic", "--pmax", "13"])
    assert code == 0
    assert json.loads(text)["status"] == "pass"


def test_verify_identities_pass():
    assert run(["verify", "--suite", "identities", "--nu", "1..3"])[0] == 0


def test_verify_integrality_and_spectra_pass():
    assert run(["verify", "--suite", "integrality", "--nu", "1..4"])[0] == 0
    assert run(["verify", "--suite", "spectra"])[0] == 0


def test_verify_growth_pass():
    assert run(["verify", "--suite", "growth", "--delta", "5", "--m", "3"])[0] == 0


def test_verify_failure_exit_1_with_anchor(monkeypatch):
    bad = Failure("binomial identity zg", {"p": 3}, "holds", "fails")
    monkeypatch.setattr(cli.verify, "cases", lambda suite, opts: [(lambda: [bad], ())])
    code, text = run(["verify", "--suite", "padic"])
    assert code == 1
    data = json.loads(text)
    assert data == [{"anchor": "binomial identity zg", "inputs": {"p": 3}, "expected": "holds", "got": "fails"}]


@settings(max_examples=5)
@given(st.sampled_from([5, 7]), st.integers(3, 40))
def test_constants_deterministic(delta, m):
    argv = ["constants", "--delta", str(delta), "--m", str(m)]
    assert run(argv) == run(argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cyclolog", "constants", "--delta", "7", "--m", "4"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["beta"].startswith("10.5517")
    proc = subprocess.run([sys.executable, "-m", "cyclolog", "table", "--m", "0"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "error" in proc.stderr
