import csv
import io
import json
import subprocess
import sys

import pytest

from dupcodes.cli import main, run
from dupcodes.codebook import Codebook
from dupcodes.core import ChannelParams, format_word

P211 = ["--q", "2", "--ell", "1", "--r", "1"]


def call(argv, stdin="", monkeypatch=None):
    out = io.StringIO()
    if monkeypatch is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv, out=out)
    return code, out.getvalue()


def test_count(monkeypatch):
    assert call(["count", *P211, "--n", "19", "--w", "2"]) == (0, "13\n")
    assert call(["count", "--q", "2", "--ell", "1", "--r", "inf", "--n", "19", "--w", "2"]) == (0, "1\n")


def test_capacity_text_and_formats():
    code, text = call(["capacity", *P211])
    assert code == 0
    fields = dict(tok.split("=") for tok in text.split())
    assert abs(float(fields["rho"]) - 0.659) < 1e-3
    assert abs(float(fields["c0"]) - 0.602) < 1e-3
    code, text = call(["capacity", "--q", "2,3", "--ell", "1", "--r", "1,inf", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [(r["q"], r["r"]) for r in rows] == [("2", "1"), ("2", "inf"), ("3", "1"), ("3", "inf")]
    code, text = call(["cw-capacity", *P211, "--omega", "0.25", "--format", "json"])
    data = json.loads(text)
    assert abs(float(data[0]["c0_omega"]) - 0.4582) < 1e-4


def test_decode_stdin(monkeypatch):
    assert call(["decode", *P211], "10000\n", monkeypatch) == (0, "100\n")
    assert call(["decode", *P211], "1000010\n\n10\n", monkeypatch) == (0, "1001\n1\n")


def test_transform_round_trip(monkeypatch):
    p = ["--q", "3", "--ell", "3", "--r", "2"]
    assert call(["transform", *p], "1012212\n", monkeypatch) == (0, "1011200\n")
    assert call(["transform", *p, "--inverse"], "1011200\n", monkeypatch) == (0, "1012212\n")


def test_rank_unrank_encode(monkeypatch):
    args = [*P211, "--n", "3"]
    assert call(["unrank", *args, "0", "1", "2", "3"]) == (0, "1\n11\n100\n111\n")
    assert call(["encode", *args, "2"]) == (0, "100\n")
    assert call(["rank", *args], "100\n111\n", monkeypatch) == (0, "2\n3\n")
    assert call(["unrank", *args], "1\n", monkeypatch) == (0, "11\n")


def test_blocks_and_enumerate(tmp_path):
    code, text = call(["blocks", "--q", "2", "--ell", "2", "--r", "1", "--n", "10"])
    assert text.splitlines() == ["length,i,j,run", "1,1,0,0", "2,2,0,1", "5,1,1,4", "8,2,1,7"]
    target = tmp_path / "code.txt"
    assert call(["enumerate", *P211, "--n", "4", "--out", str(target)]) == (0, "")
    assert target.read_text().splitlines() == ["# q=2 ell=1 r=1 n=4", "1", "11", "100", "111",
                                               "1001", "1100", "1111"]


def test_verify(tmp_path):
    good = tmp_path / "good.txt"
    run(["enumerate", *P211, "--n", "8", "--out", str(good)], out=io.StringIO())
    assert call(["verify", "zero-error", "--code", str(good)])[0] == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("10\n100\n")
    code, text = call(["verify", "zero-error", "--code", str(bad), *P211])
    assert code == 1 and "10 and 100" in text
    code, text = call(["verify", "optimal", *P211, "--n", "6"])
    assert code == 0 and text.startswith("mis=17 dp=17")
    code, _ = call(["verify", "optimal", "--q", "2", "--ell", "2", "--r", "1", "--n", "5",
                    "--model", "duplication"])
    assert code == 0


def test_figures():
    code, text = call(["figure", "--fig", "1", "--max-length", "30"])
    assert [row[2] for row in csv.reader(io.StringIO(text))][1:] == ["1", "3", "7", "15"]
    code, text = call(["figure", "--fig", "2"])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert sum(int(r["in_code"]) for r in rows) == 13
    assert len(rows) == sum(range(1, 19))
    code, text = call(["figure", "--fig", "3", "--tol", "1e-10"])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 40
    assert rows[0]["q"] == "2" and set(rows[0]) >= {"rho", "c0", "c0_inf", "penalty"}


def test_exit_codes(monkeypatch, capsys):
    with pytest.raises(SystemExit) as exc:
        run(["count", *P211])
    assert exc.value.code == 2
    assert call(["unrank", *P211, "--n", "3", "9"])[0] == 2
    assert call(["enumerate", "--q", "3", "--ell", "2", "--r", "1", "--n", "30"])[0] == 3
    assert call(["decode", *P211], "012\n", monkeypatch)[0] == 2
    assert call(["simulate", "--q", "2", "--ell", "1", "--r", "inf"], "1\n", monkeypatch)[0] == 2
    assert call(["figure", "--fig", "1", "--r", "inf"])[0] == 2


def test_invariant_exit_code(monkeypatch):
    from dupcodes import cli
    from dupcodes.core import InvariantViolation

    def broken(*a, **k):
        raise InvariantViolation("forced")
    monkeypatch.setattr(cli, "capacity_table", broken)
    assert call(["capacity", *P211])[0] == 4


def test_simulate_deterministic(monkeypatch):
    words = "\n".join(["1", "101", "1001", "111"]) + "\n"
    a = call(["simulate", *P211, "--seed", "7"], words, monkeypatch)
    b = call(["simulate", *P211, "--seed", "7"], words, monkeypatch)
    assert a == b and a[0] == 0
    c = call(["simulate", "--q", "3", "--ell", "2", "--r", "2", "--seed", "7",
              "--model", "duplication", "--probs", "1,1,1"], "2101\n", monkeypatch)
    assert c[0] == 0


@pytest.mark.parametrize("q,ell,r,n", [(2, 1, 1, 8), (2, 2, 1, 7), (3, 1, 2, 5)])
def test_pipeline_unrank_simulate_decode(q, ell, r, n, monkeypatch):
    params = ["--q", str(q), "--ell", str(ell), "--r", str(r)]
    size = Codebook(ChannelParams(q, ell, r), n).size
    _, words = call(["unrank", *params, "--n", str(n), *map(str, range(size))])
    for seed in (1, 2):
        _, noisy = call(["simulate", *params, "--seed", str(seed)], words, monkeypatch)
        _, decoded = call(["decode", *params], noisy, monkeypatch)
        assert decoded == words


def test_console_pipeline():
    env_cmd = [sys.executable, "-m", "dupcodes"]
    words = subprocess.run(env_cmd + ["unrank", *P211, "--n", "6", "0", "5", "16"],
                           capture_output=True, text=True, check=True).stdout
    noisy = subprocess.run(env_cmd + ["simulate", *P211, "--seed", "3"], input=words,
                           capture_output=True, text=True, check=True).stdout
    decoded = subprocess.run(env_cmd + ["decode", *P211], input=noisy,
                             capture_output=True, text=True, check=True).stdout
    assert decoded == words
    bad = subprocess.run(env_cmd + ["count", *P211, "--n", "x"], capture_output=True, text=True)
    assert bad.returncode == 2


def test_main_returns_code():
    assert main(["count", *P211, "--n", "3"]) == 0
