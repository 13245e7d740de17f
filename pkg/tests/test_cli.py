import csv
import subprocess
import sys

import pytest

from insdel.cli import main

BUILD = ["--regime", "highrate", "--q", "16", "--h", "1", "--delta", "1/10", "--m", "24", "--d", "4"]


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    prefix = root / "code"
    assert main(["build", *BUILD, "--out", str(prefix)]) == 0
    return root, root / "code.spec", root / "code.table"


def _files(built):
    _, spec, table = built
    return ["--spec", str(spec), "--table", str(table)]


def test_encode_decode_round_trip(built, capsys):
    root = built[0]
    word = root / "word.txt"
    assert main(["encode", *_files(built), "--message", "1,2,3,4", "--out", str(word)]) == 0
    capsys.readouterr()
    assert main(["decode", *_files(built), "--input", str(word)]) == 0
    assert capsys.readouterr().out.strip() == "1,2,3,4"


def test_corrupt_and_replay(built, capsys):
    root = built[0]
    word, noisy, plan = root / "w.txt", root / "noisy.txt", root / "plan.txt"
    main(["encode", *_files(built), "--message", "5,0,7", "--out", str(word)])
    assert main(["corrupt", "--input", str(word), "--budget", "2", "--strategy", "block_shift",
                 "--seed", "3", *_files(built), "--out", str(noisy), "--plan", str(plan)]) == 0
    capsys.readouterr()
    assert main(["decode", *_files(built), "--input", str(noisy)]) == 0
    assert capsys.readouterr().out.strip() == "5,0,7"
    assert main(["replay", *_files(built), "--input", str(word), "--plan", str(plan)]) == 0
    first = capsys.readouterr().out
    main(["replay", *_files(built), "--input", str(word), "--plan", str(plan)])
    assert capsys.readouterr().out == first
    assert "outcome=success" in first


def test_failing_replay_is_stable(built, capsys):
    root = built[0]
    word, plan = root / "w2.txt", root / "bad.plan"
    main(["encode", *_files(built), "--message", "9,9", "--out", str(word)])
    main(["corrupt", "--input", str(word), "--budget", "150", "--seed", "1", "--out", str(root / "x.txt"),
          "--plan", str(plan)])
    capsys.readouterr()
    codes = [main(["replay", *_files(built), "--input", str(word), "--plan", str(plan)]) for _ in range(2)]
    out = capsys.readouterr()
    assert codes[0] == codes[1]
    if codes[0] == 2:
        lines = out.out.splitlines()
        assert lines[0] == lines[1] and "outcome=failure" in lines[0]


def test_verify(built, capsys):
    assert main(["verify", *_files(built), "--effort", "4"]) == 0
    out = capsys.readouterr().out
    assert "PASS inner_radius" in out and "regime=highrate" in out


def test_experiment_at_design_budget(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["experiment", *BUILD, "--budget-fracs", "0,1/300", "--trials", "3",
                 "--strategies", "uniform,chunk_kill", "--seed", "2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4
    assert all(int(r["successes"]) == int(r["trials"]) for r in rows)
    assert all(r["mean_decode_ms"] == "" for r in rows)
    assert out.with_suffix(".png").exists()


def test_errors_have_exit_codes(built, tmp_path, capsys):
    assert main(["decode", "--spec", str(tmp_path / "nope"), "--table", str(built[2]),
                 "--input", str(tmp_path / "nope")]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: kind=")
    junk = tmp_path / "junk.txt"
    junk.write_text("1" * 20 + "\n")
    code = main(["decode", *_files(built), "--input", str(junk)])
    assert code in (1, 2)


def test_console_script(built):
    proc = subprocess.run([sys.executable, "-m", "insdel.cli", "verify", *_files(built), "--effort", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
