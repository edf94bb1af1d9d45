import pytest

from stoplat.cli import main

REVEAL = """\
omega a b
breakpoint 0 inclusive a,b
breakpoint 1 inclusive a;b
time S 1 2
time T1 1 1
time T2 1 1
role S S
role T1 T1
role T2 T2
"""

DISCRETE_VARIANT = """\
omega a b
breakpoint 0 inclusive a;b
time S 1 2
time T1 1 1
time T2 1 1
role S S
role T1 T1
role T2 T2
"""

SETS = """\
omega a b
breakpoint 0 inclusive a,b
breakpoint 1 inclusive a;b
time T1 1 1
time T2 1 2
time U1 2 2
set A T1 T2
set B U1
"""


@pytest.fixture
def reveal(tmp_path):
    p = tmp_path / "reveal.txt"
    p.write_text(REVEAL)
    return str(p)


@pytest.fixture
def discrete_variant(tmp_path):
    p = tmp_path / "discrete_file.txt"
    p.write_text(DISCRETE_VARIANT)
    return str(p)


@pytest.fixture
def sets(tmp_path):
    p = tmp_path / "sets.txt"
    p.write_text(SETS)
    return str(p)


def test_check_output(reveal, capsys):
    assert main(["check", reveal]) == 0
    out = capsys.readouterr().out
    assert "S: stopping=true optional=true" in out
    assert "T1: stopping=true optional=true" in out


def test_check_rv_membership(tmp_path, capsys):
    p = tmp_path / "x.txt"
    p.write_text(
        "omega a b\nbreakpoint 0 inclusive a,b\n"
        "breakpoint 1 inclusive a;b\nrv X 0 1\n"
    )
    assert main(["check", str(p)]) == 0
    assert "X: member=false" in capsys.readouterr().out


def test_decompose_notfound_exit_3(reveal, capsys):
    assert main(["decompose", reveal, "--grid-denominator", "8"]) == 3
    assert "notfound-on-grid" in capsys.readouterr().out


def test_decompose_found_exit_0(discrete_variant, capsys):
    assert main(["decompose", discrete_variant, "--grid-denominator", "1"]) == 0
    out = capsys.readouterr().out
    assert "found" in out
    assert "S1 = 1 1" in out
    assert "S2 = 0 1" in out


def test_decompose_oracle_cross_check(discrete_variant, capsys):
    code = main(
        ["decompose", discrete_variant, "--grid-denominator", "1", "--oracle"]
    )
    assert code == 0
    assert "oracle agrees" in capsys.readouterr().out


def test_decompose_precondition_exit_4(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text(
        "omega a b\nbreakpoint 0 inclusive a,b\n"
        "time S 2 2\ntime T1 1 1\nrole S S\nrole T1 T1\n"
    )
    assert main(["decompose", str(p)]) == 4
    assert "precondition-failed" in capsys.readouterr().out


def test_minorant(tmp_path, capsys):
    p = tmp_path / "m.txt"
    p.write_text(
        "omega a b\nbreakpoint 0 inclusive a,b\n"
        "breakpoint 1 inclusive a;b\ntime U 0 1\n"
    )
    assert main(["minorant", str(p), "--target", "U", "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "minorant U = 0 0" in out
    assert "oracle agrees" in out


def test_interpolate_pointwise(sets, capsys):
    assert main(["interpolate", sets]) == 0
    assert "interpolant = 1 2" in capsys.readouterr().out


def test_interpolate_cone_precondition(sets, capsys):
    assert main(["interpolate", sets, "--mode", "cone"]) == 4
    assert "cone order violated" in capsys.readouterr().out


def test_interpolate_cone_found(tmp_path, capsys):
    p = tmp_path / "cone.txt"
    p.write_text(
        "omega a b\nbreakpoint 0 inclusive a,b\n"
        "breakpoint 1 inclusive a;b\ntime T1 0 0\ntime U1 2 2\n"
        "set A T1\nset B U1\n"
    )
    assert main(["interpolate", str(p), "--mode", "cone", "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "interpolant = 0 0" in out
    assert "oracle agrees" in out


def test_invalid_instance_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("omega a b\nbreakpoint 1 inclusive a,b\n")
    assert main(["check", str(p)]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file_exit_2(capsys):
    assert main(["check", "/nonexistent/file.txt"]) == 2


def test_unknown_time_name_exit_2(reveal, capsys):
    assert main(["decompose", reveal, "--target", "Q"]) == 2


def test_off_grid_value_exit_2(tmp_path, capsys):
    p = tmp_path / "q.txt"
    p.write_text(
        "omega a\nbreakpoint 0 inclusive a\ntime S 1/3\nrole S S\n"
        "time T1 1\nrole T1 T1\n"
    )
    assert main(["decompose", str(p), "--grid-denominator", "2"]) == 2


def test_bad_flags_exit_2(reveal):
    with pytest.raises(SystemExit) as err:
        main(["decompose", reveal, "--no-such-flag"])
    assert err.value.code == 2


def test_report_file(reveal, tmp_path, capsys):
    out_path = tmp_path / "report.txt"
    assert main(["check", reveal, "--report", str(out_path)]) == 0
    text = out_path.read_text()
    assert "result check S stopping=true optional=true" in text


def test_hunt_determinism(capsys):
    argv = ["hunt", "--seed", "42", "--instances", "25", "--max-omega", "3"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert main(argv + ["--jobs", "3"]) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("report hunt\n")


def test_hunt_corpus_and_replay(reveal, tmp_path, capsys):
    report_path = tmp_path / "hunt.txt"
    argv = [
        "hunt",
        reveal,
        "--instances",
        "0",
        "--properties",
        "decompose",
        "--report",
        str(report_path),
    ]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "tally decompose pass 0 fail 0 notfound 1 skip 0" in out
    assert report_path.read_text() == out
    assert main(["hunt", "--replay", str(report_path)]) == 0
    replay_out = capsys.readouterr().out
    assert "replay 0 decompose ok" in replay_out


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "checks passed" in out
    assert "FAIL" not in out


def test_oracle_command(reveal, discrete_variant, capsys):
    assert main(["oracle", reveal, "--grid-denominator", "1"]) == 3
    out = capsys.readouterr().out
    assert "oracle decompose none" in out
    assert "certificate sha256:" in out
    assert main(["oracle", discrete_variant, "--grid-denominator", "1"]) == 0
    out = capsys.readouterr().out
    assert "oracle decompose found" in out


def test_oracle_minorant(tmp_path, capsys):
    p = tmp_path / "m.txt"
    p.write_text(
        "omega a b\nbreakpoint 0 inclusive a,b\n"
        "breakpoint 1 inclusive a;b\ntime U 0 1\n"
    )
    assert main(["oracle", str(p), "--what", "minorant", "--target", "U"]) == 0
    assert "oracle minorant U = 0 0" in capsys.readouterr().out


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as err:
        main(["--version"])
    assert err.value.code == 0
