import json
from pathlib import Path

from platform_duopoly.cli import main

DEMOS = Path(__file__).resolve().parent.parent / "demos" / "configs"


def test_analyze_mixed_example(capsys):
    assert main(["analyze", str(DEMOS / "mixed.ini")]) == 0
    out = capsys.readouterr().out
    assert "regime: mixed" in out
    assert "NE enumerated: {LL}" in out and "NE predicted:  {LL}" in out


def test_analyze_json(capsys):
    assert main(["analyze", "--config", str(DEMOS / "mixed.ini"), "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["objectives"]["throughput"]["ne_enumerated"] == ["LL"]
    assert data["objectives"]["revenue"]["ne_predicted"] == ["LH", "HL"]


def test_analyze_beta_override(capsys):
    assert main(["analyze", str(DEMOS / "mixed.ini"), "--beta", "0.8"]) == 0
    assert "Fraction(4, 5)" in capsys.readouterr().out


def test_allocate_symmetric_split(capsys):
    assert main(["allocate", str(DEMOS / "mixed.ini"), "--p1", "50", "--p2", "50"]) == 0
    out = capsys.readouterr().out
    assert "w1=12.5 w2=12.5 c1=12.5 c2=12.5" in out
    assert "grid steps" in out


def test_allocate_winner_takes_all_degenerate(capsys):
    assert main(["allocate", str(DEMOS / "supply_limited.ini"), "--p1", "20", "--p2", "60"]) == 0
    assert "w1=5 w2=0" in capsys.readouterr().out


def test_sweep_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", str(DEMOS / "figure2.ini"), "--out", str(a)]) == 0
    assert main(["sweep", str(DEMOS / "figure2.ini"), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 1 + 3 * 99


def test_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[market]\ngamma = 2\np_low = 1\np_high = 2\n[demand]\nintercept = 9\nslope = -1\n"
                   "[supply]\nintercept = 0\nslope = 1\n")
    assert main(["analyze", str(bad)]) == 2
    assert "bad config" in capsys.readouterr().err
    assert main(["analyze", str(tmp_path / "missing.ini")]) == 2


def test_allocate_off_ladder_price(capsys):
    assert main(["allocate", str(DEMOS / "mixed.ini"), "--p1", "60", "--p2", "90"]) == 2


def test_selftest_passes(capsys):
    assert main(["selftest", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 9
