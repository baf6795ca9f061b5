import json
from pathlib import Path

import pytest

from fsmcap.cli import main, parse_word
from fsmcap.formats import load_pfa, serialize_pfa
from fsmcap import fixtures


@pytest.fixture()
def example1_path(tmp_path, example1):
    path = tmp_path / "example1.pfa"
    path.write_text(serialize_pfa(example1))
    return path


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_pfa_value_prints_rational(capsys, example1_path):
    code, out, _ = run_cli(capsys, "pfa", "value", "--pfa", example1_path, "--word", "baa")
    assert code == 0
    assert out.strip() == "1/4"


def test_word_parsing(example1):
    assert parse_word("baa", example1.alphabet) == ("b", "a", "a")
    assert parse_word("a b", example1.alphabet) == ("a", "b")
    assert parse_word("a id b", ("a", "b", "id", "rt")) == ("a", "id", "b")
    with pytest.raises(Exception):
        parse_word("z", example1.alphabet)


def test_sigma_encode_decode(capsys):
    code, out, _ = run_cli(capsys, "sigma", "encode", "1/2")
    assert code == 0 and out.strip() == "18"
    code, out, _ = run_cli(capsys, "sigma", "decode", "18", "--arity", "1")
    assert code == 0 and out.strip() == "1/2"


def test_unknown_flag_exits_2(example1_path):
    with pytest.raises(SystemExit) as exc:
        main(["pfa", "value", "--pfa", str(example1_path), "--bogus", "x"])
    assert exc.value.code == 2


def test_domain_error_exits_1(capsys, tmp_path):
    bad = tmp_path / "bad.pfa"
    bad.write_text("states: q\nalphabet: a\ninitial: 2\naccepting:\nmatrix a:\n1\n")
    code, _, err = run_cli(capsys, "pfa", "value", "--pfa", bad, "--word", "a")
    assert code == 1
    assert err.startswith("error:") and "sums to 2" in err


def test_validate_reports_violations(capsys, tmp_path, example1):
    bad = tmp_path / "bad.pfa"
    text = serialize_pfa(example1).replace("accepting: q3", "accepting: q3")
    bad.write_text(text)
    code, out, _ = run_cli(capsys, "pfa", "validate", "--pfa", bad)
    assert code == 0 and out.strip() == "valid"


def test_gadget_emission_round_trips(capsys, tmp_path):
    out_file = tmp_path / "d.pfa"
    code, _, _ = run_cli(capsys, "gadget", "dxy", "--x", "3/4", "--y", "1/2",
                         "--out", out_file)
    assert code == 0
    emitted = load_pfa(out_file)
    assert emitted == fixtures.d_34()
    manifest = json.loads(Path(str(out_file) + ".manifest.json").read_text())
    assert manifest["command"] == "gadget dxy"
    assert manifest["parameters"]["x"] == "3/4"


def test_manifest_replay_byte_identical(capsys, tmp_path, example1_path):
    csv = tmp_path / "witness.csv"
    argv = ["witness", "--x", "3/4", "--eps", "1/10", "--k", "6", "--csv", str(csv)]
    assert main(argv) == 0
    capsys.readouterr()
    first = csv.read_bytes()
    manifest = json.loads(Path(str(csv) + ".manifest.json").read_text())
    assert main(manifest["argv"]) == 0
    capsys.readouterr()
    assert csv.read_bytes() == first


def test_channel_build_and_sample(capsys, tmp_path, example1_path):
    ch_file = tmp_path / "v.fsmc"
    code, _, err = run_cli(capsys, "channel", "build", "--pfa", example1_path,
                           "--out", ch_file)
    assert code == 0
    assert "inputs: 4" in err
    code, out, _ = run_cli(capsys, "channel", "sample", "--channel", ch_file,
                           "--input", "1:b 0:a 1:a", "--seed", "7", "--count", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2 and all(len(line) == 3 for line in lines)
    code2, out2, _ = run_cli(capsys, "channel", "sample", "--channel", ch_file,
                             "--input", "1:b 0:a 1:a", "--seed", "7", "--count", "2")
    assert out2 == out


def test_capacity_ba_on_fixture(capsys, tmp_path):
    bsc = tmp_path / "bsc.dmc"
    bsc.write_text(fixtures.fixture_text("bsc11.dmc"))
    code, out, _ = run_cli(capsys, "capacity", "ba", "--channel", bsc, "--tol", "1e-9")
    assert code == 0
    assert out.splitlines()[0].startswith("capacity: 0.500084")


def test_capacity_bracket_cli(capsys, tmp_path, example1_path):
    csv = tmp_path / "bracket.csv"
    code, out, _ = run_cli(capsys, "capacity", "bracket", "--pfa", example1_path,
                           "--delta", "0.1", "--block", "10", "--csv", csv)
    assert code == 0
    assert "upper: 1" in out
    header, row = csv.read_text().strip().splitlines()
    assert header == "block,lower,upper"


def test_capacity_stability_cli(capsys):
    code, out, _ = run_cli(capsys, "capacity", "stability", "--val", "1.0",
                           "--delta", "0.1", "--n-list", "4,4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,n_t,m_t,m_formula,m_floor"
    t, n_t, m_t, m_formula, m_floor = map(int, lines[1].split(","))
    assert m_t >= m_floor == 16


def test_witness_report_text(capsys):
    code, out, _ = run_cli(capsys, "witness", "--x", "3/4", "--eps", "1/10", "--k", "4")
    assert code == 0
    assert "requirement 1 (p_q4_q6 <= eps): met" in out


def test_gadget_family_counts_on_stderr(capsys, tmp_path):
    amp = tmp_path / "amp3.pfa"
    amp.write_text(fixtures.fixture_text("amp3.pfa"))
    code, out, err = run_cli(capsys, "gadget", "family", "--pfa", amp, "--lam", "1")
    assert code == 0
    assert "states: 14" in err and "alphabet size: 5" in err
    assert "states: q0" in out


def test_capacity_converse_cli(capsys, tmp_path):
    d25 = tmp_path / "d25.pfa"
    d25.write_text(fixtures.fixture_text("d_25.pfa"))
    code, out, _ = run_cli(capsys, "capacity", "converse", "--pfa", d25,
                           "--n", "3", "--trials", "10", "--seed", "1")
    assert code == 0
    assert "violations: 0/10" in out
