import pytest

from fsmcap import fixtures
from fsmcap.formats import (FormatError, load_pfa, parse_dmc, parse_fsmc,
                            parse_pfa, serialize_fsmc, serialize_pfa)
from fsmcap.fsmc import build_V
from fsmcap.pfa import gamma, validate_pfa

GOOD = """\
# worked example
states: q1 q2 q3
alphabet: a b
initial: 1 0 0
accepting: q3
matrix a:
1/2 1 0
1/2 0 1/2
0 0 1/2
matrix b:
0 0 0
0 1 1/2
1 0 1/2
"""


def test_parse_round_trip():
    p = parse_pfa(GOOD)
    assert validate_pfa(p) == []
    assert parse_pfa(serialize_pfa(p)) == p


def test_fixture_files_parse_clean():
    for name in ("example1.pfa", "amp3.pfa", "d_34.pfa", "d_25.pfa", "family3.pfa"):
        assert validate_pfa(fixtures.load_fixture_pfa(name)) == []


def test_shipped_gadget_files_match_builders(d_34, d_25, amp3, family3):
    from fractions import Fraction
    from fsmcap.gadgets import build_D_xy, build_family_member
    assert d_34 == build_D_xy(Fraction(3, 4), Fraction(1, 2))
    assert d_25 == build_D_xy(Fraction(2, 5), Fraction(1, 2))
    assert family3 == build_family_member(amp3, 1)


def test_bad_column_sum_is_line_anchored():
    text = GOOD.replace("0 0 1/2\nmatrix b", "0 0 1/10\nmatrix b")
    with pytest.raises(FormatError) as err:
        parse_pfa(text, source="bad.pfa")
    msg = str(err.value)
    assert msg.startswith("bad.pfa:6:")           # the matrix header line
    assert "column 2" in msg and "sums to" in msg


def test_bad_rational_is_line_anchored():
    text = GOOD.replace("1/2 1 0", "1/2 oops 0")
    with pytest.raises(FormatError) as err:
        parse_pfa(text, source="bad.pfa")
    assert "bad.pfa:7:" in str(err.value) and "oops" in str(err.value)


def test_unknown_accepting_state_rejected():
    text = GOOD.replace("accepting: q3", "accepting: q9")
    with pytest.raises(FormatError) as err:
        parse_pfa(text)
    assert "q9" in str(err.value)


def test_bad_initial_sum_rejected():
    text = GOOD.replace("initial: 1 0 0", "initial: 1 0 1")
    with pytest.raises(FormatError) as err:
        parse_pfa(text)
    assert "sums to 2" in str(err.value)


def test_missing_matrix_rejected():
    text = GOOD[:GOOD.index("matrix b:")]
    with pytest.raises(FormatError) as err:
        parse_pfa(text)
    assert "'b'" in str(err.value)


def test_wrong_row_width_rejected():
    text = GOOD.replace("1/2 1 0\n", "1/2 1\n", 1)
    with pytest.raises(FormatError) as err:
        parse_pfa(text)
    assert "expected 3 entries" in str(err.value)


def test_fsmc_round_trip(example1):
    ch = build_V(gamma(example1))
    text = serialize_fsmc(ch)
    assert parse_fsmc(text) == ch


def test_fsmc_bad_table_rejected(example1):
    ch = build_V(gamma(example1))
    text = serialize_fsmc(ch)
    lines = text.splitlines()
    idx = lines.index("output 0:a:") + 1
    lines[idx] = "1 1 1"
    with pytest.raises(FormatError):
        parse_fsmc("\n".join(lines))


def test_dmc_parse():
    rows = parse_dmc("89/100 11/100\n0.11 0.89\n")
    assert rows[0][0] == 0.89
    assert rows[1][1] == 0.89
    with pytest.raises(FormatError):
        parse_dmc("1/2 1/2\n1/2\n")


def test_bsc11_fixture():
    rows = fixtures.bsc11_rows()
    assert rows == [[0.89, 0.11], [0.11, 0.89]]
