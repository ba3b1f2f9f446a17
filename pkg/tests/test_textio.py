import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from atypes import figures
from atypes.graph import AType, GenConfig, random_atype
from atypes.textio import ParseError, dump, load, parse, serialize

from conftest import graphs

ONE_IDENTITY = """ATYPE 1
NODES 3
0 INPUT
1 NAND
2 NAND
ARROWS 4
0 1
0 1
1 2
1 2
INPUT_ORDER 0
OUTPUT_ORDER 2
DELAY 2
"""


def test_one_identity_text_is_exact():
    assert serialize(figures.identity(1)) == ONE_IDENTITY
    assert parse(ONE_IDENTITY) == figures.identity(1)


@pytest.mark.parametrize("name", sorted(figures.GOLDEN))
def test_golden_round_trip(name):
    a = figures.GOLDEN[name]()
    assert parse(serialize(a)) == a


def test_file_round_trip(tmp_path):
    a = figures.multiplexer3()
    dump(a, tmp_path / "m.atype")
    assert load(tmp_path / "m.atype") == a
    assert (tmp_path / "m.atype").read_bytes().endswith(b"DELAY 6\n")


def test_empty_text_fails_at_line_one():
    with pytest.raises(ParseError) as info:
        parse("")
    assert info.value.line == 1


def test_nand_with_one_arrow_cites_indegree():
    text = ONE_IDENTITY.replace("ARROWS 4\n0 1\n0 1\n", "ARROWS 3\n0 1\n")
    with pytest.raises(ParseError) as info:
        parse(text)
    assert "indegree" in str(info.value)
    assert info.value.line == 4  # the node line of node 1
    assert parse(text, check=False).graph.sources[1] == (0,)


@pytest.mark.parametrize(
    "mutate, line",
    [
        (lambda t: t.replace("ATYPE 1", "ATYPE 2"), 1),
        (lambda t: t.replace("1 NAND", "1 NOR"), 4),
        (lambda t: t.replace("1 NAND", "7 NAND"), 4),
        (lambda t: t.replace("1 2\n1 2", "1 2\n1 9"), 10),
        (lambda t: t.replace("OUTPUT_ORDER 2", "OUTPUT_ORDER 5"), 12),
        (lambda t: t.replace("DELAY 2", "DELAY -1"), 13),
        (lambda t: t.replace("DELAY 2", "DELAY 2\nEXTRA 1"), 14),
        (lambda t: t.replace("NODES 3", "NODES  3"), 2),
        (lambda t: t.replace("DELAY 2\n", ""), 13),
    ],
)
def test_malformed_text_reports_line(mutate, line):
    with pytest.raises(ParseError) as info:
        parse(mutate(ONE_IDENTITY))
    assert info.value.line == line


def test_input_to_output_arrow_cites_arrow_line():
    text = ONE_IDENTITY.replace("1 2\n1 2", "1 2\n0 2")
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.line == 10


def test_round_trip_ten_thousand_random():
    rng = np.random.default_rng(99)
    cfgs = [GenConfig(3, 20, 1, 1), GenConfig(8, 40, 2, 1), GenConfig(7, 12, 3, 2, 0.5)]
    for i in range(10_000):
        g = random_atype(cfgs[i % 3], rng)
        a = AType(g, int(rng.integers(0, 50)))
        assert parse(serialize(a)) == a


@given(graphs(), st.integers(0, 1000))
def test_round_trip_property(g, delay):
    a = AType(g, delay)
    b = parse(serialize(a))
    assert b == a
    assert b.graph.arrows == a.graph.arrows
