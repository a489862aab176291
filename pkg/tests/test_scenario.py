import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labelfree.cli import bundled_scenarios, read_scenario
from labelfree.scenario import ScenarioError, format_complex, parse, parse_complex, serialize

MINIMAL = """
[system]
statistics = boson
modes = L, R
"""


def test_complex_literals():
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("0.5i") == 0.5j
    assert parse_complex("-i") == -1j
    assert parse_complex("1/sqrt(2)") == pytest.approx(1 / math.sqrt(2))
    assert parse_complex("exp(i*pi/2)") == pytest.approx(1j)
    assert parse_complex("2e-3j") == 0.002j
    assert parse_complex("1e+200") == 1e200
    for bad in ("__import__('os')", "x + 1", "1 +", "sqrt(1, 2)", "1/0"):
        with pytest.raises(ScenarioError):
            parse_complex(bad)


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_complex_round_trip(z):
    assert parse_complex(format_complex(z)) == z


def test_bundled_round_trip():
    for name in bundled_scenarios():
        sc = parse(read_scenario(name))
        assert parse(serialize(sc)) == sc


def test_error_positions():
    with pytest.raises(ScenarioError) as e:
        parse(MINIMAL + "[task]\nkind = amp\nbra = nope\nket = nope\n")
    assert "undefined state" in str(e.value)
    with pytest.raises(ScenarioError) as e:
        parse(MINIMAL + "[single]\na = L | ↑\nthis line is broken\n")
    assert e.value.line == 7 and e.value.column == 1
    with pytest.raises(ScenarioError) as e:
        parse(MINIMAL + "[state s]\nkind = terms\nterm = 1+ : a\n")
    assert e.value.line == 7 and e.value.column == 8


@pytest.mark.parametrize(
    "extra, message",
    [
        ("[bogus]\n", "unknown section"),
        ("[state s]\nkind = spes\nmodes = L, R\n", "needs 'spins'"),
        ("[state s]\nkind = spes\nmodes = L, R\nspins = ↑\n", "2 modes but 1 spins"),
        ("[state s]\nkind = naive_w\nmodes = L, X\n", "undefined spatial state or mode"),
        ("[single]\na = L | ↑\n[state s]\nkind = terms\nterm = 1 : a, b\n", "undefined single-particle state"),
        ("[single]\na = L | sideways\n", "unknown spin"),
        ("[task]\nkind = dance\n", "unknown task kind"),
        ("[single]\na = L | ↑\n[state s]\nkind = terms\nterm = 1 : a\n[task]\nkind = entropy\nstate = s\nm = two\n", "expected an integer"),
        ("[single]\na = L | ↑\n[state s]\nkind = terms\nterm = 1 : a\n[task]\nkind = trace\nstate = s\nwhat = 1\n", "not allowed"),
        ("[single]\na = L | ↑\n[state s]\nkind = terms\nterm = 1 : a\n[task]\nkind = spes\nstate = s\n", "not a spes state"),
    ],
)
def test_semantic_errors(extra, message):
    with pytest.raises(ScenarioError, match=message):
        parse(MINIMAL + extra)


def test_system_required():
    with pytest.raises(ScenarioError):
        parse("[spatial]\npsi = L: 1\n")
    with pytest.raises(ScenarioError):
        parse("[system]\nmodes = L\n")


def test_comments_and_defaults():
    sc = parse(MINIMAL + "# note\n[spatial]\npsi = L: 1/sqrt(2), R: 1/sqrt(2)  # superposition\n")
    assert sc.spins == ("↑", "↓")
    assert dict(sc.spatial)["psi"][0][1] == pytest.approx(1 / math.sqrt(2))
    assert sc.eta == 1


names = st.sampled_from(["a", "b", "c"])
amps = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=40)
@given(st.lists(st.tuples(amps, st.lists(names, min_size=2, max_size=2)), min_size=1, max_size=4), amps, st.sampled_from(["boson", "fermion"]))
def test_generated_round_trip(terms, z, stats):
    lines = [f"[system]\nstatistics = {stats}\nmodes = L, R\n", "[spatial]", f"psi = L: {format_complex(z)}, R: 1"]
    lines += ["[single]", "a = psi | ↑", "b = R | ↓: 0.6, ↑: 0.8", "c = L: 1 | ↓"]
    lines += ["[state s]", "kind = terms"] + [f"term = {format_complex(c)} : {', '.join(sl)}" for c, sl in terms]
    lines += ["[task x]", "kind = trace", "state = s", "over = L", "[task]", "kind = verify", "seed = 3"]
    sc = parse("\n".join(lines))
    assert parse(serialize(sc)) == sc
