import pytest
from hypothesis import given, strategies as st

from fourgeo.errors import CongruenceViolation, InputError, WrongArity
from fourgeo.verdicts import Rule, Verdict, blowup_obstruction, check_consistency, connected_sum_obstruction


def test_blowup_obstruction():
    assert blowup_obstruction(9, 3)
    assert not blowup_obstruction(9, 3, strict=True)
    assert blowup_obstruction(9, 4, strict=True)
    assert not blowup_obstruction(10, 3)
    with pytest.raises(InputError):
        blowup_obstruction(0, 5)


@given(st.integers(1, 10**9), st.integers(0, 10**9))
def test_blowup_threshold(c1sq, b):
    assert blowup_obstruction(c1sq, b) == (3 * b >= c1sq)


def test_connected_sum_obstruction():
    assert connected_sum_obstruction([30, 0], [3, 3], 6)
    assert not connected_sum_obstruction([30, 0], [3, 3], 5)
    assert connected_sum_obstruction([30, 0, 0, 0], [3, 3, 3, 3], 6)
    assert not connected_sum_obstruction([60, 0, 0, 0], [3, 3, 3, 3], 7)
    assert not connected_sum_obstruction([0, 0, 0, 0], [3, 3, 3, 7], 0)  # total b+ divisible by 8
    with pytest.raises(WrongArity):
        connected_sum_obstruction([1, 2, 3], [3, 3, 3], 1)
    with pytest.raises(CongruenceViolation):
        connected_sum_obstruction([1, 1], [3, 5], 1)


def test_verdict_needs_a_supporting_rule():
    failing = Rule.evaluate("lebrun-blowup", minimal_c1sq=10, blowups=1)
    with pytest.raises(InputError):
        Verdict("obstructed", (failing,))
    with pytest.raises(InputError):
        Verdict("KE-exists", (Rule.evaluate("aubin-yau", canonical_multiple=0),))
    Verdict("unknown", (failing,))


def test_replay_and_json():
    v = Verdict("obstructed", (Rule.evaluate("lebrun-blowup", minimal_c1sq=10, blowups=4),), ("x",), "M")
    assert v.replay()
    assert Verdict.from_json(v.to_json()) == v
    forged = Verdict("unknown", (Rule("lebrun-blowup", {"minimal_c1sq": 10, "blowups": 1}, True),))
    assert not forged.replay()


def test_consistency():
    ke = Verdict("KE-exists", (Rule.evaluate("aubin-yau", canonical_multiple=3),), subject="M")
    ob = Verdict("obstructed", (Rule.evaluate("lebrun-blowup", minimal_c1sq=3, blowups=1),), subject="M")
    check_consistency([ke, ob.__class__(ob.status, ob.rule_chain, subject="N")])
    with pytest.raises(InputError):
        check_consistency([ke, ob])
