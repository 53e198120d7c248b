import random

import pytest
from hypothesis import given, strategies as st

from budge import bridge, pl, tp
from budge.bridge import Decr1, Decr2, Incr1, Incr2, Loop2
from gen import random_bridge_program

ADD = (Loop2((Decr2(), Incr1())),)


def test_numerals():
    assert bridge.encode_numeral(0) == "0"
    assert bridge.encode_numeral(2) == "SS0"
    assert bridge.encode_numeral(3) == "SSS0"


@pytest.mark.parametrize("n", range(21))
def test_numeral_round_trip(n):
    assert bridge.decode_numeral(bridge.encode_numeral(n)) == n


def test_lower_program():
    assert bridge.lower_program(pl.parse_program("((2,-2,1))")) == ADD
    assert bridge.lower_program(()) == ()
    assert bridge.lower_program(pl.parse_program("(1,-1,2,-2)")) == (Incr1(), Decr1(), Incr2(), Decr2())
    with pytest.raises(bridge.UnsupportedLoopHeadError):
        bridge.lower_program(pl.parse_program("((1,-1))"))
    with pytest.raises(bridge.UnsupportedRegisterError):
        bridge.lower_program(pl.parse_program("((3,-3))"))
    with pytest.raises(bridge.UnsupportedRegisterError):
        bridge.lower_program(pl.parse_program("((2,3))"))


def test_raise_inverts_lower():
    s = pl.parse_program("(1,(2,-2,(2,-2,1),-1),2)")
    assert bridge.raise_program(bridge.lower_program(s)) == s


def test_encode_program():
    assert str(bridge.encode_program(())) == "NIL"
    assert str(bridge.encode_program((Incr1(),))) == "(S0 NIL)"
    # a loop element is (SS0 BODY), matching the ((SS0 x) y) pattern
    assert str(bridge.encode_program(ADD)) == "((SS0 (PP0 (S0 NIL))) NIL)"


def test_golden_run():
    plan = bridge.generate_proof(ADD, 1, 2)
    assert plan.final.statement == "NIL (SSS0 0)"
    assert plan.schedule == [
        "rInitState",
        "rLoop2Succ",
        "rNextState-2",
        "rNextState+1",
        "rLoop2Succ",
        "rNextState-2",
        "rNextState+1",
        "rLoop2Base",
    ]
    sess = tp.check_script(plan.script())
    assert sess.theorems[plan.final.name].statement == "NIL (SSS0 0)"
    assert bridge.decode_state(plan.final.statement) == ("NIL", 3, 0)


def test_prelude_is_in_every_script():
    script = bridge.generate_proof(ADD, 1, 2).script()
    assert script.startswith(bridge.PRELUDE)
    assert "rAppendNil : APPEND NIL y y\n" in script
    assert "rAppendRec : APPEND x y z -> APPEND (a x) y (a z)\n" in script
    assert "rSkip" not in script


def test_empty_program():
    plan = bridge.generate_proof((), 0, 0)
    assert plan.final.statement == "NIL (0 0)"
    assert plan.schedule == ["rInitState"]
    assert bridge.verify_bridge((), 0, 0)


def test_two_increments():
    plan = bridge.generate_proof((Incr1(), Incr2()), 0, 0)
    assert plan.final.statement == "NIL (S0 S0)"
    assert pl.eval_vector((), bridge.raise_program((Incr1(), Incr2()))) == (1, 1)
    assert bridge.verify_bridge((Incr1(), Incr2()), 0, 0)


def test_loop_then_drained_loop():
    p = bridge.lower_program(pl.parse_program("((2,-2,1),(2,-2))"))
    v = bridge.verify(p, 2, 3)
    assert v.ok and v.state == (5, 0)


def test_skips_use_supplementary_rules():
    p = (Decr1(), Decr2(), Incr1())
    plan = bridge.generate_proof(p, 0, 0)
    assert plan.uses_skip_rules
    assert plan.schedule == ["rInitState", "rSkip-1", "rSkip-2", "rNextState+1"]
    assert bridge.SKIP_RULES in plan.script()
    assert bridge.verify_bridge(p, 0, 0)


def test_divergent_program_emits_nothing():
    with pytest.raises(pl.NonTerminationError):
        bridge.generate_proof((Loop2((Incr1(),)),), 0, 1, max_steps=1000)


def test_theorem_names_unique_and_fresh():
    plan = bridge.generate_proof(ADD, 3, 3)
    names = [a.name for a in plan.applications]
    assert len(names) == len(set(names))
    prelude_names = {s.rule.name for s in tp.parse_script(bridge.PRELUDE + bridge.SKIP_RULES)}
    assert not prelude_names & set(names)


def test_jsonl_sidecar_matches_plan():
    import json

    plan = bridge.generate_proof(ADD, 1, 2)
    records = [json.loads(l) for l in plan.jsonl().splitlines()]
    assert [r["name"] for r in records] == [a.name for a in plan.applications]
    sess = tp.check_script(plan.script())
    for r in records:
        assert sess.theorems[r["name"]].statement == r["statement"]


lists = st.lists(st.sampled_from([Incr1(), Decr1(), Incr2(), Decr2(), Loop2((Decr2(),))]), max_size=4)


@given(lists, lists)
def test_append_lemma(xs, ys):
    b = bridge._Builder()
    items = [bridge.encode_command(c) for c in xs]
    lemma, zs = b.append(items, bridge.encode_program(tuple(ys)))
    script = bridge.PRELUDE + "".join(a.line() + "\n" for a in b.plan.applications)
    sess = tp.check_script(script)
    expected = f"APPEND {bridge.encode_program(tuple(xs))} {bridge.encode_program(tuple(ys))} {bridge.encode_program(tuple(xs + ys))}"
    assert sess.theorems[lemma].statement == expected
    assert str(zs) == str(bridge.encode_program(tuple(xs + ys)))


def test_random_programs_verify():
    rng = random.Random(7)
    done = 0
    while done < 30:
        p = random_bridge_program(rng)
        r1, r2 = rng.randint(0, 3), rng.randint(0, 3)
        try:
            pl.eval_vector((r1, r2), bridge.raise_program(p), 2000)
        except pl.NonTerminationError:
            continue
        assert bridge.verify_bridge(p, r1, r2), (p, r1, r2)
        done += 1
