import pytest
from hypothesis import given, strategies as st

from budge import tp
from budge.tp import RuleDecl, Rule, TheoremDecl
from miu import EXTRA_THEOREMS, MIU_RESULTS, MIU_SCRIPT, MUTANTS, enumerate_miu

PRELUDE = MIU_SCRIPT.split("# Example theorems")[0]


def test_parse_rule_line():
    (st_,) = tp.parse_script("r2 : |- Mx -> |- Mxx")
    assert st_ == RuleDecl(Rule("r2", ("|- Mx", "|- Mxx")), 1)


def test_parse_theorem_line():
    (st_,) = tp.parse_script("thMII : r2 x=tmI! thMI")
    assert st_ == TheoremDecl("thMII", "r2", (("x", "tmI!"),), ("thMI",), 1)


def test_parse_multiple_bindings_and_no_args():
    (st_,) = tp.parse_script("tmII! : rTmxy x=tmI!;y=tmI!")
    assert st_.bindings == (("x", "tmI!"), ("y", "tmI!")) and st_.args == ()


def test_blank_and_comment_lines():
    assert tp.parse_script("") == []
    assert tp.parse_script("# comment\n\n   \n  # indented") == []


def test_expressions_keep_interior_spaces():
    (st_,) = tp.parse_script("rX :   a  b ->  |-  c  ")
    assert st_.rule.parts == ("a  b", "|-  c")


def test_name_with_attached_colon():
    (st_,) = tp.parse_script("rA: M")
    assert st_.rule == Rule("rA", ("M",))


@pytest.mark.parametrize(
    "line",
    [
        "r2 |- Mx",  # missing ':'
        "r:x : M",  # ':' in the name
        "rX : ",  # empty expression
        "rX : a -> -> b",
        "tX : ",  # no rule
        "tX : r2 x=",  # bad binding
        "tX : r2 X=tmI!",  # uppercase variable
        "tX : r2 xy=tmI!",
        "tX : r2 x=a;x=b",
        "tX : r2 x=tmI! y=tmI!",  # second binding block among arguments
        "qX : M",  # neither rule nor theorem
    ],
)
def test_syntax_errors(line):
    with pytest.raises(tp.TpSyntaxError) as exc:
        tp.parse_script("# header\n" + line)
    assert exc.value.line == 2


def test_substitute_examples():
    assert tp.substitute("Mx", {"x": "I"}) == "MI"
    assert tp.substitute("xy", {"x": "I", "y": "I"}) == "II"
    assert tp.substitute("Mxx", {}) == "Mxx"


def test_substitute_is_simultaneous():
    assert tp.substitute("xy", {"x": "y", "y": "Q"}) == "yQ"
    assert tp.substitute("x z", {"x": "A"}) == "A z"


exprs = st.text(alphabet="abxyzMIU -|()", max_size=20)
bindings = st.dictionaries(st.sampled_from("abxyz"), st.text(alphabet="MIUS0() ", max_size=5))


@given(exprs)
def test_empty_substitution_is_identity(e):
    assert tp.substitute(e, {}) == e


@given(exprs, bindings)
def test_substitution_length(e, s):
    expected = len(e) + sum(len(s[c]) - 1 for c in e if c in s)
    assert len(tp.substitute(e, s)) == expected


def test_check_statement_examples():
    sess = tp.check_script(PRELUDE)
    assert sess.theorems["thMI"].statement == "|- MI"
    sess2 = tp.check_statement(sess, TheoremDecl("thMII", "r2", (("x", "tmI!"),), ("thMI",)))
    assert sess2.theorems["thMII"].statement == "|- MII"
    assert "thMII" not in sess.theorems  # the input session is untouched
    with pytest.raises(tp.HypothesisMismatchError) as exc:
        tp.check_statement(sess, TheoremDecl("bad", "r2", (("x", "tmU!"),), ("thMI",)))
    assert (exc.value.index, exc.value.expected, exc.value.actual) == (0, "|- MU", "|- MI")


def test_axiom_as_theorem():
    sess = tp.check_script("rMI : |- MI")
    sess = tp.check_statement(sess, TheoremDecl("thMI", "rMI"))
    assert sess.theorems["thMI"] == tp.Theorem("thMI", "|- MI")


def test_miu_script_results():
    sess = tp.check_script(MIU_SCRIPT)
    assert sess.listing() == MIU_RESULTS
    statements = {n: t.statement for n, t in sess.theorems.items()}
    assert statements["tmII!"] == "II"
    assert list(statements) == ["tmM!", "tmI!", "tmU!", "thMI", "thMII", "tmII!", "thMIIII", "thMUI"]


def test_rule_one_application():
    sess = tp.check_script(PRELUDE + "thMIU : r1 x=tmM! thMI\n")
    assert sess.theorems["thMIU"].statement == "|- MIU"


def test_empty_script():
    sess = tp.check_script("")
    assert sess.rules == {} and sess.theorems == {}


@pytest.mark.parametrize("desc, script, error", MUTANTS, ids=[m[0] for m in MUTANTS])
def test_mutants_rejected(desc, script, error):
    with pytest.raises(error) as exc:
        tp.check_script(script)
    assert exc.value.line is not None


def test_checking_is_deterministic():
    a = tp.check_script(MIU_SCRIPT + EXTRA_THEOREMS)
    b = tp.check_script(MIU_SCRIPT + EXTRA_THEOREMS)
    assert list(a.theorems.items()) == list(b.theorems.items())


def _references(st_):
    if isinstance(st_, TheoremDecl):
        return {st_.rule, *(t for _, t in st_.bindings), *st_.args}
    return set()


def test_deleting_a_referenced_line_fails_with_unknown_name():
    lines = MIU_SCRIPT.splitlines()
    statements = tp.parse_script(MIU_SCRIPT)
    referenced = set().union(*map(_references, statements))
    checked = 0
    for st_ in statements:
        name = st_.rule.name if isinstance(st_, RuleDecl) else st_.name
        if name not in referenced:
            continue
        with pytest.raises((tp.UnknownRuleError, tp.UnknownTheoremError)):
            tp.check_script("\n".join(l for i, l in enumerate(lines, 1) if i != st_.line))
        checked += 1
    assert checked == 13


def test_accepted_theorems_are_sound():
    derivable = {"|- " + w for w in enumerate_miu(4)}
    sess = tp.check_script(MIU_SCRIPT + EXTRA_THEOREMS)
    proved = [t.statement for t in sess.theorems.values() if t.statement.startswith("|- ")]
    assert len(proved) == 10
    assert set(proved) <= derivable


def test_enumerator_sanity():
    words = enumerate_miu(4)
    assert {"MI", "MII", "MIIII", "MUI", "MIU"} <= words
    assert "MU" not in words
    assert enumerate_miu(0) == {"MI"}
