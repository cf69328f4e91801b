import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalrisk import formula as fm
from modalrisk import modal
from modalrisk.formula import And, Atom, Audit, Box, Dia, Dual, Not, Or, ParseError, parse, to_text
from modalrisk.frame import DenseRelation, Frame, FrameError
from modalrisk.governance import AuditRegister, DiagnosticRecord

import oracles
from conftest import two_world


def test_parse_examples():
    assert parse("p & ![K]p") == And(Atom("p"), Not(Box("K", Atom("p"))))
    assert parse("<B>q") == Dia("B", Atom("q"))
    assert parse("~[B_risk]q") == Dual("B_risk", Atom("q"))
    assert parse("A(p & ![K]p)") == Audit(And(Atom("p"), Not(Box("K", Atom("p")))))
    assert parse("a | b & c") == Or(Atom("a"), And(Atom("b"), Atom("c")))


@pytest.mark.parametrize("src, pos", [("p & & q", 4), ("r & &", 4), ("(p", 2), ("[K p", 3), ("p q", 2),
                                       ("", 0), ("p $ q", 2), ("~<K>p", 1)])
def test_parse_errors_report_position(src, pos):
    with pytest.raises(ParseError) as exc:
        parse(src)
    assert exc.value.position == pos
    assert 0 <= exc.value.position <= len(src)


def test_print_examples():
    assert to_text(And(Atom("p"), Not(Box("K", Atom("p"))))) == "p & ![K]p"
    assert to_text(Dual("B", Atom("q"))) == "~[B]q"
    assert to_text(parse("((a | b)) & (c)")) == "(a | b) & c"
    assert to_text(parse("a | (b | c)")) == "a | (b | c)"
    assert to_text(parse("(a | b) | c")) == "a | b | c"
    assert fm.print(Atom("x")) == "x"


idents = st.sampled_from(["p", "q", "r", "A", "x1"])
stds = st.sampled_from(["K", "B", "B_1", "K2"])
asts = st.recursive(
    idents.map(Atom),
    lambda kids: st.one_of(
        kids.map(Not), kids.map(Audit),
        st.tuples(kids, kids).map(lambda t: And(*t)),
        st.tuples(kids, kids).map(lambda t: Or(*t)),
        st.tuples(stds, kids).map(lambda t: Box(*t)),
        st.tuples(stds, kids).map(lambda t: Dia(*t)),
        st.tuples(stds, kids).map(lambda t: Dual(*t)),
    ),
    max_leaves=20,
)


def _depth(phi):
    if isinstance(phi, Atom):
        return 0
    if isinstance(phi, (And, Or)):
        return 1 + max(_depth(phi.left), _depth(phi.right))
    return 1 + _depth(phi.arg)


@settings(max_examples=1000)
@given(asts)
def test_roundtrip(phi):
    if _depth(phi) > 6:
        return
    assert parse(to_text(phi)) == phi


def test_evaluate_golden(liquidity):
    f = two_world((1, 1), (1, 1), std="K", p=(1, 0))
    assert fm.evaluate(parse("p & ![K]p"), f).tolist() == [1, 0]
    assert fm.evaluate("~[K]r", liquidity)[0] == pytest.approx(0.9)
    assert fm.evaluate("<K>r", liquidity)[0] == 0.6
    assert np.allclose(fm.evaluate("[K]r", liquidity), modal.box(liquidity, "K", "r"))
    assert np.allclose(fm.evaluate("r & [K]!r", liquidity), modal.refine(liquidity, "K", "r", "anti"))
    assert fm.evaluate("p | !p", f).tolist() == [1, 1]


def test_unresolved_names(liquidity):
    with pytest.raises(FrameError):
        fm.check_resolves(parse("[Q]r"), liquidity)
    with pytest.raises(FrameError):
        fm.check_resolves(parse("s"), liquidity)
    with pytest.raises(FrameError):
        fm.evaluate("s", liquidity)


def test_boolean_fragment_matches_reference():
    names = ["a", "b", "c"]
    bool_asts = st.recursive(st.sampled_from(names).map(Atom),
                             lambda k: st.one_of(k.map(Not), st.tuples(k, k).map(lambda t: And(*t)),
                                                 st.tuples(k, k).map(lambda t: Or(*t))), max_leaves=8)

    @settings(max_examples=150)
    @given(bool_asts)
    def check(phi):
        for n in (1, 2, 3):
            worlds = tuple(f"w{i}" for i in range(n))
            for vals in itertools.product([0.0, 1.0], repeat=3 * n):
                props = {nm: np.array(vals[i * n:(i + 1) * n]) for i, nm in enumerate(names)}
                f = Frame(worlds, {"K": DenseRelation(np.eye(n))}, props)
                got = fm.evaluate(phi, f)
                for w in range(n):
                    env = {nm: bool(props[nm][w]) for nm in names}
                    assert got[w] == float(oracles.boolean_eval(phi, env))

    check()


def test_audit_reads_register():
    f = two_world((1, 1), (1, 1), std="K", p=(1, 0))
    phi = parse("A(p & ![K]p)")
    assert fm.diagnostic_key(phi.arg) == ("moore", "p", "K")
    assert fm.evaluate(phi, f).tolist() == [0, 0]
    reg = AuditRegister()
    reg.record(DiagnosticRecord("moore", "p", "K", "w0", 1.0))
    assert fm.evaluate(phi, f, register=reg).tolist() == [1, 0]
    assert fm.diagnostic_key(parse("p & [K]!p")) == ("anti", "p", "K")
    assert fm.diagnostic_key(parse("p | q")) == ("formula", "p | q", None)


def test_atoms_and_standards():
    phi = parse("p & [K]<B>q | ~[B_1]r")
    assert fm.atoms(phi) == {"p", "q", "r"}
    assert fm.standards(phi) == {"K", "B", "B_1"}
