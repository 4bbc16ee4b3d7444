"""Worked-example systems and automata used across the test suite."""

from nonterm.automata import TreeAutomaton
from nonterm.parser import parse_trs
from nonterm.terms import EPSILON, App, Signature

LR_SRS = "(RULES zL -> Lz, Rz -> zR, bL -> bR, Rb -> Lzb)"
S_TRS = "(VAR x y z)(RULES ap(ap(ap(S,x),y),z) -> ap(ap(x,z),ap(y,z)))"

S_SIG = Signature.of([("ap", 2), ("S", 0)])


def lr_system():
    return parse_trs(LR_SRS, "srs")


def s_system():
    return parse_trs(S_TRS, "trs")


def a_lr(signature=None):
    sig = signature or lr_system().signature
    return TreeAutomaton.build(
        sig,
        4,
        [3],
        {
            EPSILON: [((), 0)],
            "z": [((1,), 1), ((2,), 2)],
            "b": [((0,), 1), ((2,), 3)],
            "R": [((1,), 2)],
            "L": [((1,), 2)],
        },
    )


def a_s():
    return TreeAutomaton.build(
        S_SIG,
        5,
        [4],
        {
            "S": [((), 0)],
            "ap": [
                ((0, 0), 1),
                ((1, 0), 2),
                ((0, 2), 2),
                ((0, 3), 2),
                ((2, 2), 3),
                ((2, 3), 3),
                ((3, 3), 3),
                ((3, 3), 4),
            ],
        },
    )


def redex_c(literal=False):
    """Hand-built redex automaton for the S-rule.

    With ``literal=True`` the pair ``(3,3)`` has no ``ap``-successor, so the
    automaton is incomplete; the default adds ``(3,3) -> 3`` so that redex
    state 3 absorbs upward from both sides.
    """
    rows = [((), 0)]
    ap = []
    for q in (0, 1, 2):
        ap += [((0, q), 1), ((1, q), 2), ((2, q), 3), ((3, q), 3), ((q, 3), 3)]
    if not literal:
        ap.append(((3, 3), 3))
    return TreeAutomaton.build(S_SIG, 4, [3], {"S": rows, "ap": sorted(set(ap))})


def ap(f, a):
    return App("ap", (f, a))


S = App("S")
SSS = ap(ap(S, S), S)
