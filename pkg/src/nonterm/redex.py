"""Deterministic automaton for the ground terms that contain a redex.

A state records which non-variable subterms of left-hand sides the current
subtree is an instance of, plus whether a full left-hand side has been seen
anywhere below. Built bottom-up over all argument tuples of states discovered
so far, which makes the result deterministic and complete by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _tuples

from .automata import TreeAutomaton
from .terms import TRS, App, Term, Var, is_left_linear, subterms

_HOLE = Var("_")


class NotLeftLinearError(ValueError):
    pass


@dataclass(frozen=True)
class MatchState:
    matched: frozenset[Term]
    redex_found: bool


def _anonymize(t: Term) -> Term:
    # Linear patterns are equal modulo renaming iff equal after blanking variables.
    if isinstance(t, Var):
        return _HOLE
    return App(t.symbol, [_anonymize(a) for a in t.args])


def build_redex_automaton(trs: TRS) -> TreeAutomaton:
    if not is_left_linear(trs):
        raise NotLeftLinearError("redex automaton needs a left-linear system")
    lhss = {_anonymize(rule.lhs) for rule in trs.rules}
    patterns: dict[str, list[App]] = {name: [] for name, _ in trs.signature}
    for lhs in lhss:
        for p in subterms(lhs):
            if isinstance(p, App) and p not in patterns[p.symbol]:
                patterns[p.symbol].append(p)

    def step(symbol: str, children: tuple[MatchState, ...]) -> MatchState:
        matched = frozenset(
            p
            for p in patterns[symbol]
            if all(isinstance(sub, Var) or sub in child.matched for sub, child in zip(p.args, children))
        )
        found = any(c.redex_found for c in children) or not matched.isdisjoint(lhss)
        return MatchState(matched, found)

    states: list[MatchState] = []
    index: dict[MatchState, int] = {}
    table: dict[str, dict[tuple[int, ...], int]] = {name: {} for name, _ in trs.signature}

    def intern(s: MatchState) -> int:
        if s not in index:
            index[s] = len(states)
            states.append(s)
        return index[s]

    def incomplete() -> bool:
        return any(len(table[name]) < len(states) ** n for name, n in trs.signature)

    while incomplete():
        for name, arity in trs.signature:
            for args in _tuples(range(len(states)), repeat=arity):
                if args not in table[name]:
                    table[name][args] = intern(step(name, tuple(states[i] for i in args)))

    transitions = {
        name: frozenset((args, q) for args, q in rows.items()) for name, rows in table.items()
    }
    accepting = frozenset(i for i, s in enumerate(states) if s.redex_found)
    return TreeAutomaton(trs.signature, len(states), accepting, transitions, tuple(states))
