"""Quasi-model check: ``[[l]]α ⊆ [[r]]α`` for every rule and assignment.

Only assignments mapping each variable to a single state need to be tried;
interpretation distributes over unions of singleton assignments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _tuples
from typing import Iterable, Iterator, Sequence

from .automata import TreeAutomaton, interpret
from .terms import TRS, variables

DEFAULT_MAX_VIOLATIONS = 32


@dataclass(frozen=True)
class Violation:
    rule_index: int
    assignment: tuple[tuple[str, int], ...]
    state: int

    def alpha(self) -> dict[str, frozenset[int]]:
        return {x: frozenset({q}) for x, q in self.assignment}


@dataclass(frozen=True)
class QuasiModelReport:
    holds: bool
    violations: tuple[Violation, ...] = field(default=())
    truncated: bool = False


def enumerate_singleton_assignments(
    vars: Sequence[str] | set[str] | frozenset[str], states: Iterable[int]
) -> Iterator[dict[str, frozenset[int]]]:
    """All maps ``x -> {q}``, lexicographic by state id in the given variable order.

    Unordered collections of variables are sorted by name first.
    """
    names = sorted(vars) if isinstance(vars, (set, frozenset)) else list(vars)
    qs = sorted(states)
    for combo in _tuples(qs, repeat=len(names)):
        yield {x: frozenset({q}) for x, q in zip(names, combo)}


def is_quasi_model(
    automaton: TreeAutomaton, trs: TRS, max_violations: int = DEFAULT_MAX_VIOLATIONS
) -> QuasiModelReport:
    if automaton.signature != trs.signature:
        raise ValueError("automaton and rewrite system have different signatures")
    found: list[Violation] = []
    for i, rule in enumerate(trs.rules):
        names = variables(rule.lhs)
        for alpha in enumerate_singleton_assignments(names, automaton.states):
            left = interpret(rule.lhs, alpha, automaton)
            if not left:
                continue
            right = interpret(rule.rhs, alpha, automaton)
            for q in sorted(left - right):
                if len(found) == max_violations:
                    return QuasiModelReport(False, tuple(found), truncated=True)
                found.append(Violation(i, tuple((x, min(alpha[x])) for x in names), q))
    return QuasiModelReport(not found, tuple(found))
