"""Bottom-up nondeterministic finite tree automata.

States are the integers ``0 .. num_states-1``. A transition for a symbol of
arity ``n`` is a pair ``((q1, ..., qn), q)``; constants have the empty tuple.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Hashable, Iterable, Mapping, Sequence

from .terms import App, Signature, Term, Var, term_size

Transition = tuple[tuple[int, ...], int]


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class TreeAutomaton:
    signature: Signature
    num_states: int
    accepting: frozenset[int]
    transitions: Mapping[str, frozenset[Transition]]
    labels: tuple[Hashable, ...] | None = field(default=None, compare=False)
    _by_args: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        trans = {name: frozenset(self.transitions.get(name, ())) for name, _ in self.signature}
        extra = set(self.transitions) - set(trans)
        if extra:
            raise AutomatonError(f"transitions for symbols outside the signature: {sorted(extra)}")
        object.__setattr__(self, "transitions", trans)
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        n = self.num_states
        for q in self.accepting:
            if not 0 <= q < n:
                raise AutomatonError(f"accepting state {q} out of range")
        by_args: dict[str, dict[tuple[int, ...], frozenset[int]]] = {}
        for name, arity in self.signature:
            table: dict[tuple[int, ...], set[int]] = defaultdict(set)
            for args, q in trans[name]:
                if len(args) != arity:
                    raise AutomatonError(
                        f"transition {args}->{q} for {name!r} does not match arity {arity}"
                    )
                if not 0 <= q < n or not all(0 <= p < n for p in args):
                    raise AutomatonError(f"transition {args}->{q} for {name!r} uses unknown states")
                table[tuple(args)].add(q)
            by_args[name] = {k: frozenset(v) for k, v in table.items()}
        object.__setattr__(self, "_by_args", by_args)
        if self.labels is not None and len(self.labels) != n:
            raise AutomatonError("one label per state required")

    @classmethod
    def build(
        cls,
        signature: Signature,
        num_states: int,
        accepting: Iterable[int],
        transitions: Mapping[str, Iterable[Sequence]],
        labels: Sequence[Hashable] | None = None,
    ) -> TreeAutomaton:
        """Convenience constructor accepting lists: ``{"ap": [[(0, 0), 1], ...]}``."""
        trans = {
            name: frozenset((tuple(args), int(q)) for args, q in rows)
            for name, rows in transitions.items()
        }
        return cls(
            signature,
            num_states,
            frozenset(accepting),
            trans,
            tuple(labels) if labels is not None else None,
        )

    @property
    def states(self) -> range:
        return range(self.num_states)

    def targets(self, symbol: str, args: tuple[int, ...]) -> frozenset[int]:
        return self._by_args[symbol].get(args, frozenset())

    def num_transitions(self) -> int:
        return sum(len(t) for t in self.transitions.values())

    def with_accepting(self, accepting: Iterable[int]) -> TreeAutomaton:
        return TreeAutomaton(self.signature, self.num_states, frozenset(accepting), self.transitions, self.labels)

    def without_transition(self, symbol: str, transition: Transition) -> TreeAutomaton:
        trans = dict(self.transitions)
        trans[symbol] = trans[symbol] - {transition}
        return TreeAutomaton(self.signature, self.num_states, self.accepting, trans, self.labels)


def interpret(t: Term, alpha: Mapping[str, Iterable[int]], automaton: TreeAutomaton) -> frozenset[int]:
    """Set of states ``t`` can evaluate to when each variable ``x`` ranges over ``alpha[x]``."""
    cache: dict[Term, frozenset[int]] = {}

    def go(s: Term) -> frozenset[int]:
        if isinstance(s, Var):
            if s.name not in alpha:
                raise AutomatonError(f"unbound variable {s.name!r}")
            return frozenset(alpha[s.name])
        hit = cache.get(s)
        if hit is not None:
            return hit
        if s.symbol not in automaton.signature:
            raise AutomatonError(f"symbol {s.symbol!r} not in the automaton's signature")
        child_sets = [go(a) for a in s.args]
        result: set[int] = set()
        if all(child_sets):
            for args, q in automaton.transitions[s.symbol]:
                if q not in result and all(p in cs for p, cs in zip(args, child_sets)):
                    result.add(q)
        out = frozenset(result)
        cache[s] = out
        return out

    return go(t)


def interpret_ground(t: Term, automaton: TreeAutomaton) -> frozenset[int]:
    return interpret(t, {}, automaton)


def accepts(t: Term, automaton: TreeAutomaton) -> bool:
    return not interpret_ground(t, automaton).isdisjoint(automaton.accepting)


def reachable_states(automaton: TreeAutomaton) -> frozenset[int]:
    return frozenset(_derivations(automaton))


def _derivations(automaton: TreeAutomaton) -> dict[int, tuple[str, tuple[int, ...]]]:
    """Least fixpoint of reachability, recording the first transition that reached each state.

    Children of a recorded transition were reached strictly earlier, so the
    records unfold into finite witness terms.
    """
    reached: dict[int, tuple[str, tuple[int, ...]]] = {}
    pending = [
        (name, sorted(automaton.transitions[name])) for name, _ in automaton.signature
    ]
    changed = True
    while changed:
        changed = False
        for name, rows in pending:
            for args, q in rows:
                if q not in reached and all(p in reached for p in args):
                    reached[q] = (name, args)
                    changed = True
    return reached


def _unfold(state: int, derivation: Mapping[int, tuple[str, tuple[int, ...]]]) -> App:
    name, args = derivation[state]
    return App(name, [_unfold(p, derivation) for p in args])


def is_empty(automaton: TreeAutomaton) -> bool:
    return reachable_states(automaton).isdisjoint(automaton.accepting)


def _term_key(t: App, order: Mapping[str, int]) -> tuple:
    return (term_size(t), order[t.symbol], tuple(_term_key(a, order) for a in t.args))


def minimal_terms(automaton: TreeAutomaton) -> dict[int, App]:
    """For every reachable state, the smallest ground term evaluating to it.

    Terms are compared by size, then symbol order in the signature, then
    children left to right.
    """
    order = {name: i for i, (name, _) in enumerate(automaton.signature)}
    best: dict[int, tuple[tuple, App]] = {}
    changed = True
    while changed:
        changed = False
        for name, _ in automaton.signature:
            for args, q in automaton.transitions[name]:
                if not all(p in best for p in args):
                    continue
                t = App(name, [best[p][1] for p in args])
                key = _term_key(t, order)
                if q not in best or key < best[q][0]:
                    best[q] = (key, t)
                    changed = True
    return {q: t for q, (_, t) in best.items()}


def minimal_accepted_term(automaton: TreeAutomaton) -> App | None:
    order = {name: i for i, (name, _) in enumerate(automaton.signature)}
    candidates = [t for q, t in minimal_terms(automaton).items() if q in automaton.accepting]
    if not candidates:
        return None
    return min(candidates, key=lambda t: _term_key(t, order))


def product(a: TreeAutomaton, b: TreeAutomaton) -> TreeAutomaton:
    """Componentwise product; state ``(q, p)`` gets id ``q * b.num_states + p``.

    The accepting set is empty; callers inspect reachable pairs instead.
    """
    if a.signature != b.signature:
        raise AutomatonError("product of automata over different signatures")
    m = b.num_states
    trans: dict[str, set[Transition]] = {}
    for name, _ in a.signature:
        rows: set[Transition] = set()
        for args_a, qa in a.transitions[name]:
            for args_b, qb in b.transitions[name]:
                args = tuple(x * m + y for x, y in zip(args_a, args_b))
                rows.add((args, qa * m + qb))
        trans[name] = rows
    labels = tuple((q, p) for q in a.states for p in b.states)
    return TreeAutomaton(
        a.signature,
        a.num_states * m,
        frozenset(),
        {k: frozenset(v) for k, v in trans.items()},
        labels,
    )


def is_deterministic(b: TreeAutomaton) -> bool:
    return all(len(targets) <= 1 for table in b._by_args.values() for targets in table.values())


def check_deterministic_complete(b: TreeAutomaton) -> bool:
    for name, arity in b.signature:
        table = b._by_args[name]
        if any(len(targets) != 1 for targets in table.values()):
            return False
        if len(table) != b.num_states**arity:
            return False
    return True


def complete_automaton(b: TreeAutomaton) -> TreeAutomaton:
    """Route every tuple without a target to a fresh non-accepting sink state."""
    if not is_deterministic(b):
        raise AutomatonError("completion requires a deterministic automaton")
    if check_deterministic_complete(b):
        return b
    sink = b.num_states
    n = b.num_states + 1
    trans: dict[str, set[Transition]] = {}
    for name, arity in b.signature:
        rows = set(b.transitions[name])
        for args in cartesian(range(n), repeat=arity):
            if sink in args or not b.targets(name, args):
                rows.add((args, sink))
        trans[name] = rows
    labels = None if b.labels is None else b.labels + ("sink",)
    return TreeAutomaton(b.signature, n, b.accepting, {k: frozenset(v) for k, v in trans.items()}, labels)


def inclusion_counterexample(a: TreeAutomaton, b: TreeAutomaton) -> App | None:
    """A ground term accepted by ``a`` and rejected by ``b``, or ``None`` if L(a) ⊆ L(b).

    ``b`` must be deterministic and complete.
    """
    if a.signature != b.signature:
        raise AutomatonError("inclusion check over different signatures")
    if not check_deterministic_complete(b):
        raise AutomatonError("inclusion check needs a deterministic, complete right-hand automaton")
    prod = product(a, b)
    derivation = _derivations(prod)
    m = b.num_states
    bad = sorted(
        s for s in derivation if s // m in a.accepting and s % m not in b.accepting
    )
    if not bad:
        return None
    witnesses = [_unfold(s, derivation) for s in bad]
    return min(witnesses, key=term_size)


def check_inclusion(a: TreeAutomaton, b: TreeAutomaton) -> bool | App:
    """``True`` when L(a) ⊆ L(b), otherwise a counterexample term."""
    witness = inclusion_counterexample(a, b)
    return True if witness is None else witness
