"""SAT-based certificate search with counterexample refinement.

For a state count ``n`` the formula describes the ``n``-state automata that
are quasi-models of the system and have a non-empty language (either some
accepting state is reachable, or a given witness term is accepted). Each
model is checked by the verifier; when the automaton accepts a redex-free
term, that term is added as a rejected term and the formula is solved again.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from itertools import product as _tuples
from typing import Callable, Iterable, Iterator, Mapping

from .automata import TreeAutomaton
from .certificate import Certificate, verify_certificate
from .redex import NotLeftLinearError
from .sat import CNF, Outcome, SolverResult, run_solver
from .terms import (
    TRS,
    App,
    Signature,
    Term,
    Var,
    contains_redex,
    enumerate_ground_terms,
    is_left_linear,
    iter_ground_terms,
    one_step_reducts,
    variables,
)

log = logging.getLogger(__name__)

# A literal is a signed CNF variable; True/False stand for constant truth values.
Lit = int | bool


@dataclass(frozen=True)
class SearchConfig:
    max_states: int = 6
    witness_depth: int = 6
    witness_pool_size: int = 64
    max_refinements: int = 200
    timeout: float | None = None
    min_states: int = 1
    nonempty: str = "reachability"  # or "witness"
    solver_command: tuple[str, ...] | None = None

    def __post_init__(self):
        for name in ("max_states", "witness_depth", "witness_pool_size", "max_refinements", "min_states"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.nonempty not in ("reachability", "witness"):
            raise ValueError(f"unknown non-emptiness mode {self.nonempty!r}")


class Encoding:
    """Variable layout and clauses for one (system, state count) pair.

    ``x[f, args, q]``: transition ``f(args) -> q``; ``a[q]``: ``q`` accepting;
    ``y(t, alpha)[q]``: ``q`` is in the interpretation of ``t`` under the
    singleton assignment ``alpha``. Every ``y`` is tied to the ``x`` variables
    by a bi-implication, so in any model it equals the true interpretation.
    """

    def __init__(self, signature: Signature, n: int):
        self.signature = signature
        self.n = n
        self.cnf = CNF()
        self.x: dict[tuple[str, tuple[int, ...], int], int] = {}
        for name, arity in signature:
            for args in _tuples(range(n), repeat=arity):
                for q in range(n):
                    self.x[name, args, q] = self.cnf.new_var()
        self.a = [self.cnf.new_var() for _ in range(n)]
        self._y: dict[tuple[Term, tuple[tuple[str, int], ...]], tuple[Lit, ...]] = {}

    def num_base_vars(self) -> int:
        return len(self.x) + len(self.a)

    def _and(self, lits: list[int]) -> int:
        if len(lits) == 1:
            return lits[0]
        c = self.cnf.new_var()
        for l in lits:
            self.cnf.add([-c, l])
        self.cnf.add([c] + [-l for l in lits])
        return c

    def _or(self, lits: list[int]) -> Lit:
        if not lits:
            return False
        if len(lits) == 1:
            return lits[0]
        d = self.cnf.new_var()
        for l in lits:
            self.cnf.add([-l, d])
        self.cnf.add([-d] + lits)
        return d

    def y(self, t: Term, alpha: Mapping[str, int]) -> tuple[Lit, ...]:
        """Literals for ``q in [[t]]alpha``, one per state ``q``."""
        if isinstance(t, Var):
            return tuple(q == alpha[t.name] for q in range(self.n))
        key = (t, tuple(sorted((v, alpha[v]) for v in variables(t))))
        hit = self._y.get(key)
        if hit is not None:
            return hit
        children = [self.y(s, alpha) for s in t.args]
        out = []
        for q in range(self.n):
            disjuncts = []
            for args in _tuples(range(self.n), repeat=len(t.args)):
                lits = [self.x[t.symbol, args, q]]
                dead = False
                for child, p in zip(children, args):
                    lit = child[p]
                    if lit is False:
                        dead = True
                        break
                    if lit is not True:
                        lits.append(lit)
                if not dead:
                    disjuncts.append(self._and(lits))
            out.append(self._or(disjuncts))
        result = tuple(out)
        self._y[key] = result
        return result

    def add_quasi_model(self, trs: TRS) -> None:
        for rule in trs.rules:
            names = variables(rule.lhs)
            for combo in _tuples(range(self.n), repeat=len(names)):
                alpha = dict(zip(names, combo))
                left = self.y(rule.lhs, alpha)
                right = self.y(rule.rhs, alpha)
                for l, r in zip(left, right):
                    if l is False or r is True:
                        continue
                    clause = ([] if l is True else [-l]) + ([] if r is False else [r])
                    self._clause(clause)

    def add_accepted(self, t: Term) -> None:
        choices = []
        for q, lit in enumerate(self.y(t, {})):
            if lit is False:
                continue
            s = self.cnf.new_var()
            if lit is not True:
                self.cnf.add([-s, lit])
            self.cnf.add([-s, self.a[q]])
            choices.append(s)
        self._clause(choices)

    def add_nonempty(self) -> None:
        """Some accepting state is reachable.

        ``r[k][q]``: ``q`` is reached by a term of height at most ``k + 1``.
        Height ``n`` suffices, since a minimal run never repeats a state along
        a path.
        """
        r = [[self._or([self.x[c, (), q] for c in self.signature.constants()]) for q in range(self.n)]]
        for _ in range(self.n - 1):
            prev = r[-1]
            layer = []
            for q in range(self.n):
                disjuncts = [] if prev[q] is False else [prev[q]]
                for name, arity in self.signature:
                    if arity == 0:
                        continue
                    for args in _tuples(range(self.n), repeat=arity):
                        if any(prev[p] is False for p in args):
                            continue
                        disjuncts.append(self._and([self.x[name, args, q]] + [prev[p] for p in args]))
                layer.append(self._or(disjuncts))
            r.append(layer)
        choices = []
        for q, lit in enumerate(r[-1]):
            if lit is False:
                continue
            s = self.cnf.new_var()
            self.cnf.add([-s, lit])
            self.cnf.add([-s, self.a[q]])
            choices.append(s)
        self._clause(choices)

    def add_rejected(self, t: Term) -> None:
        for q, lit in enumerate(self.y(t, {})):
            if lit is False:
                continue
            self._clause([-self.a[q]] + ([] if lit is True else [-lit]))

    def _clause(self, lits: list[int]) -> None:
        if not lits:
            # unsatisfiable constraint; encode as a contradiction on a fresh variable
            v = self.cnf.new_var()
            self.cnf.add([v])
            self.cnf.add([-v])
        else:
            self.cnf.add(lits)

    def decode(self, model: SolverResult) -> TreeAutomaton:
        return decode_model(model, self.n, self.signature, self)


def encode_certificate_constraints(
    trs: TRS, n: int, witness: Term | None = None, rejected: Iterable[Term] = ()
) -> Encoding:
    """Quasi-model clauses plus non-emptiness plus one exclusion per rejected term.

    Non-emptiness is "``witness`` is accepted" when a witness is given and
    "some accepting state is reachable" otherwise.
    """
    if n < 1:
        raise ValueError("need at least one state")
    enc = Encoding(trs.signature, n)
    enc.add_quasi_model(trs)
    if witness is None:
        enc.add_nonempty()
    else:
        trs.signature.check_term(witness)
        enc.add_accepted(witness)
    for u in rejected:
        enc.add_rejected(u)
    return enc


def decode_model(model: SolverResult, n: int, signature: Signature, enc: Encoding | None = None) -> TreeAutomaton:
    enc = enc or Encoding(signature, n)
    transitions: dict[str, set] = {name: set() for name, _ in signature}
    for (name, args, q), var in enc.x.items():
        if model.value(var):
            transitions[name].add((args, q))
    accepting = [q for q in range(n) if model.value(enc.a[q])]
    return TreeAutomaton(signature, n, frozenset(accepting), {k: frozenset(v) for k, v in transitions.items()})


def reaches_normal_form(t: Term, trs: TRS, budget: int = 200) -> bool:
    """Breadth-first search for a normal form among the reducts of ``t``.

    ``False`` means none was found within ``budget`` explored terms.
    """
    seen = {t}
    frontier = [t]
    while frontier and len(seen) < budget:
        layer = []
        for u in frontier:
            reducts = one_step_reducts(u, trs)
            if not reducts:
                return True
            for r in reducts:
                if r not in seen:
                    seen.add(r)
                    layer.append(r)
        frontier = layer
    return False


def witness_pool(trs: TRS, depth: int, size: int, budget: int = 200) -> Iterator[App]:
    """The first ``size`` ground terms (canonical order) that can be members of a certificate.

    A member of a rewrite-closed language whose terms all contain redexes
    cannot reach a normal form, so terms that do (within ``budget`` explored
    reducts) are skipped along with normal forms themselves.
    """
    found = 0
    for t in iter_ground_terms(trs.signature, depth):
        if found >= size:
            return
        if contains_redex(t, trs) and not reaches_normal_form(t, trs, budget):
            found += 1
            yield t


@dataclass
class SearchOutcome:
    certificate: Certificate | None
    status: str  # "found", "exhausted", "timeout"
    states: int | None = None
    witness: App | None = None
    solver_calls: int = 0
    refinements: int = 0
    unknown: int = 0
    rejected: list[App] = field(default_factory=list)


def run_search(
    trs: TRS,
    cfg: SearchConfig = SearchConfig(),
    solve: Callable[..., SolverResult] = run_solver,
    decode: Callable[[Encoding, SolverResult], TreeAutomaton] = lambda enc, m: enc.decode(m),
) -> SearchOutcome:
    """Search for a certificate; every returned certificate has passed the verifier."""
    if not is_left_linear(trs):
        raise NotLeftLinearError("certificate search needs a left-linear system")
    deadline = None if cfg.timeout is None else time.monotonic() + cfg.timeout
    if cfg.nonempty == "witness":
        witnesses: list[App | None] = list(witness_pool(trs, cfg.witness_depth, cfg.witness_pool_size))
    else:
        witnesses = [None]
    outcome = SearchOutcome(None, "exhausted")
    # Rejected terms are redex-free, so no valid certificate of any size accepts them.
    rejected = outcome.rejected

    def remaining() -> float | None:
        return None if deadline is None else deadline - time.monotonic()

    for n in range(cfg.min_states, cfg.max_states + 1):
        for w in witnesses:
            enc = encode_certificate_constraints(trs, n, w, rejected)
            for _ in range(cfg.max_refinements + 1):
                left = remaining()
                if left is not None and left <= 0:
                    outcome.status = "timeout"
                    return outcome
                result = solve(enc.cnf, timeout=left, command=cfg.solver_command)
                outcome.solver_calls += 1
                if result.outcome is Outcome.UNKNOWN:
                    outcome.unknown += 1
                    log.info("solver gave up on n=%d witness=%s: %s", n, w, result.detail)
                    left = remaining()
                    if left is not None and left <= 0:
                        outcome.status = "timeout"
                        return outcome
                    break
                if result.outcome is Outcome.UNSAT:
                    break
                automaton = decode(enc, result)
                cert = Certificate.for_system(trs, automaton, "searched", f"states={n}")
                verdict = verify_certificate(trs, cert)
                if verdict.ok:
                    outcome.certificate = cert
                    outcome.status = "found"
                    outcome.states = n
                    outcome.witness = w
                    return outcome
                if verdict.counterexample is None:
                    log.warning("decoded model failed a check other than redex inclusion: %s", verdict.reasons)
                    break
                outcome.refinements += 1
                rejected.append(verdict.counterexample)
                enc.add_rejected(verdict.counterexample)
    return outcome


def search_certificate(trs: TRS, cfg: SearchConfig = SearchConfig()) -> Certificate | None:
    return run_search(trs, cfg).certificate


__all__ = [
    "Encoding",
    "SearchConfig",
    "SearchOutcome",
    "decode_model",
    "encode_certificate_constraints",
    "enumerate_ground_terms",
    "run_search",
    "run_solver",
    "search_certificate",
    "witness_pool",
]
