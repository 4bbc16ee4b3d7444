"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed in the summary."""

import functools
import re
import time

import pytest

import test_automata as automata_props
import test_certificate as certificate_props
import test_quasi_model as quasi_model_props
import test_search as search_props
from conftest import ACCEPTANCE_RESULTS
from nonterm.automata import (
    accepts,
    check_deterministic_complete,
    check_inclusion,
    interpret,
    interpret_ground,
    product,
    reachable_states,
)
from nonterm.certificate import Certificate, emit_reduction_evidence, verify_certificate
from nonterm.quasi_model import is_quasi_model
from nonterm.redex import build_redex_automaton
from nonterm.search import SearchConfig, search_certificate
from nonterm.terms import Var, contains_redex, iter_ground_terms, one_step_reducts, term_to_word

from worked_examples import S, S_SIG, SSS, a_lr, a_s, ap, lr_system, redex_c, s_system

SEARCH_BUDGET = 600.0


def criterion(name):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            detail = ""
            try:
                detail = fn(*args, **kwargs) or ""
            except AssertionError as e:
                ACCEPTANCE_RESULTS.append((name, False, str(e).splitlines()[0] if str(e) else "assertion failed"))
                print(f"FAIL  {name}")
                raise
            ACCEPTANCE_RESULTS.append((name, True, detail))
            print(f"PASS  {name}")

        return run

    return wrap


x = Var("x")


@criterion("interpretation exactness")
def test_interpretation_exactness():
    A = a_s()
    alpha = {"x": {2}}
    got = [interpret(t, alpha, A) for t in (S, ap(S, S), SSS, ap(x, x), ap(ap(x, x), ap(x, x)))]
    assert got == [{0}, {1}, {2}, {3}, {3, 4}], f"open terms gave {got}"
    ground = [interpret_ground(t, A) for t in (SSS, ap(SSS, SSS), ap(ap(SSS, SSS), ap(SSS, SSS)))]
    assert ground == [{2}, {3}, {3, 4}], f"ground terms gave {ground}"


@criterion("acceptance fixture")
def test_acceptance_fixture():
    assert accepts(ap(ap(SSS, SSS), ap(SSS, SSS)), a_s())
    A = a_lr()
    shape = re.compile(r"bz*[LR]z*b")
    words = 0
    # depth 8 = up to 7 letters plus the end marker
    for t in iter_ground_terms(A.signature, 8):
        word = "".join(term_to_word(t))
        words += 1
        assert accepts(t, A) == bool(shape.fullmatch(word)), f"disagreement on {word!r}"
    assert words == sum(4**k for k in range(8))
    return f"{words} words"


# reference lhs table: assignment (x, y, z) -> states
REFERENCE_LHS_TABLE = {
    (0, 0, 2): {1},
    (0, 0, 3): {1},
    (2, 2, 3): {3, 4},
    (2, 3, 3): {3, 4},
    (3, 2, 3): {3, 4},
    (3, 3, 3): {3, 4},
}


@criterion("quasi-model fixtures")
def test_quasi_model_fixtures():
    assert is_quasi_model(a_lr(), lr_system()).holds
    assert is_quasi_model(a_s(), s_system()).holds
    A, rule = a_s(), s_system().rules[0]
    table = {}
    for q1 in A.states:
        for q2 in A.states:
            for q3 in A.states:
                got = interpret(rule.lhs, {"x": {q1}, "y": {q2}, "z": {q3}}, A)
                if got:
                    table[q1, q2, q3] = set(got)
    differing = sorted(k for k in set(table) | set(REFERENCE_LHS_TABLE) if table.get(k) != REFERENCE_LHS_TABLE.get(k))
    assert not differing, "lhs table differs at " + ", ".join(
        f"{k}: computed {sorted(table.get(k, ()))} vs reference {sorted(REFERENCE_LHS_TABLE.get(k, ()))}" for k in differing
    )


EXPECTED_PAIRS = {(0, 0), (1, 1), (2, 2), (2, 1), (3, 3), (3, 2), (2, 3), (4, 3)}


@criterion("inclusion fixture")
def test_inclusion_fixture():
    for C in (redex_c(), redex_c(literal=True)):
        P = product(a_s(), C)
        pairs = {P.labels[s] for s in reachable_states(P)}
        assert pairs == EXPECTED_PAIRS, f"reachable pairs {sorted(pairs)}"
    assert check_inclusion(a_s(), redex_c()) is True


@criterion("end-to-end verification")
def test_end_to_end_verification():
    for system, automaton in ((lr_system, a_lr), (s_system, a_s)):
        trs = system()
        cert = Certificate.for_system(trs, automaton())
        assert verify_certificate(trs, cert, require_hash=True).ok
        trace = emit_reduction_evidence(trs, cert, 25)
        assert len(trace) == 26
        assert all(accepts(t, cert.automaton) for t in trace)
        for before, after in zip(trace, trace[1:]):
            assert after in one_step_reducts(before, trs)


@criterion("redex-automaton correctness")
def test_redex_automaton_correctness():
    srule = s_system()
    B = build_redex_automaton(srule)
    assert check_deterministic_complete(B)
    terms = list(iter_ground_terms(S_SIG, 5))
    assert len(terms) == 677
    assert all(accepts(t, B) == contains_redex(t, srule) for t in terms)
    lr = lr_system()
    B = build_redex_automaton(lr)
    assert check_deterministic_complete(B)
    assert all(accepts(t, B) == contains_redex(t, lr) for t in iter_ground_terms(lr.signature, 9))


@criterion("search reproduction")
def test_search_reproduction():
    details = []
    for system, max_states in ((lr_system, 4), (s_system, 5)):
        trs = system()
        start = time.monotonic()
        cert = search_certificate(trs, SearchConfig(max_states=max_states, timeout=SEARCH_BUDGET))
        elapsed = time.monotonic() - start
        assert cert is not None, f"no certificate within {max_states} states"
        assert cert.automaton.num_states <= max_states
        assert verify_certificate(trs, cert, require_hash=True).ok
        assert elapsed <= SEARCH_BUDGET
        details.append(f"{cert.automaton.num_states} states in {elapsed:.1f}s")
    return "; ".join(details)


def _property_checks():
    for rule in quasi_model_props._RULES:
        yield functools.partial(quasi_model_props.test_singletons_suffice, rule)
    yield quasi_model_props.test_a_s_language_is_closed_under_rewriting
    yield quasi_model_props.test_a_lr_language_is_closed_under_rewriting
    yield quasi_model_props.test_random_quasi_models_are_closed
    yield automata_props.test_product_semantics_by_enumeration
    yield automata_props.test_inclusion_agrees_with_enumeration
    for system, n, witness in [(lr_system, 4, None), (s_system, 5, None)]:
        yield functools.partial(search_props.test_model_values_equal_decoded_interpretation, system, n, witness)
    yield search_props.test_fidelity_across_refinements
    for text, sig in search_props._TINY_SYSTEMS:
        yield functools.partial(search_props.test_quasi_model_clauses_match_checker, text, sig)
    for system, automaton in certificate_props.FIXTURES:
        yield functools.partial(certificate_props.test_single_mutations_flip_a_check, system, automaton)


@criterion("property suites")
def test_property_suites():
    checks = list(_property_checks())
    for check in checks:
        check()
    return f"{len(checks)} checks"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
