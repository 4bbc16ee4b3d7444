from itertools import chain, combinations, product

import pytest

from nonterm.automata import TreeAutomaton, accepts, interpret, interpret_ground
from nonterm.parser import parse_trs
from nonterm.quasi_model import enumerate_singleton_assignments, is_quasi_model
from nonterm.terms import Signature, iter_ground_terms, one_step_reducts, variables

from oracles import accepted_sample, interpret_by_runs, random_automaton, seeded
from worked_examples import S, S_SIG, SSS, a_lr, a_s, ap, lr_system, s_system


def _lhs_table(A, rule):
    table = {}
    for combo in product(A.states, repeat=3):
        alpha = {v: {q} for v, q in zip("xyz", combo)}
        got = interpret(rule.lhs, alpha, A)
        if got:
            table[combo] = got
    return table


def test_reference_certificates_are_quasi_models():
    assert is_quasi_model(a_lr(), lr_system()).holds
    report = is_quasi_model(a_s(), s_system())
    assert report.holds and report.violations == ()


def test_s_rule_lhs_table_under_a_s():
    # the left-hand side only ever reaches 3 or 4, so every row lands in the accepting region
    table = _lhs_table(a_s(), s_system().rules[0])
    assert table == {
        (0, 0, 2): {3},
        (0, 0, 3): {3},
        (2, 2, 3): {3, 4},
        (2, 3, 3): {3, 4},
        (3, 2, 3): {3, 4},
        (3, 3, 3): {3, 4},
    }


def test_lhs_table_matches_brute_force():
    A, rule = a_s(), s_system().rules[0]
    for combo, states in _lhs_table(A, rule).items():
        assert states == interpret_by_runs(rule.lhs, dict(zip("xyz", combo)), A)


def test_dropping_absorbing_transition_breaks_quasi_model():
    broken = a_s().without_transition("ap", ((3, 3), 3))
    report = is_quasi_model(broken, s_system())
    assert not report.holds
    assert report.violations
    _assert_sound(broken, s_system(), report)


def _assert_sound(A, trs, report):
    for v in report.violations:
        rule = trs.rules[v.rule_index]
        alpha = dict(v.assignment)
        assert v.state in interpret_by_runs(rule.lhs, alpha, A)
        assert v.state not in interpret_by_runs(rule.rhs, alpha, A)


def test_violations_are_genuine_on_random_automata():
    rng = seeded(11)
    srule = s_system()
    failures = 0
    for _ in range(40):
        A = random_automaton(S_SIG, 3, rng, density=0.4)
        report = is_quasi_model(A, srule, max_violations=6)
        assert report.holds == (report.violations == ())
        if not report.holds:
            failures += 1
            _assert_sound(A, srule, report)
    assert failures


def test_violation_cap():
    # ap returns its first argument, so swapping arguments moves x to y
    A = TreeAutomaton.build(
        S_SIG, 3, [], {"S": [((), 0)], "ap": [((p, q), p) for p in range(3) for q in range(3)]}
    )
    trs = parse_trs("(VAR x y)(SIG (ap 2) (S 0))(RULES ap(x,y) -> ap(y,x))", "trs")
    full = is_quasi_model(A, trs)
    assert len(full.violations) == 6 and not full.truncated
    assert [v.assignment for v in full.violations[:2]] == [(("x", 0), ("y", 1)), (("x", 0), ("y", 2))]
    capped = is_quasi_model(A, trs, max_violations=1)
    assert capped.truncated and not capped.holds
    assert capped.violations == full.violations[:1]


def test_signature_mismatch_rejected():
    with pytest.raises(ValueError):
        is_quasi_model(a_s(), lr_system())


def test_singleton_assignment_enumeration():
    assert list(enumerate_singleton_assignments(["x"], [0, 1])) == [{"x": {0}}, {"x": {1}}]
    assert len(list(enumerate_singleton_assignments({"x", "y", "z"}, range(5)))) == 125
    assert list(enumerate_singleton_assignments([], range(3))) == [{}]
    order = [(a["x"], a["y"]) for a in enumerate_singleton_assignments({"y", "x"}, [0, 1])]
    assert order == [({0}, {0}), ({0}, {1}), ({1}, {0}), ({1}, {1})]


# -- singleton assignments vs all state-set assignments ----------------------------------

_SMALL = Signature.of([("f", 2), ("g", 1), ("a", 0)])
_RULES = [
    "f(x,y) -> f(y,x)",
    "g(x) -> f(x,x)",
    "f(g(x),y) -> g(y)",
    "f(x,a) -> x",
    "g(g(x)) -> a",
    "g(x) -> x",
    "f(x,y) -> g(f(x,y))",
]


def _subsets(states):
    return [set(c) for c in chain.from_iterable(combinations(states, k) for k in range(len(states) + 1))]


def _holds_for_all_state_sets(A, trs):
    for rule in trs.rules:
        names = variables(rule.lhs)
        for sets in product(_subsets(A.states), repeat=len(names)):
            alpha = dict(zip(names, sets))
            if not interpret(rule.lhs, alpha, A) <= interpret(rule.rhs, alpha, A):
                return False
    return True


@pytest.mark.parametrize("rule", _RULES)
def test_singletons_suffice(rule):
    trs = parse_trs(f"(VAR x y)(SIG (f 2) (g 1) (a 0))(RULES {rule})", "trs")
    rng = seeded(_RULES.index(rule))
    seen = {True: 0, False: 0}
    for n in (1, 2, 3):
        for _ in range(30):
            A = random_automaton(_SMALL, n, rng, density=rng.choice([0.2, 0.5, 0.8]))
            verdict = is_quasi_model(A, trs).holds
            assert verdict == _holds_for_all_state_sets(A, trs)
            seen[verdict] += 1
    assert seen[True] and seen[False]


# -- closure under rewriting ------------------------------------------------------------


def test_a_s_language_is_closed_under_rewriting():
    A, srule = a_s(), s_system()
    members = accepted_sample(A, per_state=60)
    assert len(members) >= 10
    for t in members:
        assert accepts(t, A)
        reducts = one_step_reducts(t, srule)
        assert reducts
        assert all(accepts(s, A) for s in reducts)


def test_a_lr_language_is_closed_under_rewriting():
    A, lr = a_lr(), lr_system()
    members = [t for t in iter_ground_terms(lr.signature, 9) if accepts(t, A)]
    # b z^i (L|R) z^j b with i + j <= 5
    assert len(members) == 2 * sum(k + 1 for k in range(6))
    for t in members:
        assert all(accepts(s, A) for s in one_step_reducts(t, lr))


def test_random_quasi_models_are_closed():
    rng = seeded(12)
    srule = s_system()
    checked = 0
    for _ in range(150):
        A = random_automaton(S_SIG, 2, rng, density=0.5)
        if not is_quasi_model(A, srule).holds:
            continue
        for t in iter_ground_terms(S_SIG, 5):
            if accepts(t, A):
                checked += 1
                assert all(accepts(s, A) for s in one_step_reducts(t, srule))
    assert checked


def test_interpretation_of_rhs_under_a_s():
    rhs = s_system().rules[0].rhs
    assert interpret(rhs, {"x": {0}, "y": {0}, "z": {2}}, a_s()) == {3}
    assert interpret_ground(ap(SSS, S), a_s()) == set()
