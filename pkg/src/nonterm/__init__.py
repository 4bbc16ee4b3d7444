"""Non-termination proofs for rewrite systems with tree automata certificates."""

from .automata import (
    TreeAutomaton,
    accepts,
    check_deterministic_complete,
    check_inclusion,
    complete_automaton,
    interpret,
    is_empty,
    product,
    reachable_states,
)
from .certificate import (
    Certificate,
    Status,
    Verdict,
    decode_certificate,
    emit_reduction_evidence,
    encode_certificate,
    verify_certificate,
)
from .parser import format_trs, load_trs, parse_trs
from .quasi_model import enumerate_singleton_assignments, is_quasi_model
from .redex import build_redex_automaton
from .search import SearchConfig, run_search, search_certificate
from .terms import (
    TRS,
    App,
    Rule,
    Signature,
    Var,
    contains_redex,
    embed_srs,
    is_left_linear,
    match_pattern,
    one_step_reducts,
)

__version__ = "0.1.0"
