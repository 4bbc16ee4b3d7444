"""Non-termination certificates: verification, reduction evidence and JSON codec.

A tree automaton certifies non-termination of a left-linear system when its
language is non-empty, it is a quasi-model of the system (so the language is
closed under rewriting), and every accepted term contains a redex.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .automata import (
    TreeAutomaton,
    accepts,
    inclusion_counterexample,
    is_empty,
    minimal_accepted_term,
)
from .parser import format_trs
from .quasi_model import QuasiModelReport, is_quasi_model
from .redex import NotLeftLinearError, build_redex_automaton
from .terms import TRS, App, Signature, is_left_linear, iter_reducts


class CertificateError(ValueError):
    pass


class SignatureMismatch(CertificateError):
    pass


class EvidenceError(RuntimeError):
    """Raised when a verified certificate fails to produce a reduction; indicates a bug."""


class Status(str, Enum):
    NONTERMINATING = "NONTERMINATING"
    INVALID = "INVALID"


def system_hash(trs: TRS) -> str:
    return hashlib.sha256(format_trs(trs).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Certificate:
    automaton: TreeAutomaton
    system_hash: str
    provenance: str = "hand-written"
    note: str = ""

    @classmethod
    def for_system(cls, trs: TRS, automaton: TreeAutomaton, provenance: str = "hand-written", note: str = ""):
        return cls(automaton, system_hash(trs), provenance, note)


@dataclass(frozen=True)
class Verdict:
    status: Status
    nonempty: bool
    quasi_model: QuasiModelReport
    redex_inclusion: bool
    counterexample: App | None = None
    hash_matches: bool = True
    reasons: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.status is Status.NONTERMINATING

    def as_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "checks": {
                "nonempty": self.nonempty,
                "quasi_model": self.quasi_model.holds,
                "redex_inclusion": self.redex_inclusion,
            },
            "quasi_model_violations": [
                {"rule": v.rule_index, "assignment": dict(v.assignment), "state": v.state}
                for v in self.quasi_model.violations
            ],
            "counterexample": None if self.counterexample is None else str(self.counterexample),
            "hash_matches": self.hash_matches,
            "reasons": list(self.reasons),
        }


def verify_certificate(trs: TRS, cert: Certificate, require_hash: bool = False) -> Verdict:
    """Run the three certificate checks.

    With ``require_hash`` a certificate issued for a different system is
    INVALID even when the checks pass.
    """
    automaton = cert.automaton
    if automaton.signature != trs.signature:
        raise SignatureMismatch("certificate signature differs from the system's signature")
    if not is_left_linear(trs):
        raise NotLeftLinearError("verification needs a left-linear system")

    nonempty = not is_empty(automaton)
    qm = is_quasi_model(automaton, trs)
    witness = inclusion_counterexample(automaton, build_redex_automaton(trs))
    hash_ok = cert.system_hash == system_hash(trs)

    reasons = []
    if not nonempty:
        reasons.append("language is empty")
    if not qm.holds:
        reasons.append("automaton is not a quasi-model")
    if witness is not None:
        reasons.append(f"accepts redex-free term {witness}")
    if require_hash and not hash_ok:
        reasons.append("certificate was issued for a different system")
    status = Status.INVALID if reasons else Status.NONTERMINATING
    return Verdict(status, nonempty, qm, witness is None, witness, hash_ok, tuple(reasons))


def emit_reduction_evidence(trs: TRS, cert: Certificate, steps: int) -> list[App]:
    """A rewrite sequence of ``steps`` steps staying inside the certificate's language."""
    automaton = cert.automaton
    t = minimal_accepted_term(automaton)
    if t is None:
        raise EvidenceError("certificate language is empty")
    trace = [t]
    for i in range(steps):
        t = next((s for s in iter_reducts(t, trs) if accepts(s, automaton)), None)
        if t is None:
            raise EvidenceError(f"no accepted reduct of {trace[-1]} at step {i}")
        trace.append(t)
    return trace


# -- JSON codec -------------------------------------------------------------------


def encode_certificate(cert: Certificate) -> str:
    a = cert.automaton
    doc = {
        "signature": [{"name": name, "arity": n} for name, n in a.signature],
        "states": a.num_states,
        "accepting": sorted(a.accepting),
        "transitions": {
            name: [[list(args), q] for args, q in sorted(a.transitions[name])]
            for name, _ in a.signature
        },
        "system_hash": cert.system_hash,
        "provenance": {"kind": cert.provenance, "note": cert.note},
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def decode_certificate(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateError(f"not JSON: {e}") from None
    if not isinstance(doc, dict):
        raise CertificateError("certificate must be a JSON object")
    missing = {"signature", "states", "accepting", "transitions"} - set(doc)
    if missing:
        raise CertificateError(f"missing keys: {sorted(missing)}")
    try:
        sig = Signature.of((entry["name"], entry["arity"]) for entry in doc["signature"])
    except (KeyError, TypeError, ValueError) as e:
        raise CertificateError(f"bad signature: {e}") from None
    n = doc["states"]
    if not isinstance(n, int) or n < 0:
        raise CertificateError("'states' must be a non-negative integer")

    def state(q: Any) -> int:
        if not isinstance(q, int) or isinstance(q, bool) or not 0 <= q < n:
            raise CertificateError(f"state id {q!r} out of range 0..{n - 1}")
        return q

    accepting = frozenset(state(q) for q in doc["accepting"])
    transitions = {}
    for name, rows in doc["transitions"].items():
        if name not in sig:
            raise CertificateError(f"unknown symbol {name!r}")
        arity = sig.arity(name)
        parsed = set()
        for row in rows:
            if not (isinstance(row, list) and len(row) == 2 and isinstance(row[0], list)):
                raise CertificateError(f"malformed transition {row!r} for {name!r}")
            args, q = row
            if len(args) != arity:
                raise CertificateError(
                    f"arity mismatch: {name!r} has arity {arity}, transition has {len(args)} sources"
                )
            parsed.add((tuple(state(p) for p in args), state(q)))
        transitions[name] = frozenset(parsed)
    provenance = doc.get("provenance") or {}
    if not isinstance(provenance, dict):
        raise CertificateError("'provenance' must be an object")
    automaton = TreeAutomaton(sig, n, accepting, transitions)
    return Certificate(
        automaton,
        str(doc.get("system_hash", "")),
        str(provenance.get("kind", "hand-written")),
        str(provenance.get("note", "")),
    )
