"""Command-line front end: ``nonterm prove`` and ``nonterm verify``.

Exit codes: 0 non-termination proven or certificate valid, 1 certificate
invalid, 2 no proof found (MAYBE), 3 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import shlex
import sys
from pathlib import Path
from typing import Sequence

from .certificate import (
    Certificate,
    CertificateError,
    Verdict,
    decode_certificate,
    emit_reduction_evidence,
    encode_certificate,
    system_hash,
    verify_certificate,
)
from .parser import ParseError, load_trs
from .redex import NotLeftLinearError
from .search import SearchConfig, run_search
from .terms import TRS, Origin, format_term, term_to_word

EXIT_NONTERMINATING = 0
EXIT_INVALID = 1
EXIT_MAYBE = 2
EXIT_ERROR = 3


class UsageError(Exception):
    pass


def _show(t, trs: TRS) -> str:
    if trs.origin is Origin.STRING:
        return " ".join(term_to_word(t)) or "(empty word)"
    return format_term(t)


def _load(args) -> TRS:
    try:
        return load_trs(args.file, args.format, args.juxtapose)
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e.strerror}") from None
    except ParseError as e:
        raise UsageError(f"{args.file}:{e}") from None


def _checks(verdict: Verdict) -> list[str]:
    mark = {True: "pass", False: "FAIL"}
    lines = [
        f"nonempty: {mark[verdict.nonempty]}",
        f"quasi-model: {mark[verdict.quasi_model.holds]}",
        f"redex-inclusion: {mark[verdict.redex_inclusion]}",
    ]
    for v in verdict.quasi_model.violations:
        alpha = ", ".join(f"{x}={q}" for x, q in v.assignment)
        lines.append(f"  rule {v.rule_index} with {alpha or 'no variables'}: state {v.state} not preserved")
    if verdict.counterexample is not None:
        lines.append(f"  accepted term without redex: {verdict.counterexample}")
    return lines


def _evidence(trs: TRS, cert: Certificate, k: int | None) -> list[str] | None:
    if k is None:
        return None
    return [_show(t, trs) for t in emit_reduction_evidence(trs, cert, k)]


def _print_trace(trace: list[str]) -> None:
    steps = len(trace) - 1
    print(f"evidence ({steps} step{'' if steps == 1 else 's'}):")
    print("\n".join(f"  {line}" for line in trace))


def cmd_prove(args) -> int:
    trs = _load(args)
    cfg = SearchConfig(
        max_states=args.max_states,
        witness_depth=args.witness_depth,
        witness_pool_size=args.witness_pool,
        max_refinements=args.max_refinements,
        timeout=args.timeout,
        nonempty=args.nonempty,
        solver_command=tuple(shlex.split(args.solver)) if args.solver else None,
    )
    try:
        outcome = run_search(trs, cfg)
    except NotLeftLinearError:
        raise UsageError("only left-linear systems are supported") from None
    cert = outcome.certificate
    if cert is None:
        if args.json:
            print(json.dumps({"answer": "MAYBE", "reason": outcome.status}, sort_keys=True))
        else:
            print("MAYBE")
            print(f"search {outcome.status} after {outcome.solver_calls} solver calls")
        return EXIT_MAYBE
    if args.emit_cert:
        Path(args.emit_cert).write_text(encode_certificate(cert), encoding="utf-8")
    trace = _evidence(trs, cert, args.evidence)
    if args.json:
        report = {
            "answer": "NONTERMINATING",
            "states": cert.automaton.num_states,
            "certificate": json.loads(encode_certificate(cert)),
            "evidence": trace,
        }
        print(json.dumps(report, sort_keys=True, ensure_ascii=False))
    else:
        print("NONTERMINATING")
        print(f"certificate: {cert.automaton.num_states}-state tree automaton")
        if args.emit_cert:
            print(f"written to {args.emit_cert}")
        if trace is not None:
            _print_trace(trace)
    return EXIT_NONTERMINATING


def cmd_verify(args) -> int:
    trs = _load(args)
    try:
        cert = decode_certificate(Path(args.cert).read_text(encoding="utf-8"))
    except OSError as e:
        raise UsageError(f"cannot read {args.cert}: {e.strerror}") from None
    except CertificateError as e:
        raise UsageError(f"{args.cert}: {e}") from None
    try:
        verdict = verify_certificate(trs, cert, require_hash=not args.force_recheck)
    except NotLeftLinearError:
        raise UsageError("only left-linear systems are supported") from None
    except CertificateError as e:
        raise UsageError(str(e)) from None
    trace = _evidence(trs, cert, args.evidence) if verdict.ok else None
    if args.json:
        report = verdict.as_dict()
        report["system_hash"] = system_hash(trs)
        report["evidence"] = trace
        print(json.dumps(report, sort_keys=True, ensure_ascii=False))
    else:
        print(verdict.status.value)
        print("\n".join(_checks(verdict)))
        if not verdict.hash_matches:
            print("system hash: mismatch" + (" (rechecked)" if args.force_recheck else ""))
        if trace is not None:
            _print_trace(trace)
    return EXIT_NONTERMINATING if verdict.ok else EXIT_INVALID


def _non_negative(value: str) -> int:
    k = int(value)
    if k < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return k


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonterm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file")
        p.add_argument("--format", choices=["trs", "srs"], help="default: from the file extension")
        jx = p.add_mutually_exclusive_group()
        jx.add_argument("--juxtapose", dest="juxtapose", action="store_const", const=True,
                        help="srs: every character is a letter")
        jx.add_argument("--no-juxtapose", dest="juxtapose", action="store_const", const=False,
                        help="srs: letters are whitespace separated")
        p.add_argument("--evidence", type=_non_negative, metavar="K", help="print a K-step reduction")
        p.add_argument("--json", action="store_true", help="machine-readable report")

    prove = sub.add_parser("prove", help="search for a non-termination certificate")
    common(prove)
    prove.add_argument("--max-states", type=int, default=6)
    prove.add_argument("--timeout", type=float)
    prove.add_argument("--witness-depth", type=int, default=6)
    prove.add_argument("--witness-pool", type=int, default=64)
    prove.add_argument("--max-refinements", type=int, default=200)
    prove.add_argument("--nonempty", choices=["reachability", "witness"], default="reachability")
    prove.add_argument("--solver", help="external DIMACS solver command (default: $NONTERM_SAT_SOLVER or embedded)")
    prove.add_argument("--emit-cert", metavar="PATH")
    prove.set_defaults(func=cmd_prove)

    verify = sub.add_parser("verify", help="check a certificate")
    common(verify)
    verify.add_argument("--cert", required=True, metavar="PATH")
    verify.add_argument("--force-recheck", action="store_true",
                        help="accept a certificate issued for a different system if it checks out")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
