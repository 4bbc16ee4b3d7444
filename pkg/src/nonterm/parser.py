"""Reader and printer for TPDB-style ``.trs`` / ``.srs`` files.

Term systems::

    (VAR x y z)
    (RULES
      ap(ap(ap(S,x),y),z) -> ap(ap(x,z),ap(y,z))
    )

An optional ``(SIG (f 2) (c 0) ...)`` section declares symbols that do not
occur in any rule. String systems list one rule per comma or line, letters
separated by whitespace (``z L -> L z``); when no rule side contains
whitespace, single characters are read as letters (``zL -> Lz``).
Sections other than VAR, SIG and RULES are skipped.
"""

from __future__ import annotations

import re
from pathlib import Path

from .terms import (
    TRS,
    App,
    Origin,
    Rule,
    Signature,
    Term,
    Var,
    embed_srs,
    format_term,
    variables,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s+|->=|->|[(),]|[^\s(),]+")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, int]] = []
        for m in _TOKEN.finditer(text):
            if not m.group().isspace():
                self.toks.append((m.group(), m.start()))
        self.i = 0

    def where(self, offset: int | None = None) -> tuple[int, int]:
        if offset is None:
            offset = self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def error(self, message: str, offset: int | None = None) -> ParseError:
        return ParseError(message, *self.where(offset))

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def next(self) -> str:
        if self.i >= len(self.toks):
            raise self.error("unexpected end of input")
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.peek()
        if got != tok:
            raise self.error(f"expected {tok!r}, got {got!r}" if got else f"expected {tok!r} before end of input")
        self.i += 1


def _skip_section(toks: _Tokens) -> None:
    depth = 1
    while depth:
        tok = toks.next()
        if tok == "(":
            depth += 1
        elif tok == ")":
            depth -= 1


def _sections(text: str) -> list[tuple[str, int, int, _Tokens]]:
    """Split input into (name, body start, body end) sections."""
    toks = _Tokens(text)
    out = []
    while toks.peek() is not None:
        toks.expect("(")
        name_offset = toks.toks[toks.i][1] if toks.i < len(toks.toks) else len(text)
        name = toks.next()
        start = toks.i
        try:
            _skip_section(toks)
        except ParseError:
            raise toks.error(f"unclosed ({name} section", name_offset) from None
        out.append((name.upper(), start, toks.i - 1, toks))
    return out


def _parse_term(toks: _Tokens, var_names: set[str], arities: dict[str, tuple[int, int]]) -> Term:
    offset = toks.toks[toks.i][1] if toks.i < len(toks.toks) else len(toks.text)
    name = toks.next()
    if name in ("(", ")", ",", "->", "->="):
        raise toks.error(f"expected a term, got {name!r}", offset)
    if name not in var_names:
        arities.setdefault(name, (-1, offset))
    if toks.peek() == "(":
        toks.next()
        args: list[Term] = []
        if toks.peek() != ")":
            args.append(_parse_term(toks, var_names, arities))
            while toks.peek() == ",":
                toks.next()
                args.append(_parse_term(toks, var_names, arities))
        toks.expect(")")
        if name in var_names:
            raise toks.error(f"variable {name!r} applied to arguments", offset)
    elif name in var_names:
        return Var(name)
    else:
        args = []
    seen = arities[name]
    if seen[0] == -1:
        arities[name] = (len(args), offset)
    elif seen[0] != len(args):
        raise toks.error(
            f"symbol {name!r} used with arity {len(args)}, earlier with arity {seen[0]}", offset
        )
    return App(name, args)


def _parse_term_rules(text: str) -> TRS:
    var_names: set[str] = set()
    declared: list[tuple[str, int]] = []
    rules: list[Rule] = []
    arities: dict[str, tuple[int, int]] = {}
    for name, start, end, toks in _sections(text):
        if name == "VAR":
            var_names.update(tok for tok, _ in toks.toks[start:end])
        elif name == "SIG":
            toks.i = start
            while toks.i < end:
                toks.expect("(")
                sym = toks.next()
                arity = toks.next()
                if not arity.isdigit():
                    raise toks.error(f"bad arity {arity!r} for {sym!r}")
                toks.expect(")")
                declared.append((sym, int(arity)))
        elif name == "RULES":
            toks.i = start
            while toks.i < end:
                lhs_offset = toks.toks[toks.i][1]
                lhs = _parse_term(toks, var_names, arities)
                arrow = toks.next()
                if arrow == "->=":
                    raise toks.error("relative rules are not supported")
                if arrow != "->":
                    raise toks.error(f"expected '->', got {arrow!r}")
                rhs = _parse_term(toks, var_names, arities)
                if toks.i > end:
                    raise toks.error("rule runs past the end of the RULES section")
                try:
                    rules.append(Rule(lhs, rhs))
                except ValueError as e:
                    raise toks.error(str(e), lhs_offset) from None
    sig_entries = dict(declared)
    for sym, (n, offset) in arities.items():
        if sig_entries.setdefault(sym, n) != n:
            line = text.count("\n", 0, offset) + 1
            col = offset - (text.rfind("\n", 0, offset) + 1) + 1
            raise ParseError(f"symbol {sym!r} declared with arity {sig_entries[sym]}, used with {n}", line, col)
    sig = Signature.of([(s, sig_entries[s]) for s in dict.fromkeys([s for s, _ in declared] + list(arities))])
    return TRS(sig, tuple(rules), Origin.TERM)


def _parse_string_rules(text: str, juxtapose: bool | None) -> TRS:
    raw: list[tuple[str, str, int]] = []
    for name, start, end, toks in _sections(text):
        if name != "RULES":
            continue
        body_start = toks.toks[start][1] if start < end else toks.toks[end][1]
        body = text[body_start : toks.toks[end][1]]
        for m in re.finditer(r"[^,\n]+", body):
            chunk = m.group()
            if not chunk.strip():
                continue
            offset = body_start + m.start()
            parts = chunk.split("->")
            if len(parts) != 2 or chunk.count("->=") or chunk.count("->") != 1:
                line = text.count("\n", 0, offset) + 1
                col = offset - (text.rfind("\n", 0, offset) + 1) + 1
                raise ParseError(f"malformed string rule {chunk.strip()!r}", line, col)
            raw.append((parts[0].strip(), parts[1].strip(), offset))
    if juxtapose is None:
        juxtapose = all(" " not in l and " " not in r and "\t" not in l + r for l, r, _ in raw)
        juxtapose = juxtapose and any(len(l) > 1 or len(r) > 1 for l, r, _ in raw)
    if juxtapose:
        words = [(list(l), list(r)) for l, r, _ in raw]
    else:
        words = [(l.split(), r.split()) for l, r, _ in raw]
    for (l, r), (_, _, offset) in zip(words, raw):
        if not l:
            line = text.count("\n", 0, offset) + 1
            col = offset - (text.rfind("\n", 0, offset) + 1) + 1
            raise ParseError("empty left-hand side", line, col)
    try:
        return embed_srs(words)
    except ValueError as e:
        raise ParseError(str(e), 1, 1) from None


def parse_trs(text: str, format: str = "trs", juxtapose: bool | None = None) -> TRS:
    """Parse TPDB-style text. String systems come back embedded as term systems."""
    if format == "trs":
        return _parse_term_rules(text)
    if format == "srs":
        return _parse_string_rules(text, juxtapose)
    raise ValueError(f"unknown format {format!r}")


def format_from_path(path: str | Path) -> str:
    return "srs" if Path(path).suffix.lower() == ".srs" else "trs"


def load_trs(path: str | Path, format: str | None = None, juxtapose: bool | None = None) -> TRS:
    path = Path(path)
    return parse_trs(path.read_text(encoding="utf-8"), format or format_from_path(path), juxtapose)


def format_trs(trs: TRS) -> str:
    """Canonical printed form; parses back (as ``trs``) to an equal system."""
    names: dict[str, None] = {}
    for rule in trs.rules:
        names.update(dict.fromkeys(variables(rule.lhs)))
    lines = []
    if names:
        lines.append(f"(VAR {' '.join(names)})")
    lines.append("(SIG " + " ".join(f"({name} {n})" for name, n in trs.signature) + ")")
    lines.append("(RULES")
    lines.extend(f"  {format_term(r.lhs)} -> {format_term(r.rhs)}" for r in trs.rules)
    lines.append(")")
    return "\n".join(lines) + "\n"
