"""First-order terms, rewrite rules and one-step rewriting.

String rewriting systems are handled through the usual embedding: every
letter is a unary symbol and the end of a word is the constant ``ε``, so the
word ``bzLzb`` is the term ``b(z(L(z(b(ε)))))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

EPSILON = "ε"


class Var:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return hash(("var", self.name))

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return self.name


class App:
    """Application of a function symbol to a tuple of argument terms."""

    __slots__ = ("symbol", "args", "_hash", "size", "depth")

    def __init__(self, symbol: str, args: Sequence[Term] = ()):
        self.symbol = symbol
        self.args = tuple(args)
        self._hash = hash((symbol, self.args))
        self.size = 1 + sum(term_size(a) for a in self.args)
        self.depth = 1 + max((term_depth(a) for a in self.args), default=0)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, App)
            and self._hash == other._hash
            and self.symbol == other.symbol
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"App({self.symbol!r}, {list(self.args)!r})"

    def __str__(self):
        return format_term(self)


Term = Var | App


def term_size(t: Term) -> int:
    return t.size if isinstance(t, App) else 1


def term_depth(t: Term) -> int:
    """Height of ``t``; constants and variables have depth 1."""
    return t.depth if isinstance(t, App) else 1


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.symbol
    return f"{t.symbol}({','.join(format_term(a) for a in t.args)})"


def variables(t: Term) -> list[str]:
    """Variable names of ``t`` in order of first occurrence (left to right)."""
    seen: dict[str, None] = {}
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            seen.setdefault(s.name)
        else:
            stack.extend(reversed(s.args))
    return list(seen)


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def subterms(t: Term) -> Iterator[Term]:
    """All subterms of ``t`` in post-order (children before parents, left to right)."""
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)
    yield t


def positions(t: Term, prefix: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Term]]:
    """(position, subterm) pairs in leftmost-innermost (post-) order."""
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            yield from positions(a, prefix + (i,))
    yield prefix, t


def replace_at(t: Term, pos: Sequence[int], new: Term) -> Term:
    if not pos:
        return new
    assert isinstance(t, App)
    i = pos[0]
    args = list(t.args)
    args[i] = replace_at(args[i], pos[1:], new)
    return App(t.symbol, args)


def substitute(t: Term, sigma: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return sigma[t.name]
    if not t.args:
        return t
    return App(t.symbol, [substitute(a, sigma) for a in t.args])


def match_pattern(pattern: Term, subject: Term) -> dict[str, Term] | None:
    """Return the substitution ``σ`` with ``pattern σ == subject``, or ``None``.

    Repeated pattern variables must be bound to equal subterms.
    """
    sigma: dict[str, Term] = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
            continue
        if not isinstance(s, App) or s.symbol != p.symbol or len(s.args) != len(p.args):
            return None
        stack.extend(zip(p.args, s.args))
    return sigma


@dataclass(frozen=True, eq=False)
class Signature:
    """Ranked alphabet.

    Symbol order fixes enumeration and tie-breaking order but is ignored by
    equality: two signatures are equal when they declare the same symbols.
    """

    symbols: tuple[tuple[str, int], ...]
    _arity: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __eq__(self, other):
        return isinstance(other, Signature) and self._arity == other._arity

    def __hash__(self):
        return hash(frozenset(self._arity.items()))

    def __post_init__(self):
        arity: dict[str, int] = {}
        for name, n in self.symbols:
            if name in arity:
                raise ValueError(f"duplicate symbol {name!r} in signature")
            if n < 0:
                raise ValueError(f"negative arity for {name!r}")
            arity[name] = n
        object.__setattr__(self, "_arity", arity)

    @classmethod
    def of(cls, symbols: Iterable[tuple[str, int]] | Mapping[str, int]) -> Signature:
        if isinstance(symbols, Mapping):
            symbols = symbols.items()
        return cls(tuple((str(name), int(n)) for name, n in symbols))

    def __contains__(self, name: object) -> bool:
        return name in self._arity

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def arity(self, name: str) -> int:
        return self._arity[name]

    def names(self) -> list[str]:
        return [name for name, _ in self.symbols]

    def constants(self) -> list[str]:
        return [name for name, n in self.symbols if n == 0]

    def index(self, name: str) -> int:
        return self.names().index(name)

    def check_term(self, t: Term) -> None:
        """Raise ``ValueError`` unless ``t`` is well formed over this signature."""
        for s in subterms(t):
            if isinstance(s, App):
                if s.symbol not in self._arity:
                    raise ValueError(f"unknown symbol {s.symbol!r}")
                if self._arity[s.symbol] != len(s.args):
                    raise ValueError(
                        f"symbol {s.symbol!r} has arity {self._arity[s.symbol]}, "
                        f"applied to {len(s.args)} arguments"
                    )


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise ValueError("left-hand side of a rule must not be a variable")
        missing = set(variables(self.rhs)) - set(variables(self.lhs))
        if missing:
            raise ValueError(f"rhs variables not in lhs: {sorted(missing)}")

    def __str__(self):
        return f"{format_term(self.lhs)} -> {format_term(self.rhs)}"


class Origin(str, Enum):
    TERM = "term-system"
    STRING = "string-system"


@dataclass(frozen=True)
class TRS:
    signature: Signature
    rules: tuple[Rule, ...]
    origin: Origin = Origin.TERM

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for rule in self.rules:
            self.signature.check_term(rule.lhs)
            self.signature.check_term(rule.rhs)


def is_left_linear(trs: TRS) -> bool:
    for rule in trs.rules:
        names = [s.name for s in subterms(rule.lhs) if isinstance(s, Var)]
        if len(names) != len(set(names)):
            return False
    return True


def one_step_reducts(t: Term, trs: TRS) -> set[Term]:
    return set(iter_reducts(t, trs))


def iter_reducts(t: Term, trs: TRS) -> Iterator[Term]:
    """Reducts of ``t`` by position (leftmost-innermost first), then by rule order."""
    for pos, s in positions(t):
        for rule in trs.rules:
            sigma = match_pattern(rule.lhs, s)
            if sigma is not None:
                yield replace_at(t, pos, substitute(rule.rhs, sigma))


def contains_redex(t: Term, trs: TRS) -> bool:
    return any(
        match_pattern(rule.lhs, s) is not None for s in subterms(t) for rule in trs.rules
    )


# -- string rewriting embedding ------------------------------------------------


def word_to_term(word: Sequence[str], tail: Term | None = None) -> Term:
    """``a1 ... an`` becomes ``a1(...an(tail)...)``; the default tail is ``ε``."""
    t = App(EPSILON) if tail is None else tail
    for letter in reversed(word):
        t = App(letter, (t,))
    return t


def term_to_word(t: Term) -> list[str]:
    """Inverse of :func:`word_to_term` for ground word terms."""
    word = []
    while isinstance(t, App) and len(t.args) == 1:
        word.append(t.symbol)
        t = t.args[0]
    if not (isinstance(t, App) and t.symbol == EPSILON and not t.args):
        raise ValueError(f"not a word term: {t}")
    return word


def embed_srs(
    rules: Iterable[tuple[Sequence[str], Sequence[str]]],
    alphabet: Sequence[str] | None = None,
) -> TRS:
    rules = [(list(l), list(r)) for l, r in rules]
    letters: dict[str, None] = dict.fromkeys(alphabet or ())
    for l, r in rules:
        letters.update(dict.fromkeys(l))
        letters.update(dict.fromkeys(r))
    if EPSILON in letters:
        raise ValueError(f"{EPSILON!r} is reserved for the end-of-word constant")
    var = "x"
    while var in letters:
        var += "'"
    x = Var(var)
    sig = Signature.of([(a, 1) for a in letters] + [(EPSILON, 0)])
    embedded = [Rule(word_to_term(l, x), word_to_term(r, x)) for l, r in rules]
    return TRS(sig, tuple(embedded), Origin.STRING)


# -- ground term enumeration -----------------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers, lexicographically."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class _GroundTerms:
    """Memoised table of ground terms by (size, max depth) in canonical order."""

    def __init__(self, sig: Signature):
        if not sig.constants():
            raise ValueError("signature has no constant; there are no ground terms")
        self.sig = sig
        self.table: dict[tuple[int, int], list[App]] = {}

    def get(self, size: int, depth: int) -> list[App]:
        key = (size, depth)
        if key in self.table:
            return self.table[key]
        out: list[App] = []
        if size >= 1 and depth >= 1:
            for name, n in self.sig.symbols:
                if n == 0:
                    if size == 1:
                        out.append(App(name))
                    continue
                for sizes in _compositions(size - 1, n):
                    pools = [self.get(s, depth - 1) for s in sizes]
                    if not all(pools):
                        continue
                    out.extend(App(name, args) for args in _product(pools))
        self.table[key] = out
        return out


def _product(pools: list[list[App]]) -> Iterator[tuple[App, ...]]:
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _product(pools[1:]):
            yield (head,) + rest


def iter_ground_terms(sig: Signature, depth: int) -> Iterator[App]:
    """Ground terms of depth ``<= depth`` by size, then symbol order, then children."""
    table = _GroundTerms(sig)
    max_arity = max((n for _, n in sig.symbols), default=0)
    if max_arity == 0:
        max_size = 1
    elif max_arity == 1:
        max_size = depth
    else:
        max_size = (max_arity**depth - 1) // (max_arity - 1)
    for size in range(1, max_size + 1):
        yield from table.get(size, depth)


def enumerate_ground_terms(sig: Signature, depth: int, count: int | None = None) -> list[App]:
    out = []
    for t in iter_ground_terms(sig, depth):
        if count is not None and len(out) >= count:
            break
        out.append(t)
    return out
