"""Propositional formulas over ∧, ∨, →, ⊥ and the substitutions acting on them.

Negation is not a node kind: ``~A`` parses to ``Impl(A, Bottom())``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Impl(self, other)

    def __invert__(self) -> Formula:
        return Impl(self, BOTTOM)


@dataclass(frozen=True, slots=True, repr=False)
class Var(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "Bottom()"


@dataclass(frozen=True, slots=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Impl(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Impl({self.left!r}, {self.right!r})"


BOTTOM = Bottom()
BINARY = (And, Or, Impl)

VAR_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


def var_key(name: str) -> tuple:
    """Sort key for variable names: lexicographic."""
    return (name,)


def sorted_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=var_key))


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    """Raised on malformed formula text; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.text = text


_TOKEN_RE = re.compile(r"\s*(?:(->)|([&|~()])|([a-z][a-zA-Z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            if rest.strip() == "":
                break
            start = pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unknown token {text[start]!r}", start, text)
        if m.group(1):
            tokens.append(("->", "->", m.start(1)))
        elif m.group(2):
            tokens.append((m.group(2), m.group(2), m.start(2)))
        else:
            word = m.group(3)
            kind = "false" if word == "false" else "var"
            tokens.append((kind, word, m.start(3)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    # impl := or ('->' impl)?      right-associative
    # or   := and ('|' and)*       left-associative
    # and  := un ('&' un)*         left-associative
    # un   := '~' un | atom
    # atom := var | 'false' | '(' impl ')'

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.impl()
        self.take("eof")
        return f

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.i += 1
            return Impl(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.peek() == "~":
            self.i += 1
            return Impl(self.unary(), BOTTOM)
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.tokens[self.i]
        if kind == "var":
            self.i += 1
            return Var(value)
        if kind == "false":
            self.i += 1
            return BOTTOM
        if kind == "(":
            self.i += 1
            f = self.impl()
            self.take(")")
            return f
        what = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"unexpected {what}", pos, self.text)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


# ---------------------------------------------------------------- printing

_PREC = {Impl: 1, Or: 2, And: 3}
_SYM = {Impl: "->", Or: "|", And: "&"}


def _is_neg(f: Formula) -> bool:
    return type(f) is Impl and type(f.right) is Bottom


def _prec(f: Formula) -> int:
    if type(f) in _PREC and not _is_neg(f):
        return _PREC[type(f)]
    return 4


def print_formula(f: Formula) -> str:
    """Canonical ASCII rendering, no spaces.

    ``&`` and ``|`` group to the left without parentheses.  An implication
    nested directly under another implication is always parenthesised, so
    ``(a->b)->(c->d)`` rather than ``(a->b)->c->d``; both parse to the same
    tree.
    """
    t = type(f)
    if t is Var:
        return f.name
    if t is Bottom:
        return "false"
    if _is_neg(f):
        inner = print_formula(f.left)
        return "~" + (inner if _prec(f.left) == 4 else f"({inner})")
    p = _PREC[t]
    left, right = print_formula(f.left), print_formula(f.right)
    if t is Impl:
        if _prec(f.left) <= p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
    else:
        if _prec(f.left) < p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
    return f"{left}{_SYM[t]}{right}"


# ---------------------------------------------------------------- queries

def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if type(g) in BINARY:
            stack.append(g.right)
            stack.append(g.left)


def free_vars(f: Formula) -> tuple[str, ...]:
    return sorted_vars(g.name for g in subformulas(f) if type(g) is Var)


def vars_of(formulas: Iterable[Formula]) -> tuple[str, ...]:
    names: set[str] = set()
    for f in formulas:
        names.update(free_vars(f))
    return sorted_vars(names)


def is_positive(f: Formula) -> bool:
    return not any(type(g) is Bottom for g in subformulas(f))


def size(f: Formula) -> int:
    """Number of binary connectives."""
    return sum(1 for g in subformulas(f) if type(g) in BINARY)


def conj(formulas: Iterable[Formula]) -> Formula:
    """Left-associated conjunction; the empty conjunction is ``false->false``."""
    items = list(formulas)
    if not items:
        return Impl(BOTTOM, BOTTOM)
    f = items[0]
    for g in items[1:]:
        f = And(f, g)
    return f


def disj(formulas: Iterable[Formula]) -> Formula:
    items = list(formulas)
    if not items:
        return BOTTOM
    f = items[0]
    for g in items[1:]:
        f = Or(f, g)
    return f


def fresh_var(used: Iterable[str], prefix: str = "w") -> str:
    taken = set(used)
    i = 0
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


# ---------------------------------------------------------------- substitutions

@dataclass(frozen=True)
class Substitution:
    """Finite map from variable names to formulas; other variables are fixed."""

    mapping: Mapping[str, Formula] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(sorted(self.mapping.items())))

    @classmethod
    def of(cls, **images: Formula | str) -> Substitution:
        return cls({k: parse_formula(v) if isinstance(v, str) else v
                    for k, v in images.items()})

    @property
    def positive(self) -> bool:
        return all(is_positive(f) for f in self.mapping.values())

    def __getitem__(self, name: str) -> Formula:
        return self.mapping.get(name, Var(name))

    def __call__(self, f: Formula) -> Formula:
        return apply_substitution(self, f)

    def __hash__(self) -> int:
        return hash(tuple(self.mapping.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self.mapping == other.mapping

    def image_vars(self) -> tuple[str, ...]:
        return vars_of(self.mapping.values())

    def compose(self, then: Substitution) -> Substitution:
        """The substitution ``f ↦ then(self(f))``."""
        out = {v: apply_substitution(then, g) for v, g in self.mapping.items()}
        for v, g in then.mapping.items():
            out.setdefault(v, g)
        return Substitution(out)

    def __str__(self) -> str:
        inner = ", ".join(f"{k}↦{print_formula(v)}" for k, v in self.mapping.items())
        return "{" + inner + "}"

    def to_json(self) -> dict[str, str]:
        return {k: print_formula(v) for k, v in self.mapping.items()}

    @classmethod
    def from_json(cls, doc: Mapping[str, str]) -> Substitution:
        return cls({k: parse_formula(v) for k, v in doc.items()})


def apply_substitution(s: Substitution, f: Formula) -> Formula:
    m = s.mapping
    if not m:
        return f

    def go(g: Formula) -> Formula:
        t = type(g)
        if t is Var:
            return m.get(g.name, g)
        if t is Bottom:
            return g
        return t(go(g.left), go(g.right))

    return go(f)


# ---------------------------------------------------------------- rules

def _dedup(formulas: Iterable[Formula]) -> tuple[Formula, ...]:
    seen: dict[Formula, None] = {}
    for f in formulas:
        seen.setdefault(f, None)
    return tuple(seen)


@dataclass(frozen=True)
class MRule:
    """Multiple-conclusion rule Γ/Δ; either side may be empty."""

    premises: tuple[Formula, ...] = ()
    conclusions: tuple[Formula, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "premises", _dedup(self.premises))
        object.__setattr__(self, "conclusions", _dedup(self.conclusions))

    @classmethod
    def parse(cls, premises: Iterable[str], conclusions: Iterable[str]) -> MRule:
        return cls(tuple(parse_formula(p) for p in premises),
                   tuple(parse_formula(c) for c in conclusions))

    def __eq__(self, other) -> bool:
        return (isinstance(other, MRule)
                and set(self.premises) == set(other.premises)
                and set(self.conclusions) == set(other.conclusions))

    def __hash__(self) -> int:
        return hash((frozenset(self.premises), frozenset(self.conclusions)))

    @property
    def positive(self) -> bool:
        return all(is_positive(f) for f in self.premises + self.conclusions)

    def variables(self) -> tuple[str, ...]:
        return vars_of(self.premises + self.conclusions)

    def substitute(self, s: Substitution) -> MRule:
        return MRule(tuple(s(f) for f in self.premises),
                     tuple(s(f) for f in self.conclusions))

    def __str__(self) -> str:
        left = ", ".join(map(print_formula, self.premises)) or "∅"
        right = ", ".join(map(print_formula, self.conclusions)) or "∅"
        return f"{left} / {right}"

    def to_json(self) -> dict:
        return {"premises": [print_formula(f) for f in self.premises],
                "conclusions": [print_formula(f) for f in self.conclusions]}

    @classmethod
    def from_json(cls, doc: Mapping) -> MRule:
        return cls.parse(doc.get("premises", []), doc.get("conclusions", []))

    @classmethod
    def from_text(cls, text: str) -> MRule:
        """Parse ``"A, B / C, D"``; an empty side may be written as nothing or ``∅``."""
        if text.count("/") != 1:
            raise ParseError("a rule needs exactly one '/'", text.find("/") + 1, text)
        left, right = text.split("/")

        def side(s: str) -> list[str]:
            s = s.strip()
            if s in ("", "∅"):
                return []
            return [part for part in s.split(",")]

        return cls.parse(side(left), side(right))
