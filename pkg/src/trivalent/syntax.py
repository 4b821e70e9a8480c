"""Formula AST, parser, canonical printer and formula enumeration.

Grammar (whitespace insignificant)::

    formula := disj
    disj    := conj ("|" conj)*
    conj    := neg ("&" neg)*
    neg     := ("~" | "!") neg | atom | "(" formula ")"
    atom    := [a-z][a-zA-Z0-9_]*

Binary connectives associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

_ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


@dataclass(frozen=True, order=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not _ATOM_RE.fullmatch(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: "Formula"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return to_text(self)


Formula = Union[Atom, Neg, And, Or]
Binary = (And, Or)


@dataclass(frozen=True, order=True)
class Literal:
    atom: Atom
    positive: bool = field(default=True)

    @property
    def sort_key(self) -> tuple[str, int]:
        # by atom name, positive before negative
        return self.atom.name, 0 if self.positive else 1

    def to_formula(self) -> Formula:
        return self.atom if self.positive else Neg(self.atom)


def atoms(f: Formula) -> tuple[Atom, ...]:
    """Atoms occurring in ``f``, sorted by name."""
    found: set[Atom] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node)
        elif isinstance(node, Neg):
            stack.append(node.arg)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return tuple(sorted(found))


def size(f: Formula) -> int:
    """Number of nodes."""
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Neg):
        return 1 + size(f.arg)
    return 1 + size(f.left) + size(f.right)


def depth(f: Formula) -> int:
    """Connective nesting depth; atoms have depth 0."""
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Neg):
        return 1 + depth(f.arg)
    return 1 + max(depth(f.left), depth(f.right))


def fold_conj(items: Sequence[Formula]) -> Formula:
    if not items:
        raise ValueError("cannot fold an empty conjunction")
    result = items[0]
    for item in items[1:]:
        result = And(result, item)
    return result


def fold_disj(items: Sequence[Formula]) -> Formula:
    if not items:
        raise ValueError("cannot fold an empty disjunction")
    result = items[0]
    for item in items[1:]:
        result = Or(result, item)
    return result


# ---------------------------------------------------------------------------
# printing

_SYMBOL = {And: "&", Or: "|"}


def to_text(f: Formula) -> str:
    """Canonical text.

    A binary child is parenthesised when its connective differs from the
    parent's, or when it is the right operand of the same connective (which
    keeps left-associative parsing faithful). Negation binds tightest, so a
    negated binary formula is parenthesised and nothing else is.
    """
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Neg):
        inner = to_text(f.arg)
        return f"~({inner})" if isinstance(f.arg, Binary) else f"~{inner}"
    left, right = to_text(f.left), to_text(f.right)
    if isinstance(f.left, Binary) and type(f.left) is not type(f):
        left = f"({left})"
    if isinstance(f.right, Binary):
        right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: Iterable[str]):
        self.text = text
        self.offset = len(text[:pos].encode("utf-8"))
        self.expected = tuple(sorted(set(expected)))
        found = repr(text[pos]) if pos < len(text) else "end of input"
        super().__init__(
            f"syntax error at byte {self.offset}: found {found}, expected one of {', '.join(self.expected)}"
        )


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str | None:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> Formula:
        f = self._disj()
        if self._peek() is not None:
            raise ParseError(self.text, self.pos, ["'&'", "'|'", "end of input"])
        return f

    def _disj(self) -> Formula:
        f = self._conj()
        while self._peek() == "|":
            self.pos += 1
            f = Or(f, self._conj())
        return f

    def _conj(self) -> Formula:
        f = self._neg()
        while self._peek() == "&":
            self.pos += 1
            f = And(f, self._neg())
        return f

    def _neg(self) -> Formula:
        c = self._peek()
        if c in ("~", "!"):
            self.pos += 1
            return Neg(self._neg())
        if c == "(":
            self.pos += 1
            f = self._disj()
            if self._peek() != ")":
                raise ParseError(self.text, self.pos, ["')'", "'&'", "'|'"])
            self.pos += 1
            return f
        m = _ATOM_RE.match(self.text, self.pos) if c is not None else None
        if m is None:
            raise ParseError(self.text, self.pos, ["atom", "'~'", "'!'", "'('"])
        self.pos = m.end()
        return Atom(m.group())


def parse(text: str) -> Formula:
    return _Parser(text).parse()


def parse_many(texts: Iterable[str]) -> list[Formula]:
    return [parse(t) for t in texts]


# ---------------------------------------------------------------------------
# enumeration


def enumerate_formulas(pool: Iterable[Atom | str], max_depth: int) -> Iterator[Formula]:
    """Every formula over ``pool`` with connective depth at most ``max_depth``.

    Formulas come out by increasing depth; within a depth, negations first,
    then conjunctions, then disjunctions, with operands in the order they were
    produced. Each formula appears exactly once.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    level = [a if isinstance(a, Atom) else Atom(a) for a in pool]
    upto: list[Formula] = []
    for d in range(max_depth + 1):
        if d == 0:
            new = list(dict.fromkeys(level))
        else:
            boundary = len(upto) - len(level)  # formulas before this index are shallower
            new = [Neg(f) for f in level]
            for ctor in (And, Or):
                for i, f in enumerate(upto):
                    for j, g in enumerate(upto):
                        if i >= boundary or j >= boundary:
                            new.append(ctor(f, g))
        yield from new
        upto.extend(new)
        level = new
