"""Modal formula DSL.

Grammar (``!`` and the modal prefixes bind tightest, then ``&``, then ``|``)::

    disj   := conj ('|' conj)*
    conj   := unary ('&' unary)*
    unary  := '!' unary | '[' ID ']' unary | '<' ID '>' unary
            | '~' '[' ID ']' unary | 'A' '(' disj ')' | ID | '(' disj ')'

Standards are arbitrary identifiers, so ``[B_risk]p`` or ``<K2>q`` parse
without grammar changes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import modal
from .algebra import GODEL, AlgebraPackage
from .frame import Frame, FrameError

__all__ = [
    "Atom", "Not", "And", "Or", "Box", "Dia", "Dual", "Audit", "Formula", "ParseError",
    "parse", "to_text", "evaluate", "diagnostic_key", "atoms", "standards", "check_resolves",
]


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    std: str
    arg: "Formula"


@dataclass(frozen=True)
class Dia:
    std: str
    arg: "Formula"


@dataclass(frozen=True)
class Dual:
    std: str
    arg: "Formula"


@dataclass(frozen=True)
class Audit:
    arg: "Formula"


Formula = Union[Atom, Not, And, Or, Box, Dia, Dual, Audit]


class ParseError(ValueError):
    def __init__(self, position: int, expected: str, src: str = ""):
        self.position = position
        self.expected = expected
        found = repr(src[position]) if position < len(src) else "end of input"
        super().__init__(f"at offset {position}: expected {expected}, found {found}")


_TOKEN = re.compile(r"(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[!&|()\[\]<>~])")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos == len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(pos, "an identifier or operator", src)
        kind = "id" if m.group("id") else "op"
        toks.append((kind, m.group(kind), pos))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def expect(self, value: str, what: str | None = None):
        kind, text, pos = self.peek()
        if kind != "op" or text != value:
            raise ParseError(pos, what or repr(value), self.src)
        self.i += 1

    def ident(self) -> str:
        kind, text, pos = self.peek()
        if kind != "id":
            raise ParseError(pos, "a standard identifier", self.src)
        self.i += 1
        return text

    def parse(self) -> Formula:
        node = self.disj()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError(pos, "'&', '|' or end of input", self.src)
        return node

    def disj(self) -> Formula:
        node = self.conj()
        while self.peek()[:2] == ("op", "|"):
            self.i += 1
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unary()
        while self.peek()[:2] == ("op", "&"):
            self.i += 1
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "op":
            if text == "!":
                self.i += 1
                return Not(self.unary())
            if text == "[":
                self.i += 1
                std = self.ident()
                self.expect("]")
                return Box(std, self.unary())
            if text == "<":
                self.i += 1
                std = self.ident()
                self.expect(">")
                return Dia(std, self.unary())
            if text == "~":
                self.i += 1
                self.expect("[", "'[' after '~'")
                std = self.ident()
                self.expect("]")
                return Dual(std, self.unary())
            if text == "(":
                self.i += 1
                node = self.disj()
                self.expect(")")
                return node
        if kind == "id":
            self.i += 1
            if text == "A" and self.peek()[:2] == ("op", "("):
                self.i += 1
                node = self.disj()
                self.expect(")")
                return Audit(node)
            return Atom(text)
        raise ParseError(pos, "a formula", self.src)


def parse(src: str) -> Formula:
    return _Parser(src).parse()


_PREC = {Or: 1, And: 2}


def to_text(phi: Formula) -> str:
    """Canonical text with the fewest parentheses the precedence allows."""
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Audit):
        return f"A({to_text(phi.arg)})"
    if isinstance(phi, (Not, Box, Dia, Dual)):
        inner = to_text(phi.arg)
        if isinstance(phi.arg, (And, Or)):
            inner = f"({inner})"
        prefix = {Not: "!", Box: "[{}]", Dia: "<{}>", Dual: "~[{}]"}[type(phi)]
        if not isinstance(phi, Not):
            prefix = prefix.format(phi.std)
        return prefix + inner
    prec = _PREC[type(phi)]
    op = " & " if isinstance(phi, And) else " | "
    left = to_text(phi.left)
    if _PREC.get(type(phi.left), 3) < prec:
        left = f"({left})"
    right = to_text(phi.right)
    if _PREC.get(type(phi.right), 3) <= prec:
        right = f"({right})"
    return left + op + right


# public alias; shadows the builtin only inside this module
print = to_text  # noqa: A001


def diagnostic_key(phi: Formula) -> tuple[str, str, str | None]:
    """Map an audited formula to a register key ``(kind, proposition, standard)``.

    The canonical refinement shapes ``p & ![M]p`` and ``p & [M]!p`` map to
    ``moore``/``anti`` items on ``p``; anything else is keyed by its text.
    """
    if isinstance(phi, And):
        left, right = phi.left, phi.right
        if isinstance(right, Not) and isinstance(right.arg, Box) and right.arg.arg == left:
            return ("moore", to_text(left), right.arg.std)
        if isinstance(right, Box) and right.arg == Not(left):
            return ("anti", to_text(left), right.std)
    return ("formula", to_text(phi), None)


def evaluate(phi: Formula, f: Frame, pkg: AlgebraPackage = GODEL, register=None) -> np.ndarray:
    """Degree of ``phi`` at every world of ``f``.

    ``A(...)`` reads the audit ``register`` (degree recorded for the
    diagnostic at each world, 0 when unrecorded or when no register is given).
    """
    if isinstance(phi, str):
        phi = parse(phi)
    if isinstance(phi, Atom):
        return np.asarray(f.prop(phi.name), dtype=float)
    if isinstance(phi, Not):
        return 1.0 - evaluate(phi.arg, f, pkg, register)
    if isinstance(phi, And):
        return np.minimum(evaluate(phi.left, f, pkg, register), evaluate(phi.right, f, pkg, register))
    if isinstance(phi, Or):
        return np.maximum(evaluate(phi.left, f, pkg, register), evaluate(phi.right, f, pkg, register))
    if isinstance(phi, Box):
        return modal.box(f, phi.std, evaluate(phi.arg, f, pkg, register), pkg)
    if isinstance(phi, Dia):
        return modal.diamond(f, phi.std, evaluate(phi.arg, f, pkg, register), pkg)
    if isinstance(phi, Dual):
        return modal.dual(f, phi.std, evaluate(phi.arg, f, pkg, register), pkg)
    if isinstance(phi, Audit):
        kind, prop, std = diagnostic_key(phi.arg)
        if register is None:
            return np.zeros(f.size)
        return np.array([register.degree(kind, prop, std, w) for w in f.worlds])
    raise TypeError(f"not a formula node: {phi!r}")


def atoms(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        return {phi.name}
    if isinstance(phi, (And, Or)):
        return atoms(phi.left) | atoms(phi.right)
    return atoms(phi.arg)


def standards(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        return set()
    if isinstance(phi, (And, Or)):
        return standards(phi.left) | standards(phi.right)
    own = {phi.std} if isinstance(phi, (Box, Dia, Dual)) else set()
    return own | standards(phi.arg)


def check_resolves(phi: Formula, f: Frame) -> None:
    missing = sorted(atoms(phi) - set(f.propositions))
    if missing:
        raise FrameError(f"unresolved atoms: {missing}")
    bad = sorted(standards(phi) - set(f.relations))
    if bad:
        raise FrameError(f"unresolved standards: {bad}")
