"""
Parse tree values shared by the regular and the context-free typing relations.
"""
from __future__ import annotations

from dataclasses import dataclass


class ParseTree:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Eps(ParseTree):
    pass


@dataclass(frozen=True, slots=True)
class Sym(ParseTree):
    symbol: str


@dataclass(frozen=True, slots=True)
class Inl(ParseTree):
    child: ParseTree


@dataclass(frozen=True, slots=True)
class Inr(ParseTree):
    child: ParseTree


@dataclass(frozen=True, slots=True)
class Seq(ParseTree):
    left: ParseTree
    right: ParseTree


@dataclass(frozen=True, slots=True)
class Fold(ParseTree):
    child: ParseTree


EPS = Eps()


def flatten(p: ParseTree) -> str:
    """Return the yield of a tree; Fold, Inl and Inr are transparent."""
    parts: list[str] = []
    stack = [p]
    while stack:
        node = stack.pop()
        match node:
            case Sym(symbol):
                parts.append(symbol)
            case Seq(left, right):
                stack.append(right)
                stack.append(left)
            case Inl(child) | Inr(child) | Fold(child):
                stack.append(child)
    return "".join(parts)


def node_count(p: ParseTree) -> int:
    match p:
        case Eps() | Sym():
            return 1
        case Seq(left, right):
            return 1 + node_count(left) + node_count(right)
        case Inl(child) | Inr(child) | Fold(child):
            return 1 + node_count(child)
    raise TypeError(f"not a parse tree: {p!r}")


def star_empty() -> ParseTree:
    return Fold(Inr(EPS))


def star_step(head: ParseTree, rest: ParseTree) -> ParseTree:
    return Fold(Inl(Seq(head, rest)))
