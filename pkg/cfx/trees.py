"""
Typing relations for parse trees, empty trees and a tree enumerator.
"""
from __future__ import annotations

from cfx import parse_tree as pt
from cfx.cfe import Mu, Var, binders, cfe_nullable, unfold
from cfx.errors import NotNullable
from cfx.parse_tree import ParseTree, flatten, node_count
from cfx.regex import Alt, Cat, Eps, Expr, Star, Sym

__all__ = [
    "ParseTree", "flatten", "node_count", "check_cfe_type", "check_re_type",
    "mk_empty", "enumerate_trees",
]


def _check(p: ParseTree, e: Expr, regular: bool) -> bool:
    match p, e:
        case pt.Eps(), Eps():
            return True
        case pt.Sym(x), Sym(y):
            return x == y
        case pt.Inl(child), Alt(left, _):
            return _check(child, left, regular)
        case pt.Inr(child), Alt(_, right):
            return _check(child, right, regular)
        case pt.Seq(first, second), Cat(left, right):
            return _check(first, left, regular) and _check(second, right, regular)
        case pt.Fold(child), Mu() if not regular:
            return _check(child, unfold(e), regular)
        case pt.Fold(pt.Inr(pt.Eps())), Star() if regular:
            return True
        case pt.Fold(pt.Inl(pt.Seq(head, rest))), Star(body) if regular:
            return _check(head, body, regular) and _check(rest, e, regular)
    return False


def check_cfe_type(p: ParseTree, e: Expr) -> bool:
    """⊢ p : e for a closed context-free expression."""
    return _check(p, e, regular=False)


def check_re_type(t: ParseTree, r: Expr) -> bool:
    """⊢ t : r for a regular expression; stars fold over Inl(Seq) / Inr(Eps)."""
    return _check(t, r, regular=True)


def mk_empty(e: Expr) -> ParseTree:
    if not cfe_nullable(e):
        raise NotNullable(f"expression does not accept the empty word: {e!r}")

    def build(node: Expr) -> ParseTree:
        match node:
            case Eps():
                return pt.EPS
            case Alt(left, right):
                return pt.Inl(build(left)) if cfe_nullable(left) else pt.Inr(build(right))
            case Cat(left, right):
                return pt.Seq(build(left), build(right))
            case Mu(_, body):
                return pt.Fold(build(body))
        raise NotNullable(f"no empty tree for {node!r}")

    return build(e)


def enumerate_trees(e: Expr, max_nodes: int) -> list[ParseTree]:
    """Every valid tree of e with at most max_nodes nodes, in a fixed order."""
    mus = binders(e)
    memo: dict[tuple[Expr, int], tuple[ParseTree, ...]] = {}

    def gen(node: Expr, budget: int) -> tuple[ParseTree, ...]:
        if budget <= 0:
            return ()
        key = (node, budget)
        if key in memo:
            return memo[key]
        match node:
            case Eps():
                found = (pt.EPS,)
            case Sym(symbol):
                found = (pt.Sym(symbol),)
            case Var(name):
                found = gen(mus[name], budget)
            case Mu(_, body):
                found = tuple(pt.Fold(child) for child in gen(body, budget - 1))
            case Alt(left, right):
                found = tuple(pt.Inl(child) for child in gen(left, budget - 1)) + tuple(
                    pt.Inr(child) for child in gen(right, budget - 1)
                )
            case Cat(left, right):
                pairs = []
                for first in gen(left, budget - 2):
                    for second in gen(right, budget - 1 - node_count(first)):
                        pairs.append(pt.Seq(first, second))
                found = tuple(pairs)
            case _:
                found = ()
        memo[key] = found
        return found

    return list(gen(e, max_nodes))
