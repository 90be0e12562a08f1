"""
Text syntax for regular and context-free expressions.

    mu a. e     fixed point (lowest precedence, body extends right)
    e + f       sum (right associative)
    e . f, e f  concatenation (right associative)
    e*          star
    0, 1        empty language, empty word
"""
from __future__ import annotations

import itertools

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from cfx.cfe import Mu, Var, check_well_formed, from_regex
from cfx.errors import ExpressionSyntaxError, UnboundPlaceholder
from cfx.regex import EPS, PHI, Alt, Cat, Eps, Expr, Phi, Star, Sym

GRAMMAR = r"""
?start: expr

?expr: "mu" NAME "." expr   -> mu
     | sum

?sum: seq
    | seq "+" sum           -> alt

?seq: postfix
    | postfix "."? seq      -> cat

?postfix: atom
        | postfix "*"       -> star

?atom: "0"                  -> phi
     | "1"                  -> eps
     | NAME                 -> name
     | "(" expr ")"

NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""

_parser = Lark(GRAMMAR, parser="lalr", maybe_placeholders=False)


@v_args(inline=True)
class _ToExpr(Transformer):
    def phi(self):
        return PHI

    def eps(self):
        return EPS

    def name(self, token: Token):
        return Sym(str(token))

    def star(self, body):
        return Star(body)

    def cat(self, left, right):
        return Cat(left, right)

    def alt(self, left, right):
        return Alt(left, right)

    def mu(self, token: Token, body):
        return Mu(str(token), body)


def _parse_raw(text: str) -> Expr:
    try:
        tree = _parser.parse(text)
        return _ToExpr().transform(tree)
    except UnexpectedInput as exc:
        raise ExpressionSyntaxError(text, exc.line, exc.column, type(exc).__name__) from exc
    except VisitError as exc:
        raise ExpressionSyntaxError(text, detail=str(exc.orig_exc)) from exc


def _check_symbols(text: str, expr: Expr) -> None:
    stack = [expr]
    while stack:
        node = stack.pop()
        match node:
            case Sym(symbol) if len(symbol) != 1:
                raise ExpressionSyntaxError(text, detail=f"symbols must be single characters: {symbol}")
            case Alt(left, right) | Cat(left, right):
                stack.extend((left, right))
            case Star(body):
                stack.append(body)
            case Mu(binder, body):
                raise ExpressionSyntaxError(text, detail=f"mu {binder} is not allowed in a regular expression")


def parse_regex(text: str) -> Expr:
    expr = _parse_raw(text)
    _check_symbols(text, expr)
    return expr


def _names(expr: Expr) -> set[str]:
    found: set[str] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        match node:
            case Sym(symbol):
                found.add(symbol)
            case Mu(binder, body):
                found.add(binder)
                stack.append(body)
            case Alt(left, right) | Cat(left, right):
                stack.extend((left, right))
            case Star(body):
                stack.append(body)
    return found


def _bind(expr: Expr, scope: frozenset[str]) -> Expr:
    match expr:
        case Sym(symbol) if symbol in scope:
            return Var(symbol)
        case Sym(symbol) if len(symbol) != 1:
            raise UnboundPlaceholder(symbol)
        case Alt(left, right):
            return Alt(_bind(left, scope), _bind(right, scope))
        case Cat(left, right):
            return Cat(_bind(left, scope), _bind(right, scope))
        case Star(body):
            return Star(_bind(body, scope))
        case Mu(binder, body):
            return Mu(binder, _bind(body, scope | {binder}))
    return expr


def parse_cfe(text: str) -> Expr:
    """Parse a context-free expression; stars become fresh fixed points."""
    raw = _parse_raw(text)
    bound = _bind(raw, frozenset())
    used = _names(raw)
    fresh = (name for name in (f"s{i}" for i in itertools.count()) if name not in used)
    expr = from_regex(bound, fresh)
    check_well_formed(expr)
    return expr


def parse_word(text: str) -> str:
    """Words are bare strings; "1" stands for the empty word."""
    text = text.strip()
    return "" if text == "1" else text


# ============================================================
# Rendering
# ============================================================

_MU, _SUM, _SEQ, _POSTFIX = 0, 1, 2, 3


def render(expr: Expr, level: int = _MU) -> str:
    match expr:
        case Phi():
            return "0"
        case Eps():
            return "1"
        case Sym(symbol):
            return symbol
        case Var(name):
            return name
        case Alt(left, right):
            text = f"{render(left, _SEQ)}+{render(right, _SUM)}"
            return f"({text})" if level > _SUM else text
        case Cat(left, right):
            text = f"{render(left, _POSTFIX)}.{render(right, _SEQ)}"
            return f"({text})" if level > _SEQ else text
        case Star(body):
            return f"{render(body, _POSTFIX)}*"
        case Mu(binder, body):
            text = f"mu {binder}. {render(body, _MU)}"
            return f"({text})" if level > _MU else text
    raise TypeError(f"cannot render {expr!r}")


def render_word(w: str) -> str:
    return w if w else "1"
