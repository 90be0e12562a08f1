"""
Regular expressions: nullability, Brzozowski derivatives, canonical forms,
descendants, membership, containment and a backtracking tree parser.

The node classes defined here (Phi, Eps, Sym, Alt, Cat) are shared with
context-free expressions; `cfx.cfe` adds Var and Mu on top of them.
"""
from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import lru_cache

from cfx import parse_tree as pt

logger = logging.getLogger(__name__)


# ============================================================
# Syntax
# ============================================================

class Expr:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Phi(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Eps(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Sym(Expr):
    symbol: str


@dataclass(frozen=True, slots=True)
class Alt(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Cat(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Star(Expr):
    body: Expr


RegEx = Phi | Eps | Sym | Alt | Cat | Star

PHI = Phi()
EPS = Eps()


@dataclass(frozen=True, slots=True)
class Alphabet:
    """Finite alphabet; symbols are kept sorted so the order is fixed."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        ordered = tuple(sorted(set(self.symbols)))
        for symbol in ordered:
            if len(symbol) != 1:
                raise ValueError(f"symbols must be single characters: {symbol!r}")
        object.__setattr__(self, "symbols", ordered)

    @classmethod
    def of(cls, symbols: Iterable[str]) -> Alphabet:
        return cls(tuple(symbols))

    @classmethod
    def parse(cls, text: str) -> Alphabet:
        return cls(tuple(ch for ch in text if not ch.isspace() and ch != ","))

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.symbols


def alt_chain(items: Iterable[Expr]) -> Expr:
    """Right-nested sum of the items; the empty sum is Phi."""
    items = list(items)
    if not items:
        return PHI
    result = items[-1]
    for item in reversed(items[:-1]):
        result = Alt(item, result)
    return result


def symbols(expr: Expr) -> frozenset[str]:
    """Symbols occurring in a regular or context-free expression."""
    found: set[str] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Sym):
            found.add(node.symbol)
        elif isinstance(node, (Alt, Cat)):
            stack.extend((node.left, node.right))
        elif hasattr(node, "body"):
            stack.append(node.body)
    return frozenset(found)


def size(r: Expr) -> int:
    """Node count."""
    match r:
        case Alt(left, right) | Cat(left, right):
            return 1 + size(left) + size(right)
        case Star(body):
            return 1 + size(body)
    return 1


def _prefix_tokens(r: RegEx) -> tuple[str, ...]:
    match r:
        case Phi():
            return ("0",)
        case Eps():
            return ("1",)
        case Sym(symbol):
            return (symbol,)
        case Alt(left, right):
            return ("+",) + _prefix_tokens(left) + _prefix_tokens(right)
        case Cat(left, right):
            return (".",) + _prefix_tokens(left) + _prefix_tokens(right)
        case Star(body):
            return ("*",) + _prefix_tokens(body)
    raise TypeError(f"not a regular expression: {r!r}")


def canonical_key(r: RegEx) -> tuple[int, tuple[str, ...]]:
    """Total order on regexes: node count first, then the prefix token sequence."""
    return size(r), _prefix_tokens(r)


# ============================================================
# Language operations
# ============================================================

def re_nullable(r: RegEx) -> bool:
    match r:
        case Eps() | Star():
            return True
        case Alt(left, right):
            return re_nullable(left) or re_nullable(right)
        case Cat(left, right):
            return re_nullable(left) and re_nullable(right)
    return False


def deriv(r: RegEx, x: str) -> RegEx:
    match r:
        case Sym(symbol):
            return EPS if symbol == x else PHI
        case Alt(left, right):
            return Alt(deriv(left, x), deriv(right, x))
        case Cat(left, right):
            head = Cat(deriv(left, x), right)
            if re_nullable(left):
                return Alt(head, deriv(right, x))
            return head
        case Star(body):
            return Cat(deriv(body, x), r)
    return PHI


def _alternatives(r: RegEx) -> set[RegEx]:
    atoms: set[RegEx] = set()
    while isinstance(r, Alt):
        atoms.add(r.left)
        r = r.right
    if not isinstance(r, Phi):
        atoms.add(r)
    return atoms


def _cat(left: RegEx, right: RegEx) -> RegEx:
    match left:
        case Eps():
            return right
        case Phi():
            return PHI
        case Cat(head, tail):
            return _cat(head, _cat(tail, right))
    return Cat(left, right)


@lru_cache(maxsize=1 << 16)
def simp(r: RegEx) -> RegEx:
    """Canonical representative of the similarity class of r."""
    match r:
        case Alt(left, right):
            atoms = _alternatives(simp(left)) | _alternatives(simp(right))
            return alt_chain(sorted(atoms, key=canonical_key))
        case Cat(left, right):
            return _cat(simp(left), simp(right))
        case Star(body):
            return Star(simp(body))
    return r


@lru_cache(maxsize=1 << 16)
def step(r: RegEx, x: str) -> RegEx:
    """Canonical derivative simp(deriv(r, x))."""
    return simp(deriv(r, x))


def deriv_word(r: RegEx, w: str) -> RegEx:
    """Iterated canonical derivative; simp is applied after every symbol."""
    state = simp(r)
    for x in w:
        state = step(state, x)
    return state


def descendants(r: RegEx, sigma: Iterable[str]) -> frozenset[RegEx]:
    sigma = tuple(sigma)
    start = simp(r)
    seen = {start}
    work = deque([start])
    while work:
        current = work.popleft()
        for x in sigma:
            nxt = step(current, x)
            if nxt not in seen:
                seen.add(nxt)
                work.append(nxt)
    return frozenset(seen)


def re_matches(r: RegEx, w: str) -> bool:
    return re_nullable(deriv_word(r, w))


def re_contains(r: RegEx, s: RegEx, sigma: Iterable[str] | None = None) -> bool:
    """L(r) ⊆ L(s), decided by exploring pairs of canonical descendants."""
    alphabet = sorted(set(sigma or ()) | symbols(r) | symbols(s))
    start = (simp(r), simp(s))
    seen = {start}
    work = deque([start])
    while work:
        left, right = work.popleft()
        if re_nullable(left) and not re_nullable(right):
            return False
        for x in alphabet:
            pair = (step(left, x), step(right, x))
            if pair not in seen:
                seen.add(pair)
                work.append(pair)
    logger.debug("containment explored %d descendant pairs", len(seen))
    return True


def sorted_canonical(items: Iterable[RegEx]) -> list[RegEx]:
    return sorted(items, key=canonical_key)


# ============================================================
# Parsing words into regular parse trees
# ============================================================

def re_parse(r: RegEx, w: str) -> pt.ParseTree | None:
    """Leftmost, greedy parse of the whole word, or None if w is not in L(r).

    Depth-first search over parses in preference order: left before right in
    sums, one more star iteration before stopping. Star iterations consume at
    least one symbol. The search keeps its own stacks, so long words do not
    deepen the Python stack.
    """
    if not re_matches(r, w):
        return None
    # goals and partial trees are cons lists, so a choice point shares them
    choices: list[tuple[object, int, object]] = []
    goals: object = (r, None)
    trees: object = None
    i = 0
    while True:
        if goals is None:
            if i == len(w):
                return trees[0]
            failed = True
        else:
            goal, goals = goals
            failed = False
            match goal:
                case Eps():
                    trees = (pt.EPS, trees)
                case Sym(symbol):
                    if i < len(w) and w[i] == symbol:
                        trees = (pt.Sym(symbol), trees)
                        i += 1
                    else:
                        failed = True
                case Phi():
                    failed = True
                case Alt(left, right):
                    choices.append(((right, (pt.Inr, goals)), i, trees))
                    goals = (left, (pt.Inl, goals))
                case Cat(left, right):
                    goals = (left, (right, ("seq", goals)))
                case Star(body):
                    choices.append((goals, i, (pt.star_empty(), trees)))
                    goals = (body, (("advanced", i), (goal, ("step", goals))))
                case ("advanced", start):
                    failed = i == start
                case "seq":
                    right_tree, (left_tree, rest) = trees
                    trees = (pt.Seq(left_tree, right_tree), rest)
                case "step":
                    rest_tree, (head, rest) = trees
                    trees = (pt.star_step(head, rest_tree), rest)
                case type():
                    child, rest = trees
                    trees = (goal(child), rest)
                case _:
                    raise TypeError(f"not a regular expression: {goal!r}")
        if failed:
            if not choices:
                return None
            goals, i, trees = choices.pop()
