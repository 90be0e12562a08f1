"""
Coercion terms: a small lambda calculus with constructors, pattern matching,
recursion and named primitive coercions, plus its evaluator.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from cfx import parse_tree as pt
from cfx.errors import Diverged, UnknownPrim, WrongResult

logger = logging.getLogger(__name__)

ARITY: dict[str, int] = {
    "Eps": 0,
    "Sym": 1,
    "Inl": 1,
    "Inr": 1,
    "Seq": 2,
    "Fold": 1,
    "Just": 1,
    "Nothing": 0,
    "Pair": 2,
}


def _check_arity(k: str, count: int) -> None:
    if k not in ARITY:
        raise ValueError(f"unknown constructor: {k}")
    if ARITY[k] != count:
        raise ValueError(f"constructor {k} takes {ARITY[k]} arguments, got {count}")


# ============================================================
# Patterns
# ============================================================

class Pattern:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class PVar(Pattern):
    name: str


@dataclass(frozen=True, slots=True)
class PCon(Pattern):
    k: str
    args: tuple[Pattern, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _check_arity(self.k, len(self.args))


def pattern_vars(pat: Pattern) -> list[str]:
    match pat:
        case PVar(name):
            return [name]
        case PCon(_, args):
            return [name for arg in args for name in pattern_vars(arg)]
    raise TypeError(f"not a pattern: {pat!r}")


def check_linear(pat: Pattern) -> None:
    names = pattern_vars(pat)
    if len(names) != len(set(names)):
        raise ValueError(f"pattern variables must be distinct: {names}")


# ============================================================
# Terms
# ============================================================

class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Con(Term):
    k: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _check_arity(self.k, len(self.args))


@dataclass(frozen=True, slots=True)
class Lit(Term):
    """A symbol literal, the argument of Sym."""

    symbol: str


@dataclass(frozen=True, slots=True)
class Lam(Term):
    pat: Pattern
    body: Term

    def __post_init__(self):
        check_linear(self.pat)


@dataclass(frozen=True, slots=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Rec(Term):
    name: str
    body: Term


@dataclass(frozen=True, slots=True)
class Case(Term):
    scrutinee: Term
    branches: tuple[tuple[Pattern, Term], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple((pat, body) for pat, body in self.branches))
        for pat, _ in self.branches:
            check_linear(pat)


@dataclass(frozen=True, slots=True)
class Prim(Term):
    """Reference to a registered native coercion between two regexes."""

    id: str
    direction: str
    source: Any
    target: Any


NOTHING = Con("Nothing")


def pair(left: Term, right: Term) -> Term:
    return Con("Pair", (left, right))


def just(term: Term) -> Term:
    return Con("Just", (term,))


def ppair(left: Pattern, right: Pattern) -> Pattern:
    return PCon("Pair", (left, right))


def pjust(pat: Pattern) -> Pattern:
    return PCon("Just", (pat,))


def free_vars(term: Term) -> frozenset[str]:
    match term:
        case Var(name):
            return frozenset({name})
        case Con(_, args):
            return frozenset().union(*(free_vars(arg) for arg in args))
        case Lam(pat, body):
            return free_vars(body) - set(pattern_vars(pat))
        case App(fn, arg):
            return free_vars(fn) | free_vars(arg)
        case Rec(name, body):
            return free_vars(body) - {name}
        case Case(scrutinee, branches):
            found = set(free_vars(scrutinee))
            for pat, body in branches:
                found |= free_vars(body) - set(pattern_vars(pat))
            return frozenset(found)
    return frozenset()


def subterms_of(term: Term) -> Iterator[Term]:
    yield term
    match term:
        case Con(_, args):
            for arg in args:
                yield from subterms_of(arg)
        case Lam(_, body) | Rec(_, body):
            yield from subterms_of(body)
        case App(fn, arg):
            yield from subterms_of(fn)
            yield from subterms_of(arg)
        case Case(scrutinee, branches):
            yield from subterms_of(scrutinee)
            for _, body in branches:
                yield from subterms_of(body)


def prims_of(term: Term) -> dict[str, Prim]:
    return {node.id: node for node in subterms_of(term) if isinstance(node, Prim)}


# ============================================================
# Values
# ============================================================

class Value:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Wrong(Value):
    pass


@dataclass(frozen=True, slots=True)
class ConV(Value):
    k: str
    args: tuple[Value, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _check_arity(self.k, len(self.args))


@dataclass(frozen=True, slots=True)
class SymV(Value):
    symbol: str


@dataclass(eq=False, slots=True)
class Closure(Value):
    pat: Pattern
    body: Term
    env: dict[str, Any]


@dataclass(eq=False, slots=True)
class PrimFn(Value):
    id: str
    fn: Callable[[Value], Value]


@dataclass(eq=False, slots=True)
class _Knot:
    """Placeholder for a recursive binding; looking it up re-enters the Rec."""

    term: Rec
    env: dict[str, Any]


WRONG = Wrong()
NOTHING_V = ConV("Nothing")


def match_pattern(a: Value, pat: Pattern) -> dict[str, Value] | None:
    match pat:
        case PVar(name):
            return {name: a}
        case PCon(k, args):
            if not isinstance(a, ConV) or a.k != k or len(a.args) != len(args):
                return None
            bound: dict[str, Value] = {}
            for value, sub in zip(a.args, args):
                found = match_pattern(value, sub)
                if found is None:
                    return None
                bound.update(found)
            return bound
    raise TypeError(f"not a pattern: {pat!r}")


def build_value(pat: Pattern, env: Mapping[str, Value]) -> Value:
    """Construct the value a pattern describes, reading variables from env."""
    match pat:
        case PVar(name):
            return env[name]
        case PCon(k, args):
            return ConV(k, tuple(build_value(arg, env) for arg in args))
    raise TypeError(f"not a pattern: {pat!r}")


# ============================================================
# Primitive registry
# ============================================================

class PrimRegistry:
    def __init__(self, entries: Mapping[str, Callable[[Value], Value]] | None = None):
        self._entries: dict[str, Callable[[Value], Value]] = dict(entries or {})
        self._frozen = False

    def register(self, prim_id: str, fn: Callable[[Value], Value]) -> None:
        if self._frozen:
            raise RuntimeError(f"registry is frozen, cannot register {prim_id}")
        self._entries.setdefault(prim_id, fn)

    def freeze(self) -> PrimRegistry:
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def lookup(self, prim_id: str) -> Callable[[Value], Value]:
        try:
            return self._entries[prim_id]
        except KeyError:
            raise UnknownPrim(prim_id) from None

    def __contains__(self, prim_id: object) -> bool:
        return prim_id in self._entries

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._entries))

    def __len__(self) -> int:
        return len(self._entries)


# ============================================================
# Evaluation
# ============================================================

@dataclass(slots=True)
class _ConArgs:
    k: str
    args: tuple[Term, ...]
    env: dict[str, Any]
    done: list[Value]


@dataclass(slots=True)
class _AppFn:
    arg: Term
    env: dict[str, Any]


@dataclass(slots=True)
class _AppArg:
    fn: Value


@dataclass(slots=True)
class _RecBind:
    env: dict[str, Any]
    name: str


@dataclass(slots=True)
class _CaseOf:
    branches: tuple[tuple[Pattern, Term], ...]
    env: dict[str, Any]


class Evaluator:
    """Evaluates terms with an explicit continuation stack.

    Depth of evaluation is bounded by memory only. With fuel set, more than
    `fuel` steps raise Diverged; without fuel a divergent term runs forever.
    """

    def __init__(self, registry: PrimRegistry | None = None, fuel: int | None = None):
        self.registry = registry if registry is not None else PrimRegistry()
        self.fuel = fuel
        self.steps = 0

    def _tick(self) -> None:
        self.steps += 1
        if self.fuel is not None and self.steps > self.fuel:
            raise Diverged(self.steps)

    def eval(self, term: Term, env: Mapping[str, Any]) -> Value:
        return self._run([], term, dict(env))

    def apply(self, fn: Value, arg: Value) -> Value:
        return self._run([_AppArg(fn)], None, {}, arg)

    def _run(self, stack: list, term: Term | None, env: dict[str, Any],
             value: Value | None = None) -> Value:
        evaluating = term is not None
        while True:
            if evaluating:
                self._tick()
                match term:
                    case Var(name):
                        if name not in env:
                            raise NameError(f"unbound coercion variable: {name}")
                        value = env[name]
                        if isinstance(value, _Knot):
                            term, env = value.term, value.env
                            continue
                    case Con(k, args):
                        if args:
                            stack.append(_ConArgs(k, args, env, []))
                            term = args[0]
                            continue
                        value = ConV(k)
                    case Lit(symbol):
                        value = SymV(symbol)
                    case Lam(pat, body):
                        value = Closure(pat, body, env)
                    case App(fn, arg):
                        stack.append(_AppFn(arg, env))
                        term = fn
                        continue
                    case Rec(name, body):
                        rec_env = dict(env)
                        rec_env[name] = _Knot(term, dict(env))
                        stack.append(_RecBind(rec_env, name))
                        term, env = body, rec_env
                        continue
                    case Case(scrutinee, branches):
                        stack.append(_CaseOf(branches, env))
                        term = scrutinee
                        continue
                    case Prim(prim_id):
                        value = PrimFn(prim_id, self.registry.lookup(prim_id))
                    case _:
                        raise TypeError(f"not a coercion term: {term!r}")
                evaluating = False

            if not stack:
                return value
            frame = stack.pop()
            match frame:
                case _ConArgs(k, args, frame_env, done):
                    done.append(value)
                    if len(done) < len(args):
                        stack.append(frame)
                        term, env = args[len(done)], frame_env
                        evaluating = True
                    else:
                        value = ConV(k, tuple(done))
                case _AppFn(arg, frame_env):
                    stack.append(_AppArg(value))
                    term, env = arg, frame_env
                    evaluating = True
                case _AppArg(fn):
                    self._tick()
                    match fn:
                        case Closure(pat, body, closure_env):
                            bound = match_pattern(value, pat)
                            if bound is None:
                                value = WRONG
                            else:
                                term, env = body, {**closure_env, **bound}
                                evaluating = True
                        case PrimFn(_, native):
                            value = native(value)
                        case _:
                            value = WRONG
                case _RecBind(rec_env, name):
                    if isinstance(value, (Closure, PrimFn)):
                        rec_env[name] = value
                case _CaseOf(branches, frame_env):
                    for pat, body in branches:
                        bound = match_pattern(value, pat)
                        if bound is not None:
                            term, env = body, {**frame_env, **bound}
                            evaluating = True
                            break
                    else:
                        value = WRONG


def eval_term(term: Term, env: Mapping[str, Any] | None = None,
              registry: PrimRegistry | None = None, fuel: int | None = None) -> Value:
    return Evaluator(registry, fuel).eval(term, env or {})


# ============================================================
# Trees as values
# ============================================================

_UNARY_TREES = {"Inl": pt.Inl, "Inr": pt.Inr, "Fold": pt.Fold}


def tree_to_value(p: pt.ParseTree) -> Value:
    built: list[Value] = []
    stack: list[tuple[pt.ParseTree, bool]] = [(p, False)]
    while stack:
        node, children_done = stack.pop()
        match node:
            case pt.Eps():
                built.append(ConV("Eps"))
            case pt.Sym(symbol):
                built.append(ConV("Sym", (SymV(symbol),)))
            case pt.Seq(left, right):
                if children_done:
                    second = built.pop()
                    built.append(ConV("Seq", (built.pop(), second)))
                else:
                    stack.extend([(node, True), (right, False), (left, False)])
            case pt.Inl(child) | pt.Inr(child) | pt.Fold(child):
                if children_done:
                    built.append(ConV(type(node).__name__, (built.pop(),)))
                else:
                    stack.extend([(node, True), (child, False)])
            case _:
                raise TypeError(f"not a parse tree: {p!r}")
    return built[0]


def value_to_tree(v: Value) -> pt.ParseTree | None:
    """Decode a value back into a parse tree; None if it is not one."""
    built: list[pt.ParseTree] = []
    stack: list[tuple[Value, bool]] = [(v, False)]
    while stack:
        node, children_done = stack.pop()
        match node:
            case ConV("Eps", ()):
                built.append(pt.EPS)
            case ConV("Sym", (SymV(symbol),)):
                built.append(pt.Sym(symbol))
            case ConV("Seq", (left, right)):
                if children_done:
                    second = built.pop()
                    built.append(pt.Seq(built.pop(), second))
                else:
                    stack.extend([(node, True), (right, False), (left, False)])
            case ConV("Inl" | "Inr" | "Fold" as k, (child,)):
                if children_done:
                    built.append(_UNARY_TREES[k](built.pop()))
                else:
                    stack.extend([(node, True), (child, False)])
            case _:
                return None
    return built[0]


def tree_to_term(p: pt.ParseTree) -> Term:
    """Embed a constant tree as a constructor term."""
    match p:
        case pt.Eps():
            return Con("Eps")
        case pt.Sym(symbol):
            return Con("Sym", (Lit(symbol),))
        case pt.Inl(child):
            return Con("Inl", (tree_to_term(child),))
        case pt.Inr(child):
            return Con("Inr", (tree_to_term(child),))
        case pt.Seq(left, right):
            return Con("Seq", (tree_to_term(left), tree_to_term(right)))
        case pt.Fold(child):
            return Con("Fold", (tree_to_term(child),))
    raise TypeError(f"not a parse tree: {p!r}")


def decode_maybe_pair(v: Value) -> tuple[pt.ParseTree, pt.ParseTree] | None:
    """Just(Pair(p, t)) to (p, t); Nothing to None."""
    match v:
        case ConV("Nothing", ()):
            return None
        case ConV("Just", (ConV("Pair", (left, right)),)):
            p, t = value_to_tree(left), value_to_tree(right)
            if p is not None and t is not None:
                return p, t
    raise WrongResult(f"expected Just (p, t) or Nothing, got {v!r}")


def apply_coercion(c: Term, args: Sequence[pt.ParseTree], fuel: int | None = None,
                   registry: PrimRegistry | None = None) -> Value:
    if not args or len(args) > 2:
        raise ValueError(f"a coercion takes one tree or a pair of trees, got {len(args)}")
    encoded = [tree_to_value(arg) for arg in args]
    argument = encoded[0] if len(encoded) == 1 else ConV("Pair", tuple(encoded))
    evaluator = Evaluator(registry, fuel)
    result = evaluator.apply(evaluator.eval(c, {}), argument)
    logger.debug("coercion evaluated in %d steps", evaluator.steps)
    if isinstance(result, Wrong):
        raise WrongResult()
    return result
