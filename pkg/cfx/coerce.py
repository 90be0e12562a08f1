"""
Coercion synthesis between context-free parse trees and regular parse trees.

An upcast for (e, r) maps a tree of e together with a residue tree of
⊕reach(e, r) to a tree of r. A downcast for (e, r) maps a tree of r to
Maybe (tree of e, residue tree of ⊕reach(e, r)). Regular-to-regular steps are
delegated to primitive coercions that flatten the tree and parse it again.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType

from cfx import coercion_lang as cl
from cfx import parse_tree as pt
from cfx.cfe import Mu, Var, binders, check_well_formed, is_guarded
from cfx.errors import EmptyAlphabet, EmptyLanguage, NotContained, NotGuarded
from cfx.reach import ReachSolver, plus_set
from cfx.regex import (
    Alphabet, Alt, Cat, Eps, Expr, Phi, Star, Sym, alt_chain, re_contains, re_matches,
    re_nullable, re_parse, simp, step, symbols,
)
from cfx.syntax import render

logger = logging.getLogger(__name__)

UP = "up"
DOWN = "down"


# ============================================================
# Regular coercions
# ============================================================

@dataclass(frozen=True)
class RegCoercion:
    id: str
    source: Expr
    target: Expr
    direction: str
    fn: Callable[[cl.Value], cl.Value] = field(compare=False, repr=False)

    def as_prim(self) -> cl.Prim:
        return cl.Prim(self.id, self.direction, self.source, self.target)

    def __call__(self, value: cl.Value) -> cl.Value:
        return self.fn(value)


def _prim_id(direction: str, source: Expr, target: Expr) -> str:
    return f"{direction}:{render(source)}->{render(target)}"


@lru_cache(maxsize=4096)
def re_upcast(r: Expr, s: Expr) -> RegCoercion:
    """Total coercion from trees of r to trees of s; requires L(r) ⊆ L(s)."""
    if not re_contains(r, s):
        raise NotContained(f"L({render(r)}) is not contained in L({render(s)})")

    def upcast(value: cl.Value) -> cl.Value:
        tree = cl.value_to_tree(value)
        if tree is None:
            return cl.WRONG
        reparsed = re_parse(s, pt.flatten(tree))
        return cl.WRONG if reparsed is None else cl.tree_to_value(reparsed)

    return RegCoercion(_prim_id(UP, r, s), r, s, UP, upcast)


@lru_cache(maxsize=4096)
def re_downcast(r: Expr, s: Expr) -> RegCoercion:
    """Partial coercion from trees of s to Maybe trees of r."""

    def downcast(value: cl.Value) -> cl.Value:
        tree = cl.value_to_tree(value)
        if tree is None:
            return cl.WRONG
        word = pt.flatten(tree)
        if not re_matches(r, word):
            return cl.NOTHING_V
        return cl.ConV("Just", (cl.tree_to_value(re_parse(r, word)),))

    return RegCoercion(_prim_id(DOWN, s, r), s, r, DOWN, downcast)


def regular_coercion(direction: str, source: Expr, target: Expr) -> RegCoercion:
    """Rebuild a primitive from its direction and regex pair."""
    if direction == UP:
        return re_upcast(source, target)
    if direction == DOWN:
        return re_downcast(target, source)
    raise ValueError(f"unknown coercion direction: {direction}")


def sigma_star(sigma: Iterable[str]) -> Expr:
    alphabet = sigma if isinstance(sigma, Alphabet) else Alphabet.of(sigma)
    if not alphabet.symbols:
        raise EmptyAlphabet()
    return simp(Star(alt_chain(Sym(x) for x in alphabet)))


# ============================================================
# Synthesized coercions
# ============================================================

@dataclass(frozen=True)
class Coercion:
    """A synthesized coercion term together with the primitives it calls."""

    direction: str
    expr: Expr
    regex: Expr
    term: cl.Term
    registry: cl.PrimRegistry
    rec_syntheses: Mapping[tuple[str, Expr], int] = field(default_factory=dict, compare=False)

    def apply(self, *trees: pt.ParseTree, fuel: int | None = None) -> cl.Value:
        return cl.apply_coercion(self.term, trees, fuel=fuel, registry=self.registry)


@dataclass(frozen=True)
class CoercionEnv:
    """Recursion assumptions: (mu-subterm, canonical regex) to variable name."""

    entries: Mapping[tuple[Mu, Expr], str] = field(default_factory=lambda: MappingProxyType({}))

    def lookup(self, mu: Mu, r: Expr) -> str | None:
        return self.entries.get((mu, r))

    def bind(self, mu: Mu, r: Expr) -> tuple[CoercionEnv, str]:
        name = rec_name(mu.binder, r)
        extended = dict(self.entries)
        extended[(mu, r)] = name
        return CoercionEnv(MappingProxyType(extended)), name

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self.entries.values())


def rec_name(binder: str, r: Expr) -> str:
    return f"v_{binder}_{render(r)}"


class _Synthesizer:
    def __init__(self, root: Expr, sigma: Iterable[str]):
        self.root = root
        self.solver = ReachSolver(root, sigma)
        self.mus = binders(root)
        self.registry = cl.PrimRegistry()
        self.rec_syntheses: Counter[tuple[str, Expr]] = Counter()
        self._cache: dict[tuple[str, str, Expr], cl.Term] = {}
        self._counter = itertools.count()

    def fresh(self, stem: str) -> str:
        return f"{stem}{next(self._counter)}"

    def reach_sum(self, f: Expr, r: Expr) -> Expr:
        return plus_set(self.solver.lookup(f, r))

    def _use(self, coercion: RegCoercion) -> cl.Prim:
        if coercion.id not in self.registry:
            logger.debug("registering primitive %s", coercion.id)
            self.registry.register(coercion.id, coercion.fn)
        return coercion.as_prim()

    def up_prim(self, source: Expr, target: Expr) -> cl.Prim:
        return self._use(re_upcast(source, target))

    def down_prim(self, target: Expr, source: Expr) -> cl.Prim:
        return self._use(re_downcast(target, source))

    def recursive(self, env: CoercionEnv, mu: Mu, r: Expr, direction: str) -> cl.Term:
        name = env.lookup(mu, r)
        if name is not None:
            return cl.Var(name)
        cache_key = (direction, mu.binder, r)
        cached = self._cache.get(cache_key)
        if cached is not None and cl.free_vars(cached) <= env.names:
            return cached
        inner, name = env.bind(mu, r)
        self.rec_syntheses[(mu.binder, r)] += 1
        logger.debug("synthesizing %s coercion %s", direction, name)
        p, t, t2 = self.fresh("p"), self.fresh("t"), self.fresh("t")
        if direction == UP:
            body = self.upcast(inner, mu.body, r)
            term = cl.Rec(name, cl.Lam(
                cl.ppair(cl.PCon("Fold", (cl.PVar(p),)), cl.PVar(t)),
                cl.App(body, cl.pair(cl.Var(p), cl.Var(t))),
            ))
        else:
            body = self.downcast(inner, mu.body, r)
            term = cl.Rec(name, cl.Lam(cl.PVar(t), cl.Case(cl.App(body, cl.Var(t)), (
                (cl.PCon("Nothing"), cl.NOTHING),
                (cl.pjust(cl.ppair(cl.PVar(p), cl.PVar(t2))),
                 cl.just(cl.pair(cl.Con("Fold", (cl.Var(p),)), cl.Var(t2)))),
            ))))
        self._cache[cache_key] = term
        return term

    def upcast(self, env: CoercionEnv, f: Expr, r: Expr) -> cl.Term:
        match f:
            case Phi():
                p, t = self.fresh("p"), self.fresh("t")
                # no tree of Phi exists, so the body is never reached
                return cl.Lam(cl.ppair(cl.PVar(p), cl.PVar(t)), cl.Case(cl.Var(p)))
            case Eps():
                t = self.fresh("t")
                b = self.up_prim(r, r)
                return cl.Lam(cl.ppair(cl.PCon("Eps"), cl.PVar(t)), cl.App(b, cl.Var(t)))
            case Sym(symbol):
                v, t = self.fresh("v"), self.fresh("t")
                b = self.up_prim(Cat(Sym(symbol), step(r, symbol)), r)
                return cl.Lam(
                    cl.ppair(cl.PVar(v), cl.PVar(t)),
                    cl.App(b, cl.Con("Seq", (cl.Var(v), cl.Var(t)))),
                )
            case Alt(left, right):
                c1 = self.upcast(env, left, r)
                c2 = self.upcast(env, right, r)
                whole = self.reach_sum(f, r)
                b1 = self.down_prim(self.reach_sum(left, r), whole)
                b2 = self.down_prim(self.reach_sum(right, r), whole)
                p, t = self.fresh("p"), self.fresh("t")
                p1, t1, p2, t2 = self.fresh("p"), self.fresh("t"), self.fresh("p"), self.fresh("t")
                return cl.Lam(cl.ppair(cl.PVar(p), cl.PVar(t)), cl.Case(cl.Var(p), (
                    (cl.PCon("Inl", (cl.PVar(p1),)), cl.Case(cl.App(b1, cl.Var(t)), (
                        (cl.pjust(cl.PVar(t1)), cl.App(c1, cl.pair(cl.Var(p1), cl.Var(t1)))),
                    ))),
                    (cl.PCon("Inr", (cl.PVar(p2),)), cl.Case(cl.App(b2, cl.Var(t)), (
                        (cl.pjust(cl.PVar(t2)), cl.App(c2, cl.pair(cl.Var(p2), cl.Var(t2)))),
                    ))),
                )))
            case Cat(left, right):
                c1 = self.upcast(env, left, r)
                c2 = self.upcast(env, right, self.reach_sum(left, r))
                p1, p2, t = self.fresh("p"), self.fresh("p"), self.fresh("t")
                return cl.Lam(
                    cl.ppair(cl.PCon("Seq", (cl.PVar(p1), cl.PVar(p2))), cl.PVar(t)),
                    cl.App(c1, cl.pair(cl.Var(p1), cl.App(c2, cl.pair(cl.Var(p2), cl.Var(t))))),
                )
            case Var(name):
                return self.recursive(env, self.mus[name], r, UP)
            case Mu():
                return self.recursive(env, f, r, UP)
        raise TypeError(f"not a context-free expression: {f!r}")

    def downcast(self, env: CoercionEnv, f: Expr, r: Expr) -> cl.Term:
        match f:
            case Phi():
                return cl.Lam(cl.PVar(self.fresh("t")), cl.NOTHING)
            case Eps():
                t = self.fresh("t")
                b = self.up_prim(r, r)
                return cl.Lam(cl.PVar(t), cl.just(cl.pair(cl.Con("Eps"), cl.App(b, cl.Var(t)))))
            case Sym(symbol):
                t, v, t1 = self.fresh("t"), self.fresh("v"), self.fresh("t")
                b = self.down_prim(Cat(Sym(symbol), step(r, symbol)), r)
                return cl.Lam(cl.PVar(t), cl.Case(cl.App(b, cl.Var(t)), (
                    (cl.PCon("Nothing"), cl.NOTHING),
                    (cl.pjust(cl.PCon("Seq", (cl.PVar(v), cl.PVar(t1)))),
                     cl.just(cl.pair(cl.Var(v), cl.Var(t1)))),
                )))
            case Alt(left, right):
                c1 = self.downcast(env, left, r)
                c2 = self.downcast(env, right, r)
                whole = self.reach_sum(f, r)
                b1 = self.up_prim(self.reach_sum(left, r), whole)
                b2 = self.up_prim(self.reach_sum(right, r), whole)
                t = self.fresh("t")
                p1, t1, p2, t2 = self.fresh("p"), self.fresh("t"), self.fresh("p"), self.fresh("t")
                return cl.Lam(cl.PVar(t), cl.Case(cl.App(c1, cl.Var(t)), (
                    (cl.PCon("Nothing"), cl.Case(cl.App(c2, cl.Var(t)), (
                        (cl.PCon("Nothing"), cl.NOTHING),
                        (cl.pjust(cl.ppair(cl.PVar(p2), cl.PVar(t2))),
                         cl.just(cl.pair(cl.Con("Inr", (cl.Var(p2),)), cl.App(b2, cl.Var(t2))))),
                    ))),
                    (cl.pjust(cl.ppair(cl.PVar(p1), cl.PVar(t1))),
                     cl.just(cl.pair(cl.Con("Inl", (cl.Var(p1),)), cl.App(b1, cl.Var(t1))))),
                )))
            case Cat(left, right):
                c1 = self.downcast(env, left, r)
                c2 = self.downcast(env, right, self.reach_sum(left, r))
                t = self.fresh("t")
                p1, t1, p2, t2 = self.fresh("p"), self.fresh("t"), self.fresh("p"), self.fresh("t")
                return cl.Lam(cl.PVar(t), cl.Case(cl.App(c1, cl.Var(t)), (
                    (cl.PCon("Nothing"), cl.NOTHING),
                    (cl.pjust(cl.ppair(cl.PVar(p1), cl.PVar(t1))), cl.Case(cl.App(c2, cl.Var(t1)), (
                        (cl.PCon("Nothing"), cl.NOTHING),
                        (cl.pjust(cl.ppair(cl.PVar(p2), cl.PVar(t2))),
                         cl.just(cl.pair(cl.Con("Seq", (cl.Var(p1), cl.Var(p2))), cl.Var(t2)))),
                    ))),
                )))
            case Var(name):
                return self.recursive(env, self.mus[name], r, DOWN)
            case Mu():
                return self.recursive(env, f, r, DOWN)
        raise TypeError(f"not a context-free expression: {f!r}")

    def bundle(self, direction: str, e: Expr, r: Expr, term: cl.Term) -> Coercion:
        return Coercion(direction, e, r, term, self.registry.freeze(), dict(self.rec_syntheses))


def _alphabet(e: Expr, r: Expr, sigma: Iterable[str] | None) -> set[str]:
    return set(sigma or ()) | symbols(e) | symbols(r)


def cfe_upcast_derive(env: CoercionEnv, e: Expr, r: Expr, root: Expr | None = None,
                      sigma: Iterable[str] | None = None) -> Coercion:
    """Upcast derivation for e at state r; root owns the binders of an open e."""
    root = root if root is not None else e
    synth = _Synthesizer(root, _alphabet(root, r, sigma))
    return synth.bundle(UP, e, r, synth.upcast(env, e, simp(r)))


def cfe_downcast_derive(env: CoercionEnv, e: Expr, r: Expr, root: Expr | None = None,
                        sigma: Iterable[str] | None = None) -> Coercion:
    root = root if root is not None else e
    synth = _Synthesizer(root, _alphabet(root, r, sigma))
    return synth.bundle(DOWN, e, r, synth.downcast(env, e, simp(r)))


def cfe_upcast(e: Expr, r: Expr, sigma: Iterable[str] | None = None) -> Coercion:
    """Closed coercion from trees of e to trees of r."""
    check_well_formed(e)
    synth = _Synthesizer(e, _alphabet(e, r, sigma))
    start = simp(r)
    states = synth.solver.lookup(e, start)
    if not all(re_nullable(s) for s in states):
        raise NotContained(f"L({render(e)}) is not contained in L({render(r)})")
    if not states:
        raise EmptyLanguage(f"{render(e)} has no words, there is nothing to coerce")
    empty = re_parse(plus_set(states), "")
    body = synth.upcast(CoercionEnv(), e, start)
    x = synth.fresh("x")
    result: cl.Term = cl.App(body, cl.pair(cl.Var(x), cl.tree_to_term(empty)))
    if start != r:
        result = cl.App(synth.up_prim(start, r), result)
    return synth.bundle(UP, e, r, cl.Lam(cl.PVar(x), result))


def cfe_downcast(e: Expr, r: Expr, sigma: Iterable[str] | None = None) -> Coercion:
    """Closed coercion from trees of r to Maybe (tree of e, residue)."""
    check_well_formed(e)
    synth = _Synthesizer(e, _alphabet(e, r, sigma))
    start = simp(r)
    term = synth.downcast(CoercionEnv(), e, start)
    if start != r:
        t = synth.fresh("t")
        term = cl.Lam(cl.PVar(t), cl.App(term, cl.App(synth.up_prim(r, start), cl.Var(t))))
    return synth.bundle(DOWN, e, r, term)


# ============================================================
# Predictive parsing
# ============================================================

class PredictiveParser:
    """Parser for a guarded expression, run as a downcast from Σ*."""

    def __init__(self, e: Expr, sigma: Iterable[str] | None = None, fuel: int | None = None):
        check_well_formed(e)
        if not is_guarded(e):
            raise NotGuarded(f"{render(e)} is not guarded, its parser may not terminate")
        self.expr = e
        self.alphabet = Alphabet.of(set(sigma or ()) | symbols(e))
        self.universe = sigma_star(self.alphabet)
        self.coercion = cfe_downcast(e, self.universe, self.alphabet)
        self.fuel = fuel

    def parse_with_residue(self, word: str) -> tuple[pt.ParseTree, pt.ParseTree] | None:
        if any(symbol not in self.alphabet for symbol in word):
            return None
        tree = re_parse(self.universe, word)
        return cl.decode_maybe_pair(self.coercion.apply(tree, fuel=self.fuel))

    def parse(self, word: str) -> pt.ParseTree | None:
        """Parse tree of the whole word, or None; leftover input counts as failure."""
        result = self.parse_with_residue(word)
        if result is None:
            return None
        p, residue = result
        return p if pt.flatten(residue) == "" else None

    __call__ = parse


def predictive_parser(e: Expr, sigma: Iterable[str] | None = None,
                      fuel: int | None = None) -> PredictiveParser:
    return PredictiveParser(e, sigma, fuel)
