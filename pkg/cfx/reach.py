"""
Reachability: the canonical derivatives of r by the words of a context-free
expression, computed as a least fixpoint over (subterm, state) pairs.
"""
from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType

from cfx.cfe import Mu, Var, binders, subterm_list
from cfx.regex import (
    Alt, Cat, Eps, Expr, Phi, Sym, alt_chain, descendants, re_nullable, simp,
    sorted_canonical, step, symbols,
)

logger = logging.getLogger(__name__)

Key = tuple[Expr, Expr]


def plus_set(states: Iterable[Expr]) -> Expr:
    """Canonical sum of a set of regexes; the empty sum is Phi."""
    return simp(alt_chain(sorted_canonical(set(states))))


@dataclass(frozen=True)
class ReachTable:
    expr: Expr
    start: Expr
    entries: Mapping[Key, frozenset[Expr]]

    def __getitem__(self, key: Key) -> frozenset[Expr]:
        subterm, state = key
        return self.entries[(subterm, simp(state))]

    def __contains__(self, key: object) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    @property
    def result(self) -> frozenset[Expr]:
        return self.entries[(self.expr, self.start)]


class ReachSolver:
    """Least-fixpoint solver whose state universe grows on demand.

    Entries computed for a universe stay valid when it grows, since a state's
    derivatives are already part of the universe that contains it.
    """

    def __init__(self, e: Expr, sigma: Iterable[str] | None = None):
        self.expr = e
        self.sigma = tuple(sorted(set(sigma or ()) | symbols(e)))
        self._order = subterm_list(e)
        self._mus = binders(e)
        self._universe: list[Expr] = []
        self._known: set[Expr] = set()
        self.entries: dict[Key, frozenset[Expr]] = {}
        self.passes = 0

    def extend(self, r: Expr) -> None:
        fresh = [s for s in sorted_canonical(descendants(r, self.sigma)) if s not in self._known]
        if not fresh:
            return
        self._known.update(fresh)
        self._universe.extend(fresh)
        for node in self._order:
            for state in fresh:
                self.entries[(node, state)] = frozenset()
        self._solve()

    def lookup(self, f: Expr, s: Expr) -> frozenset[Expr]:
        state = simp(s)
        if state not in self._known:
            self.extend(state)
        return self.entries[(f, state)]

    def _step(self, node: Expr, state: Expr) -> frozenset[Expr]:
        match node:
            case Phi():
                return frozenset()
            case Eps():
                return frozenset({state})
            case Sym(symbol):
                return frozenset({step(state, symbol)})
            case Alt(left, right):
                return self.entries[(left, state)] | self.entries[(right, state)]
            case Cat(left, right):
                found: set[Expr] = set()
                for middle in self.entries[(left, state)]:
                    found |= self.entries[(right, middle)]
                return frozenset(found)
            case Var(name):
                return self.entries[(self._mus[name], state)]
            case Mu(_, body):
                return self.entries[(body, state)]
        raise TypeError(f"not a context-free expression: {node!r}")

    def _solve(self) -> None:
        changed = True
        while changed:
            changed = False
            self.passes += 1
            for node in self._order:
                for state in self._universe:
                    key = (node, state)
                    current = self.entries[key]
                    updated = current | self._step(node, state)
                    if updated != current:
                        self.entries[key] = updated
                        changed = True
        logger.debug("reach fixpoint: %d entries after %d passes", len(self.entries), self.passes)

    def table(self, r: Expr) -> ReachTable:
        start = simp(r)
        self.lookup(self.expr, start)
        return ReachTable(self.expr, start, MappingProxyType(dict(self.entries)))


def reach_table(e: Expr, r: Expr, sigma: Iterable[str] | None = None) -> ReachTable:
    alphabet = set(sigma or ()) | symbols(r)
    return ReachSolver(e, alphabet).table(r)


def reach(e: Expr, r: Expr, sigma: Iterable[str] | None = None) -> frozenset[Expr]:
    return reach_table(e, r, sigma).result


def contains(e: Expr, r: Expr, sigma: Iterable[str] | None = None) -> bool:
    """L(e) ⊆ L(r) iff every reachable derivative is nullable."""
    return all(re_nullable(s) for s in reach(e, r, sigma))


# ============================================================
# Coinductive judgment checker
# ============================================================

class _Rejected(Exception):
    pass


def check_judgment(assignment: Mapping[tuple[Mu, Expr], Iterable[Expr]], e: Expr, r: Expr,
                   root: Expr | None = None) -> frozenset[Expr] | None:
    """Derive Reach(r, e) using the assignment as hypotheses for mu-subterms.

    A mu-subterm is accepted once its body derives exactly the assigned set,
    with the assignment itself available as hypothesis. Returns None when a
    needed hypothesis is missing or a check fails. `root` is the closed
    expression owning the binders when e is one of its open subterms.
    """
    mus = binders(root if root is not None else e)
    hypotheses: set[tuple[Mu, Expr]] = set()

    def derive_mu(mu: Mu, state: Expr) -> frozenset[Expr]:
        key = (mu, state)
        if key not in assignment:
            raise _Rejected
        assumed = frozenset(simp(s) for s in assignment[key])
        if key in hypotheses:
            return assumed
        hypotheses.add(key)
        if derive(mu.body, state) != assumed:
            raise _Rejected
        return assumed

    def derive(node: Expr, state: Expr) -> frozenset[Expr]:
        match node:
            case Phi():
                return frozenset()
            case Eps():
                return frozenset({state})
            case Sym(symbol):
                return frozenset({step(state, symbol)})
            case Alt(left, right):
                return derive(left, state) | derive(right, state)
            case Cat(left, right):
                found: set[Expr] = set()
                for middle in derive(left, state):
                    found |= derive(right, middle)
                return frozenset(found)
            case Var(name):
                return derive_mu(mus[name], state)
            case Mu():
                return derive_mu(node, state)
        raise TypeError(f"not a context-free expression: {node!r}")

    try:
        return derive(e, simp(r))
    except _Rejected:
        return None


def assignment_from_table(table: ReachTable) -> dict[tuple[Mu, Expr], frozenset[Expr]]:
    return {key: value for key, value in table.items() if isinstance(key[0], Mu)}
