"""
Context-free expressions: regular syntax plus placeholders and least fixed points.
"""
from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

from cfx.errors import DuplicateBinder, NotAMu, UnboundPlaceholder
from cfx.regex import EPS, PHI, Alt, Cat, Eps, Expr, Phi, Star, Sym

__all__ = [
    "Var", "Mu", "Cfe", "Binding", "PHI", "EPS", "Phi", "Eps", "Sym", "Alt", "Cat",
    "check_well_formed", "substitute", "unfold", "enumerate_words", "cfe_nullable",
    "is_guarded", "subterms", "subterm_list", "binders", "binding_subst", "from_regex",
    "free_placeholders",
]


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Mu(Expr):
    binder: str
    body: Expr


Cfe = Phi | Eps | Sym | Var | Alt | Cat | Mu


# ============================================================
# Well-formedness and substitution
# ============================================================

def check_well_formed(e: Cfe) -> None:
    """Raise unless e is closed and every binder is introduced once."""
    seen: set[str] = set()

    def walk(node: Cfe, scope: frozenset[str]) -> None:
        match node:
            case Var(name):
                if name not in scope:
                    raise UnboundPlaceholder(name)
            case Mu(binder, body):
                if binder in seen:
                    raise DuplicateBinder(binder)
                seen.add(binder)
                walk(body, scope | {binder})
            case Alt(left, right) | Cat(left, right):
                walk(left, scope)
                walk(right, scope)
            case Star():
                raise TypeError("star is not a context-free expression node; desugar it first")

    walk(e, frozenset())


def free_placeholders(e: Cfe) -> frozenset[str]:
    match e:
        case Var(name):
            return frozenset({name})
        case Alt(left, right) | Cat(left, right):
            return free_placeholders(left) | free_placeholders(right)
        case Mu(binder, body):
            return free_placeholders(body) - {binder}
    return frozenset()


def substitute(e: Cfe, binder: str, f: Cfe) -> Cfe:
    match e:
        case Var(name):
            return f if name == binder else e
        case Alt(left, right):
            return Alt(substitute(left, binder, f), substitute(right, binder, f))
        case Cat(left, right):
            return Cat(substitute(left, binder, f), substitute(right, binder, f))
        case Mu(inner, body):
            if inner == binder:
                return e
            return Mu(inner, substitute(body, binder, f))
    return e


def unfold(e: Cfe) -> Cfe:
    if not isinstance(e, Mu):
        raise NotAMu(f"only a mu-expression can be unfolded, got {e!r}")
    return substitute(e.body, e.binder, e)


def from_regex(r: Expr, fresh: Iterator[str]) -> Cfe:
    """Desugar stars into fixed points: r* becomes mu t. r.t + 1."""
    match r:
        case Alt(left, right):
            return Alt(from_regex(left, fresh), from_regex(right, fresh))
        case Cat(left, right):
            return Cat(from_regex(left, fresh), from_regex(right, fresh))
        case Star(body):
            name = next(fresh)
            return Mu(name, Alt(Cat(from_regex(body, fresh), Var(name)), EPS))
        case Mu(binder, body):
            return Mu(binder, from_regex(body, fresh))
    return r


# ============================================================
# Subterms and bindings
# ============================================================

def subterm_list(e: Cfe) -> list[Cfe]:
    """Subterms in post-order (children first), without duplicates."""
    ordered: dict[Cfe, None] = {}

    def walk(node: Cfe) -> None:
        match node:
            case Alt(left, right) | Cat(left, right):
                walk(left)
                walk(right)
            case Mu(_, body):
                walk(body)
        ordered.setdefault(node, None)

    walk(e)
    return list(ordered)


def subterms(e: Cfe) -> frozenset[Cfe]:
    return frozenset(subterm_list(e))


def binders(e: Cfe) -> dict[str, Mu]:
    """Map each binder name to the mu-subterm that introduces it."""
    return {node.binder: node for node in subterm_list(e) if isinstance(node, Mu)}


@dataclass(frozen=True)
class Binding:
    """Idempotent substitution from placeholder names to closed expressions."""

    mapping: Mapping[str, Cfe] = field(default_factory=dict)

    def apply(self, e: Cfe) -> Cfe:
        match e:
            case Var(name):
                return self.mapping.get(name, e)
            case Alt(left, right):
                return Alt(self.apply(left), self.apply(right))
            case Cat(left, right):
                return Cat(self.apply(left), self.apply(right))
            case Mu(binder, body):
                inner = Binding({k: v for k, v in self.mapping.items() if k != binder})
                return Mu(binder, inner.apply(body))
        return e

    def __getitem__(self, name: str) -> Cfe:
        return self.mapping[name]

    def __contains__(self, name: object) -> bool:
        return name in self.mapping

    def __len__(self) -> int:
        return len(self.mapping)


def binding_subst(e: Cfe) -> Binding:
    """Map each binder to its Mu with the enclosing binders substituted away.

    Images are closed but repeat binder names of e, so they are not
    well-formed in the distinct-binder sense.
    """
    def collect(node: Cfe) -> dict[str, Cfe]:
        match node:
            case Alt(left, right) | Cat(left, right):
                return collect(left) | collect(right)
            case Mu(binder, body):
                close = Binding({binder: node})
                inner = {name: close.apply(image) for name, image in collect(body).items()}
                inner[binder] = node
                return inner
        return {}

    return Binding(collect(e))


# ============================================================
# Language oracle and predicates
# ============================================================

def enumerate_words(e: Cfe, max_len: int) -> frozenset[str]:
    """All words of L(e) up to length max_len.

    Least fixpoint of length-bounded word sets per subterm; each set is finite
    and the iteration is monotone, so it stops.
    """
    order = subterm_list(e)
    mus = binders(e)
    words: dict[Cfe, frozenset[str]] = {node: frozenset() for node in order}

    def step(node: Cfe) -> frozenset[str]:
        match node:
            case Eps():
                return frozenset({""})
            case Sym(symbol):
                return frozenset({symbol}) if max_len >= 1 else frozenset()
            case Var(name):
                return words[mus[name]]
            case Mu(_, body):
                return words[body]
            case Alt(left, right):
                return words[left] | words[right]
            case Cat(left, right):
                return frozenset(
                    u + v
                    for u in words[left]
                    for v in words[right]
                    if len(u) + len(v) <= max_len
                )
        return frozenset()

    changed = True
    while changed:
        changed = False
        for node in order:
            updated = words[node] | step(node)
            if updated != words[node]:
                words[node] = updated
                changed = True
    return words[e]


def cfe_nullable(e: Cfe) -> bool:
    match e:
        case Eps():
            return True
        case Alt(left, right):
            return cfe_nullable(left) or cfe_nullable(right)
        case Cat(left, right):
            return cfe_nullable(left) and cfe_nullable(right)
        case Mu(_, body):
            return cfe_nullable(body)
    return False


def _guard_symbols(body: Cfe) -> list[str] | None:
    """Guard symbols of a right-nested sum of guards, or None if body is not one."""
    found: list[str] = []
    node = body
    while True:
        match node:
            case Alt(Cat(Sym(symbol), _), rest):
                found.append(symbol)
                node = rest
            case Cat(Sym(symbol), _):
                found.append(symbol)
                return found
            case Eps():
                return found
            case _:
                return None


def is_guarded(e: Cfe) -> bool:
    for node in subterm_list(e):
        if isinstance(node, Mu):
            guards = _guard_symbols(node.body)
            if guards is None or len(guards) != len(set(guards)):
                return False
    return True
