"""
JSON serialization for parse trees and coercion terms.
"""
from __future__ import annotations

import json
from typing import Any

from cfx import coercion_lang as cl
from cfx import parse_tree as pt
from cfx.coerce import Coercion, regular_coercion
from cfx.errors import CodecError
from cfx.syntax import parse_cfe, parse_regex, render


def _require(data: Any, key: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise CodecError(f"missing field {key!r} in {data!r}")
    return data[key]


# ============================================================
# Trees
# ============================================================

def tree_to_dict(p: pt.ParseTree) -> dict:
    match p:
        case pt.Eps():
            return {"tag": "Eps"}
        case pt.Sym(symbol):
            return {"tag": "Sym", "sym": symbol}
        case pt.Inl(child):
            return {"tag": "Inl", "child": tree_to_dict(child)}
        case pt.Inr(child):
            return {"tag": "Inr", "child": tree_to_dict(child)}
        case pt.Seq(left, right):
            return {"tag": "Seq", "left": tree_to_dict(left), "right": tree_to_dict(right)}
        case pt.Fold(child):
            return {"tag": "Fold", "child": tree_to_dict(child)}
    raise CodecError(f"not a parse tree: {p!r}")


def tree_from_dict(data: Any) -> pt.ParseTree:
    tag = _require(data, "tag")
    match tag:
        case "Eps":
            return pt.EPS
        case "Sym":
            symbol = _require(data, "sym")
            if not isinstance(symbol, str) or len(symbol) != 1:
                raise CodecError(f"Sym needs a single-character symbol, got {symbol!r}")
            return pt.Sym(symbol)
        case "Inl":
            return pt.Inl(tree_from_dict(_require(data, "child")))
        case "Inr":
            return pt.Inr(tree_from_dict(_require(data, "child")))
        case "Fold":
            return pt.Fold(tree_from_dict(_require(data, "child")))
        case "Seq":
            return pt.Seq(tree_from_dict(_require(data, "left")), tree_from_dict(_require(data, "right")))
    raise CodecError(f"unknown tree tag: {tag!r}")


def dumps_tree(p: pt.ParseTree) -> str:
    return json.dumps(tree_to_dict(p), ensure_ascii=False)


def dump_tree(p: pt.ParseTree, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(tree_to_dict(p), f, ensure_ascii=False, indent=2)


def load_tree(path: str) -> pt.ParseTree:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise CodecError(f"{path}: invalid JSON ({exc})") from exc
    return tree_from_dict(data)


# ============================================================
# Coercion terms
# ============================================================

def pattern_to_dict(pat: cl.Pattern) -> dict:
    match pat:
        case cl.PVar(name):
            return {"tag": "PVar", "name": name}
        case cl.PCon(k, args):
            return {"tag": "PCon", "k": k, "args": [pattern_to_dict(arg) for arg in args]}
    raise CodecError(f"not a pattern: {pat!r}")


def pattern_from_dict(data: Any) -> cl.Pattern:
    tag = _require(data, "tag")
    try:
        if tag == "PVar":
            return cl.PVar(_require(data, "name"))
        if tag == "PCon":
            return cl.PCon(_require(data, "k"), tuple(pattern_from_dict(arg) for arg in data.get("args", [])))
    except ValueError as exc:
        if isinstance(exc, CodecError):
            raise
        raise CodecError(str(exc)) from exc
    raise CodecError(f"unknown pattern tag: {tag!r}")


def term_to_dict(term: cl.Term) -> dict:
    match term:
        case cl.Var(name):
            return {"tag": "Var", "name": name}
        case cl.Con(k, args):
            return {"tag": "Con", "k": k, "args": [term_to_dict(arg) for arg in args]}
        case cl.Lit(symbol):
            return {"tag": "Lit", "sym": symbol}
        case cl.Lam(pat, body):
            return {"tag": "Lam", "pat": pattern_to_dict(pat), "body": term_to_dict(body)}
        case cl.App(fn, arg):
            return {"tag": "App", "fn": term_to_dict(fn), "arg": term_to_dict(arg)}
        case cl.Rec(name, body):
            return {"tag": "Rec", "name": name, "body": term_to_dict(body)}
        case cl.Case(scrutinee, branches):
            return {
                "tag": "Case",
                "scrutinee": term_to_dict(scrutinee),
                "branches": [
                    {"pat": pattern_to_dict(pat), "body": term_to_dict(body)} for pat, body in branches
                ],
            }
        case cl.Prim(prim_id, direction, source, target):
            return {
                "tag": "Prim",
                "id": prim_id,
                "direction": direction,
                "source": render(source),
                "target": render(target),
            }
    raise CodecError(f"not a coercion term: {term!r}")


def term_from_dict(data: Any, registry: cl.PrimRegistry | None = None) -> cl.Term:
    """Decode a term; Prim records are re-registered into registry when given."""
    tag = _require(data, "tag")
    try:
        match tag:
            case "Var":
                return cl.Var(_require(data, "name"))
            case "Con":
                return cl.Con(_require(data, "k"), tuple(term_from_dict(arg, registry) for arg in data.get("args", [])))
            case "Lit":
                return cl.Lit(_require(data, "sym"))
            case "Lam":
                return cl.Lam(pattern_from_dict(_require(data, "pat")), term_from_dict(_require(data, "body"), registry))
            case "App":
                return cl.App(term_from_dict(_require(data, "fn"), registry), term_from_dict(_require(data, "arg"), registry))
            case "Rec":
                return cl.Rec(_require(data, "name"), term_from_dict(_require(data, "body"), registry))
            case "Case":
                branches = tuple(
                    (pattern_from_dict(_require(branch, "pat")), term_from_dict(_require(branch, "body"), registry))
                    for branch in _require(data, "branches")
                )
                return cl.Case(term_from_dict(_require(data, "scrutinee"), registry), branches)
            case "Prim":
                direction = _require(data, "direction")
                source = parse_regex(_require(data, "source"))
                target = parse_regex(_require(data, "target"))
                coercion = regular_coercion(direction, source, target)
                if coercion.id != _require(data, "id"):
                    raise CodecError(f"primitive id {data['id']!r} does not match its regexes")
                if registry is not None and coercion.id not in registry:
                    registry.register(coercion.id, coercion.fn)
                return coercion.as_prim()
    except CodecError:
        raise
    except ValueError as exc:
        raise CodecError(str(exc)) from exc
    raise CodecError(f"unknown term tag: {tag!r}")


def coercion_to_dict(coercion: Coercion) -> dict:
    return {
        "direction": coercion.direction,
        "cfe": render(coercion.expr),
        "regex": render(coercion.regex),
        "term": term_to_dict(coercion.term),
    }


def dump_coercion(coercion: Coercion, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(coercion_to_dict(coercion), f, ensure_ascii=False, indent=2)


def coercion_from_dict(data: Any) -> Coercion:
    registry = cl.PrimRegistry()
    term = term_from_dict(_require(data, "term"), registry)
    return Coercion(
        _require(data, "direction"),
        parse_cfe(_require(data, "cfe")),
        parse_regex(_require(data, "regex")),
        term,
        registry.freeze(),
    )


def load_coercion(path: str) -> Coercion:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise CodecError(f"{path}: invalid JSON ({exc})") from exc
    return coercion_from_dict(data)
