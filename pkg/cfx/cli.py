"""
Command-line front end.

Exit status: 0 for success or true, 1 for false / Nothing / divergence,
2 for usage and validation errors.
"""
import argparse
import json
import logging
import sys

from cfx import coercion_lang as cl
from cfx.cfe import enumerate_words, is_guarded
from cfx.codec import dump_coercion, dump_tree, dumps_tree, load_tree, tree_to_dict
from cfx.coerce import PredictiveParser, cfe_downcast, cfe_upcast
from cfx.errors import CfxError, Diverged, NotContained
from cfx.reach import contains, reach_table
from cfx.regex import (
    Alphabet, deriv, descendants, re_matches, simp, sorted_canonical, symbols,
)
from cfx.syntax import parse_cfe, parse_regex, parse_word, render, render_word
from cfx.trees import check_cfe_type, check_re_type
from cfx.utils.config import Settings, load_settings
from cfx.utils.validators import validate_alphabet, validate_fuel, validate_word

logger = logging.getLogger(__name__)


class UsageError(CfxError, ValueError):
    pass


# ============================================================
# Helpers
# ============================================================

def resolve_alphabet(args: argparse.Namespace, settings: Settings, *exprs) -> Alphabet:
    """Declared alphabet if given, otherwise the symbols of the query."""
    text = getattr(args, "alphabet", None) or settings.alphabet
    if text:
        ok, message = validate_alphabet(text)
        if not ok:
            raise UsageError(f"--alphabet: {message}")
        return Alphabet.parse(text)
    found: set[str] = set()
    for expr in exprs:
        found |= symbols(expr)
    return Alphabet.of(found)


def resolve_fuel(args: argparse.Namespace, settings: Settings) -> int | None:
    fuel = args.fuel if args.fuel is not None else settings.fuel
    if fuel is not None:
        ok, message = validate_fuel(fuel)
        if not ok:
            raise UsageError(message)
    return fuel


def print_states(states) -> None:
    for state in sorted_canonical(states):
        print(render(state))


def load_checked_tree(path: str):
    try:
        return load_tree(path)
    except FileNotFoundError:
        raise UsageError(f"--tree: file not found: {path}") from None


# ============================================================
# Commands
# ============================================================

def cmd_derive(args: argparse.Namespace, settings: Settings) -> int:
    r = parse_regex(args.regex)
    if len(args.symbol) != 1:
        raise UsageError(f"-x: expected a single symbol, got {args.symbol!r}")
    result = deriv(r, args.symbol)
    print(render(result if args.raw else simp(result)))
    return 0


def cmd_canon(args: argparse.Namespace, settings: Settings) -> int:
    print(render(simp(parse_regex(args.regex))))
    return 0


def cmd_descendants(args: argparse.Namespace, settings: Settings) -> int:
    r = parse_regex(args.regex)
    print_states(descendants(r, resolve_alphabet(args, settings, r)))
    return 0


def cmd_matches(args: argparse.Namespace, settings: Settings) -> int:
    result = re_matches(parse_regex(args.regex), parse_word(args.word))
    print("true" if result else "false")
    return 0 if result else 1


def cmd_reach(args: argparse.Namespace, settings: Settings) -> int:
    e = parse_cfe(args.expr)
    r = parse_regex(args.regex)
    table = reach_table(e, r, resolve_alphabet(args, settings, e, r))
    print_states(table.result)
    if args.table:
        from cfx.export import export_reach_csv

        count = export_reach_csv(table, args.table)
        logger.info("wrote %d rows to %s", count, args.table)
    return 0


def cmd_contains(args: argparse.Namespace, settings: Settings) -> int:
    e = parse_cfe(args.expr)
    r = parse_regex(args.regex)
    result = contains(e, r, resolve_alphabet(args, settings, e, r))
    print("true" if result else "false")
    return 0 if result else 1


def cmd_upcast(args: argparse.Namespace, settings: Settings) -> int:
    e = parse_cfe(args.expr)
    r = parse_regex(args.regex)
    p = load_checked_tree(args.tree)
    if not check_cfe_type(p, e):
        raise UsageError(f"--tree: not a parse tree of {render(e)}")
    coercion = cfe_upcast(e, r, resolve_alphabet(args, settings, e, r))
    result = cl.value_to_tree(coercion.apply(p))
    if args.output:
        dump_tree(result, args.output)
        print(f"wrote {args.output}")
    else:
        print(dumps_tree(result))
    return 0


def cmd_downcast(args: argparse.Namespace, settings: Settings) -> int:
    e = parse_cfe(args.expr)
    r = parse_regex(args.regex)
    t = load_checked_tree(args.tree)
    if not check_re_type(t, r):
        raise UsageError(f"--tree: not a parse tree of {render(r)}")
    fuel = resolve_fuel(args, settings)
    if fuel is None and not is_guarded(e):
        raise UsageError(f"--fuel is required, {render(e)} is not guarded")
    coercion = cfe_downcast(e, r, resolve_alphabet(args, settings, e, r))
    result = cl.decode_maybe_pair(coercion.apply(t, fuel=fuel))
    if result is None:
        print("Nothing")
        return 1
    p, residue = result
    print(json.dumps({"tree": tree_to_dict(p), "residue": tree_to_dict(residue)}, ensure_ascii=False))
    return 0


def cmd_parse(args: argparse.Namespace, settings: Settings) -> int:
    e = parse_cfe(args.expr)
    word = parse_word(args.word)
    alphabet = resolve_alphabet(args, settings, e)
    if getattr(args, "alphabet", None) or settings.alphabet:
        ok, message = validate_word(word, alphabet)
        if not ok:
            raise UsageError(f"--word: {message}")
    parser = PredictiveParser(e, alphabet, fuel=resolve_fuel(args, settings))
    p = parser.parse(word)
    if p is None:
        print("Nothing")
        return 1
    print(dumps_tree(p))
    return 0


def cmd_emit_coercion(args: argparse.Namespace, settings: Settings) -> int:
    e = parse_cfe(args.expr)
    r = parse_regex(args.regex)
    alphabet = resolve_alphabet(args, settings, e, r)
    coercion = cfe_upcast(e, r, alphabet) if args.direction == "up" else cfe_downcast(e, r, alphabet)
    dump_coercion(coercion, args.output)
    print(f"wrote {args.output}")
    return 0


def cmd_enumerate(args: argparse.Namespace, settings: Settings) -> int:
    e = parse_cfe(args.expr)
    max_len = args.max_len if args.max_len is not None else settings.enum_max_len
    for word in sorted(enumerate_words(e, max_len), key=lambda w: (len(w), w)):
        print(render_word(word))
    return 0


# ============================================================
# Entry point
# ============================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfx",
        description="Context-free expressions: containment, coercions and predictive parsing.",
    )
    parser.add_argument("--env", default=None, help="Path to .env file (default: .env in the working directory)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = command("derive", cmd_derive, "Derivative of a regex by one symbol")
    p.add_argument("-r", "--regex", required=True)
    p.add_argument("-x", "--symbol", required=True)
    p.add_argument("--raw", action="store_true", help="Print the derivative before canonicalization")

    p = command("canon", cmd_canon, "Canonical form of a regex")
    p.add_argument("-r", "--regex", required=True)

    p = command("descendants", cmd_descendants, "Canonical descendants of a regex")
    p.add_argument("-r", "--regex", required=True)
    p.add_argument("--alphabet", default=None)

    p = command("matches", cmd_matches, "Regex membership test")
    p.add_argument("-r", "--regex", required=True)
    p.add_argument("--word", required=True)

    p = command("reach", cmd_reach, "Reachable derivatives of a regex by the words of a CFE")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-r", "--regex", required=True)
    p.add_argument("--alphabet", default=None)
    p.add_argument("--table", default=None, help="Also export the full reach table as CSV")

    p = command("contains", cmd_contains, "Decide L(e) ⊆ L(r)")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-r", "--regex", required=True)
    p.add_argument("--alphabet", default=None)

    p = command("upcast", cmd_upcast, "Coerce a CFE parse tree into a regex parse tree")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-r", "--regex", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--alphabet", default=None)

    p = command("downcast", cmd_downcast, "Coerce a regex parse tree into a CFE parse tree and residue")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-r", "--regex", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--fuel", type=int, default=None)
    p.add_argument("--alphabet", default=None)

    p = command("parse", cmd_parse, "Predictive parse of a word with a guarded CFE")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("--word", required=True, help='Word to parse; "" or 1 for the empty word')
    p.add_argument("--alphabet", default=None)
    p.add_argument("--fuel", type=int, default=None)

    p = command("emit-coercion", cmd_emit_coercion, "Write a synthesized coercion term as JSON")
    p.add_argument("direction", choices=["up", "down"])
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-r", "--regex", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--alphabet", default=None)

    p = command("enumerate", cmd_enumerate, "Words of a CFE up to a length")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("--max-len", type=int, default=None)

    return parser


def configure_logging(level_name: str, verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        settings = load_settings(args.env)
        configure_logging(settings.log_level, args.verbose)
        return args.handler(args, settings)
    except NotContained as exc:
        print(f"not contained: {exc}")
        return 1
    except Diverged as exc:
        print(f"Diverged after {exc.steps} steps")
        return 1
    except CfxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
