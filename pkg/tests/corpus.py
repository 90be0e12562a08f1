"""
Shared fixture corpus: (cfe, regex) pairs with their expected containment.
"""
import itertools

from cfx.regex import Alt, Cat, Eps, Phi, Star, Sym
from cfx.syntax import parse_cfe, parse_regex

XNYN = "mu a. x.(a.y)+1"
DYCK = "mu a. x.(a.(y.a))+1"
XSTAR = "mu a. x.a+1"
XSTAR_EPS_FIRST = "mu a. 1+x.a"
ANY = "mu a. x.a+y.a+1"
LEFT_REC = "mu a. a.x+1"
NONPRODUCTIVE = "mu a. a"
INNER_LEFT_REC = "mu a. (mu b. b.a)+1"
NESTED = "mu a. (mu b. x.b+y).a+1"
NESTED_GUARDED = "mu a. x.((mu b. y.b+1).a)+1"
UNGUARDED_XNYN = "mu a. 1+x.(a.y)"
X_YSTAR = "x.(mu a. y.a+1)"

# (cfe, regex, expected containment); every negative pair has a counterexample of length <= 5
CONTAINMENT = [
    (XNYN, "x*.y*", True),
    (XNYN, "x*", False),
    (XNYN, "(x.y)*", False),
    (NONPRODUCTIVE, "0", True),
    (NONPRODUCTIVE, "x*", True),
    (XSTAR, "(x+y)*", True),
    (XSTAR, "x*", True),
    (XSTAR, "y*", False),
    (XSTAR_EPS_FIRST, "(x+y)*", True),
    (UNGUARDED_XNYN, "x*.y*", True),
    (LEFT_REC, "x*", True),
    (LEFT_REC, "(x+y)*", True),
    (LEFT_REC, "x.x*", False),
    ("x.y", "x.y+y", True),
    ("x+y", "x*", False),
    ("1", "1", True),
    ("0", "x", True),
    (DYCK, "(x+y)*", True),
    (DYCK, "x*.y*", False),
    (NESTED, "(x*.y)*", True),
    (NESTED, "x*.y*", False),
    (INNER_LEFT_REC, "1", True),
    (INNER_LEFT_REC, "0", False),
    (NESTED_GUARDED, "(x.y*)*", True),
    (NESTED_GUARDED, "x*", False),
    (X_YSTAR, "x.y*", True),
    (ANY, "(x+y)*", True),
    (ANY, "x*+y*", False),
]

# downcasts of these expressions loop on some input
DIVERGING = {NONPRODUCTIVE, LEFT_REC, INNER_LEFT_REC}

GUARDED = [XNYN, DYCK, XSTAR, ANY, NESTED_GUARDED, X_YSTAR]

CFE_FIXTURES = sorted({e for e, _, _ in CONTAINMENT})


def E(text: str):
    return parse_cfe(text)


def R(text: str):
    return parse_regex(text)


def words(alphabet: str, max_len: int, min_len: int = 0) -> list[str]:
    found = []
    for n in range(min_len, max_len + 1):
        found.extend("".join(letters) for letters in itertools.product(alphabet, repeat=n))
    return found


def end_positions(r, w: str, i: int) -> set[int]:
    """Positions j such that w[i:j] is in L(r), by structural recursion on r."""
    match r:
        case Phi():
            return set()
        case Eps():
            return {i}
        case Sym(symbol):
            return {i + 1} if w[i:i + 1] == symbol else set()
        case Alt(left, right):
            return end_positions(left, w, i) | end_positions(right, w, i)
        case Cat(left, right):
            return {k for j in end_positions(left, w, i) for k in end_positions(right, w, j)}
        case Star(body):
            reached = {i}
            frontier = [i]
            while frontier:
                j = frontier.pop()
                for k in end_positions(body, w, j) - reached:
                    reached.add(k)
                    frontier.append(k)
            return reached
    raise TypeError(f"not a regular expression: {r!r}")


def member(r, w: str) -> bool:
    """Membership without derivatives or canonical forms."""
    return len(w) in end_positions(r, w, 0)
