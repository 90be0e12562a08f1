"""
cfx: context-free expressions, containment in regular languages, coercions
between parse trees and predictive parsing.
"""
from cfx.cfe import Mu, Var, check_well_formed, cfe_nullable, enumerate_words, is_guarded
from cfx.coerce import (
    Coercion, PredictiveParser, cfe_downcast, cfe_upcast, predictive_parser, re_downcast,
    re_upcast, sigma_star,
)
from cfx.reach import check_judgment, contains, plus_set, reach, reach_table
from cfx.regex import (
    Alphabet, Alt, Cat, Eps, Phi, Star, Sym, deriv, descendants, re_matches, re_nullable,
    re_parse, simp,
)
from cfx.syntax import parse_cfe, parse_regex, render

__version__ = "0.1.0"
