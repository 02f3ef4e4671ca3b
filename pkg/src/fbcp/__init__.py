"""Invariants and isomorphism verdicts for free Bogoljubov crossed products
of the integers."""

from .classify import compare, dossier, recheck, rule_matches
from .rep import parse_rep
from .specfile import parse_specfile

__version__ = "0.1.0"

__all__ = ["compare", "dossier", "recheck", "rule_matches", "parse_rep", "parse_specfile"]
