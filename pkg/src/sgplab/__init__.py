"""Finite-semigroup laboratory: equation systems, detectors, enumeration."""

from .algebra import (
    FiniteSemigroup,
    GreenData,
    canonical_form,
    check_associativity,
    direct_product,
    evaluate_word,
    green_data,
    inverses_of,
    parse_sgp,
    format_sgp,
    rees_quotient,
    standard_construction,
    subsemigroup_generated,
)
from .classes import ClassReport, classify, intersection_of_all_inverses, preinverse_profile
from .eqsys import EquationSystem, Verdict, catalog, catalog_ids, parse, satisfies
from .freeprod import (
    FreeProductElement,
    RunSystem,
    WitnessScript,
    canonical_check,
    extract_epsilon_c,
    fp_multiply,
    search_scripts,
)
from .smallsemi import Corpus, enumerate_semigroups, get_corpus, verify_battery
from .wordeq import Budgets, TriVerdict, holds_in_all_semigroups

__all__ = [
    "FiniteSemigroup", "GreenData", "canonical_form", "check_associativity",
    "direct_product", "evaluate_word", "green_data", "inverses_of",
    "parse_sgp", "format_sgp", "rees_quotient", "standard_construction",
    "subsemigroup_generated",
    "ClassReport", "classify", "intersection_of_all_inverses", "preinverse_profile",
    "EquationSystem", "Verdict", "catalog", "catalog_ids", "parse", "satisfies",
    "FreeProductElement", "RunSystem", "WitnessScript", "canonical_check",
    "extract_epsilon_c", "fp_multiply", "search_scripts",
    "Corpus", "enumerate_semigroups", "get_corpus", "verify_battery",
    "Budgets", "TriVerdict", "holds_in_all_semigroups",
]
