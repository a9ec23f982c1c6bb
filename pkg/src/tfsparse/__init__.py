"""Typed feature structures, multi-rooted rules, and a bottom-up chart parser."""

from __future__ import annotations

from .afs import (
    Fs,
    canonicalize,
    enumerate_paths,
    subsumes,
    totally_well_typed,
    type_errors,
    unifiable,
    unify,
    well_typed,
)
from .amrs import (
    Amrs,
    amrs_subsumes,
    concatenate,
    from_raw,
    indexed_paths,
    project,
    sub_structure,
    unify_in_context,
)
from .chart import (
    Chart,
    Guards,
    Item,
    ParseResult,
    dot_move,
    extract_derivation,
    item_subsumes,
    path_quotient,
    quotient_collisions,
    run,
)
from .errors import *  # noqa: F401,F403
from .fmt import load_grammar, parse_amrs, parse_fs, parse_grammar, render
from .grammar import (
    Grammar,
    Rule,
    derive_step,
    in_language,
    oracle_derives,
    pre_terminals,
    validate_grammar,
)
from .hierarchy import BOT, TypeHierarchy, validate

__version__ = "0.1.0"
