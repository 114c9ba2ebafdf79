"""Toolkit for the SCAN command-to-action task and its NACS inverse.

Enumerates the full task universe from the fixed phrase-structure grammar,
interprets commands compositionally, builds the standard experiment splits
in either direction, and scores predictions (exact match for SCAN, semantic
match for NACS).
"""

from ._version import __version__
from .corpus import (
    Dataset,
    DegenerateSplit,
    Direction,
    FormatViolation,
    Manifest,
    SplitSpec,
    TaskPair,
    build_universe,
    make_split,
    orient,
    read_dataset,
    split_length,
    split_primitive,
    split_simple,
    write_dataset,
)
from .evaluator import AlignmentError, EvalReport, eval_nacs, eval_scan, score_files
from .grammar import (
    COMMAND_VOCABULARY,
    DerivationTree,
    NotInLanguage,
    Production,
    enumerate_trees,
    parse,
    productions,
    render,
    tokenize,
)
from .semantics import (
    ACTION_VOCABULARY,
    InverseIndex,
    build_inverse_index,
    commands_for,
    interpret,
    translate,
)
from .stats import StatsReport, summarize

__all__ = [
    "__version__",
    "ACTION_VOCABULARY",
    "AlignmentError",
    "COMMAND_VOCABULARY",
    "Dataset",
    "DegenerateSplit",
    "DerivationTree",
    "Direction",
    "EvalReport",
    "FormatViolation",
    "InverseIndex",
    "Manifest",
    "NotInLanguage",
    "Production",
    "SplitSpec",
    "StatsReport",
    "TaskPair",
    "build_inverse_index",
    "build_universe",
    "commands_for",
    "enumerate_trees",
    "eval_nacs",
    "eval_scan",
    "interpret",
    "make_split",
    "orient",
    "parse",
    "productions",
    "read_dataset",
    "render",
    "score_files",
    "split_length",
    "split_primitive",
    "split_simple",
    "summarize",
    "tokenize",
    "translate",
    "write_dataset",
]
