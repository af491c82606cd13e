"""SLEEC DSL toolkit.

Parse normative requirements written in the SLEEC DSL, analyze them
semantically, check the rule set for well-formedness issues (vacuous and
situational conflicts, redundancy, restrictiveness, insufficiency) by bounded
search, and turn verdicts into stakeholder-readable diagnoses.
"""

from .ast import Document, Severity
from .parser import ParseResult, parse
from .printer import pretty_print
from .sema import Analysis, analyze, build_symbols, completions, typecheck

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "Document",
    "ParseResult",
    "Severity",
    "analyze",
    "build_symbols",
    "completions",
    "parse",
    "pretty_print",
    "typecheck",
    "__version__",
]
