# logic/__init__.py
"""
Public API for the first-order logic package.

Usage:
    from logic import (
        parse_atom, load_declarations,
        types_of, typed_constants,
        lift, alpha_equivalent, opposite,
    )
"""

# ── Terms and atoms ──────────────────────────────────────────────────────────
from .terms import (
    Constant,
    Variable,
    Function,
    Atom,
    Term,
    Label,
    iter_leaves,
    map_leaves,
)

# ── Parsing ──────────────────────────────────────────────────────────────────
from .parser import (
    parse_atom,
    parse_prefixed,
    parse_atoms,
    split_top_level,
)

# ── Schema and modes ─────────────────────────────────────────────────────────
from .declarations import (
    Schema,
    Placemarker,
    FunctionTemplate,
    ModeDeclaration,
    ModeSet,
    Declarations,
    parse_declarations,
    load_declarations,
    types_of,
    typed_constants,
    typed_leaves,
)

# ── Clauses ──────────────────────────────────────────────────────────────────
from .clauses import (
    Clause,
    canonicalize,
    lift,
    alpha_equivalent,
    opposite,
    parse_clause,
    ground_clause,
)

__all__ = [
    'Constant', 'Variable', 'Function', 'Atom', 'Term', 'Label',
    'iter_leaves', 'map_leaves',
    'parse_atom', 'parse_prefixed', 'parse_atoms', 'split_top_level',
    'Schema', 'Placemarker', 'FunctionTemplate', 'ModeDeclaration', 'ModeSet',
    'Declarations', 'parse_declarations', 'load_declarations',
    'types_of', 'typed_constants', 'typed_leaves',
    'Clause', 'canonicalize', 'lift', 'alpha_equivalent', 'opposite',
    'parse_clause', 'ground_clause',
]
