# distance/__init__.py
"""
Public API for structural distances.

Usage:
    from distance import atom_distance, hungarian, set_distance, similarity
"""

from .atoms import atom_distance, Expression
from .hungarian import Assignment, hungarian
from .sets import cost_matrix, set_distance, similarity, evidence_similarity, memo_info, clear_memo

__all__ = [
    'atom_distance',
    'Expression',
    'Assignment',
    'hungarian',
    'cost_matrix',
    'set_distance',
    'similarity',
    'evidence_similarity',
    'memo_info',
    'clear_memo',
]
