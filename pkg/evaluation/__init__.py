# evaluation/__init__.py
"""
Public API for scoring completions and synthetic experiments.

Usage:
    from evaluation import evaluate_stream, synth_gen, run_sweep
"""

# ── Metrics ──────────────────────────────────────────────────────────────────
from .metrics import (
    Metrics,
    evaluate,
    evaluate_stream,
    completed_labels,
    inferred_keys,
    batch_labels,
    unknown_keys,
    closed_world_labels,
)

# ── Synthetic streams ────────────────────────────────────────────────────────
from .generator import (
    PLACEMENTS,
    SYNTHETIC_DECLARATIONS,
    GeneratorParams,
    SyntheticStream,
    generate_truth,
    LabelPlan,
    label_plan,
    apply_plan,
    mask_labels,
    synth_gen,
    write_synthetic,
    rule_holds,
)

# ── Sweeps ───────────────────────────────────────────────────────────────────
from .sweep import RUN_COLUMNS, default_connectors, placement_seed, run_sweep, aggregate_sweep, write_sweep

__all__ = [
    'Metrics', 'evaluate', 'evaluate_stream', 'completed_labels', 'inferred_keys',
    'batch_labels', 'unknown_keys', 'closed_world_labels',
    'PLACEMENTS', 'SYNTHETIC_DECLARATIONS', 'GeneratorParams', 'SyntheticStream',
    'generate_truth', 'LabelPlan', 'label_plan', 'apply_plan', 'mask_labels',
    'synth_gen', 'write_synthetic', 'rule_holds',
    'RUN_COLUMNS', 'default_connectors', 'placement_seed', 'run_sweep', 'aggregate_sweep', 'write_sweep',
]
