# evaluation/generator.py
"""
Synthetic movement streams with a known target rule.

Entities ID1..IDn are observed every frame (time step 40). Each entity is
walking with probability p_walking; walking is the only emitted activity.
Each unordered pair is close with probability p_close, in which case
Close(A, B, d, t) and Close(B, A, d, t) are emitted with a distance bucket
d drawn per frame. For every ordered pair:

    HoldsAt(move(A, B), t)  iff  walking(A) and walking(B) and Close(A, B, _, t)

The truth stream carries every label; the masked stream hides labels
according to the placement regime and can flip given labels (noise).
"""

import logging
import os
from dataclasses import dataclass, field, replace
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

import numpy as np

from config import GENERATOR_CONFIG, IO_CONFIG
from completion.partition import MicroBatch
from logic.declarations import Declarations, parse_declarations
from logic.terms import Atom, Constant, Function, Label
from utils.stream_export import write_batches

logger = logging.getLogger(__name__)

PLACEMENTS = ("whole-batch", "per-batch")

SYNTHETIC_DECLARATIONS = """\
# Synthetic movement domain
type id.
type time.
type dist.
pred HappensAt(event, time).
pred Close(id, id, dist, time).
pred HoldsAt(fluent, time).
func walking(id): event.
func move(id, id): fluent.
mode 1 HappensAt(+event, +time).
mode 1 Close(+id, +id, #dist, +time).
mode 1 HoldsAt(move(+id, +id), +time).
query HoldsAt.
"""


@dataclass(frozen=True)
class GeneratorParams:
    batches:         int = GENERATOR_CONFIG["batches"]
    batch_size:      int = GENERATOR_CONFIG["batch_size"]
    entities:        int = GENERATOR_CONFIG["entities"]
    label_fraction:  float = GENERATOR_CONFIG["label_fraction"]
    placement:       str = GENERATOR_CONFIG["placement"]
    noise:           float = GENERATOR_CONFIG["noise"]
    p_walking:       float = GENERATOR_CONFIG["p_walking"]
    p_close:         float = GENERATOR_CONFIG["p_close"]
    frame_step:      int = GENERATOR_CONFIG["frame_step"]
    close_distances: Tuple[str, ...] = GENERATOR_CONFIG["close_distances"]

    def validate(self) -> "GeneratorParams":
        if self.batches < 0 or self.batch_size < 1 or self.entities < 2:
            raise ValueError("need batches >= 0, batch_size >= 1 and entities >= 2")
        if not 0.0 <= self.label_fraction <= 1.0:
            raise ValueError(f"label_fraction must lie in [0, 1], got {self.label_fraction}")
        if self.placement not in PLACEMENTS:
            raise ValueError(f"placement must be one of {PLACEMENTS}, got '{self.placement}'")
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError(f"noise must lie in [0, 1], got {self.noise}")
        if not self.close_distances:
            raise ValueError("close_distances must not be empty")
        return self


@dataclass(frozen=True)
class SyntheticStream:
    declarations: Declarations
    truth:        Tuple[MicroBatch, ...]
    masked:       Tuple[MicroBatch, ...]
    params:       GeneratorParams = field(default_factory=GeneratorParams)

    @property
    def declarations_text(self) -> str:
        return SYNTHETIC_DECLARATIONS


# ─────────────────────────────────────────────
# Atoms
# ─────────────────────────────────────────────

def walking(entity: str, t: int) -> Atom:
    return Atom("HappensAt", (Function("walking", (Constant(entity),)), Constant(str(t))))


def close(a: str, b: str, d: str, t: int) -> Atom:
    return Atom("Close", (Constant(a), Constant(b), Constant(d), Constant(str(t))))


def move(a: str, b: str, t: int) -> Atom:
    return Atom("HoldsAt", (Function("move", (Constant(a), Constant(b))), Constant(str(t))))


def rule_holds(evidence: Sequence[Atom], a: str, b: str, t: int) -> bool:
    """Re-derive the target label from emitted evidence"""
    present = set(evidence)
    walking_both = walking(a, t) in present and walking(b, t) in present
    is_close = any(
        e.predicate == "Close" and e.args[0] == Constant(a) and e.args[1] == Constant(b)
        and e.args[3] == Constant(str(t))
        for e in present
    )
    return walking_both and is_close


# ─────────────────────────────────────────────
# Generation
# ─────────────────────────────────────────────

def generate_truth(seed: int, params: GeneratorParams) -> List[MicroBatch]:
    """Fully labelled batches, deterministic in `seed`"""
    params.validate()
    rng = np.random.default_rng(seed)
    ids = [f"ID{i + 1}" for i in range(params.entities)]
    pairs = list(permutations(ids, 2))

    batches = []
    for b in range(params.batches):
        queries: List[Tuple[Atom, Label]] = []
        evidence: List[Tuple[Atom, bool]] = []
        for frame in range(params.batch_size):
            t = (b * params.batch_size + frame) * params.frame_step
            is_walking = {e: bool(rng.random() < params.p_walking) for e in ids}
            closeness: Dict[frozenset, str] = {}
            for i, a in enumerate(ids):
                for c in ids[i + 1:]:
                    if rng.random() < params.p_close:
                        closeness[frozenset((a, c))] = str(rng.choice(params.close_distances))

            for e in ids:
                if is_walking[e]:
                    evidence.append((walking(e, t), True))
            for i, a in enumerate(ids):
                for c in ids[i + 1:]:
                    d = closeness.get(frozenset((a, c)))
                    if d is not None:
                        evidence.append((close(a, c, d, t), True))
                        evidence.append((close(c, a, d, t), True))

            for a, c in pairs:
                holds = is_walking[a] and is_walking[c] and frozenset((a, c)) in closeness
                queries.append((move(a, c, t), Label.POSITIVE if holds else Label.NEGATIVE))
        batches.append(MicroBatch(tuple(queries), tuple(evidence), b))
    return batches


@dataclass(frozen=True)
class LabelPlan:
    """
    One random label placement, shared by every supervision level.

    `order` ranks batches (whole-batch) or each batch's query atoms
    (per-batch); a level reveals a prefix of that ranking, so the labelled
    set of a lower level is contained in that of any higher level. `flips`
    marks, per batch and query atom, the labels that noise turns over.
    """

    placement: str
    order:     Tuple[Tuple[int, ...], ...]
    flips:     Tuple[Tuple[bool, ...], ...]


def label_plan(truth: Sequence[MicroBatch], placement: str, seed: int,
               noise: float = 0.0) -> LabelPlan:
    if placement not in PLACEMENTS:
        raise ValueError(f"placement must be one of {PLACEMENTS}, got '{placement}'")
    rng = np.random.default_rng(seed)
    if placement == "whole-batch":
        order = (tuple(rng.permutation(len(truth)).tolist()),)
    else:
        order = tuple(tuple(rng.permutation(len(b.query_atoms)).tolist()) for b in truth)
    flips = tuple(
        tuple(bool(x) for x in rng.random(len(b.query_atoms)) < noise) if noise > 0
        else (False,) * len(b.query_atoms)
        for b in truth
    )
    return LabelPlan(placement, order, flips)


def _revealed(count: int, fraction: float, at_least_one: bool) -> int:
    if fraction <= 0:
        return 0
    n = round(fraction * count)
    return min(count, max(1, n)) if at_least_one else n


def apply_plan(truth: Sequence[MicroBatch], plan: LabelPlan, label_fraction: float) -> List[MicroBatch]:
    """
    Hide labels of a truth stream following `plan`.

    whole-batch: max(1, round(f * #batches)) batches (0 when f == 0) keep all
                 labels, the others keep none
    per-batch:   round(f * #atoms) query atoms keep their label in every batch
    """
    if plan.placement == "whole-batch":
        ranked = plan.order[0]
        labelled_batches = set(ranked[:_revealed(len(truth), label_fraction, True)])

    masked = []
    for i, batch in enumerate(truth):
        m = len(batch.query_atoms)
        if plan.placement == "whole-batch":
            keep = set(range(m)) if i in labelled_batches else set()
        else:
            keep = set(plan.order[i][:_revealed(m, label_fraction, False)])

        queries = []
        for j, (atom, label) in enumerate(batch.query_atoms):
            if j not in keep:
                queries.append((atom, Label.UNKNOWN))
            elif plan.flips[i][j]:
                queries.append((atom, Label.from_sign(-label.sign)))
            else:
                queries.append((atom, label))
        masked.append(replace(batch, query_atoms=tuple(queries)))
    return masked


def mask_labels(truth: Sequence[MicroBatch], label_fraction: float, placement: str,
                seed: int, noise: float = 0.0) -> List[MicroBatch]:
    """
    Hide labels with a fresh placement drawn from `seed`.

    Each kept label is flipped with probability `noise`.
    """
    return apply_plan(truth, label_plan(truth, placement, seed, noise), label_fraction)


def synth_gen(seed: int, params: GeneratorParams = GeneratorParams()) -> SyntheticStream:
    """Truth and masked streams for one seed"""
    params.validate()
    truth = generate_truth(seed, params)
    masked = mask_labels(truth, params.label_fraction, params.placement, seed + 1, params.noise)
    declarations = parse_declarations(SYNTHETIC_DECLARATIONS, source="<synthetic>")
    logger.info(
        f"Generated {len(truth)} batches of {params.batch_size} frames, "
        f"{params.entities} entities, label fraction {params.label_fraction} ({params.placement})"
    )
    return SyntheticStream(declarations, tuple(truth), tuple(masked), params)


def write_synthetic(stream: SyntheticStream, out_dir: str) -> Dict[str, str]:
    """
    Write declarations.txt, stream.txt (masked) and truth.txt under `out_dir`.

    Returns:
        Dict of file role -> path
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "declarations": os.path.join(out_dir, "declarations.txt"),
        "stream": os.path.join(out_dir, "stream.txt"),
        "truth": os.path.join(out_dir, "truth.txt"),
    }
    with open(paths["declarations"], "w", encoding=IO_CONFIG["encoding"], newline="\n") as f:
        f.write(stream.declarations_text)
    write_batches(stream.masked, paths["stream"])
    write_batches(stream.truth, paths["truth"])
    logger.info(f"Synthetic stream written to {out_dir}")
    return paths


__all__ = [
    "PLACEMENTS",
    "SYNTHETIC_DECLARATIONS",
    "GeneratorParams",
    "SyntheticStream",
    "generate_truth",
    "LabelPlan",
    "label_plan",
    "apply_plan",
    "mask_labels",
    "synth_gen",
    "write_synthetic",
    "rule_holds",
]
