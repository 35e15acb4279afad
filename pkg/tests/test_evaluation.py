# tests/test_evaluation.py
import pytest

from completion import CompletedBatch, SpliceSettings, run_stream
from errors import EvaluationError
from evaluation import (
    GeneratorParams,
    Metrics,
    RUN_COLUMNS,
    aggregate_sweep,
    apply_plan,
    closed_world_labels,
    evaluate,
    evaluate_stream,
    generate_truth,
    label_plan,
    mask_labels,
    rule_holds,
    run_sweep,
    synth_gen,
    unknown_keys,
    write_synthetic,
)
from logic.terms import Label
from utils.report_tables import completion_frame, errors_frame, filter_frame, format_table, paginate


# ── Metrics ──────────────────────────────────────────────────────────────────

def test_metric_arithmetic():
    m = Metrics(tp=8, fp=2, fn=2, tn=5)
    assert m.precision == pytest.approx(0.8)
    assert m.recall == pytest.approx(0.8)
    assert m.f1 == pytest.approx(0.8)
    assert m.total == 17
    assert Metrics().f1 == 0.0


def test_evaluate_perfect_and_flipped():
    truth = {i: (1 if i % 2 else -1) for i in range(10)}
    assert evaluate(truth, truth).f1 == 1.0
    flipped = {k: -v for k, v in truth.items()}
    result = evaluate(flipped, truth)
    assert result.tp == 0
    assert result.f1 == 0.0


def test_evaluate_scores_only_requested_keys():
    predicted = {"a": 1, "b": -1, "c": 1}
    truth = {"a": 1, "b": 1, "c": -1}
    assert evaluate(predicted, truth, unknown=["a", "b"]) == Metrics(tp=1, fp=0, fn=1, tn=0)
    with pytest.raises(EvaluationError):
        evaluate({"z": 1}, truth)


def test_evaluate_stream_ignores_given_labels(atom, make_batch):
    q1, q2 = atom("HoldsAt(move(ID1,ID2),5)"), atom("HoldsAt(move(ID2,ID1),5)")
    truth = [make_batch(["HoldsAt(move(ID1,ID2),5)", "HoldsAt(move(ID2,ID1),5)"])]
    completed = [CompletedBatch(0, ((q1, -1), (q2, 1)), (), (False, True))]
    assert evaluate_stream(completed, truth) == Metrics(tp=1)


# ── Generator ────────────────────────────────────────────────────────────────

SMALL = GeneratorParams(batches=6, batch_size=4, entities=3)


def _labels(batches):
    return [label for b in batches for _, label in b.query_atoms]


def test_label_fraction_extremes():
    truth = generate_truth(1, SMALL)
    for placement in ("whole-batch", "per-batch"):
        assert Label.UNKNOWN not in _labels(mask_labels(truth, 1.0, placement, 2))
        assert set(_labels(mask_labels(truth, 0.0, placement, 2))) == {Label.UNKNOWN}


def test_whole_batch_placement_labels_entire_batches():
    masked = mask_labels(generate_truth(1, SMALL), 0.5, "whole-batch", 9)
    per_batch = [{label.is_known for _, label in b.query_atoms} for b in masked]
    assert all(len(s) == 1 for s in per_batch)
    assert sum(1 for s in per_batch if True in s) == 3


def test_per_batch_placement_counts():
    masked = mask_labels(generate_truth(1, SMALL), 0.25, "per-batch", 9)
    for batch in masked:
        assert batch.counts()["labelled"] == round(0.25 * len(batch.query_atoms))


def test_truth_follows_rule():
    for batch in generate_truth(4, SMALL):
        evidence = [a for a, _ in batch.evidence_atoms]
        for query, label in batch.query_atoms:
            move, t = query.args
            a, b = (c.symbol for c in move.args)
            assert (label is Label.POSITIVE) == rule_holds(evidence, a, b, int(t.symbol))


def test_noise_flips_given_labels():
    truth = generate_truth(1, SMALL)
    noisy = mask_labels(truth, 1.0, "whole-batch", 3, noise=1.0)
    assert [-l.sign for l in _labels(truth)] == [l.sign for l in _labels(noisy)]


def _known(batches):
    return {(b.batch_index, atom): label for b in batches for atom, label in b.query_atoms if label.is_known}


@pytest.mark.parametrize("placement", ["whole-batch", "per-batch"])
def test_label_plan_reveals_nested_prefixes(placement):
    truth = generate_truth(1, SMALL)
    plan = label_plan(truth, placement, 5, noise=0.3)
    hold_out = unknown_keys(apply_plan(truth, plan, 0.8))
    assert hold_out

    previous = {}
    for fraction in (0.0, 0.05, 0.2, 0.4, 0.6, 0.8):
        masked = apply_plan(truth, plan, fraction)
        known = _known(masked)
        assert previous.items() <= known.items()
        assert hold_out <= unknown_keys(masked)
        previous = known
    assert len(_known(apply_plan(truth, plan, 1.0))) == sum(len(b.query_atoms) for b in truth)


def test_mask_labels_follows_its_plan():
    truth = generate_truth(1, SMALL)
    plan = label_plan(truth, "per-batch", 9)
    assert mask_labels(truth, 0.25, "per-batch", 9) == apply_plan(truth, plan, 0.25)
    with pytest.raises(ValueError):
        label_plan(truth, "random", 9)


def test_closed_world_labels_read_unknown_as_negative(make_batch):
    batch = make_batch(["HoldsAt(move(ID1,ID2),5)", "?HoldsAt(move(ID2,ID1),5)", "!HoldsAt(move(ID1,ID1),5)"])
    assert sorted(closed_world_labels([batch]).values()) == [-1, -1, 1]


def test_generated_files_are_deterministic(tmp_path):
    first = write_synthetic(synth_gen(8, SMALL), str(tmp_path / "a"))
    second = write_synthetic(synth_gen(8, SMALL), str(tmp_path / "b"))
    for role in ("declarations", "stream", "truth"):
        with open(first[role], "rb") as f1, open(second[role], "rb") as f2:
            assert f1.read() == f2.read()


def test_generator_validation():
    with pytest.raises(ValueError):
        GeneratorParams(entities=1).validate()
    with pytest.raises(ValueError):
        GeneratorParams(placement="random").validate()


# ── Report tables ────────────────────────────────────────────────────────────

def test_completion_tables(atom, make_batch):
    q1, q2 = atom("HoldsAt(move(ID1,ID2),5)"), atom("HoldsAt(move(ID2,ID1),5)")
    truth = [make_batch(["HoldsAt(move(ID1,ID2),5)", "!HoldsAt(move(ID2,ID1),5)"])]
    completed = [CompletedBatch(0, ((q1, 1), (q2, 1)), (), (False, True))]
    frame = completion_frame(completed, truth)
    assert list(frame.columns) == ["batch", "atom", "label", "inferred", "truth"]
    wrong = errors_frame(frame)
    assert wrong["atom"].tolist() == ["HoldsAt(move(ID2,ID1),5)"]
    assert len(filter_frame(frame, "id2,id1")) == 1
    assert len(paginate(frame, page=9, per_page=1)) == 1
    assert "(no rows)" == format_table(frame.iloc[0:0])


# ── End to end ───────────────────────────────────────────────────────────────

def test_completion_beats_closed_world_on_synthetic_stream():
    stream = synth_gen(2, GeneratorParams(batches=10, label_fraction=0.5, placement="per-batch"))
    d = stream.declarations
    completed, _ = run_stream(stream.masked, SpliceSettings(d.schema, d.modes, "HoldsAt", k=2))
    metrics = evaluate_stream(completed, stream.truth)
    assert metrics.total > 0
    assert metrics.recall > 0.0


def test_sweep_scores_a_fixed_hold_out():
    runs = run_sweep(seed=3, params=SMALL, levels=(50, 20), placements=2,
                     regimes=("per-batch", "whole-batch"), connectors=[("knn", 2)])
    assert list(runs.columns) == RUN_COLUMNS
    assert len(runs) == 2 * 2 * 2
    assert (runs["runtime_s"] > 0).all()
    assert runs.groupby(["regime", "placement"])["evaluated"].nunique().eq(1).all()
    for _, group in runs.groupby(["regime", "placement"]):
        by_level = group.set_index("level")["closed_world_f1"]
        assert by_level.loc[50] >= by_level.loc[20]

    summary = aggregate_sweep(runs)
    for column in ("f1_mean", "f1_sem", "stream_f1_mean", "closed_world_f1_mean", "runtime_s_mean"):
        assert column in summary.columns
    assert summary["runs"].eq(2).all()


@pytest.mark.slow
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_supervision_sweep_shape(seed):
    runs = run_sweep(seed=seed, regimes=("whole-batch",), connectors=[("knn", 2)])
    assert len(runs) == 5 * 20
    f1 = aggregate_sweep(runs).set_index("level")["f1_mean"]
    assert f1.loc[80] > f1.loc[5]
    assert f1.loc[80] >= 0.90
