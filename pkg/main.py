# main.py
import argparse
import logging
import sys
import traceback
from typing import Iterable, Iterator, List, Optional

from config import (
    APP_CONFIG,
    EXIT_CODES,
    GENERATOR_CONFIG,
    IO_CONFIG,
    RunConfig,
    SWEEP_CONFIG,
    check_environment,
)
from logging_setup import setup_logging

logger = logging.getLogger(__name__)

from completion import (
    CompletedBatch,
    LabelCache,
    SpliceSettings,
    SpliceState,
    filter_cache,
    iter_completed,
    partition,
    split_by_label,
    update_cache,
)
from errors import ConfigError, ParseError, SpliceError
from evaluation import (
    PLACEMENTS,
    GeneratorParams,
    aggregate_sweep,
    evaluate_stream,
    run_sweep,
    synth_gen,
    unknown_keys,
    write_synthetic,
    write_sweep,
)
from main_utils import format_banner, format_key_values, parse_number_list, resolve_declarations
from utils.cache_snapshot import export_cache, import_cache
from utils.report_tables import (
    completion_frame,
    errors_frame,
    filter_frame,
    format_table,
    metrics_frame,
    paginate,
    summary_frame,
)
from utils.stream_export import emit_completed, render_completed
from utils.stream_import import ingest


# ─────────────────────────────────────────────
# Argument parsing
# ─────────────────────────────────────────────

def _add_declaration_flags(p: argparse.ArgumentParser):
    p.add_argument("--declarations", "-d", required=True, help="schema and mode declarations file")
    p.add_argument("--query", "-q", default=None, help="query predicate (overrides 'query' in the declarations)")


def _add_connector_flags(p: argparse.ArgumentParser):
    defaults = RunConfig()
    p.add_argument("--connector", choices=("knn", "enn"), default=defaults.connector)
    p.add_argument("--k", type=int, default=defaults.k, help="neighbours per vertex (knn)")
    p.add_argument("--epsilon", type=float, default=defaults.epsilon, help="weight threshold (enn)")
    p.add_argument("--delta", type=float, default=defaults.delta, help="Hoeffding confidence")
    p.add_argument("--workers", type=int, default=defaults.workers, help="similarity threads per batch")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=APP_CONFIG["app_name"], description=APP_CONFIG["description"])
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_CONFIG['version']}")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    parser.add_argument("--no-log-file", action="store_true", help="log to stderr only")
    verbs = parser.add_subparsers(dest="command", required=True)

    p = verbs.add_parser("complete", help="complete the unlabelled query atoms of a stream")
    p.add_argument("inputs", nargs="+", help="stream files or directories of batch files")
    _add_declaration_flags(p)
    _add_connector_flags(p)
    p.add_argument("--output", "-o", default=None, help="completed stream file (default stdout)")
    p.add_argument("--truth", default=None, help="fully labelled stream to score against")
    p.add_argument("--cache-in", default=None, help="cache snapshot to start from")
    p.add_argument("--cache-out", default=None, help="write the final cache snapshot here")
    p.add_argument("--dump-weights", default=None, metavar="DIR", help="per-batch sparsified weights")
    p.add_argument("--dump-harmonic", default=None, metavar="DIR", help="per-batch harmonic values")

    p = verbs.add_parser("evaluate", help="score a completed stream against a truth stream")
    p.add_argument("completed", help="completed stream file")
    _add_declaration_flags(p)
    p.add_argument("--truth", required=True, help="fully labelled stream")
    p.add_argument("--input", default=None,
                   help="the stream before completion; only its unlabelled atoms are scored")
    p.add_argument("--show-errors", type=int, default=0, metavar="N", help="list up to N wrong completions")
    p.add_argument("--search", default="", help="only list wrong completions whose row contains this text")
    p.add_argument("--page", type=int, default=1, help="page of the wrong-completion listing")

    p = verbs.add_parser("generate", help="write a synthetic stream with a known rule")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batches", type=int, default=GENERATOR_CONFIG["batches"])
    p.add_argument("--batch-size", type=int, default=GENERATOR_CONFIG["batch_size"])
    p.add_argument("--entities", type=int, default=GENERATOR_CONFIG["entities"])
    p.add_argument("--label-fraction", type=float, default=GENERATOR_CONFIG["label_fraction"])
    p.add_argument("--placement", choices=PLACEMENTS, default=GENERATOR_CONFIG["placement"])
    p.add_argument("--noise", type=float, default=GENERATOR_CONFIG["noise"])

    p = verbs.add_parser("dump-cache", help="build the label cache of a stream and write a snapshot")
    p.add_argument("inputs", nargs="+")
    _add_declaration_flags(p)
    p.add_argument("--cache-out", required=True)

    p = verbs.add_parser("load-cache", help="read a snapshot and report its contents")
    p.add_argument("snapshot")
    _add_declaration_flags(p)
    p.add_argument("--delta", type=float, default=RunConfig().delta)
    p.add_argument("--list", action="store_true", help="print every cached clause")

    p = verbs.add_parser("sweep", help="supervision-level sweep on a synthetic stream")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", default=",".join(map(str, SWEEP_CONFIG["levels"])))
    p.add_argument("--placements", type=int, default=SWEEP_CONFIG["placements"])
    p.add_argument("--regimes", default=",".join(PLACEMENTS))
    p.add_argument("--k-values", default=",".join(map(str, SWEEP_CONFIG["k_values"])))
    p.add_argument("--epsilon-values", default=",".join(map(str, SWEEP_CONFIG["epsilon_values"])))
    p.add_argument("--delta", type=float, default=RunConfig().delta)
    p.add_argument("--output", "-o", default=None, help="aggregated CSV")
    p.add_argument("--runs-output", default=None, help="per-run CSV")
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        input_paths=list(getattr(args, "inputs", []) or []),
        declarations_path=getattr(args, "declarations", None),
        query_predicate=getattr(args, "query", None),
        connector=getattr(args, "connector", RunConfig.connector),
        k=getattr(args, "k", RunConfig.k),
        epsilon=getattr(args, "epsilon", RunConfig.epsilon),
        delta=getattr(args, "delta", RunConfig.delta),
        workers=getattr(args, "workers", RunConfig.workers),
        output_path=getattr(args, "output", None),
        truth_path=getattr(args, "truth", None),
        cache_in=getattr(args, "cache_in", None),
        cache_out=getattr(args, "cache_out", None),
        dump_weights_dir=getattr(args, "dump_weights", None),
        dump_harmonic_dir=getattr(args, "dump_harmonic", None),
        seed=getattr(args, "seed", 0),
    ).validate()


def print_metrics(metrics):
    print(format_table(metrics_frame(metrics)))
    print(format_key_values(metrics.as_dict()))


# ─────────────────────────────────────────────
# Verbs
# ─────────────────────────────────────────────

def _load(paths, declarations):
    batches = list(ingest(paths, declarations.schema, declarations.query_predicate))
    logger.info(f"Read {len(batches)} batch(es) from {paths}")
    return batches


def _load_snapshot(path: str, schema) -> LabelCache:
    """Warm-start cache; a malformed snapshot is a parse error, anything else a config error"""
    result = import_cache(path, schema)
    if not result["success"]:
        if result["kind"] == "format":
            raise ParseError(f"Malformed cache snapshot: {result['error']}")
        raise ConfigError(result["error"])
    return result["cache"]



def cmd_complete(args) -> int:
    config = run_config_from_args(args)
    declarations = resolve_declarations(config.declarations_path, config.query_predicate)
    settings = SpliceSettings(
        schema=declarations.schema,
        modes=declarations.modes,
        query_predicate=declarations.query_predicate,
        connector=config.connector,
        k=config.k,
        epsilon=config.epsilon,
        delta=config.delta,
        workers=config.workers,
        dump_weights_dir=config.dump_weights_dir,
        dump_harmonic_dir=config.dump_harmonic_dir,
    )

    state = SpliceState(settings)
    if config.cache_in:
        state.cache = _load_snapshot(config.cache_in, declarations.schema)

    batches = ingest(config.input_paths, declarations.schema, declarations.query_predicate,
                     read_ahead_depth=1)
    collected: List[CompletedBatch] = []

    def keep(stream: Iterable[CompletedBatch]) -> Iterator[CompletedBatch]:
        for batch in stream:
            if config.truth_path:
                collected.append(batch)
            yield batch

    completed = keep(iter_completed(batches, state))
    if config.output_path:
        emit_completed(completed, config.output_path)
    else:
        for i, batch in enumerate(completed):
            if i:
                print(IO_CONFIG["batch_delimiter"])
            sys.stdout.write(render_completed([batch]))

    if config.cache_out:
        result = export_cache(state.cache, config.cache_out)
        if not result["success"]:
            raise ConfigError(f"Could not write cache snapshot: {result['error']}")

    print(format_table(summary_frame(state.summary)), file=sys.stderr)

    if config.truth_path:
        truth = _load(config.truth_path, declarations)
        print_metrics(evaluate_stream(collected, truth))
    return EXIT_CODES["ok"]


def _as_completed(completed_batches, input_batches) -> List[CompletedBatch]:
    """Pair a completed stream with the stream it was completed from"""
    unknown = unknown_keys(input_batches) if input_batches is not None else None
    stream = []
    for batch in completed_batches:
        labels = tuple((atom.positive(), label.sign) for atom, label in batch.query_atoms)
        inferred = tuple(
            unknown is None or (batch.batch_index, atom) in unknown for atom, _ in labels
        )
        stream.append(CompletedBatch(batch.batch_index, labels, batch.evidence_atoms, inferred))
    return stream


def cmd_evaluate(args) -> int:
    declarations = resolve_declarations(args.declarations, args.query)
    completed = _load(args.completed, declarations)
    truth = _load(args.truth, declarations)
    original = _load(args.input, declarations) if args.input else None
    if original is None:
        logger.warning("No --input stream given; every query atom of the completed stream is scored")

    stream = _as_completed(completed, original)
    print_metrics(evaluate_stream(stream, truth))

    if args.show_errors > 0:
        wrong = filter_frame(errors_frame(completion_frame(stream, truth)), args.search)
        print(f"\nWrong completions ({len(wrong)}), page {args.page}:")
        print(format_table(paginate(wrong, args.page, args.show_errors)))
    return EXIT_CODES["ok"]


def cmd_generate(args) -> int:
    try:
        params = GeneratorParams(
            batches=args.batches,
            batch_size=args.batch_size,
            entities=args.entities,
            label_fraction=args.label_fraction,
            placement=args.placement,
            noise=args.noise,
        ).validate()
    except ValueError as e:
        raise ConfigError(str(e))
    paths = write_synthetic(synth_gen(args.seed, params), args.out)
    print(format_key_values(paths))
    return EXIT_CODES["ok"]


def cmd_dump_cache(args) -> int:
    config = run_config_from_args(args)
    declarations = resolve_declarations(config.declarations_path, config.query_predicate)
    cache = LabelCache()
    batches = ingest(config.input_paths, declarations.schema, declarations.query_predicate,
                     read_ahead_depth=1)
    for batch in batches:
        labelled, _ = split_by_label(partition(batch, declarations.modes, declarations.schema))
        update_cache(cache, labelled, declarations.modes, declarations.schema)

    result = export_cache(cache, config.cache_out)
    if not result["success"]:
        raise ConfigError(f"Could not write cache snapshot: {result['error']}")
    print(format_key_values({"path": result["path"], "entries": result["entries"],
                             "observations": cache.total_count()}))
    return EXIT_CODES["ok"]


def cmd_load_cache(args) -> int:
    declarations = resolve_declarations(args.declarations, args.query)
    cache = _load_snapshot(args.snapshot, declarations.schema)
    filtered = filter_cache(cache, args.delta)

    if args.list:
        for clause, entry in cache:
            print(f"{entry.count}\t{clause.render()}")
    print(format_key_values({
        "entries": len(cache),
        "observations": cache.total_count(),
        "contradictions": filtered.contradictions,
        "kept": len(filtered.kept),
        "dropped": len(filtered.dropped),
    }))
    return EXIT_CODES["ok"]


def cmd_sweep(args) -> int:
    regimes = [r.strip() for r in args.regimes.split(",") if r.strip()]
    for regime in regimes:
        if regime not in PLACEMENTS:
            raise ConfigError(f"Unknown regime '{regime}' (expected one of {PLACEMENTS})")
    connectors = ([("knn", k) for k in parse_number_list(args.k_values, int)]
                  + [("enn", e) for e in parse_number_list(args.epsilon_values, float)])

    runs = run_sweep(
        seed=args.seed,
        levels=parse_number_list(args.levels, int),
        placements=args.placements,
        regimes=regimes,
        connectors=connectors,
        delta=args.delta,
    )
    if args.runs_output:
        write_sweep(runs, args.runs_output, aggregated=False)
    if args.output:
        write_sweep(runs, args.output)

    print(format_banner(f"Sweep seed {args.seed}: {len(runs)} runs"))
    print(format_table(aggregate_sweep(runs)))
    return EXIT_CODES["ok"]


COMMANDS = {
    "complete": cmd_complete,
    "evaluate": cmd_evaluate,
    "generate": cmd_generate,
    "dump-cache": cmd_dump_cache,
    "load-cache": cmd_load_cache,
    "sweep": cmd_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level, to_file=not args.no_log_file)

    try:
        check_environment()
        return COMMANDS[args.command](args)
    except SpliceError as e:
        logger.error(f"{args.command} failed: {e}\n{traceback.format_exc()}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.critical(f"Critical error in {args.command}: {e}\n{traceback.format_exc()}")
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
