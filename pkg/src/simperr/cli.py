"""Command-line interface.

Subcommands: validate, stats, agreement, eval, facts, serve, export.
Human-readable tables by default; ``--format structured`` emits JSON
matching the schemas in `simperr.schemas`. Output is byte-identical for
identical inputs: fixed layouts, fixed rounding, no locale, no
timestamps.

Exit codes:

    0  full success
    1  input data violates its schema or invariants
    2  usage error (unknown flag/argument)
    3  input file missing or unreadable
    4  a requested statistic is not measurable on this data
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import agreement as agreement_mod
from . import collection as collection_mod
from . import detectors as detectors_mod
from . import facts as facts_mod
from . import facts_io
from .errors import (
    FormatError,
    NotMeasurableError,
    UniverseValidationError,
)
from .rendering import align_table, fmt_count, fmt_decimal
from .taxonomy import CATEGORY_ORDER

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_MISSING_FILE = 3
EXIT_NOT_MEASURABLE = 4


def _read_bytes(path: str) -> bytes:
    p = Path(path)
    try:
        return p.read_bytes()
    except FileNotFoundError:
        click.echo(f"error: file not found: {path}", err=True)
        sys.exit(EXIT_MISSING_FILE)
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_MISSING_FILE)


def _emit_json(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2))


def _fail_format(exc: FormatError) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_VIOLATIONS)


@click.group()
def main():
    """Error-annotation toolkit for automatic text simplification."""


_FORMAT_OPTION = click.option(
    "--format",
    "output_format",
    type=click.Choice(["table", "structured"]),
    default="table",
    show_default=True,
    help="Human-readable table or machine-readable JSON.",
)


# -- validate ----------------------------------------------------------------


@main.command()
@_FORMAT_OPTION
@click.argument("collection_path")
def validate(output_format: str, collection_path: str):
    """Check a collection file against the format and label invariants."""
    data = _read_bytes(collection_path)
    try:
        parsed = collection_mod.scan_collection(data, source=collection_path)
    except FormatError as exc:
        _fail_format(exc)
        return
    if output_format == "structured":
        _emit_json(
            {
                "kind": "validate",
                "records": len(parsed.records),
                "violations": list(parsed.violations),
                "valid": not parsed.violations,
            }
        )
    else:
        for violation in parsed.violations:
            click.echo(violation)
        click.echo(f"{len(parsed.violations)} violations ({len(parsed.records)} records)")
    if parsed.violations:
        sys.exit(EXIT_VIOLATIONS)


# -- stats -------------------------------------------------------------------


def _pct_str(value: Fraction | None, decimals: int = 2) -> str | None:
    if value is None:
        return None
    return fmt_decimal(value, decimals)


def _distribution_rows_json(report: collection_mod.DistributionReport) -> list[dict]:
    rows = []
    for row in report.rows():
        pct = row.pct_true
        if row.key == "any_error":
            pct = report.any_error_pct
        rows.append(
            {
                "key": row.key,
                "label": row.label,
                "total": row.total,
                "true": row.true,
                "false": row.false,
                "pct_true": _pct_str(pct),
            }
        )
    return rows


def _render_stats_table(
    report: collection_mod.DistributionReport,
    consistency: list[collection_mod.ConsistencyResult],
) -> str:
    def cells(row: collection_mod.DistributionRow, pct: Fraction | None, indent: str = ""):
        pct_text = "" if pct is None else fmt_decimal(pct, 2)
        return [
            indent + row.label,
            fmt_count(row.total),
            fmt_count(row.true),
            fmt_count(row.false),
            pct_text,
        ]

    by_letter = {row.key: row for row in report.categories}
    code_rows = {row.key: row for row in report.codes}
    table_rows = [cells(report.no_error, report.no_error.pct_true)]
    for category in CATEGORY_ORDER:
        cat_row = by_letter[f"cat:{category.letter}"]
        table_rows.append(cells(cat_row, cat_row.pct_true))
        for code in (c for c in code_rows if c[0] == category.letter):
            row = code_rows[code]
            table_rows.append(cells(row, row.pct_true, indent="  "))
    table_rows.append(cells(report.any_error, report.any_error_pct))
    text = align_table(
        ["Error Label", "#Total", "#True", "#False", "%True"], table_rows
    )
    if consistency:
        cons_rows = [
            [r.annotator_id, str(r.pairs), str(r.identical), fmt_decimal(r.rate, 2)]
            for r in consistency
        ]
        text += "\n\nAnnotator self-consistency\n"
        text += align_table(["Annotator", "Pairs", "Identical", "Rate"], cons_rows)
    return text


@main.command()
@_FORMAT_OPTION
@click.option("--lenient", is_flag=True, help="Keep records that violate label invariants.")
@click.argument("collection_path")
def stats(output_format: str, lenient: bool, collection_path: str):
    """Label distribution and annotator self-consistency for a collection."""
    data = _read_bytes(collection_path)
    try:
        parsed = collection_mod.scan_collection(data, source=collection_path)
    except FormatError as exc:
        _fail_format(exc)
        return
    if parsed.violations and not lenient:
        for violation in parsed.violations:
            click.echo(violation, err=True)
        click.echo(
            f"error: {len(parsed.violations)} label violations; rerun with --lenient "
            "to compute statistics anyway",
            err=True,
        )
        sys.exit(EXIT_VIOLATIONS)
    records = list(parsed.records)
    report = collection_mod.distribution(records)
    consistency = collection_mod.consistency_summary(records)
    if output_format == "structured":
        _emit_json(
            {
                "kind": "stats",
                "records": report.total,
                "rows": _distribution_rows_json(report),
                "any_error_pct": _pct_str(report.any_error_pct),
                "consistency": [
                    {
                        "annotator_id": r.annotator_id,
                        "pairs": r.pairs,
                        "identical": r.identical,
                        "rate": fmt_decimal(r.rate, 2),
                    }
                    for r in consistency
                ],
                "violations": list(parsed.violations),
            }
        )
    else:
        for violation in parsed.violations:
            click.echo(f"warning: {violation}", err=True)
        click.echo(_render_stats_table(report, consistency))


# -- agreement ----------------------------------------------------------------


def _shared_records(
    records: list[collection_mod.AnnotationRecord],
) -> list[collection_mod.AnnotationRecord]:
    """Restrict to items annotated by more than one rater."""
    raters_per_item: dict[str, set[str]] = {}
    for record in records:
        raters_per_item.setdefault(record.item_id, set()).add(record.annotator_id)
    shared_items = {item for item, raters in raters_per_item.items() if len(raters) > 1}
    return [r for r in records if r.item_id in shared_items]


def _render_agreement_table(report: agreement_mod.AgreementReport) -> str:
    pair_headers = [f"{a}-{b}" for a, b in report.pairs]
    rows = []
    for cls in report.classes:
        rows.append(
            [
                cls.label,
                fmt_decimal(cls.fleiss, 2),
                fmt_decimal(cls.unanimous, 1),
                *(fmt_decimal(kappa, 2) for _, kappa in cls.pairwise),
            ]
        )
    header = ["Error Class", "Fleiss", "Unanimous%", *pair_headers]
    intro = f"Shared items: {report.items}  Raters: {' '.join(report.raters)}"
    return intro + "\n\n" + align_table(header, rows)


@main.command()
@_FORMAT_OPTION
@click.option("--lenient", is_flag=True, help="Keep records that violate label invariants.")
@click.argument("collection_path")
def agreement(output_format: str, lenient: bool, collection_path: str):
    """Inter-annotator agreement over the shared (multi-rater) items."""
    data = _read_bytes(collection_path)
    try:
        records = collection_mod.parse_collection(
            data, lenient=lenient, source=collection_path
        )
    except FormatError as exc:
        _fail_format(exc)
        return
    shared = _shared_records(records)
    try:
        report = agreement_mod.agreement_report(shared)
    except NotMeasurableError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NOT_MEASURABLE)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VIOLATIONS)
    if output_format == "structured":
        _emit_json(
            {
                "kind": "agreement",
                "raters": list(report.raters),
                "items": report.items,
                "classes": [
                    {
                        "key": cls.key,
                        "label": cls.label,
                        "fleiss": float(cls.fleiss),
                        "unanimous_pct": float(cls.unanimous),
                        "pairs": [
                            {"raters": list(pair), "kappa": float(kappa)}
                            for pair, kappa in cls.pairwise
                        ],
                    }
                    for cls in report.classes
                ],
            }
        )
    else:
        click.echo(_render_agreement_table(report))


# -- eval ----------------------------------------------------------------------


def _render_eval_table(report: detectors_mod.EvalReport) -> str:
    def value_text(result: detectors_mod.TargetResult, decimals: int) -> str:
        return "n/a" if result.value is None else fmt_decimal(result.value, decimals)

    greater = [r for r in report.results if r.key == "any_error" or r.key.startswith("cat:")]
    codes = [r for r in report.results if not (r.key == "any_error" or r.key.startswith("cat:"))]
    parts = [
        f"Detector: {report.detector_name}  "
        f"(orientation: {report.orientation.value}, gold: {report.gold_policy})"
    ]
    if greater:
        rows = [
            [r.label, r.metric, value_text(r, 2), fmt_count(r.positives), fmt_count(r.total)]
            for r in greater
        ]
        parts.append("")
        parts.append("Binary and greater-category detection")
        parts.append(align_table(["Target", "Metric", "Value", "#True", "#Total"], rows))
    if codes:
        rows = [
            [r.label, value_text(r, 4), fmt_count(r.positives), fmt_count(r.total)]
            for r in codes
        ]
        parts.append("")
        parts.append("Individual code detection (AUPRC)")
        parts.append(align_table(["Error Type", "Value", "#True", "#Total"], rows))
    return "\n".join(parts)


@main.command("eval")
@_FORMAT_OPTION
@click.option("--scores", "scores_path", required=True, help="Two-column score file.")
@click.option(
    "--orientation",
    type=click.Choice(["higher-means-error", "higher-means-quality"]),
    required=True,
    help="Which direction of the detector's scores indicates an error.",
)
@click.option("--name", "detector_name", default=None, help="Detector name for the report.")
@click.option(
    "--gold",
    "gold_policy",
    type=click.Choice(["union", "majority"]),
    default="union",
    show_default=True,
    help="How multi-annotator labels collapse to one gold label per item.",
)
@click.option(
    "--target",
    "targets",
    multiple=True,
    help="Evaluation target (any_error, a category, or a code); repeatable. "
    "Default: any_error, all categories, all codes.",
)
@click.option("--lenient", is_flag=True, help="Keep records that violate label invariants.")
@click.argument("collection_path")
def eval_cmd(
    output_format: str,
    scores_path: str,
    orientation: str,
    detector_name: str | None,
    gold_policy: str,
    targets: tuple[str, ...],
    lenient: bool,
    collection_path: str,
):
    """Score an external error detector against gold annotations."""
    collection_data = _read_bytes(collection_path)
    scores_data = _read_bytes(scores_path)
    try:
        records = collection_mod.parse_collection(
            collection_data, lenient=lenient, source=collection_path
        )
        table = detectors_mod.parse_scores(
            scores_data,
            detector_name=detector_name or Path(scores_path).stem,
            orientation=detectors_mod.Orientation(orientation.replace("-", "_")),
            source=scores_path,
        )
    except FormatError as exc:
        _fail_format(exc)
        return
    try:
        target_list = list(targets) if targets else None
        report = detectors_mod.evaluate(
            table, records, targets=target_list, gold_policy=gold_policy
        )
    except FormatError as exc:
        _fail_format(exc)
        return
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if output_format == "structured":
        _emit_json(
            {
                "kind": "eval",
                "detector": report.detector_name,
                "orientation": report.orientation.value,
                "gold_policy": report.gold_policy,
                "targets": [
                    {
                        "key": r.key,
                        "label": r.label,
                        "metric": r.metric,
                        "value": None if r.value is None else float(r.value),
                        "positives": r.positives,
                        "total": r.total,
                        "note": r.note,
                    }
                    for r in report.results
                ],
            }
        )
    else:
        click.echo(_render_eval_table(report))
    unmeasurable = report.not_measurable()
    if unmeasurable:
        names = ", ".join(r.label for r in unmeasurable)
        click.echo(f"error: target(s) not measurable on this data: {names}", err=True)
        sys.exit(EXIT_NOT_MEASURABLE)


# -- facts -----------------------------------------------------------------


def _fact_set(ids: frozenset[str]) -> list[str]:
    return sorted(ids)


def _render_facts_table(
    universe: facts_mod.AnnotatedFactUniverse,
    info: facts_mod.InformationErrorSets,
    simpl: facts_mod.SimplificationSets,
    oos_new: frozenset[str],
    substitutions,
) -> str:
    def fmt_set(ids: frozenset[str]) -> str:
        return " ".join(sorted(ids)) if ids else "(none)"

    lines = [
        f"Facts: {len(universe.facts)} (source {len(universe.in_source)}, "
        f"generation {len(universe.in_generation)}, important {len(universe.important)})",
        f"Maximally simple source: {'yes' if universe.in_source == universe.important else 'no'}",
        "",
        "Information errors",
        f"  topic_shift:              {fmt_set(info.topic_shift)}",
        f"  faithfulness:             {fmt_set(info.faithfulness)}",
        f"  factuality:               {fmt_set(info.factuality)}",
        "",
        "Simplification sets",
        f"  out_of_scope:             {fmt_set(simpl.out_of_scope)}",
        f"  loss:                     {fmt_set(simpl.loss)}",
        f"  summarization:            {fmt_set(simpl.summarization)}",
        f"  clarification:            {fmt_set(simpl.clarification)}",
        f"  potential_clarification:  {fmt_set(simpl.potential_clarification)}",
        f"  out_of_scope_new:         {fmt_set(oos_new)}",
    ]
    if substitutions:
        lines.append("")
        lines.append("Substitution analysis")
        for f_src, f_gen, verdict in substitutions:
            position = (
                f" at {verdict.differing_position.value}"
                if verdict.differing_position is not None
                else ""
            )
            lines.append(f"  {f_src.id} -> {f_gen.id}: {verdict.kind.value}{position}")
    return "\n".join(lines)


@main.command()
@_FORMAT_OPTION
@click.argument("universe_path")
def facts(output_format: str, universe_path: str):
    """Derive error and transformation sets from a fact-universe fixture."""
    data = _read_bytes(universe_path)
    try:
        universe = facts_io.parse_universe(
            data.decode("utf-8"), source=universe_path
        )
    except FormatError as exc:
        _fail_format(exc)
        return
    try:
        info = facts_mod.derive_information_errors(universe)
        simpl = facts_mod.derive_simplification_sets(universe)
        oos_new = facts_mod.out_of_scope_new(universe)
        substitutions = facts_mod.substitution_report(universe)
    except UniverseValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VIOLATIONS)
    if output_format == "structured":
        _emit_json(
            {
                "kind": "facts",
                "facts": len(universe.facts),
                "maximally_simple": universe.in_source == universe.important,
                "information_errors": {
                    "topic_shift": _fact_set(info.topic_shift),
                    "faithfulness": _fact_set(info.faithfulness),
                    "factuality": _fact_set(info.factuality),
                },
                "simplification_sets": {
                    "out_of_scope": _fact_set(simpl.out_of_scope),
                    "loss": _fact_set(simpl.loss),
                    "summarization": _fact_set(simpl.summarization),
                    "clarification": _fact_set(simpl.clarification),
                    "potential_clarification": _fact_set(simpl.potential_clarification),
                    "out_of_scope_new": _fact_set(oos_new),
                },
                "substitutions": [
                    {
                        "source_fact": f_src.id,
                        "generated_fact": f_gen.id,
                        "kind": verdict.kind.value,
                        "position": (
                            verdict.differing_position.value
                            if verdict.differing_position is not None
                            else None
                        ),
                    }
                    for f_src, f_gen, verdict in substitutions
                ],
            }
        )
    else:
        click.echo(
            _render_facts_table(universe, info, simpl, oos_new, substitutions)
        )


# -- serve / export ----------------------------------------------------------


def _build_store(config):
    from .service import AnnotationStore, EventLog, load_items

    if not config.items_path.exists():
        click.echo(f"error: no task queue at {config.items_path}", err=True)
        sys.exit(EXIT_MISSING_FILE)
    try:
        items = load_items(config.items_path)
    except FormatError as exc:
        _fail_format(exc)
    log = EventLog(config.log_path)
    return AnnotationStore(
        items,
        log,
        probe_rate=config.probe_rate,
        shared_pool_size=config.shared_pool_size,
        rater_count=config.rater_count,
    )


_SERVICE_OPTIONS = [
    click.option("--config", "config_path", default=None, help="JSON config file."),
    click.option("--data-dir", default=None, help="Directory with items.csv and events.jsonl."),
    click.option("--probe-rate", type=float, default=None, help="Hidden probes per real task."),
    click.option("--pool-size", type=int, default=None, help="Shared agreement pool size."),
    click.option("--rater-count", type=int, default=None, help="Raters per shared-pool item."),
]


def _service_options(fn):
    for option in reversed(_SERVICE_OPTIONS):
        fn = option(fn)
    return fn


@main.command()
@_service_options
@click.option("--port", type=int, default=None, help="Port to listen on.")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(config_path, data_dir, probe_rate, pool_size, rater_count, port, host):
    """Run the annotation service (HTTP, JSON bodies)."""
    from .service import create_app, load_config

    try:
        config = load_config(
            config_path,
            port=port,
            data_dir=data_dir,
            probe_rate=probe_rate,
            shared_pool_size=pool_size,
            rater_count=rater_count,
        )
    except (ValueError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"bad configuration: {exc}")
    except FileNotFoundError:
        click.echo(f"error: config file not found: {config_path}", err=True)
        sys.exit(EXIT_MISSING_FILE)
    store = _build_store(config)
    app = create_app(store)
    import uvicorn

    uvicorn.run(app, host=host, port=config.port, log_level="warning")


@main.command()
@_service_options
@click.option("--output", "-o", "output_path", default=None, help="Write to a file instead of stdout.")
def export(config_path, data_dir, probe_rate, pool_size, rater_count, output_path):
    """Export the service's submissions as a collection file."""
    from .service import load_config

    try:
        config = load_config(
            config_path,
            data_dir=data_dir,
            probe_rate=probe_rate,
            shared_pool_size=pool_size,
            rater_count=rater_count,
        )
    except (ValueError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"bad configuration: {exc}")
    except FileNotFoundError:
        click.echo(f"error: config file not found: {config_path}", err=True)
        sys.exit(EXIT_MISSING_FILE)
    store = _build_store(config)
    payload = store.export()
    if output_path:
        Path(output_path).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode("utf-8"))
        sys.stdout.flush()


if __name__ == "__main__":
    main()
