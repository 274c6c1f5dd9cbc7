"""Deterministic synthetic fixtures.

The real annotation campaign behind this format is not redistributable,
so tests and demos run on generated stand-ins:

- `reference_distribution_collection` reproduces the campaign's published
  per-label true counts exactly (2,659 records, e.g. 520 loss-of-content
  and 820 clean records) while using synthetic texts and ids.
- `shared_pool_collection` mimics the shared agreement subset: every item
  annotated by the same raters, pseudo-random but seeded labels.
- `probe_pairs_collection` adds hidden duplicate probes for
  self-consistency measurements.
- `synthetic_scores` builds a deterministic detector score table.
"""

from __future__ import annotations

import random

from .collection import AnnotationRecord
from .detectors import Orientation, ScoreTable
from .taxonomy import CODE_ORDER, ErrorCode, LabelVector, aggregate_categories

# Published per-label true counts for the 2,659-annotation campaign.
REFERENCE_TOTAL = 2659
REFERENCE_NO_ERROR_TRUE = 820
REFERENCE_TRUE_COUNTS: dict[ErrorCode, int] = {
    ErrorCode.A1: 142,
    ErrorCode.A2: 191,
    ErrorCode.A3: 23,
    ErrorCode.A4: 241,
    ErrorCode.A5: 112,
    ErrorCode.B1: 47,
    ErrorCode.B2: 96,
    ErrorCode.C1: 23,
    ErrorCode.C2: 360,
    ErrorCode.C3: 152,
    ErrorCode.D1_1: 306,
    ErrorCode.D1_2: 136,
    ErrorCode.D2_1: 520,
    ErrorCode.D2_2: 418,
}


def _record(
    index: int, labels: LabelVector, annotator_id: str | None = None
) -> AnnotationRecord:
    return AnnotationRecord(
        item_id=f"i{index:05d}",
        source_id=f"s{index:05d}",
        run_id=f"run{index % 5}",
        annotator_id=annotator_id or f"ann{index % 10}",
        labels=labels,
        source_text=f"Synthetic source passage {index}.",
        simplified_text=f"Synthetic simplification {index}.",
    )


def reference_distribution_collection() -> list[AnnotationRecord]:
    """2,659 records hitting the published per-label true counts exactly.

    The first 820 records are clean; each error code's trues are laid out
    as a consecutive block over the remaining 1,839 records, wrapping
    around, which covers every error record with at least one flag (the
    blocks total 2,767 > 1,839) without ever double-assigning one code.
    """
    n_error = REFERENCE_TOTAL - REFERENCE_NO_ERROR_TRUE
    flags_per_record: list[set[ErrorCode]] = [set() for _ in range(n_error)]
    cursor = 0
    for code in CODE_ORDER:
        for _ in range(REFERENCE_TRUE_COUNTS[code]):
            flags_per_record[cursor % n_error].add(code)
            cursor += 1
    records = [
        _record(i, LabelVector.clean()) for i in range(REFERENCE_NO_ERROR_TRUE)
    ]
    for offset, flags in enumerate(flags_per_record):
        index = REFERENCE_NO_ERROR_TRUE + offset
        records.append(_record(index, LabelVector.with_errors(sorted(flags, key=CODE_ORDER.index))))
    return records


# Marginal true rates used to sample plausible synthetic label vectors,
# floored so every code shows up even in ~100-item fixtures.
_SAMPLING_RATES: dict[ErrorCode, float] = {
    code: max(count / REFERENCE_TOTAL, 0.05)
    for code, count in REFERENCE_TRUE_COUNTS.items()
}


def _sample_labels(rng: random.Random) -> LabelVector:
    flagged = [code for code in CODE_ORDER if rng.random() < _SAMPLING_RATES[code]]
    if not flagged:
        return LabelVector.clean()
    return LabelVector.with_errors(flagged)


def shared_pool_collection(
    items: int = 104, raters: int = 5, seed: int = 7
) -> list[AnnotationRecord]:
    """A shared agreement pool: `items` items, each labelled by the same
    `raters` annotators (ids "A", "B", ...). Deterministic per seed."""
    rng = random.Random(seed)
    rater_ids = [chr(ord("A") + i) for i in range(raters)]
    records = []
    for index in range(items):
        base = _record(index, LabelVector.clean())
        for rater in rater_ids:
            records.append(
                AnnotationRecord(
                    item_id=base.item_id,
                    source_id=base.source_id,
                    run_id=base.run_id,
                    annotator_id=rater,
                    labels=_sample_labels(rng),
                    source_text=base.source_text,
                    simplified_text=base.simplified_text,
                )
            )
    return records


def probe_pairs_collection(
    items: int = 20, annotators: int = 3, probes: int = 2, seed: int = 11
) -> list[AnnotationRecord]:
    """Single-rater-per-item collection plus hidden duplicate probes.

    Each annotator labels their own block of items and re-labels the
    first `probes` of them under fresh probe item ids linked back via
    duplicate_of. Probe answers occasionally differ so consistency rates
    are not trivially 1.
    """
    rng = random.Random(seed)
    records = []
    for a in range(annotators):
        annotator_id = f"ann{a}"
        block = []
        for k in range(items):
            index = a * items + k
            record = _record(index, _sample_labels(rng), annotator_id=annotator_id)
            block.append(record)
            records.append(record)
        for p in range(min(probes, items)):
            original = block[p]
            if rng.random() < 0.3:
                labels = _sample_labels(rng)
            else:
                labels = original.labels
            records.append(
                AnnotationRecord(
                    item_id=f"{original.item_id}-probe{p}",
                    source_id=original.source_id,
                    run_id=original.run_id,
                    annotator_id=annotator_id,
                    labels=labels,
                    source_text=original.source_text,
                    simplified_text=original.simplified_text,
                    duplicate_of=original.item_id,
                )
            )
    return records


def synthetic_scores(
    records: list[AnnotationRecord],
    detector_name: str = "synthetic",
    orientation: Orientation = Orientation.HIGHER_MEANS_ERROR,
    noise: float = 0.25,
    seed: int = 3,
) -> ScoreTable:
    """Deterministic scores correlated with the any-error gold bit.

    With noise 0 the detector is an oracle for any_error; the orientation
    flag flips the emitted polarity so both directions can be exercised.
    """
    rng = random.Random(seed)
    scores: dict[str, float] = {}
    for record in records:
        if record.item_id in scores:
            continue
        signal = 1.0 if aggregate_categories(record.labels).any_error else 0.0
        value = signal + noise * (rng.random() - 0.5)
        if orientation is Orientation.HIGHER_MEANS_QUALITY:
            value = -value
        scores[record.item_id] = round(value, 6)
    return ScoreTable(detector_name=detector_name, orientation=orientation, scores=scores)
