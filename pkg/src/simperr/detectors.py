"""Benchmarking external error detectors against gold annotations.

A detector is consumed as a score file only (two columns: item_id,
score); no model runs here. Each score table declares its orientation
explicitly: ``higher_means_error`` is used as-is, ``higher_means_quality``
(similarity/quality metrics) is negated before evaluation. Orientation
is never inferred.

Binary any-error detection is measured with AUROC, the all-pairs
probability that an erroneous item outscores a clean one with ties
counting one half. Per-category and per-code detection use AUPRC
(average precision), accumulating delta-recall times precision over
descending scores with tied scores processed as one block. Both tie
conventions are fixed parts of the metric definitions here, and both
statistics are computed exactly over rational arithmetic.

Items annotated by several people collapse to one gold label per item
before evaluation: ``union`` (default) flags an item when any annotator
flagged it, ``majority`` when more than half did.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .collection import AnnotationRecord
from .errors import NotMeasurableError, ScoreFormatError
from .taxonomy import CATEGORY_ORDER, CODE_ORDER, aggregate_categories, parse_code


class Orientation(enum.Enum):
    HIGHER_MEANS_ERROR = "higher_means_error"
    HIGHER_MEANS_QUALITY = "higher_means_quality"


@dataclass(frozen=True)
class ScoreTable:
    detector_name: str
    orientation: Orientation
    scores: dict[str, float]

    def __post_init__(self):
        bad = sorted(k for k, v in self.scores.items() if not math.isfinite(v))
        if bad:
            raise ValueError(f"non-finite scores for item(s): {', '.join(bad)}")

    def oriented(self) -> dict[str, float]:
        """Scores with higher-means-error polarity."""
        if self.orientation is Orientation.HIGHER_MEANS_ERROR:
            return dict(self.scores)
        return {k: -v for k, v in self.scores.items()}


def parse_scores(
    data: bytes | str,
    detector_name: str,
    orientation: Orientation,
    source: str = "scores",
) -> ScoreTable:
    """Parse a two-column delimited score file (header ``item_id,score``)."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.splitlines()
    problems: list[str] = []
    if not lines:
        raise ScoreFormatError(["empty input: missing header row"], source=source)
    if lines[0].strip() != "item_id,score":
        problems.append(f"line 1: expected header 'item_id,score', got {lines[0]!r}")
    scores: dict[str, float] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            problems.append(f"line {lineno}: expected 2 fields, got {len(parts)}")
            continue
        item_id, raw = parts[0].strip(), parts[1].strip()
        if not item_id:
            problems.append(f"line {lineno}: empty item_id")
            continue
        try:
            value = float(raw)
        except ValueError:
            value = math.nan
        if not math.isfinite(value):
            problems.append(f"line {lineno}: score must be a finite number, got {raw!r}")
            continue
        if item_id in scores:
            problems.append(f"line {lineno}: duplicate item_id {item_id!r}")
            continue
        scores[item_id] = value
    if problems:
        raise ScoreFormatError(problems, source=source)
    return ScoreTable(detector_name=detector_name, orientation=orientation, scores=scores)


def auroc(scores: Sequence[float], labels: Sequence[int]) -> Fraction:
    """All-pairs probability that a positive outscores a negative.

    Computed from midranks, which is exactly the pair-counting definition
    with ties worth one half.
    """
    if len(scores) != len(labels):
        raise ValueError(f"length mismatch: {len(scores)} scores vs {len(labels)} labels")
    labels = [int(bool(x)) for x in labels]
    n_pos = sum(labels)
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise NotMeasurableError("AUROC not measurable: both classes must be present")
    order = sorted(range(len(scores)), key=lambda i: scores[i])
    # Midranks over tie groups, scaled by 2 to stay integral.
    double_rank_sum_pos = 0
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and scores[order[j]] == scores[order[i]]:
            j += 1
        double_midrank = (i + 1) + j  # 2 * average of ranks i+1 .. j
        for k in range(i, j):
            if labels[order[k]]:
                double_rank_sum_pos += double_midrank
        i = j
    pairs_won_twice = double_rank_sum_pos - n_pos * (n_pos + 1)
    return Fraction(pairs_won_twice, 2 * n_pos * n_neg)


def auprc(scores: Sequence[float], labels: Sequence[int]) -> Fraction:
    """Average precision over descending scores, tied scores as one block.

    Each distinct score level contributes (recall gained at that level)
    times (precision after including the whole level).
    """
    if len(scores) != len(labels):
        raise ValueError(f"length mismatch: {len(scores)} scores vs {len(labels)} labels")
    labels = [int(bool(x)) for x in labels]
    n_pos = sum(labels)
    if n_pos == 0:
        raise NotMeasurableError("AUPRC not measurable: no positive items")
    order = sorted(range(len(scores)), key=lambda i: -scores[i])
    area = Fraction(0)
    seen = 0
    seen_pos = 0
    i = 0
    while i < len(order):
        j = i
        block_pos = 0
        while j < len(order) and scores[order[j]] == scores[order[i]]:
            if labels[order[j]]:
                block_pos += 1
            j += 1
        seen += j - i
        seen_pos += block_pos
        if block_pos:
            delta_recall = Fraction(block_pos, n_pos)
            precision = Fraction(seen_pos, seen)
            area += delta_recall * precision
        i = j
    return area


TargetSpec = str  # "any_error", a category letter/name, or a leaf code


@dataclass(frozen=True)
class Target:
    key: str
    label: str
    metric: str  # "AUROC" or "AUPRC"


def _resolve_target(token: TargetSpec) -> Target:
    if token.strip().lower() in ("any_error", "any-error", "any"):
        return Target(key="any_error", label="Any error", metric="AUROC")
    stripped = token.strip()
    for category in CATEGORY_ORDER:
        if stripped.upper() == category.letter or stripped.lower() == category.value.lower():
            return Target(key=f"cat:{category.letter}", label=category.heading, metric="AUPRC")
    code = parse_code(stripped)  # raises on unknown tokens
    return Target(key=code.value, label=code.row_label, metric="AUPRC")


def default_targets() -> list[Target]:
    """Any-error plus the four categories plus all 14 codes."""
    targets = [_resolve_target("any_error")]
    targets.extend(_resolve_target(c.letter) for c in CATEGORY_ORDER)
    targets.extend(_resolve_target(code.value) for code in CODE_ORDER)
    return targets


def _gold_bit(votes: list[bool], policy: str) -> bool:
    if policy == "union":
        return any(votes)
    if policy == "majority":
        return sum(votes) * 2 > len(votes)
    raise ValueError(f"unknown gold policy: {policy!r}")


def gold_labels(
    records: Sequence[AnnotationRecord], policy: str = "union"
) -> tuple[list[str], dict[str, dict[str, bool]]]:
    """Collapse annotations to one gold bit per item and target key.

    Returns item ids in first-appearance order and, per item, a map from
    target key (any_error, cat:A..cat:D, code values) to the collapsed bit.
    """
    item_order: list[str] = []
    votes: dict[str, dict[str, list[bool]]] = {}
    for record in records:
        if record.item_id not in votes:
            votes[record.item_id] = {key: [] for key in _all_target_keys()}
            item_order.append(record.item_id)
        aggregated = aggregate_categories(record.labels)
        per_item = votes[record.item_id]
        per_item["any_error"].append(aggregated.any_error)
        for category in CATEGORY_ORDER:
            per_item[f"cat:{category.letter}"].append(aggregated.categories[category])
        for code in CODE_ORDER:
            per_item[code.value].append(record.labels.flags[code])
    collapsed = {
        item: {key: _gold_bit(bits, policy) for key, bits in per_item.items()}
        for item, per_item in votes.items()
    }
    return item_order, collapsed


def _all_target_keys() -> list[str]:
    return (
        ["any_error"]
        + [f"cat:{c.letter}" for c in CATEGORY_ORDER]
        + [code.value for code in CODE_ORDER]
    )


@dataclass(frozen=True)
class TargetResult:
    key: str
    label: str
    metric: str
    value: Fraction | None  # None: not measurable on this data
    positives: int
    total: int
    note: str = ""


@dataclass(frozen=True)
class EvalReport:
    detector_name: str
    orientation: Orientation
    gold_policy: str
    results: tuple[TargetResult, ...]

    def not_measurable(self) -> tuple[TargetResult, ...]:
        return tuple(r for r in self.results if r.value is None)


def evaluate(
    table: ScoreTable,
    records: Sequence[AnnotationRecord],
    targets: Sequence[TargetSpec] | None = None,
    gold_policy: str = "union",
) -> EvalReport:
    """Score one detector against the collection's gold labels.

    Every annotated item must be scored and every score must belong to an
    annotated item; mismatches are reported by id rather than dropped.
    """
    resolved = (
        [_resolve_target(t) for t in targets] if targets is not None else default_targets()
    )
    item_order, gold = gold_labels(records, policy=gold_policy)
    oriented = table.oriented()
    missing = [item for item in item_order if item not in oriented]
    unknown = sorted(set(oriented) - set(item_order))
    problems = []
    if missing:
        problems.append(f"items without scores: {', '.join(missing)}")
    if unknown:
        problems.append(f"scored items not in the collection: {', '.join(unknown)}")
    if problems:
        raise ScoreFormatError(problems, source=table.detector_name)

    score_seq = [oriented[item] for item in item_order]
    results = []
    for target in resolved:
        label_seq = [int(gold[item][target.key]) for item in item_order]
        positives = sum(label_seq)
        try:
            if target.metric == "AUROC":
                value = auroc(score_seq, label_seq)
            else:
                value = auprc(score_seq, label_seq)
            note = ""
        except NotMeasurableError as exc:
            value = None
            note = str(exc)
        results.append(
            TargetResult(
                key=target.key,
                label=target.label,
                metric=target.metric,
                value=value,
                positives=positives,
                total=len(label_seq),
                note=note,
            )
        )
    return EvalReport(
        detector_name=table.detector_name,
        orientation=table.orientation,
        gold_policy=gold_policy,
        results=tuple(results),
    )
