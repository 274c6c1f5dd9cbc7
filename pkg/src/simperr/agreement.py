"""Inter-annotator agreement statistics.

Pairwise chance-corrected agreement (Cohen), its multi-rater
generalization (Fleiss), and the raw percentage of unanimously labelled
items, computed per error class over a shared set of items that all
carry the same rater set.

Classes are the explicit no-error flag plus the four greater categories,
each category taken as the disjunction of its child codes per annotator.

Everything is computed in exact rational arithmetic (`Fraction`);
renderers round at the last moment. When the chance-agreement term
reaches 1 the usual formula is undefined, which can only happen when
every rating is identical, and the statistic is defined as 1 there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .collection import AnnotationRecord
from .errors import NotMeasurableError
from .taxonomy import CATEGORY_ORDER, LabelVector, aggregate_categories

BinarySeq = Sequence[int]


def cohen_kappa(a: BinarySeq, b: BinarySeq) -> Fraction:
    """Chance-corrected agreement between two aligned binary sequences.

    kappa = (p_o - p_e) / (1 - p_e), with p_e the product-of-marginals
    chance term. p_e = 1 forces p_o = 1 (both raters degenerate on the
    same value), where the statistic is defined as 1.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    if n == 0:
        raise NotMeasurableError("agreement not measurable over zero items")
    a = [int(bool(x)) for x in a]
    b = [int(bool(x)) for x in b]
    observed = Fraction(sum(1 for x, y in zip(a, b) if x == y), n)
    pa = Fraction(sum(a), n)
    pb = Fraction(sum(b), n)
    expected = pa * pb + (1 - pa) * (1 - pb)
    if expected == 1:
        return Fraction(1)
    return (observed - expected) / (1 - expected)


def _check_matrix(ratings: Sequence[BinarySeq]) -> list[list[int]]:
    if len(ratings) == 0:
        raise NotMeasurableError("agreement not measurable over zero items")
    widths = {len(row) for row in ratings}
    if len(widths) != 1:
        raise ValueError(f"ragged ratings matrix: row widths {sorted(widths)}")
    n_raters = widths.pop()
    if n_raters < 2:
        raise ValueError(f"need at least 2 raters per item, got {n_raters}")
    return [[int(bool(x)) for x in row] for row in ratings]


def fleiss_kappa(ratings: Sequence[BinarySeq]) -> Fraction:
    """Multi-rater agreement over an items x raters binary matrix.

    Per-item agreement is the fraction of concordant rater pairs; the
    chance term pools category proportions over all ratings. As with the
    pairwise statistic, a chance term of 1 (all ratings identical) maps
    to 1.
    """
    matrix = _check_matrix(ratings)
    n_items = len(matrix)
    n_raters = len(matrix[0])
    per_item = []
    total_ones = 0
    for row in matrix:
        ones = sum(row)
        zeros = n_raters - ones
        total_ones += ones
        per_item.append(
            Fraction(ones * (ones - 1) + zeros * (zeros - 1), n_raters * (n_raters - 1))
        )
    mean_agreement = sum(per_item, Fraction(0)) / n_items
    p_one = Fraction(total_ones, n_items * n_raters)
    expected = p_one * p_one + (1 - p_one) * (1 - p_one)
    if expected == 1:
        return Fraction(1)
    return (mean_agreement - expected) / (1 - expected)


def unanimous_pct(ratings: Sequence[BinarySeq]) -> Fraction:
    """Percentage of items on which every rater gave the same value."""
    matrix = _check_matrix(ratings)
    unanimous = sum(1 for row in matrix if len(set(row)) == 1)
    return Fraction(100 * unanimous, len(matrix))


@dataclass(frozen=True)
class AgreementClass:
    """One row of the agreement report: a name plus the rule that reads
    its binary value off a label vector."""

    key: str
    label: str
    extract: Callable[[LabelVector], bool]


def _category_extractor(category) -> Callable[[LabelVector], bool]:
    return lambda labels: aggregate_categories(labels).categories[category]


DEFAULT_CLASSES: tuple[AgreementClass, ...] = (
    AgreementClass(key="no_error", label="No error", extract=lambda labels: labels.no_error),
    *(
        AgreementClass(
            key=f"cat:{category.letter}",
            label=category.heading,
            extract=_category_extractor(category),
        )
        for category in CATEGORY_ORDER
    ),
)


@dataclass(frozen=True)
class ClassAgreement:
    key: str
    label: str
    fleiss: Fraction
    unanimous: Fraction
    pairwise: tuple[tuple[tuple[str, str], Fraction], ...]


@dataclass(frozen=True)
class AgreementReport:
    raters: tuple[str, ...]
    items: int
    classes: tuple[ClassAgreement, ...]

    @property
    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(combinations(self.raters, 2))


def agreement_report(
    records: Sequence[AnnotationRecord],
    classes: Sequence[AgreementClass] = DEFAULT_CLASSES,
) -> AgreementReport:
    """Per-class agreement over a shared annotation set.

    Every item in `records` must carry the identical set of >= 2 raters;
    anything else is rejected rather than silently subsetted, since a
    partial rater set would change what the pair columns mean.
    """
    by_item: dict[str, dict[str, LabelVector]] = {}
    item_order: list[str] = []
    for record in records:
        if record.item_id not in by_item:
            by_item[record.item_id] = {}
            item_order.append(record.item_id)
        by_item[record.item_id][record.annotator_id] = record.labels
    if not item_order:
        raise NotMeasurableError("agreement not measurable over zero items")
    rater_sets = {frozenset(raters) for raters in by_item.values()}
    if len(rater_sets) != 1:
        raise ValueError(
            "items carry differing rater sets; agreement needs one shared rater set "
            f"(saw {len(rater_sets)} distinct sets)"
        )
    raters = tuple(sorted(rater_sets.pop()))
    if len(raters) < 2:
        raise ValueError(f"need at least 2 raters, got {len(raters)}")

    class_rows = []
    for cls in classes:
        matrix = [
            [int(cls.extract(by_item[item][rater])) for rater in raters]
            for item in item_order
        ]
        pairwise = []
        for i, j in combinations(range(len(raters)), 2):
            kappa = cohen_kappa([row[i] for row in matrix], [row[j] for row in matrix])
            pairwise.append(((raters[i], raters[j]), kappa))
        class_rows.append(
            ClassAgreement(
                key=cls.key,
                label=cls.label,
                fleiss=fleiss_kappa(matrix),
                unanimous=unanimous_pct(matrix),
                pairwise=tuple(pairwise),
            )
        )
    return AgreementReport(raters=raters, items=len(item_order), classes=tuple(class_rows))
