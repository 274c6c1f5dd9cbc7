"""The test-collection annotation format and its statistics.

A collection is a delimited text table, UTF-8, comma-separated, with the
fixed header::

    item_id,source_id,run_id,annotator_id,no_error,A1,A2,A3,A4,A5,B1,B2,
    C1,C2,C3,D1_1,D1_2,D2_1,D2_2,duplicate_of,source_text,simplified_text

(one line; wrapped here for readability). Booleans are ``0``/``1``. The
two text columns are always quoted, with embedded quotes doubled; id
columns are bare and must not contain commas, quotes, or newlines. The
serializer is canonical, so ``serialize(parse(data)) == data`` for any
file it produced.

``duplicate_of`` links a hidden self-consistency probe to the item it
duplicates: the probe row repeats the original's texts under a fresh
item_id so the annotator cannot trivially spot the repeat, and the pair
of label vectors feeds `consistency_rate`.

Structural problems (bad header, wrong field count, non-boolean cells,
duplicate (item_id, annotator_id) keys) always fail the parse with
positioned messages. Semantic violations (a ``no_error`` flag colliding
with error flags, dangling or text-mismatched ``duplicate_of`` links,
conflicting texts for one item) fail it too unless ``lenient`` is set,
in which case records are kept and the violations are reported.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .errors import CollectionError, NotMeasurableError
from .rendering import round_half_up
from .taxonomy import (
    CATEGORY_ORDER,
    CODE_ORDER,
    ErrorCode,
    LabelVector,
    aggregate_categories,
    validate_label_vector,
)

HEADER: tuple[str, ...] = (
    "item_id",
    "source_id",
    "run_id",
    "annotator_id",
    "no_error",
    *(code.value for code in CODE_ORDER),
    "duplicate_of",
    "source_text",
    "simplified_text",
)


@dataclass(frozen=True)
class AnnotationRecord:
    item_id: str
    source_id: str
    run_id: str
    annotator_id: str
    labels: LabelVector
    source_text: str
    simplified_text: str
    duplicate_of: str | None = None


@dataclass(frozen=True)
class ParsedCollection:
    records: tuple[AnnotationRecord, ...]
    violations: tuple[str, ...]


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def scan_collection(data: bytes | str, source: str = "collection") -> ParsedCollection:
    """Parse a collection, returning records plus semantic violations.

    Structural errors raise `CollectionError`; semantic violations are
    returned so callers can decide whether they are fatal.
    """
    try:
        text = _decode(data)
    except UnicodeDecodeError as exc:
        raise CollectionError([f"not valid UTF-8: {exc}"], source=source) from None

    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise CollectionError(["empty input: missing header row"], source=source) from None
    except csv.Error as exc:
        raise CollectionError([f"line 1: {exc}"], source=source) from None
    if tuple(header) != HEADER:
        missing = [c for c in HEADER if c not in header]
        extra = [c for c in header if c not in HEADER]
        detail = []
        if missing:
            detail.append(f"missing column(s): {', '.join(missing)}")
        if extra:
            detail.append(f"unexpected column(s): {', '.join(extra)}")
        if not detail:
            detail.append("columns are out of order")
        raise CollectionError(
            [f"header row does not match the collection schema ({'; '.join(detail)})"],
            source=source,
        )

    problems: list[str] = []
    violations: list[str] = []
    records: list[AnnotationRecord] = []
    seen_keys: dict[tuple[str, str], int] = {}

    rows = []
    try:
        for row in reader:
            rows.append(row)
    except csv.Error as exc:
        raise CollectionError(
            [f"line {reader.line_num}: {exc}"], source=source
        ) from None

    for row_num, row in enumerate(rows, start=1):
        if len(row) != len(HEADER):
            problems.append(f"row {row_num}: expected {len(HEADER)} fields, got {len(row)}")
            continue
        cells = dict(zip(HEADER, row))
        row_ok = True
        for id_col in ("item_id", "source_id", "run_id", "annotator_id"):
            if not cells[id_col]:
                problems.append(f"row {row_num}: empty {id_col}")
                row_ok = False
        flags: dict[ErrorCode, bool] = {}
        bool_cells = {"no_error": cells["no_error"]}
        bool_cells.update({code.value: cells[code.value] for code in CODE_ORDER})
        parsed_bools: dict[str, bool] = {}
        for col, cell in bool_cells.items():
            if cell not in ("0", "1"):
                problems.append(f"row {row_num}: column {col}: expected 0 or 1, got {cell!r}")
                row_ok = False
            else:
                parsed_bools[col] = cell == "1"
        if not row_ok:
            continue
        key = (cells["item_id"], cells["annotator_id"])
        if key in seen_keys:
            problems.append(
                f"row {row_num}: duplicate (item_id, annotator_id) key "
                f"{key!r} (first on row {seen_keys[key]})"
            )
            continue
        seen_keys[key] = row_num
        for code in CODE_ORDER:
            flags[code] = parsed_bools[code.value]
        labels = LabelVector(no_error=parsed_bools["no_error"], flags=flags)
        for message in validate_label_vector(labels):
            violations.append(f"row {row_num}: {message}")
        records.append(
            AnnotationRecord(
                item_id=cells["item_id"],
                source_id=cells["source_id"],
                run_id=cells["run_id"],
                annotator_id=cells["annotator_id"],
                labels=labels,
                source_text=cells["source_text"],
                simplified_text=cells["simplified_text"],
                duplicate_of=cells["duplicate_of"] or None,
            )
        )

    if problems:
        raise CollectionError(problems, source=source)

    violations.extend(_link_violations(records))
    return ParsedCollection(records=tuple(records), violations=tuple(violations))


def _link_violations(records: list[AnnotationRecord]) -> list[str]:
    violations = []
    texts_by_item: dict[str, tuple[str, str]] = {}
    for record in records:
        texts = (record.source_text, record.simplified_text)
        if record.item_id not in texts_by_item:
            texts_by_item[record.item_id] = texts
        elif texts_by_item[record.item_id] != texts:
            violations.append(
                f"item {record.item_id}: conflicting source/simplified texts across records"
            )
    for record in records:
        if record.duplicate_of is None:
            continue
        original = texts_by_item.get(record.duplicate_of)
        if original is None:
            violations.append(
                f"item {record.item_id}: duplicate_of references unknown item "
                f"{record.duplicate_of!r}"
            )
        elif original != (record.source_text, record.simplified_text):
            violations.append(
                f"item {record.item_id}: texts differ from duplicated item "
                f"{record.duplicate_of!r}"
            )
    return violations


def parse_collection(
    data: bytes | str, *, lenient: bool = False, source: str = "collection"
) -> list[AnnotationRecord]:
    """Materialize every row or fail with positioned errors."""
    parsed = scan_collection(data, source=source)
    if parsed.violations and not lenient:
        raise CollectionError(list(parsed.violations), source=source)
    return list(parsed.records)


def _csv_quote(text: str) -> str:
    if "\x00" in text:
        raise ValueError("text fields cannot contain NUL characters")
    return '"' + text.replace('"', '""') + '"'


_BARE_FORBIDDEN = (",", '"', "\n", "\r")


def _bare(value: str, column: str) -> str:
    if any(ch in value for ch in _BARE_FORBIDDEN):
        raise ValueError(f"{column} value {value!r} contains a delimiter or quote")
    return value


def serialize_collection(records: list[AnnotationRecord] | tuple[AnnotationRecord, ...]) -> bytes:
    """Canonical byte form; round-trips through `parse_collection`."""
    out = [",".join(HEADER)]
    for record in records:
        cells = [
            _bare(record.item_id, "item_id"),
            _bare(record.source_id, "source_id"),
            _bare(record.run_id, "run_id"),
            _bare(record.annotator_id, "annotator_id"),
            "1" if record.labels.no_error else "0",
            *("1" if record.labels.flags[code] else "0" for code in CODE_ORDER),
            _bare(record.duplicate_of or "", "duplicate_of"),
            _csv_quote(record.source_text),
            _csv_quote(record.simplified_text),
        ]
        out.append(",".join(cells))
    return ("\n".join(out) + "\n").encode("utf-8")


@dataclass(frozen=True)
class DistributionRow:
    key: str
    label: str
    total: int
    true: int

    @property
    def false(self) -> int:
        return self.total - self.true

    @property
    def pct_true(self) -> Fraction | None:
        """Exact percentage, None when the collection is empty."""
        if self.total == 0:
            return None
        return Fraction(100 * self.true, self.total)


@dataclass(frozen=True)
class DistributionReport:
    total: int
    no_error: DistributionRow
    codes: tuple[DistributionRow, ...]
    categories: tuple[DistributionRow, ...]
    any_error: DistributionRow

    @property
    def any_error_pct(self) -> Fraction | None:
        """Defined as 100 minus the rounded no-error percentage."""
        pct = self.no_error.pct_true
        if pct is None:
            return None
        return 100 - Fraction(round_half_up(pct, 2))

    def rows(self) -> tuple[DistributionRow, ...]:
        return (self.no_error, *self.codes, *self.categories, self.any_error)


def distribution(records: list[AnnotationRecord]) -> DistributionReport:
    """Per-label, per-category, and any-error counts over all records."""
    total = len(records)
    code_true = {code: 0 for code in CODE_ORDER}
    category_true = {category: 0 for category in CATEGORY_ORDER}
    no_error_true = 0
    for record in records:
        if record.labels.no_error:
            no_error_true += 1
        aggregated = aggregate_categories(record.labels)
        for code in CODE_ORDER:
            if record.labels.flags[code]:
                code_true[code] += 1
        for category in CATEGORY_ORDER:
            if aggregated.categories[category]:
                category_true[category] += 1
    return DistributionReport(
        total=total,
        no_error=DistributionRow(key="no_error", label="No error", total=total, true=no_error_true),
        codes=tuple(
            DistributionRow(key=code.value, label=code.row_label, total=total, true=code_true[code])
            for code in CODE_ORDER
        ),
        categories=tuple(
            DistributionRow(
                key=f"cat:{category.letter}",
                label=category.heading,
                total=total,
                true=category_true[category],
            )
            for category in CATEGORY_ORDER
        ),
        any_error=DistributionRow(
            key="any_error", label="Any error", total=total, true=total - no_error_true
        ),
    )


@dataclass(frozen=True)
class ConsistencyResult:
    annotator_id: str
    pairs: int
    identical: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.identical, self.pairs)


def duplicate_pairs(
    records: list[AnnotationRecord], annotator_id: str
) -> list[tuple[AnnotationRecord, AnnotationRecord]]:
    """(original, probe) record pairs labelled by one annotator."""
    by_key = {(r.item_id, r.annotator_id): r for r in records}
    pairs = []
    for record in records:
        if record.annotator_id != annotator_id or record.duplicate_of is None:
            continue
        original = by_key.get((record.duplicate_of, annotator_id))
        if original is not None:
            pairs.append((original, record))
    return pairs


def consistency_rate(records: list[AnnotationRecord], annotator_id: str) -> ConsistencyResult:
    """Fraction of this annotator's duplicate pairs with identical label
    vectors. Raises `NotMeasurableError` when the annotator has no pairs;
    a made-up 0 or 1 would be indistinguishable from a measured one."""
    pairs = duplicate_pairs(records, annotator_id)
    if not pairs:
        raise NotMeasurableError(
            f"consistency rate not measurable: annotator {annotator_id!r} has no duplicate pairs"
        )
    identical = sum(1 for original, probe in pairs if original.labels == probe.labels)
    return ConsistencyResult(annotator_id=annotator_id, pairs=len(pairs), identical=identical)


def consistency_summary(records: list[AnnotationRecord]) -> list[ConsistencyResult]:
    """Consistency results for every annotator that has duplicate pairs."""
    annotators = sorted({r.annotator_id for r in records if r.duplicate_of is not None})
    results = []
    for annotator_id in annotators:
        pairs = duplicate_pairs(records, annotator_id)
        if pairs:
            identical = sum(1 for original, probe in pairs if original.labels == probe.labels)
            results.append(
                ConsistencyResult(annotator_id=annotator_id, pairs=len(pairs), identical=identical)
            )
    return results
