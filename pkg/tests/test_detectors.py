import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simperr.collection import AnnotationRecord
from simperr.detectors import (
    Orientation,
    ScoreTable,
    auprc,
    auroc,
    default_targets,
    evaluate,
    parse_scores,
)
from simperr.errors import NotMeasurableError, ScoreFormatError
from simperr.fixtures import reference_distribution_collection, synthetic_scores
from simperr.taxonomy import LabelVector

from .oracles import brute_auprc, brute_auroc

TOLERANCE = 1e-12


def random_instance(rng, max_n=60, tie_heavy=False):
    n = rng.randint(2, max_n)
    labels = [rng.randint(0, 1) for _ in range(n)]
    if all(labels) or not any(labels):
        labels[0] = 1 - labels[0]
    if tie_heavy:
        levels = [rng.random() for _ in range(rng.randint(1, 4))]
        scores = [rng.choice(levels) for _ in range(n)]
    else:
        scores = [rng.random() for _ in range(n)]
    return scores, labels


class TestAuroc:
    def test_perfect_separation(self):
        assert auroc([0.9, 0.8, 0.3, 0.2], [1, 1, 0, 0]) == 1

    def test_hand_computed_three_quarters(self):
        assert auroc([0.9, 0.8, 0.3, 0.2], [1, 0, 1, 0]) == Fraction(3, 4)

    def test_constant_scores_half(self):
        assert auroc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == Fraction(1, 2)

    def test_single_class_not_measurable(self):
        with pytest.raises(NotMeasurableError):
            auroc([0.1, 0.2], [1, 1])

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            auroc([0.1], [1, 0])

    def test_matches_pair_counting_oracle(self):
        rng = random.Random(21)
        for k in range(400):
            scores, labels = random_instance(rng, tie_heavy=(k % 3 == 0))
            assert abs(float(auroc(scores, labels)) - brute_auroc(scores, labels)) <= TOLERANCE

    def test_invariant_under_monotone_transform(self):
        rng = random.Random(9)
        for _ in range(50):
            scores, labels = random_instance(rng)
            transformed = [math.exp(3 * s) + 1 for s in scores]
            assert auroc(scores, labels) == auroc(transformed, labels)

    def test_negation_flips_without_ties(self):
        rng = random.Random(17)
        for _ in range(50):
            n = rng.randint(2, 40)
            scores = rng.sample(range(1000), n)  # distinct -> no ties
            labels = [rng.randint(0, 1) for _ in range(n)]
            if all(labels) or not any(labels):
                labels[0] = 1 - labels[0]
            assert auroc([-s for s in scores], labels) == 1 - auroc(scores, labels)


class TestAuprc:
    def test_all_positive_is_one(self):
        assert auprc([0.3, 0.9, 0.1], [1, 1, 1]) == 1

    def test_hand_computed_five_sixths(self):
        # contributions: 0.5 * 1 + 0.5 * (2/3)
        assert auprc([0.9, 0.8, 0.3], [1, 0, 1]) == Fraction(5, 6)

    def test_zero_positives_not_measurable(self):
        with pytest.raises(NotMeasurableError):
            auprc([0.1, 0.2], [0, 0])

    def test_tied_scores_processed_as_one_block(self):
        # one block of 4 at the same score: precision 1/2, recall 1
        assert auprc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == Fraction(1, 2)

    def test_matches_stepwise_pr_oracle(self):
        rng = random.Random(33)
        for k in range(400):
            scores, labels = random_instance(rng, tie_heavy=(k % 2 == 0))
            if not any(labels):
                continue
            assert abs(float(auprc(scores, labels)) - brute_auprc(scores, labels)) <= TOLERANCE

    def test_random_scores_concentrate_near_positive_rate(self):
        rng = random.Random(1234)
        n = 10_000
        labels = [1 if rng.random() < 0.3 else 0 for _ in range(n)]
        scores = [rng.random() for _ in range(n)]
        positive_rate = sum(labels) / n
        assert abs(float(auprc(scores, labels)) - positive_rate) <= 0.05


def collection_records():
    return reference_distribution_collection()


class TestEvaluate:
    def test_gold_oracle_scores_reach_auroc_one(self):
        records = collection_records()[790:840]  # spans clean and error records
        table = synthetic_scores(records, noise=0.0)
        report = evaluate(table, records, targets=["any_error"])
        assert report.results[0].value == 1

    def test_orientation_negation_equivalence(self):
        records = collection_records()[780:860]
        error_table = synthetic_scores(records, noise=0.4, seed=8)
        quality_table = ScoreTable(
            detector_name=error_table.detector_name,
            orientation=Orientation.HIGHER_MEANS_QUALITY,
            scores={k: -v for k, v in error_table.scores.items()},
        )
        report_a = evaluate(error_table, records)
        report_b = evaluate(quality_table, records)
        for res_a, res_b in zip(report_a.results, report_b.results):
            assert res_a.value == res_b.value

    def test_default_targets_shape(self):
        targets = default_targets()
        assert [t.key for t in targets][:5] == ["any_error", "cat:A", "cat:B", "cat:C", "cat:D"]
        assert len(targets) == 19
        assert targets[0].metric == "AUROC"
        assert all(t.metric == "AUPRC" for t in targets[1:])

    def test_unmatched_items_listed(self):
        records = collection_records()[:5]
        table = synthetic_scores(records[:4])
        with pytest.raises(ScoreFormatError) as err:
            evaluate(table, records, targets=["any_error"])
        assert any("items without scores" in p for p in err.value.problems)
        extra = ScoreTable(
            detector_name="x",
            orientation=Orientation.HIGHER_MEANS_ERROR,
            scores={**synthetic_scores(records).scores, "ghost": 1.0},
        )
        with pytest.raises(ScoreFormatError) as err:
            evaluate(extra, records, targets=["any_error"])
        assert any("ghost" in p for p in err.value.problems)

    def test_union_vs_majority_gold(self):
        base = collection_records()[0]
        votes = []
        for k, flagged in enumerate([True, False, False]):
            labels = LabelVector.with_errors(["C2"]) if flagged else LabelVector.clean()
            votes.append(
                AnnotationRecord(
                    item_id="shared",
                    source_id="s",
                    run_id="r",
                    annotator_id=f"ann{k}",
                    labels=labels,
                    source_text=base.source_text,
                    simplified_text=base.simplified_text,
                )
            )
        # a second item so both classes exist
        other = AnnotationRecord(
            item_id="other",
            source_id="s2",
            run_id="r",
            annotator_id="ann0",
            labels=LabelVector.with_errors(["A1"]),
            source_text="x",
            simplified_text="y",
        )
        records = votes + [other]
        table = ScoreTable(
            detector_name="d",
            orientation=Orientation.HIGHER_MEANS_ERROR,
            scores={"shared": 0.9, "other": 0.1},
        )
        union_run = evaluate(table, records, targets=["C2"], gold_policy="union")
        majority_run = evaluate(table, records, targets=["C2"], gold_policy="majority")
        assert union_run.results[0].positives == 1  # one of three flagged
        assert majority_run.results[0].value is None  # no majority anywhere
        assert majority_run.results[0].positives == 0

    def test_not_measurable_targets_reported_not_fatal(self):
        records = collection_records()[:3]  # clean records only
        table = synthetic_scores(records)
        report = evaluate(table, records, targets=["C1"])
        assert report.results[0].value is None
        assert "not measurable" in report.results[0].note
        assert report.not_measurable()


class TestScoreParsing:
    def test_parse_and_orientation(self):
        table = parse_scores(
            "item_id,score\ni1,0.25\ni2,-1.5\n",
            detector_name="d",
            orientation=Orientation.HIGHER_MEANS_QUALITY,
        )
        assert table.scores == {"i1": 0.25, "i2": -1.5}
        assert table.oriented() == {"i1": -0.25, "i2": 1.5}

    def test_bad_header(self):
        with pytest.raises(ScoreFormatError, match="header"):
            parse_scores("id,value\n", "d", Orientation.HIGHER_MEANS_ERROR)

    def test_non_numeric_score_positioned(self):
        with pytest.raises(ScoreFormatError) as err:
            parse_scores("item_id,score\ni1,abc\n", "d", Orientation.HIGHER_MEANS_ERROR)
        assert any("line 2" in p and "finite" in p for p in err.value.problems)

    def test_non_finite_rejected(self):
        with pytest.raises(ScoreFormatError) as err:
            parse_scores("item_id,score\ni1,nan\ni2,inf\n", "d", Orientation.HIGHER_MEANS_ERROR)
        assert len(err.value.problems) == 2

    def test_duplicate_item(self):
        with pytest.raises(ScoreFormatError) as err:
            parse_scores("item_id,score\ni1,1\ni1,2\n", "d", Orientation.HIGHER_MEANS_ERROR)
        assert any("duplicate" in p for p in err.value.problems)
