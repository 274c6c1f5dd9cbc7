import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simperr.errors import UniverseFormatError, UniverseValidationError
from simperr.facts import (
    AnnotatedFactUniverse,
    Fact,
    Position,
    SubstitutionKind,
    derive_information_errors,
    derive_simplification_sets,
    detect_substitution,
    is_maximally_simple,
    out_of_scope_new,
    substitution_report,
    validate_universe,
)
from simperr.facts_io import parse_universe, serialize_universe

from .oracles import (
    all_universes,
    brute_information_sets,
    brute_simplification_sets,
    universe_from_profiles,
    valid_profiles,
)


def make_universe(**kwargs):
    facts = kwargs.pop(
        "facts",
        (
            Fact("f1", "bees", "pollinate", "crops"),
            Fact("f2", "insects", "pollinate", "crops"),
            Fact("f3", "cars", "fly", "skies"),
        ),
    )
    return AnnotatedFactUniverse(facts=facts, **kwargs)


class TestInformationErrors:
    def test_empty_generation_all_empty(self):
        universe = make_universe(is_true={"f1", "f2", "f3"})
        info = derive_information_errors(universe)
        assert info.topic_shift == info.faithfulness == info.factuality == frozenset()

    def test_off_topic_false_fact_is_topic_shift_only(self):
        # Off-topic counts as topic shift even when the fact is also false.
        universe = make_universe(in_generation={"f3"}, is_true={"f1", "f2"})
        info = derive_information_errors(universe)
        assert info.topic_shift == {"f3"}
        assert info.faithfulness == frozenset()
        assert info.factuality == frozenset()

    def test_contradiction_beats_factuality(self):
        universe = make_universe(
            in_generation={"f3"}, on_topic={"f3"}, contradicts_source={"f3"}
        )
        info = derive_information_errors(universe)
        assert info.faithfulness == {"f3"}
        assert info.factuality == frozenset()

    def test_on_topic_false_uncontradicted_is_factuality(self):
        universe = make_universe(in_generation={"f3"}, on_topic={"f3"})
        info = derive_information_errors(universe)
        assert info.factuality == {"f3"}

    def test_invalid_universe_rejected_with_violations(self):
        universe = make_universe(important={"f1"})  # important but not true
        with pytest.raises(UniverseValidationError) as err:
            derive_information_errors(universe)
        assert any("important fact not marked true: f1" in v for v in err.value.violations)


class TestSimplificationSets:
    def test_fixed_point_all_empty(self):
        ids = {"f1", "f2", "f3"}
        universe = make_universe(
            in_source=ids, in_generation=ids, important=ids, is_true=ids, on_topic=ids
        )
        sets = derive_simplification_sets(universe)
        assert sets.out_of_scope == frozenset()
        assert sets.loss == frozenset()
        assert sets.summarization == frozenset()
        assert sets.clarification == frozenset()
        assert sets.potential_clarification == frozenset()
        assert is_maximally_simple(universe)

    def test_dropped_important_source_fact_is_loss(self):
        universe = make_universe(
            in_source={"f1"}, important={"f1"}, is_true={"f1"}, on_topic={"f1"}
        )
        assert derive_simplification_sets(universe).loss == {"f1"}

    def test_out_of_scope_new_view_removes_source_facts(self):
        universe = make_universe(
            in_source={"f1"},
            in_generation={"f1", "f3"},
            is_true={"f1"},
        )
        sets = derive_simplification_sets(universe)
        assert sets.out_of_scope == {"f1", "f3"}  # defining expression keeps f1
        assert out_of_scope_new(universe) == {"f3"}


class TestMaximallySimple:
    def test_equal_sets(self):
        universe = make_universe(
            in_source={"f1", "f2"},
            important={"f1", "f2"},
            is_true={"f1", "f2"},
            on_topic={"f1", "f2"},
        )
        assert is_maximally_simple(universe)

    def test_source_missing_important_fact(self):
        universe = make_universe(
            in_source={"f1"},
            important={"f1", "f2"},
            is_true={"f1", "f2"},
            on_topic={"f1", "f2"},
        )
        assert not is_maximally_simple(universe)

    def test_source_with_unimportant_fact(self):
        universe = make_universe(
            in_source={"f1", "f2"},
            important={"f1"},
            is_true={"f1", "f2"},
            on_topic={"f1"},
        )
        assert not is_maximally_simple(universe)


class TestExhaustiveOracle:
    """Every valid universe of <= 3 facts (acceptance re-runs at 4)."""

    def test_information_errors_match_brute_force(self):
        for universe in all_universes(3):
            info = derive_information_errors(universe)
            assert (info.topic_shift, info.faithfulness, info.factuality) == tuple(
                map(frozenset, brute_information_sets(universe))
            )

    def test_simplification_sets_match_brute_force(self):
        for universe in all_universes(3):
            sets = derive_simplification_sets(universe)
            expected = tuple(map(frozenset, brute_simplification_sets(universe)))
            assert (
                sets.out_of_scope,
                sets.loss,
                sets.summarization,
                sets.clarification,
                sets.potential_clarification,
            ) == expected

    def test_disjointness_and_partitions(self):
        for universe in all_universes(3):
            info = derive_information_errors(universe)
            assert not info.topic_shift & info.faithfulness
            assert not info.topic_shift & info.factuality
            assert not info.faithfulness & info.factuality
            assert info.topic_shift | info.faithfulness | info.factuality <= universe.in_generation

            sets = derive_simplification_sets(universe)
            removed = universe.in_source - universe.in_generation
            assert sets.loss | sets.summarization == removed
            assert not sets.loss & sets.summarization
            new_important = universe.important - universe.in_source
            assert sets.clarification | sets.potential_clarification == new_important
            assert not sets.clarification & sets.potential_clarification


@st.composite
def random_universes(draw):
    profiles = draw(st.lists(st.sampled_from(valid_profiles()), max_size=5))
    return universe_from_profiles(profiles)


class TestRandomUniverses:
    @given(random_universes())
    @settings(max_examples=300)
    def test_simplification_sets_vs_oracle(self, universe):
        sets = derive_simplification_sets(universe)
        expected = tuple(map(frozenset, brute_simplification_sets(universe)))
        assert (
            sets.out_of_scope,
            sets.loss,
            sets.summarization,
            sets.clarification,
            sets.potential_clarification,
        ) == expected


class TestSubstitution:
    def pollination_universe(self):
        facts = (
            Fact("src1", "bees", "pollinate", "crops"),
            Fact("gen1", "insects", "pollinate", "crops"),
            Fact("src2", "study", "examined_impact_on", "wildlife"),
            Fact("gen2", "study", "examined_impact_on", "polar_bears"),
        )
        return AnnotatedFactUniverse(
            facts=facts,
            in_source={"src1", "src2"},
            in_generation={"gen1", "gen2", "src1"},
            is_true={"src1", "src2", "gen1", "gen2"},
            on_topic={"src1", "src2", "gen1", "gen2"},
            subsumption={("bees", "insects"), ("polar_bears", "wildlife")},
        )

    def test_overgeneralization_at_subject(self):
        universe = self.pollination_universe()
        verdict = detect_substitution(universe.fact("src1"), universe.fact("gen1"), universe)
        assert verdict.kind is SubstitutionKind.OVERGENERALIZATION
        assert verdict.differing_position is Position.SUBJECT

    def test_overspecification_at_object(self):
        universe = self.pollination_universe()
        verdict = detect_substitution(universe.fact("src2"), universe.fact("gen2"), universe)
        assert verdict.kind is SubstitutionKind.OVERSPECIFICATION
        assert verdict.differing_position is Position.OBJECT

    def test_identical_facts_none(self):
        universe = self.pollination_universe()
        verdict = detect_substitution(universe.fact("src1"), universe.fact("src1"), universe)
        assert verdict.kind is SubstitutionKind.NONE
        assert verdict.differing_position is None

    def test_two_differences_none_position_unset(self):
        facts = (
            Fact("a", "bees", "pollinate", "crops"),
            Fact("b", "insects", "visit", "crops"),
        )
        universe = AnnotatedFactUniverse(
            facts=facts,
            in_source={"a"},
            in_generation={"b"},
            is_true={"a", "b"},
            subsumption={("bees", "insects")},
        )
        verdict = detect_substitution(universe.fact("a"), universe.fact("b"), universe)
        assert verdict.kind is SubstitutionKind.NONE
        assert verdict.differing_position is None

    def test_implication_override_is_benign(self):
        universe = self.pollination_universe()
        overridden = AnnotatedFactUniverse(
            facts=universe.facts,
            in_source=universe.in_source,
            in_generation=universe.in_generation,
            is_true=universe.is_true,
            on_topic=universe.on_topic,
            subsumption=universe.subsumption,
            implication_overrides={("src1", "gen1")},
        )
        verdict = detect_substitution(overridden.fact("src1"), overridden.fact("gen1"), overridden)
        assert verdict.kind is SubstitutionKind.NONE

    def test_incomparable_tokens_none(self):
        facts = (
            Fact("a", "bees", "pollinate", "crops"),
            Fact("b", "wasps", "pollinate", "crops"),
        )
        universe = AnnotatedFactUniverse(
            facts=facts, in_source={"a"}, in_generation={"b"}, is_true={"a", "b"}
        )
        verdict = detect_substitution(universe.fact("a"), universe.fact("b"), universe)
        assert verdict.kind is SubstitutionKind.NONE

    def test_transitive_subsumption(self):
        facts = (
            Fact("a", "bees", "pollinate", "crops"),
            Fact("b", "animals", "pollinate", "crops"),
        )
        universe = AnnotatedFactUniverse(
            facts=facts,
            in_source={"a"},
            in_generation={"b"},
            is_true={"a", "b"},
            subsumption={("bees", "insects"), ("insects", "animals")},
        )
        verdict = detect_substitution(universe.fact("a"), universe.fact("b"), universe)
        assert verdict.kind is SubstitutionKind.OVERGENERALIZATION

    def test_antisymmetry_under_swap(self):
        # Both facts sit in both sets so the preconditions hold either way.
        facts = (
            Fact("a", "bees", "pollinate", "crops"),
            Fact("b", "insects", "pollinate", "crops"),
        )
        universe = AnnotatedFactUniverse(
            facts=facts,
            in_source={"a", "b"},
            in_generation={"a", "b"},
            is_true={"a", "b"},
            subsumption={("bees", "insects")},
        )
        forward = detect_substitution(universe.fact("a"), universe.fact("b"), universe)
        backward = detect_substitution(universe.fact("b"), universe.fact("a"), universe)
        assert forward.kind is SubstitutionKind.OVERGENERALIZATION
        assert backward.kind is SubstitutionKind.OVERSPECIFICATION
        assert forward.differing_position == backward.differing_position

    def test_preconditions_enforced(self):
        universe = self.pollination_universe()
        with pytest.raises(ValueError, match="not in the source set"):
            detect_substitution(universe.fact("gen2"), universe.fact("gen1"), universe)
        with pytest.raises(ValueError, match="not in the generation set"):
            detect_substitution(universe.fact("src1"), universe.fact("src2"), universe)

    def test_substitution_report_covers_single_difference_pairs(self):
        universe = self.pollination_universe()
        report = substitution_report(universe)
        keyed = {(src.id, gen.id): verdict for src, gen, verdict in report}
        assert keyed[("src1", "gen1")].kind is SubstitutionKind.OVERGENERALIZATION
        assert keyed[("src2", "gen2")].kind is SubstitutionKind.OVERSPECIFICATION


class TestValidateUniverse:
    def test_important_not_true(self):
        universe = make_universe(important={"f1"}, on_topic={"f1"})
        assert any(
            "important fact not marked true: f1" in v for v in validate_universe(universe)
        )

    def test_source_not_truthful(self):
        universe = make_universe(in_source={"f1"})
        assert any("source fact not truthful: f1" in v for v in validate_universe(universe))

    def test_subsumption_cycle(self):
        universe = make_universe(
            subsumption={("bees", "insects"), ("insects", "bees")}
        )
        assert any("subsumption cycle" in v for v in validate_universe(universe))

    def test_unknown_subset_member(self):
        universe = make_universe(in_generation={"ghost"})
        assert any(
            "unknown fact id 'ghost' in in_generation" in v
            for v in validate_universe(universe)
        )

    def test_degenerate_membership_is_allowed(self):
        # A fact may be important only: it feeds potential_clarification.
        universe = make_universe(important={"f1"}, is_true={"f1"}, on_topic={"f1"})
        assert validate_universe(universe) == []
        sets = derive_simplification_sets(universe)
        assert sets.potential_clarification == {"f1"}

    def test_duplicate_fact_ids_rejected_at_construction(self):
        with pytest.raises(ValueError, match="duplicate fact id"):
            AnnotatedFactUniverse(
                facts=(Fact("f1", "a", "b", "c"), Fact("f1", "x", "y", "z"))
            )


FIXTURE = """\
# pollination example
fact src1 bees pollinate crops
fact gen1 insects pollinate crops
fact extra drought threatens crops

source src1
generation gen1
topic src1 gen1 extra
true src1 gen1
important src1
narrower bees insects
"""


class TestUniverseFormat:
    def test_parse_fixture(self):
        universe = parse_universe(FIXTURE)
        assert len(universe.facts) == 3
        assert universe.in_source == {"src1"}
        assert universe.narrower_than("bees", "insects")

    def test_round_trip(self):
        universe = parse_universe(FIXTURE)
        again = parse_universe(serialize_universe(universe))
        assert again == universe
        assert serialize_universe(again) == serialize_universe(universe)

    def test_unknown_directive_positioned(self):
        with pytest.raises(UniverseFormatError) as err:
            parse_universe("facts f1 a b c\n")
        assert any("line 1" in p and "unknown directive 'facts'" in p for p in err.value.problems)

    def test_bad_arity_positioned(self):
        with pytest.raises(UniverseFormatError) as err:
            parse_universe("fact f1 a b\n")
        assert any("line 1" in p and "expected 4 fields" in p for p in err.value.problems)

    def test_duplicate_fact_id(self):
        with pytest.raises(UniverseFormatError) as err:
            parse_universe("fact f1 a b c\nfact f1 x y z\n")
        assert any("line 2" in p and "duplicate fact id" in p for p in err.value.problems)

    def test_unknown_fact_reference(self):
        with pytest.raises(UniverseFormatError) as err:
            parse_universe("fact f1 a b c\nsource f2\n")
        assert any("line 2" in p and "'f2'" in p for p in err.value.problems)

    def test_forward_references_allowed(self):
        universe = parse_universe("source f1\nfact f1 a b c\ntrue f1\n")
        assert universe.in_source == {"f1"}
