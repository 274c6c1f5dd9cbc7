"""Set algebra over annotated fact universes.

A fact is a (subject, relation, object) triple. A universe annotates a
finite set of facts with memberships: which facts appear in the source
text, which in the generated simplification, which are on topic, true,
important for the simplification goal, or contradict the source. From
those memberships the information-error sets and the simplification
transformation sets are derived by fixed set expressions; set-difference
chains associate left to right.

Information errors (over the generated facts):

    topic_shift   = gen - topic
    faithfulness  = gen & topic & contradicts_source
    factuality    = (gen & topic & false) - contradicts_source

where ``false`` is the complement of the true set within the universe.
Off-topic facts count as topic shift even when they are also false.

Simplification sets:

    out_of_scope            = gen - important
    loss                    = (source & important) - gen
    summarization           = (source - important) - gen
    clarification           = (gen & important) - source
    potential_clarification = (important - source) - gen

Only ``out_of_scope`` and ``loss`` are errors; the other three measure
benign transformations. A source is maximally simple when its fact set
equals the important set.

Topicality, truthfulness, importance, and contradiction are annotation
inputs: nothing here extracts facts from raw text or infers entailment.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import UniverseValidationError

Pair = tuple[str, str]


@dataclass(frozen=True)
class Fact:
    id: str
    subject: str
    relation: str
    object: str

    def elements(self) -> tuple[str, str, str]:
        return (self.subject, self.relation, self.object)


class Position(enum.Enum):
    SUBJECT = "subject"
    RELATION = "relation"
    OBJECT = "object"


POSITION_ORDER = (Position.SUBJECT, Position.RELATION, Position.OBJECT)


@dataclass(frozen=True)
class AnnotatedFactUniverse:
    """Immutable fact universe; all subsets hold fact ids.

    ``subsumption`` holds (specific, general) concept-token pairs; the
    strict order is the transitive closure of those pairs. A fact may sit
    in neither the source nor the generation (e.g. important background
    that neither text states, feeding potential_clarification).

    ``implication_overrides`` holds (source fact id, generated fact id)
    pairs annotated as "the source fact entails the generated one", which
    makes a single-element substitution benign.
    """

    facts: tuple[Fact, ...]
    in_source: frozenset[str] = frozenset()
    in_generation: frozenset[str] = frozenset()
    on_topic: frozenset[str] = frozenset()
    is_true: frozenset[str] = frozenset()
    important: frozenset[str] = frozenset()
    contradicts_source: frozenset[str] = frozenset()
    subsumption: frozenset[Pair] = frozenset()
    implication_overrides: frozenset[Pair] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "facts", tuple(self.facts))
        for name in (
            "in_source",
            "in_generation",
            "on_topic",
            "is_true",
            "important",
            "contradicts_source",
            "subsumption",
            "implication_overrides",
        ):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        by_id: dict[str, Fact] = {}
        for fact in self.facts:
            if fact.id in by_id:
                raise ValueError(f"duplicate fact id: {fact.id!r}")
            by_id[fact.id] = fact
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_broader", _transitive_closure(self.subsumption))

    @property
    def fact_ids(self) -> frozenset[str]:
        return frozenset(self._by_id)

    @property
    def is_false(self) -> frozenset[str]:
        """Complement of the true set within the universe."""
        return self.fact_ids - self.is_true

    def fact(self, fact_id: str) -> Fact:
        return self._by_id[fact_id]

    def narrower_than(self, specific: str, general: str) -> bool:
        """True when `specific` < `general` in the (closed) concept order."""
        return general in self._broader.get(specific, frozenset())


def _transitive_closure(pairs: frozenset[Pair]) -> dict[str, frozenset[str]]:
    direct: dict[str, set[str]] = {}
    for narrow, broad in pairs:
        direct.setdefault(narrow, set()).add(broad)
    closed: dict[str, frozenset[str]] = {}
    for start in direct:
        seen: set[str] = set()
        stack = list(direct[start])
        while stack:
            token = stack.pop()
            if token in seen:
                continue
            seen.add(token)
            stack.extend(direct.get(token, ()))
        closed[start] = frozenset(seen)
    return closed


def validate_universe(universe: AnnotatedFactUniverse) -> list[str]:
    """Check every annotation invariant; empty list means valid.

    Invariants: subset ids must name declared facts; fact elements are
    non-empty; important facts are true and on topic; source facts are
    true; the subsumption order is irreflexive (no cycles).
    """
    violations: list[str] = []
    known = universe.fact_ids
    for fact in universe.facts:
        for pos in POSITION_ORDER:
            if not getattr(fact, pos.value):
                violations.append(f"fact {fact.id}: empty {pos.value}")
    subset_names = (
        "in_source",
        "in_generation",
        "on_topic",
        "is_true",
        "important",
        "contradicts_source",
    )
    for name in subset_names:
        for fact_id in sorted(getattr(universe, name) - known):
            violations.append(f"unknown fact id {fact_id!r} in {name}")
    for a, b in sorted(universe.implication_overrides):
        for fact_id in (a, b):
            if fact_id not in known:
                violations.append(f"unknown fact id {fact_id!r} in implication override")
    for fact_id in sorted(universe.important - universe.is_true):
        if fact_id in known:
            violations.append(f"important fact not marked true: {fact_id}")
    for fact_id in sorted(universe.important - universe.on_topic):
        if fact_id in known:
            violations.append(f"important fact not marked on-topic: {fact_id}")
    for fact_id in sorted(universe.in_source - universe.is_true):
        if fact_id in known:
            violations.append(f"source fact not truthful: {fact_id}")
    for narrow, broad in sorted(universe.subsumption):
        if narrow == broad or universe.narrower_than(narrow, narrow):
            violations.append(f"subsumption cycle through {narrow!r}")
            break
    return violations


def _require_valid(universe: AnnotatedFactUniverse) -> None:
    violations = validate_universe(universe)
    if violations:
        raise UniverseValidationError(violations)


@dataclass(frozen=True)
class InformationErrorSets:
    """Pairwise-disjoint subsets of the generated facts."""

    topic_shift: frozenset[str]
    faithfulness: frozenset[str]
    factuality: frozenset[str]


def derive_information_errors(universe: AnnotatedFactUniverse) -> InformationErrorSets:
    _require_valid(universe)
    gen = universe.in_generation
    topic = universe.on_topic
    cont = universe.contradicts_source
    return InformationErrorSets(
        topic_shift=gen - topic,
        faithfulness=gen & topic & cont,
        factuality=(gen & topic & universe.is_false) - cont,
    )


@dataclass(frozen=True)
class SimplificationSets:
    out_of_scope: frozenset[str]
    loss: frozenset[str]
    summarization: frozenset[str]
    clarification: frozenset[str]
    potential_clarification: frozenset[str]


def derive_simplification_sets(universe: AnnotatedFactUniverse) -> SimplificationSets:
    _require_valid(universe)
    src = universe.in_source
    gen = universe.in_generation
    imp = universe.important
    return SimplificationSets(
        out_of_scope=gen - imp,
        loss=(src & imp) - gen,
        summarization=(src - imp) - gen,
        clarification=(gen & imp) - src,
        potential_clarification=(imp - src) - gen,
    )


def out_of_scope_new(universe: AnnotatedFactUniverse) -> frozenset[str]:
    """Out-of-scope generation restricted to genuinely new facts.

    The defining expression for out_of_scope is ``gen - important`` and is
    what `derive_simplification_sets` returns; this view additionally
    removes facts already present in the source, for consumers who want
    "new and unimportant" rather than "unimportant".
    """
    _require_valid(universe)
    return (universe.in_generation - universe.important) - universe.in_source


def is_maximally_simple(universe: AnnotatedFactUniverse) -> bool:
    """A source text is maximally simple when its facts are exactly the
    important ones: nothing to drop, nothing missing."""
    _require_valid(universe)
    return universe.in_source == universe.important


class SubstitutionKind(enum.Enum):
    OVERGENERALIZATION = "Overgeneralization"
    OVERSPECIFICATION = "Overspecification"
    NONE = "None"


@dataclass(frozen=True)
class SubstitutionVerdict:
    kind: SubstitutionKind
    differing_position: Position | None = None

    def __post_init__(self):
        if self.kind is not SubstitutionKind.NONE and self.differing_position is None:
            raise ValueError("substitution verdict requires the differing position")


def detect_substitution(
    f_src: Fact, f_gen: Fact, universe: AnnotatedFactUniverse
) -> SubstitutionVerdict:
    """Classify a source/generated fact pair as a concept substitution.

    Applies only when exactly one of the three positions differs. The
    differing tokens must be comparable under the concept order, and the
    pair must not carry an implication override (an entailed reformulation
    is benign). Generated token strictly broader: overgeneralization;
    strictly narrower: overspecification.
    """
    if f_src.id not in universe.in_source:
        raise ValueError(f"fact {f_src.id!r} is not in the source set")
    if f_gen.id not in universe.in_generation:
        raise ValueError(f"fact {f_gen.id!r} is not in the generation set")
    differing = [
        pos
        for pos in POSITION_ORDER
        if getattr(f_src, pos.value) != getattr(f_gen, pos.value)
    ]
    if len(differing) != 1:
        return SubstitutionVerdict(kind=SubstitutionKind.NONE)
    position = differing[0]
    if (f_src.id, f_gen.id) in universe.implication_overrides:
        return SubstitutionVerdict(kind=SubstitutionKind.NONE, differing_position=position)
    e_src = getattr(f_src, position.value)
    e_gen = getattr(f_gen, position.value)
    if universe.narrower_than(e_src, e_gen):
        return SubstitutionVerdict(
            kind=SubstitutionKind.OVERGENERALIZATION, differing_position=position
        )
    if universe.narrower_than(e_gen, e_src):
        return SubstitutionVerdict(
            kind=SubstitutionKind.OVERSPECIFICATION, differing_position=position
        )
    return SubstitutionVerdict(kind=SubstitutionKind.NONE, differing_position=position)


def substitution_report(
    universe: AnnotatedFactUniverse,
) -> list[tuple[Fact, Fact, SubstitutionVerdict]]:
    """Run substitution detection over every source/generation fact pair
    that differs in exactly one position, in declaration order."""
    _require_valid(universe)
    source_facts = [f for f in universe.facts if f.id in universe.in_source]
    generated_facts = [f for f in universe.facts if f.id in universe.in_generation]
    results = []
    for f_src in source_facts:
        for f_gen in generated_facts:
            differing = [
                pos
                for pos in POSITION_ORDER
                if getattr(f_src, pos.value) != getattr(f_gen, pos.value)
            ]
            if len(differing) != 1:
                continue
            results.append((f_src, f_gen, detect_substitution(f_src, f_gen, universe)))
    return results
