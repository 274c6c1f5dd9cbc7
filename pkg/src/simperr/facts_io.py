"""Line-oriented fixture format for annotated fact universes.

One directive per line, fields separated by whitespace; ``#`` starts a
comment and blank lines are ignored. Tokens therefore cannot contain
whitespace.

    fact <id> <subject> <relation> <object>
    source <fact-id> [<fact-id> ...]
    generation <fact-id> ...
    topic <fact-id> ...
    true <fact-id> ...
    important <fact-id> ...
    contradicts_source <fact-id> ...
    narrower <specific-token> <general-token>
    implies <source-fact-id> <generated-fact-id>

Subset directives may repeat; their members accumulate. Facts may be
declared anywhere in the file (membership lines are resolved after all
facts are read). Parsing is strict: unknown directives, wrong arity,
duplicate fact ids, and references to undeclared facts are all reported
with their line number, and any such problem fails the parse.
"""

from __future__ import annotations

from .errors import UniverseFormatError
from .facts import AnnotatedFactUniverse, Fact

_SUBSET_DIRECTIVES = {
    "source": "in_source",
    "generation": "in_generation",
    "topic": "on_topic",
    "true": "is_true",
    "important": "important",
    "contradicts_source": "contradicts_source",
}


def parse_universe(text: str, source: str = "universe") -> AnnotatedFactUniverse:
    facts: list[Fact] = []
    fact_lines: dict[str, int] = {}
    subset_refs: dict[str, list[tuple[int, str]]] = {name: [] for name in _SUBSET_DIRECTIVES.values()}
    narrower_pairs: list[tuple[int, str, str]] = []
    implies_pairs: list[tuple[int, str, str]] = []
    problems: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive, args = tokens[0], tokens[1:]
        if directive == "fact":
            if len(args) != 4:
                problems.append(
                    f"line {lineno}: directive 'fact': expected 4 fields "
                    f"(id subject relation object), got {len(args)}"
                )
                continue
            fact_id, subject, relation, obj = args
            if fact_id in fact_lines:
                problems.append(
                    f"line {lineno}: duplicate fact id {fact_id!r} "
                    f"(first declared on line {fact_lines[fact_id]})"
                )
                continue
            fact_lines[fact_id] = lineno
            facts.append(Fact(id=fact_id, subject=subject, relation=relation, object=obj))
        elif directive in _SUBSET_DIRECTIVES:
            if not args:
                problems.append(f"line {lineno}: directive {directive!r}: expected at least one fact id")
                continue
            subset_refs[_SUBSET_DIRECTIVES[directive]].extend((lineno, a) for a in args)
        elif directive == "narrower":
            if len(args) != 2:
                problems.append(
                    f"line {lineno}: directive 'narrower': expected 2 fields "
                    f"(specific general), got {len(args)}"
                )
                continue
            narrower_pairs.append((lineno, args[0], args[1]))
        elif directive == "implies":
            if len(args) != 2:
                problems.append(
                    f"line {lineno}: directive 'implies': expected 2 fields "
                    f"(source-fact generated-fact), got {len(args)}"
                )
                continue
            implies_pairs.append((lineno, args[0], args[1]))
        else:
            expected = ", ".join(["fact", *_SUBSET_DIRECTIVES, "narrower", "implies"])
            problems.append(
                f"line {lineno}: unknown directive {directive!r} (expected one of: {expected})"
            )

    known = set(fact_lines)
    subsets: dict[str, set[str]] = {}
    for name, refs in subset_refs.items():
        members = set()
        for lineno, fact_id in refs:
            if fact_id not in known:
                problems.append(f"line {lineno}: {name}: unknown fact id {fact_id!r}")
                continue
            members.add(fact_id)
        subsets[name] = members
    for lineno, a, b in implies_pairs:
        for fact_id in (a, b):
            if fact_id not in known:
                problems.append(f"line {lineno}: implies: unknown fact id {fact_id!r}")
    for lineno, narrow, broad in narrower_pairs:
        if narrow == broad:
            problems.append(f"line {lineno}: narrower: token {narrow!r} cannot subsume itself")

    if problems:
        raise UniverseFormatError(problems, source=source)

    return AnnotatedFactUniverse(
        facts=tuple(facts),
        in_source=frozenset(subsets["in_source"]),
        in_generation=frozenset(subsets["in_generation"]),
        on_topic=frozenset(subsets["on_topic"]),
        is_true=frozenset(subsets["is_true"]),
        important=frozenset(subsets["important"]),
        contradicts_source=frozenset(subsets["contradicts_source"]),
        subsumption=frozenset((n, b) for _, n, b in narrower_pairs),
        implication_overrides=frozenset((a, b) for _, a, b in implies_pairs),
    )


def serialize_universe(universe: AnnotatedFactUniverse) -> str:
    """Canonical text form: facts in declaration order, one membership
    line per subset (sorted), then sorted narrower/implies lines."""
    lines = []
    for fact in universe.facts:
        lines.append(f"fact {fact.id} {fact.subject} {fact.relation} {fact.object}")
    for directive, attr in _SUBSET_DIRECTIVES.items():
        members = sorted(getattr(universe, attr))
        if members:
            lines.append(f"{directive} {' '.join(members)}")
    for narrow, broad in sorted(universe.subsumption):
        lines.append(f"narrower {narrow} {broad}")
    for a, b in sorted(universe.implication_overrides):
        lines.append(f"implies {a} {b}")
    return "\n".join(lines) + "\n"
