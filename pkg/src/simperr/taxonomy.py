"""Error taxonomy for automatically simplified text.

Fourteen leaf error codes grouped into four greater categories:

    A. Fluency        A1 A2 A3 A4 A5
    B. Alignment      B1 B2
    C. Information    C1 C2 C3
    D. Simplification D1_1 D1_2 D2_1 D2_2

Code identifiers use underscores (``D1_1``) so they can appear in file
headers and URLs; display names keep the dotted form (``D1.1``).

Every leaf code carries a definition and worked source/simplification
examples, embedded here as data (`TAXONOMY`) so the annotation UI, the
docs generator, and the service all render from one source of truth.

An annotation over one (source, simplification) item is a `LabelVector`:
an explicit ``no_error`` flag plus one boolean per leaf code. The two
are mutually exclusive and jointly exhaustive; `validate_label_vector`
reports violations of that rule as data rather than raising.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class Category(enum.Enum):
    FLUENCY = "Fluency"
    ALIGNMENT = "Alignment"
    INFORMATION = "Information"
    SIMPLIFICATION = "Simplification"

    @property
    def letter(self) -> str:
        return {"Fluency": "A", "Alignment": "B", "Information": "C", "Simplification": "D"}[self.value]

    @property
    def heading(self) -> str:
        """Row label used by reports, e.g. ``A. Fluency``."""
        return f"{self.letter}. {self.value}"


CATEGORY_ORDER: tuple[Category, ...] = (
    Category.FLUENCY,
    Category.ALIGNMENT,
    Category.INFORMATION,
    Category.SIMPLIFICATION,
)

# What each category asks about the system output.
CATEGORY_FOCUS: dict[Category, str] = {
    Category.FLUENCY: (
        "Is the answer provided in a correct language that a fluent speaker "
        "would speak, regardless of the correctness or relevance of the answer?"
    ),
    Category.ALIGNMENT: (
        "Does the answer suggest that the model correctly interpreted the "
        "prompt, including tags and format?"
    ),
    Category.INFORMATION: (
        "Does the answer suggest that the model knows and understands "
        "everything needed to simplify the input?"
    ),
    Category.SIMPLIFICATION: (
        "Does the answer suggest that the model understands the task of "
        "simplification?"
    ),
}


class ErrorCode(enum.Enum):
    """The 14 leaf codes, in stable report order."""

    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    A5 = "A5"
    B1 = "B1"
    B2 = "B2"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    D1_1 = "D1_1"
    D1_2 = "D1_2"
    D2_1 = "D2_1"
    D2_2 = "D2_2"

    @property
    def display(self) -> str:
        """Dotted display form: ``D1_1`` renders as ``D1.1``."""
        return self.value.replace("_", ".")

    @property
    def category(self) -> Category:
        return _CATEGORY_BY_LETTER[self.value[0]]

    @property
    def name_text(self) -> str:
        return TAXONOMY[self].name

    @property
    def row_label(self) -> str:
        """Report row label, e.g. ``D2.1. Loss of informative content``."""
        return f"{self.display}. {self.name_text}"


_CATEGORY_BY_LETTER = {c.letter: c for c in CATEGORY_ORDER}

CODE_ORDER: tuple[ErrorCode, ...] = tuple(ErrorCode)


def parse_code(token: str) -> ErrorCode:
    """Resolve a code token (``D1_1`` or ``D1.1``), rejecting unknowns."""
    normalized = token.strip().replace(".", "_")
    try:
        return ErrorCode(normalized)
    except ValueError:
        raise ValueError(f"unknown error code: {token!r}") from None


def category_of(code: ErrorCode | str) -> Category:
    """Map a leaf code to its unique parent category."""
    if isinstance(code, str):
        code = parse_code(code)
    return code.category


@dataclass(frozen=True)
class TaxonomyExample:
    source: str
    simplification: str


@dataclass(frozen=True)
class TaxonomyEntry:
    code: ErrorCode
    name: str
    definition: str
    examples: tuple[TaxonomyExample, ...]


_SRC_AV = (
    "In the modern era of automation and robotics, autonomous vehicles are "
    "currently the focus of academic and industrial research."
)

TAXONOMY: dict[ErrorCode, TaxonomyEntry] = {
    ErrorCode.A1: TaxonomyEntry(
        code=ErrorCode.A1,
        name="Random generation",
        definition="At least part of the answer is just a random string of words/numbers.",
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "Current academic and industrial research is interested in "
                    "autonomous vehicles.1.2.3.4.5.6.7"
                ),
            ),
        ),
    ),
    ErrorCode.A2: TaxonomyEntry(
        code=ErrorCode.A2,
        name="Syntax error",
        definition="The syntax is incorrect and doesn't make sense.",
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "In time now of robot and auto, cars that drive self are "
                    "study much by school and work people."
                ),
            ),
        ),
    ),
    ErrorCode.A3: TaxonomyEntry(
        code=ErrorCode.A3,
        name="Contradiction",
        definition="Answer contradicts itself.",
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "In today's age of automation and robotics, autonomous "
                    "vehicles are both widely researched and completely ignored "
                    "by academics and industry."
                ),
            ),
        ),
    ),
    ErrorCode.A4: TaxonomyEntry(
        code=ErrorCode.A4,
        name="Punctuation/grammar errors",
        definition="Answer has punctuation errors that don't hinder comprehension.",
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "Current academic and industrial research are interested in "
                    "autonomous vehicles…………………"
                ),
            ),
        ),
    ),
    ErrorCode.A5: TaxonomyEntry(
        code=ErrorCode.A5,
        name="Redundancy",
        definition=(
            "Repeated sentences, parts of sentences, or groups of sentences "
            "that do not need to be repeated. This is an error regardless of "
            "the quality of the sentence."
        ),
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "Current academic and industrial research is interested in "
                    "autonomous vehicles.Current academic and industrial "
                    "research is interested in autonomous vehicles."
                ),
            ),
        ),
    ),
    ErrorCode.B1: TaxonomyEntry(
        code=ErrorCode.B1,
        name="Format misalignment",
        definition=(
            'Some tags or symbols used for formatting are missing. They can '
            'include symbols used for JSON parsing (like here with "" and {}) '
            'or any "prompt tag", typically <query> <answer> etc…'
        ),
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    '{"Current academic and industrial research is interested '
                    'in autonomous vehicles.}"'
                ),
            ),
        ),
    ),
    ErrorCode.B2: TaxonomyEntry(
        code=ErrorCode.B2,
        name="Prompt misalignment",
        definition=(
            "The model generated one or more of the following: unneeded prompt "
            "tags (like <query> <answer> etc…) that lead to another "
            "question/source etc…; another question (different or not); "
            "another source text (related or not); another answer (related or "
            "not)."
        ),
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    '{"Current academic and industrial research is interested '
                    "in autonomous vehicles.<Query> simplify this: <example>…"
                ),
            ),
        ),
    ),
    ErrorCode.C1: TaxonomyEntry(
        code=ErrorCode.C1,
        name="Factuality hallucination",
        definition=(
            "The simplification contains facts that are contrary to (i.e., can "
            'be proven wrong from) "general knowledge" but not directly '
            "contrary to the input text."
        ),
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "Current academic and industrial research is interested in "
                    "autonomous vehicles, which are vehicles that can fly"
                ),
            ),
        ),
    ),
    ErrorCode.C2: TaxonomyEntry(
        code=ErrorCode.C2,
        name="Faithfulness hallucination",
        definition=(
            "The simplification contains facts that are contrary to (i.e., can "
            "be proven wrong from) the input text."
        ),
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "Current academic and industrial research is not at all "
                    "interested in autonomous vehicles."
                ),
            ),
        ),
    ),
    ErrorCode.C3: TaxonomyEntry(
        code=ErrorCode.C3,
        name="Topic shift",
        definition=(
            "The generation contains at least some information related to the "
            "task (simplification) or the prompt (one-shot encoding) but not "
            "to the source document. It can be a text about simplification, "
            "or, in the case of one-shot inference, it can be something "
            "related to the example given but not to the document that should "
            "be simplified."
        ),
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "Simplification, in the context of language and "
                    "communication, refers to the process of making text or "
                    "information easier to understand."
                ),
            ),
            TaxonomyExample(
                source=(
                    "Simplify the following document: <source>In an attempt to "
                    "achieve the above-mentioned tasks, we propose an imitation "
                    "learning based, data-driven solution to UAV autonomy for "
                    "navigating through city streets by learning to fly by "
                    "imitating an expert pilot.<answer>Researchers propose "
                    "data-driven solutions allowing drones to autonomously "
                    "navigate city streets, learning to fly by imitating an "
                    "expert pilot.<source> In the modern era of automation and "
                    "robotics, autonomous vehicles are currently the focus of "
                    "academic and industrial research. <answer>"
                ),
                simplification=(
                    "We propose a data-driven imitation learning method for "
                    "UAVs to navigate city streets by mimicking an expert pilot."
                ),
            ),
        ),
    ),
    ErrorCode.D1_1: TaxonomyEntry(
        code=ErrorCode.D1_1,
        name="Overgeneralization",
        definition=(
            "The simplification removes some precision and generalizes "
            "concepts that shouldn't be generalized, making them ambiguous and "
            "false. This may include: replacing entities with the greater "
            "category of entities; using vague or ambiguous pronouns in place "
            "of clear subjects; removing the target of a sentence, implying "
            "that a fact applies generally when it only applies in a specific "
            "case, to a specific entity; omitting critical context, such as "
            "targets, qualifiers, or conditions; generalizing numerical or "
            "conditional statements into absolutes."
        ),
        examples=(
            TaxonomyExample(
                source=(
                    "Insects like bees and butterflies are vital for "
                    "pollination, which is essential for producing many fruits "
                    "and vegetables."
                ),
                simplification="Insects are vital for pollination.",
            ),
            TaxonomyExample(
                source=(
                    "The study found that aspirin reduced the risk of heart "
                    "attack in patients over 50 but had no effect on younger "
                    "individuals."
                ),
                simplification="It reduces the risk of heart attack.",
            ),
            TaxonomyExample(
                source=(
                    "This vaccine has been shown to be effective in preventing "
                    "measles in children."
                ),
                simplification="This vaccine prevents diseases.",
            ),
        ),
    ),
    ErrorCode.D1_2: TaxonomyEntry(
        code=ErrorCode.D1_2,
        name="Overspecification",
        definition=(
            "This error occurs when a broad entity or category in the source "
            "text is replaced with a specific example or subcategory during "
            "simplification. The source text may intentionally use a general "
            "term to avoid unnecessary detail or to maintain flexibility in "
            "interpretation. By introducing specificity, the simplified text "
            "risks reducing the meaning to an incorrect or unintended entity, "
            "misrepresenting the original intent."
        ),
        examples=(
            TaxonomyExample(
                source="The study examined the impact of climate change on wildlife.",
                simplification=(
                    "The study examined the impact of climate change on polar bears."
                ),
            ),
        ),
    ),
    ErrorCode.D2_1: TaxonomyEntry(
        code=ErrorCode.D2_1,
        name="Loss of informative content",
        definition=(
            "Simplifications can omit critical information, making the content "
            "uninformative rather than misleading. This omission limits the "
            "reader's understanding of the broader context or key points, "
            "leaving them unaware of significant elements like parts of a "
            "research question, conclusions, or applications. This includes: a "
            "completely empty simplification; a simplification so general it "
            "loses the source's novelty or explanatory value; simplifying only "
            "one argument when the source has two independent ones."
        ),
        examples=(
            TaxonomyExample(
                source=(
                    "Insects like bees and butterflies are vital for "
                    "pollination, which is essential for producing many fruits "
                    "and vegetables."
                ),
                simplification="Insects are vital for pollination.",
            ),
            TaxonomyExample(
                source=(
                    "The study found that aspirin reduced the risk of heart "
                    "attack in patients over 50 but had no effect on younger "
                    "individuals."
                ),
                simplification="It reduces the risk of heart attack.",
            ),
            TaxonomyExample(
                source=(
                    "This vaccine has been shown to be effective in preventing "
                    "measles in children."
                ),
                simplification="This vaccine prevents diseases.",
            ),
            TaxonomyExample(
                source=(
                    "In the controlled study, the intervention improved test "
                    "scores among high school students in urban areas."
                ),
                simplification="The intervention improves test scores.",
            ),
        ),
    ),
    ErrorCode.D2_2: TaxonomyEntry(
        code=ErrorCode.D2_2,
        name="Out-of-scope generation",
        definition=(
            "The generation contains information that is unrelated to the task "
            "of simplification. The generation may have something to do with "
            "the source document to be simplified, but is not about "
            "simplifying it. The generation might be: an opinion about the "
            "source document; a completion of the source document (more "
            "information); questions about the source document; a translation "
            "of the source document."
        ),
        examples=(
            TaxonomyExample(
                source=_SRC_AV,
                simplification=(
                    "Current academic and industrial research is interested in "
                    "autonomous vehicles. In the show KITT with David "
                    "Hasselhoff the car is an autonomous vehicle and on episode…"
                ),
            ),
        ),
    ),
}


def codes_in_category(category: Category) -> tuple[ErrorCode, ...]:
    return tuple(c for c in CODE_ORDER if c.category is category)


@dataclass(frozen=True)
class LabelVector:
    """One annotator's checklist over one (source, simplification) item.

    ``no_error`` and the per-code flags are redundant by design so that an
    all-false vector cannot silently mean "not annotated"; the biconditional
    between them is checked by `validate_label_vector`, not the constructor.
    """

    no_error: bool
    flags: Mapping[ErrorCode, bool] = field(default_factory=dict)

    def __post_init__(self):
        normalized = {code: bool(self.flags.get(code, False)) for code in CODE_ORDER}
        object.__setattr__(self, "flags", normalized)

    @classmethod
    def clean(cls) -> "LabelVector":
        return cls(no_error=True)

    @classmethod
    def with_errors(cls, codes: Iterable[ErrorCode | str]) -> "LabelVector":
        resolved = [parse_code(c) if isinstance(c, str) else c for c in codes]
        return cls(no_error=not resolved, flags={c: True for c in resolved})

    def flagged(self) -> tuple[ErrorCode, ...]:
        return tuple(c for c in CODE_ORDER if self.flags[c])


@dataclass(frozen=True)
class AggregatedLabels:
    """Category-level view of a label vector (disjunction of child codes)."""

    categories: Mapping[Category, bool]
    any_error: bool


def aggregate_categories(vector: LabelVector) -> AggregatedLabels:
    """Collapse leaf flags to category flags; a category is flagged iff any
    of its child codes is."""
    per_category = {
        category: any(vector.flags[code] for code in codes_in_category(category))
        for category in CATEGORY_ORDER
    }
    return AggregatedLabels(categories=per_category, any_error=not vector.no_error)


def validate_label_vector(vector: LabelVector) -> list[str]:
    """Check the no_error/flags biconditional. Violations are data, not
    faults: an empty list means the vector is consistent."""
    violations = []
    flagged = vector.flagged()
    if vector.no_error:
        for code in flagged:
            violations.append(
                f"no_error/{code.value} conflict: no_error is set but {code.value} is flagged"
            )
    elif not flagged:
        violations.append("empty error set without no_error")
    return violations


def export_taxonomy() -> dict:
    """Key/value tree of the whole taxonomy, in stable code order A1..D2_2.

    This is the single machine-readable form served to the annotation UI
    and consumed by the docs generator.
    """
    categories = []
    for category in CATEGORY_ORDER:
        categories.append(
            {
                "key": category.value.lower(),
                "letter": category.letter,
                "label": category.heading,
                "focus": CATEGORY_FOCUS[category],
                "codes": [
                    {
                        "code": code.value,
                        "display": code.display,
                        "name": TAXONOMY[code].name,
                        "definition": TAXONOMY[code].definition,
                        "examples": [
                            {"source": ex.source, "simplification": ex.simplification}
                            for ex in TAXONOMY[code].examples
                        ],
                    }
                    for code in codes_in_category(category)
                ],
            }
        )
    return {
        "kind": "taxonomy",
        "codes": [c.value for c in CODE_ORDER],
        "categories": categories,
    }


def render_guide() -> str:
    """Render the annotation guide (markdown) from the taxonomy data."""
    lines = [
        "# Annotation guide",
        "",
        "Each task shows a source passage and one automatic simplification of",
        "it. Tick every error code that applies, or tick **No error** when the",
        "simplification is free of all of them. **No error** and the error",
        "codes are mutually exclusive: submitting requires exactly one of",
        "\"No error\" or at least one code.",
        "",
        "You may resubmit a task after reconsidering; only your latest",
        "submission counts.",
        "",
    ]
    for block in export_taxonomy()["categories"]:
        lines.append(f"## {block['label']}")
        lines.append("")
        lines.append(f"Category focus: {block['focus']}")
        lines.append("")
        for code in block["codes"]:
            lines.append(f"### {code['display']}. {code['name']}")
            lines.append("")
            lines.append(code["definition"])
            lines.append("")
            for i, ex in enumerate(code["examples"], start=1):
                label = f"Example {i}" if len(code["examples"]) > 1 else "Example"
                lines.append(f"- {label}:")
                lines.append(f"  - Source: {ex['source']}")
                lines.append(f"  - Simplification: {ex['simplification']}")
            lines.append("")
    return "\n".join(lines).rstrip() + "\n"
