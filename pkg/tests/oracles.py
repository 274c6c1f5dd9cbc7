"""Independent brute-force reference implementations.

Everything here is written as a literal, naive translation of each
statistic's definition (plain floats, per-element membership tests,
O(n^2) pair counting) and deliberately shares no code with the library:
the suite checks the fast/exact implementations against these.
"""

from collections import namedtuple
from itertools import combinations_with_replacement

from simperr.facts import AnnotatedFactUniverse, Fact

# -- fact algebra -------------------------------------------------------------

# One fact's annotation flags: membership of the six input subsets.
Profile = namedtuple("Profile", "in_src in_gen topic true imp cont")


def valid_profiles():
    """All per-fact flag combinations consistent with the annotation
    invariants (important facts are true and on topic; source facts are
    true)."""
    profiles = []
    for bits in range(64):
        p = Profile(*(bool(bits >> i & 1) for i in range(6)))
        if p.imp and not p.true:
            continue
        if p.imp and not p.topic:
            continue
        if p.in_src and not p.true:
            continue
        profiles.append(p)
    return profiles


def universe_from_profiles(profiles):
    facts = tuple(
        Fact(id=f"f{i}", subject=f"s{i}", relation=f"r{i}", object=f"o{i}")
        for i in range(len(profiles))
    )
    pick = lambda attr: frozenset(
        f"f{i}" for i, p in enumerate(profiles) if getattr(p, attr)
    )
    return AnnotatedFactUniverse(
        facts=facts,
        in_source=pick("in_src"),
        in_generation=pick("in_gen"),
        on_topic=pick("topic"),
        is_true=pick("true"),
        important=pick("imp"),
        contradicts_source=pick("cont"),
    )


def all_universes(max_facts):
    """Every valid universe with up to `max_facts` facts, up to renaming.

    The derived sets are defined pointwise (each fact's membership depends
    only on its own flags), so enumerating multisets of per-fact profiles
    is exhaustive over all flag assignments modulo fact relabelling.
    """
    profiles = valid_profiles()
    for k in range(max_facts + 1):
        for combo in combinations_with_replacement(profiles, k):
            yield universe_from_profiles(combo)


def brute_information_sets(universe):
    """Element-wise evaluation of the three information-error conditions."""
    topic_shift, faithfulness, factuality = set(), set(), set()
    for fact in universe.facts:
        fid = fact.id
        in_gen = fid in universe.in_generation
        on_topic = fid in universe.on_topic
        is_true = fid in universe.is_true
        contradicts = fid in universe.contradicts_source
        if in_gen and not on_topic:
            topic_shift.add(fid)
        if in_gen and on_topic and contradicts:
            faithfulness.add(fid)
        if in_gen and on_topic and not is_true and not contradicts:
            factuality.add(fid)
    return topic_shift, faithfulness, factuality


def brute_simplification_sets(universe):
    """Element-wise evaluation of the five simplification-set conditions."""
    out_of_scope, loss, summarization = set(), set(), set()
    clarification, potential = set(), set()
    for fact in universe.facts:
        fid = fact.id
        in_src = fid in universe.in_source
        in_gen = fid in universe.in_generation
        imp = fid in universe.important
        if in_gen and not imp:
            out_of_scope.add(fid)
        if in_src and imp and not in_gen:
            loss.add(fid)
        if in_src and not imp and not in_gen:
            summarization.add(fid)
        if in_gen and imp and not in_src:
            clarification.add(fid)
        if imp and not in_src and not in_gen:
            potential.add(fid)
    return out_of_scope, loss, summarization, clarification, potential


# -- agreement ----------------------------------------------------------------


def brute_cohen(a, b):
    """Pairwise kappa from an explicit 2x2 contingency table, in floats."""
    n = len(a)
    table = [[0, 0], [0, 0]]
    for x, y in zip(a, b):
        table[x][y] += 1
    p_observed = (table[0][0] + table[1][1]) / n
    a_marg = [(table[0][0] + table[0][1]) / n, (table[1][0] + table[1][1]) / n]
    b_marg = [(table[0][0] + table[1][0]) / n, (table[0][1] + table[1][1]) / n]
    p_expected = a_marg[0] * b_marg[0] + a_marg[1] * b_marg[1]
    if p_expected == 1.0:
        return 1.0
    return (p_observed - p_expected) / (1.0 - p_expected)


def brute_fleiss(matrix):
    """Multi-rater kappa from explicit per-item category counts, in floats."""
    n_items = len(matrix)
    n_raters = len(matrix[0])
    counts = [[row.count(0), row.count(1)] for row in matrix]
    p_items = [
        (c0 * (c0 - 1) + c1 * (c1 - 1)) / (n_raters * (n_raters - 1))
        for c0, c1 in counts
    ]
    p_mean = sum(p_items) / n_items
    totals = [sum(c[j] for c in counts) for j in (0, 1)]
    proportions = [t / (n_items * n_raters) for t in totals]
    p_expected = sum(p * p for p in proportions)
    if p_expected == 1.0:
        return 1.0
    return (p_mean - p_expected) / (1.0 - p_expected)


# -- detector metrics ---------------------------------------------------------


def brute_auroc(scores, labels):
    """O(n^2) all-pairs counting with half credit for ties."""
    positives = [s for s, y in zip(scores, labels) if y]
    negatives = [s for s, y in zip(scores, labels) if not y]
    wins = 0.0
    for p in positives:
        for q in negatives:
            if p > q:
                wins += 1.0
            elif p == q:
                wins += 0.5
    return wins / (len(positives) * len(negatives))


def brute_auprc(scores, labels):
    """Stepwise precision-recall area, thresholding at each distinct score."""
    n_pos = sum(labels)
    area = 0.0
    previous_recall = 0.0
    for threshold in sorted(set(scores), reverse=True):
        selected = [y for s, y in zip(scores, labels) if s >= threshold]
        true_positives = sum(selected)
        precision = true_positives / len(selected)
        recall = true_positives / n_pos
        area += (recall - previous_recall) * precision
        previous_recall = recall
    return area
