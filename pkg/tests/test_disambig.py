import pytest

from chambers_kos.disambig import (
    ConflictingDecision,
    DecisionEntry,
    DecisionFileError,
    DecisionSet,
    Merge,
    Split,
    apply_decisions,
    load_decisions,
    parse_decisions,
)
from chambers_kos.grammar import parse_document
from chambers_kos.kos import build_scheme, check_scheme, find_homonyms, order_key
from chambers_kos.transcript import lex
from oracles import fixture, merge_rewrite, triples


def scheme_of(*names):
    out = []
    for name in names:
        out += parse_document(lex(fixture(name).read_text(encoding="utf-8"), name))
    return build_scheme(out)


def feast_ids(scheme):
    return sorted((c.id for c in scheme.concepts.values() if c.pref_label == "Feast"), key=order_key)


def test_merge_two_feasts():
    before = scheme_of("heathen.txt", "chronology.txt")
    group = feast_ids(before)
    assert len(group) == 2
    after, report = apply_decisions(before, load_decisions(fixture("feast_merge.tsv")))
    assert len(after.concepts) == len(before.concepts) - 1
    (merged,) = feast_ids(after)
    assert set(after.concepts[merged].domains) == {"CHRONOLOGY", "THEOLOGY"}
    assert len(after.broader(merged)) == 2
    ids, rels = merge_rewrite(before, group, min(group, key=order_key))
    assert set(after.concepts) == ids
    assert triples(after) == rels
    assert check_scheme(after) == []
    assert report.unresolved == []
    assert [label for label, _ in report.applied] == ["Feast"]


def test_applying_twice_is_a_noop():
    s = scheme_of("heathen.txt", "chronology.txt")
    decisions = load_decisions(fixture("feast_merge.tsv"))
    once, _ = apply_decisions(s, decisions)
    twice, report = apply_decisions(once, decisions)
    assert twice == once
    assert report.applied == []
    assert [label for label, _ in report.ignored] == ["Feast"]


def test_split_operations():
    s = scheme_of("operations.txt")
    after, report = apply_decisions(s, load_decisions(fixture("operations_split.tsv")))
    labels = sorted(c.pref_label for c in after.concepts.values() if c.pref_label.startswith("Operations"))
    assert labels == ["Operations (Geometry)", "Operations (Medicine)"]
    assert len(after.concepts) == len(s.concepts)
    assert report.unresolved == []
    again, _ = apply_decisions(after, load_decisions(fixture("operations_split.tsv")))
    assert again == after


def test_split_with_explicit_qualifiers():
    s = scheme_of("operations.txt")
    ids = sorted(c.id for c in s.concepts.values() if c.pref_label == "Operations")
    decisions = DecisionSet((DecisionEntry("Operations", Split({ids[0]: "Mensuration"})),))
    after, _ = apply_decisions(s, decisions)
    assert after.concepts[ids[0]].pref_label == "Operations (Mensuration)"
    assert after.concepts[ids[1]].pref_label == "Operations (Medicine)"


def test_empty_decisions_are_identity():
    s = scheme_of("heathen.txt", "chronology.txt")
    after, report = apply_decisions(s, DecisionSet())
    assert after == s
    assert report.unresolved == find_homonyms(s)


def test_unknown_label_is_reported_not_fatal():
    s = scheme_of("law.txt")
    after, report = apply_decisions(s, parse_decisions("Unicorn\tmerge\t\tnot in the text\n"))
    assert after == s
    assert report.unmatched == ["Unicorn"]


def test_merge_creating_cycle_conflicts():
    # a facet and its own instance share a label; merging would loop Broader
    s = build_scheme(parse_document(lex("@domain{X} roman{Gems, as} italic{Gems}, italic{Ruby}.")))
    with pytest.raises(ConflictingDecision):
        apply_decisions(s, DecisionSet((DecisionEntry("Gems", Merge("Gems")),)))


def test_headword_merge_refused():
    s = build_scheme(parse_document(lex("@domain{LAW} roman{Kinds, as} italic{Law}.")))
    with pytest.raises(ConflictingDecision):
        apply_decisions(s, DecisionSet((DecisionEntry("Law", Merge("Law")),)))


@pytest.mark.parametrize(
    "text",
    [
        "Feast\n",
        "Feast\tfold\t\t\n",
        "Feast\tsplit\tno-equals-sign\t\n",
        "Feast\tmerge\t\ta\nfeast\tmerge\t\tb\n",
    ],
)
def test_bad_decision_files(text):
    with pytest.raises(DecisionFileError):
        parse_decisions(text)


def test_tsv_parsing():
    d = parse_decisions("# comment\n\nFeast\tmerge\t\twhy\nOperations\tsplit\ta-1=Geometry; b-2=Surgery\tdiffer\n")
    assert d.entries[0] == DecisionEntry("Feast", Merge("Feast"), "why", 3)
    assert d.entries[1].action == Split({"a-1": "Geometry", "b-2": "Surgery"})
