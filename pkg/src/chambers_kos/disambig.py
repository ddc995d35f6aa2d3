"""Apply human merge/split decisions to homonymous concepts.

Decisions are data, never inferred.  The decisions file is tab-separated::

    # label	action	target_or_qualifiers	rationale
    Feast	merge	Feast	same rite in both vocabularies
    Operations	split	geometry-0007=Geometry;medicine-0012=Medicine	unrelated senses

A split with an empty third column qualifies every occurrence by its
domain headword.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union

from .diagnostics import ChambersError
from .grammar import Origin
from .kos import (
    AmbiguityRecord,
    Concept,
    ConceptKind,
    ConceptScheme,
    Relation,
    RelationKind,
    broader_cycle,
    find_homonyms,
    label_key,
    order_key,
)
from .text import display_case


class DecisionFileError(ChambersError):
    pass


class ConflictingDecision(ChambersError):
    pass


@dataclass(frozen=True, slots=True)
class Merge:
    target_label: str

    def describe(self) -> str:
        return f"merge -> {self.target_label!r}"


@dataclass(frozen=True, slots=True)
class Split:
    discriminators: Mapping[str, str] = field(default_factory=dict)

    def describe(self) -> str:
        if not self.discriminators:
            return "split by domain"
        return "split " + "; ".join(f"{k}={v}" for k, v in sorted(self.discriminators.items()))


@dataclass(frozen=True, slots=True)
class DecisionEntry:
    label: str
    action: Union[Merge, Split]
    rationale: str = ""
    line: int = 0

    def __post_init__(self) -> None:
        if not self.label.strip():
            raise DecisionFileError("decision label is empty", self.line)
        if isinstance(self.action, Merge) and not self.action.target_label.strip():
            raise DecisionFileError(f"merge of {self.label!r} has an empty target label", self.line)


@dataclass(frozen=True)
class DecisionSet:
    entries: tuple[DecisionEntry, ...] = ()
    source_file: str = ""

    def __post_init__(self) -> None:
        seen: dict[str, DecisionEntry] = {}
        for e in self.entries:
            key = label_key(e.label)
            if key in seen:
                raise DecisionFileError(
                    f"second decision for {e.label!r} (first on line {seen[key].line})", e.line, 0, self.source_file
                )
            seen[key] = e


def parse_decisions(text: str, source_file: str = "<string>") -> DecisionSet:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = raw.split("\t")
        if len(cols) < 2:
            raise DecisionFileError("expected tab-separated columns: label, action, target_or_qualifiers, rationale", lineno, 1, source_file)
        cols += [""] * (4 - len(cols))
        label, action, arg, rationale = (c.strip() for c in cols[:4])
        if len(cols) > 4:
            rationale = "\t".join(c.strip() for c in cols[3:])
        action = action.casefold()
        if action == "merge":
            act: Merge | Split = Merge(arg or label)
        elif action == "split":
            quals: dict[str, str] = {}
            for item in filter(None, (p.strip() for p in arg.split(";"))):
                cid, sep, qual = item.partition("=")
                if not sep or not cid.strip() or not qual.strip():
                    raise DecisionFileError(f"bad qualifier {item!r} (expected conceptId=qualifier)", lineno, 1, source_file)
                quals[cid.strip()] = qual.strip()
            act = Split(quals)
        else:
            raise DecisionFileError(f"unknown action {action!r} (expected merge or split)", lineno, 1, source_file)
        try:
            entries.append(DecisionEntry(label, act, rationale, lineno))
        except DecisionFileError as exc:
            exc.file = source_file
            raise
    return DecisionSet(tuple(entries), source_file)


def load_decisions(path: str | Path) -> DecisionSet:
    return parse_decisions(Path(path).read_text(encoding="utf-8"), str(path))


@dataclass
class ApplicationReport:
    applied: list[tuple[str, str]] = field(default_factory=list)
    ignored: list[tuple[str, str]] = field(default_factory=list)
    unmatched: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    unresolved: list[AmbiguityRecord] = field(default_factory=list)


def _merge(concepts: dict[str, Concept], relations: set[Relation], group: list[str], entry: DecisionEntry) -> None:
    members = [concepts[cid] for cid in group]
    if any(c.kind is ConceptKind.HEADWORD for c in members):
        raise ConflictingDecision(f"merge of {entry.label!r} would fold a domain headword", entry.line)
    survivor, *others = members
    target = entry.action.target_label
    alt = set().union(*(c.alt_labels for c in members)) | {c.pref_label for c in members}
    alt.discard(target)
    notes = list(dict.fromkeys(n for c in members for n in c.notes))
    notes.append(f"merged {', '.join(group)}" + (f": {entry.rationale}" if entry.rationale else ""))
    concepts[survivor.id] = Concept(
        id=survivor.id,
        pref_label=target,
        kind=ConceptKind.FACET if any(c.kind is ConceptKind.FACET for c in members) else ConceptKind.INSTANCE,
        domains=tuple(d for c in members for d in c.domains),
        alt_labels=frozenset(alt),
        origin=Origin.TEXTUAL if any(c.origin is Origin.TEXTUAL for c in members) else Origin.INTERPOLATED,
        open_ended=any(c.open_ended for c in members),
        notes=tuple(notes),
        connective=next((c.connective for c in members if c.connective), None),
    )
    gone = {c.id for c in others}
    for cid in gone:
        del concepts[cid]
    rewritten = set()
    for r in relations:
        s = survivor.id if r.subject in gone else r.subject
        o = survivor.id if r.object in gone else r.object
        if s == o:
            if r.kind is RelationKind.RELATED:
                continue
            raise ConflictingDecision(f"merge of {entry.label!r} would make a concept broader than itself", entry.line)
        rewritten.add(Relation(s, o, r.kind))
    cycle = broader_cycle(rewritten)
    if cycle:
        raise ConflictingDecision(f"merge of {entry.label!r} would create a broader cycle: {' -> '.join(cycle)}", entry.line)
    relations.clear()
    relations.update(rewritten)


def apply_decisions(scheme: ConceptScheme, decisions: DecisionSet) -> tuple[ConceptScheme, ApplicationReport]:
    """Return a new scheme with the decisions applied; *scheme* is left untouched.

    Raises :class:`ConflictingDecision` when a merge would break the hierarchy.
    """
    concepts = dict(scheme.concepts)
    relations = set(scheme.relations)
    report = ApplicationReport()

    def occurrences(label: str) -> list[str]:
        key = label_key(label)
        return sorted((cid for cid, c in concepts.items() if label_key(c.pref_label) == key), key=order_key)

    for entry in decisions.entries:
        group = occurrences(entry.label)
        action = entry.action
        if isinstance(action, Merge):
            if len(group) >= 2:
                _merge(concepts, relations, group, entry)
                report.applied.append((entry.label, action.describe()))
            elif len(group) == 1:
                report.ignored.append((entry.label, "single occurrence; nothing to merge"))
            elif occurrences(action.target_label):
                report.ignored.append((entry.label, "already merged"))
            else:
                report.unmatched.append(entry.label)
        else:
            if len(group) >= 2:
                for cid in set(action.discriminators) - set(group):
                    report.warnings.append(f"split of {entry.label!r}: {cid} is not an occurrence of the label")
                for cid in group:
                    c = concepts[cid]
                    qualifier = action.discriminators.get(cid) or display_case(c.domains[0])
                    concepts[cid] = Concept(
                        id=c.id,
                        pref_label=f"{c.pref_label} ({qualifier})",
                        kind=c.kind,
                        domains=c.domains,
                        alt_labels=c.alt_labels,
                        origin=c.origin,
                        open_ended=c.open_ended,
                        notes=c.notes,
                        connective=c.connective,
                    )
                report.applied.append((entry.label, action.describe()))
            elif len(group) == 1:
                report.ignored.append((entry.label, "single occurrence; nothing to split"))
            elif any(label_key(c.pref_label).startswith(label_key(entry.label) + " (") for c in concepts.values()):
                report.ignored.append((entry.label, "already split"))
            else:
                report.unmatched.append(entry.label)

    tops = frozenset(t for t in scheme.top_concepts if t in concepts)
    result = ConceptScheme(concepts, frozenset(relations), tops)
    report.unresolved = find_homonyms(result)
    return result, report
