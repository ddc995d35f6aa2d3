"""Concept scheme with BT/NT/RT relations built from parse trees."""

from __future__ import annotations

import enum
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping

from .diagnostics import ChambersError, Diagnostic, Severity
from .grammar import DomainParseTree, FacetNode, Origin
from .text import fold_key, slugify


class DuplicateHeadword(ChambersError):
    pass


class ConceptKind(enum.Enum):
    HEADWORD = "Headword"
    FACET = "Facet"
    INSTANCE = "Instance"


class RelationKind(enum.Enum):
    BROADER = "Broader"
    NARROWER = "Narrower"
    RELATED = "Related"


INVERSE = {
    RelationKind.BROADER: RelationKind.NARROWER,
    RelationKind.NARROWER: RelationKind.BROADER,
    RelationKind.RELATED: RelationKind.RELATED,
}

OPEN_ENDED_NOTE = "list open-ended: '&c.'"
INTERPOLATED_NOTE = "heading interpolated by the transcriber; not printed in the source"


@dataclass(frozen=True, slots=True)
class Concept:
    id: str
    pref_label: str
    kind: ConceptKind
    domains: tuple[str, ...]
    alt_labels: frozenset[str] = frozenset()
    origin: Origin = Origin.TEXTUAL
    open_ended: bool = False
    notes: tuple[str, ...] = ()
    connective: str | None = None

    def __post_init__(self) -> None:
        # canonical forms keep equality independent of construction order
        object.__setattr__(self, "domains", tuple(sorted(set(self.domains))))
        object.__setattr__(self, "alt_labels", frozenset(self.alt_labels))
        object.__setattr__(self, "notes", tuple(self.notes))


@dataclass(frozen=True, slots=True)
class Relation:
    subject: str
    object: str
    kind: RelationKind

    def sort_key(self):
        return (order_key(self.subject), self.kind.value, order_key(self.object))


_DIGITS = re.compile(r"(\d+)")


def order_key(concept_id: str):
    """Natural sort key; build order for ids minted by :func:`build_scheme`."""
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in _DIGITS.split(concept_id))


@dataclass(frozen=True)
class ConceptScheme:
    concepts: Mapping[str, Concept] = field(default_factory=dict)
    relations: frozenset[Relation] = frozenset()
    top_concepts: frozenset[str] = frozenset()

    def ordered(self) -> list[Concept]:
        return [self.concepts[k] for k in sorted(self.concepts, key=order_key)]

    @cached_property
    def _index(self) -> dict[tuple[str, RelationKind], list[str]]:
        index: dict[tuple[str, RelationKind], list[str]] = defaultdict(list)
        for r in self.relations:
            index[r.subject, r.kind].append(r.object)
        for targets in index.values():
            targets.sort(key=order_key)
        return index

    def targets(self, subject: str, kind: RelationKind) -> list[str]:
        return list(self._index.get((subject, kind), ()))

    def broader(self, concept_id: str) -> list[str]:
        return self.targets(concept_id, RelationKind.BROADER)

    def narrower(self, concept_id: str) -> list[str]:
        return self.targets(concept_id, RelationKind.NARROWER)

    def related(self, concept_id: str) -> list[str]:
        return self.targets(concept_id, RelationKind.RELATED)

    def count(self, kind: ConceptKind) -> int:
        return sum(1 for c in self.concepts.values() if c.kind is kind)

    def facet_path(self, concept_id: str) -> tuple[str, ...]:
        """Labels from the top concept down to the concept's parent."""
        path: list[str] = []
        seen = {concept_id}
        current = concept_id
        while True:
            parents = self.broader(current)
            if not parents or parents[0] in seen:
                break
            current = parents[0]
            seen.add(current)
            path.append(self.concepts[current].pref_label if current in self.concepts else current)
        return tuple(reversed(path))


def pair(a: str, b: str, kind: RelationKind) -> set[Relation]:
    """A relation together with its reciprocal."""
    return {Relation(a, b, kind), Relation(b, a, INVERSE[kind])}


def canonical_graph(scheme: ConceptScheme) -> frozenset[tuple]:
    """Order-free description of the scheme, used for isomorphism checks."""
    out: set[tuple] = set()
    for c in scheme.concepts.values():
        out.add((c.id, "prefLabel", c.pref_label))
        out.add((c.id, "kind", c.kind.value))
        out.add((c.id, "origin", c.origin.value))
        out.add((c.id, "openEnded", c.open_ended))
        if c.connective is not None:
            out.add((c.id, "connective", c.connective))
        out.update((c.id, "domain", d) for d in c.domains)
        out.update((c.id, "altLabel", a) for a in c.alt_labels)
        out.update((c.id, "note", n) for n in c.notes)
    out.update((r.subject, r.kind.value, r.object) for r in scheme.relations)
    out.update((t, "topConcept") for t in scheme.top_concepts)
    return frozenset(out)


def isomorphic(a: ConceptScheme, b: ConceptScheme) -> bool:
    return canonical_graph(a) == canonical_graph(b)


class _Builder:
    def __init__(self, tree: DomainParseTree) -> None:
        self.tree = tree
        self.prefix = slugify(tree.headword) or "entry"
        self.n = 0
        self.concepts: dict[str, Concept] = {}
        self.relations: set[Relation] = set()

    def next_id(self) -> str:
        cid = f"{self.prefix}-{self.n:04d}"
        self.n += 1
        return cid

    def add(self, **kwargs) -> str:
        cid = self.next_id()
        self.concepts[cid] = Concept(id=cid, domains=(self.tree.headword,), **kwargs)
        return cid

    def build(self) -> str:
        tree = self.tree
        head = self.add(
            pref_label=tree.headword,
            kind=ConceptKind.HEADWORD,
            alt_labels=frozenset({tree.alt_name} if tree.alt_name else ()),
            notes=tree.notes,
        )
        facet_keys = set()
        for node in tree.walk():
            facet_keys.add(fold_key(node.facet_label))
            facet_keys.update(fold_key(a) for a in node.alt_labels)
        for area in tree.scope_areas:
            if fold_key(area) in facet_keys:
                continue
            aspect = self.add(
                pref_label=area,
                kind=ConceptKind.FACET,
                notes=("entry-head aspect introduced by 'including'",),
            )
            self.relations |= pair(head, aspect, RelationKind.RELATED)
        scope_keys = {fold_key(a) for a in tree.scope_areas}
        for node in tree.facets:
            self.add_facet(node, head, scope_keys)
        return head

    def add_facet(self, node: FacetNode, parent: str, scope_keys: set[str]) -> None:
        notes: list[str] = []
        if node.connective:
            notes.append(f"connective: {node.connective!r}")
        if node.origin is Origin.INTERPOLATED:
            notes.append(INTERPOLATED_NOTE)
        if fold_key(node.facet_label) in scope_keys:
            notes.append("entry-head aspect introduced by 'including'")
        if node.ordinal_section is not None:
            notes.append(f"ordinal section {node.ordinal_section}")
        groups = node.group_count
        if groups == 1:
            if node.instances[0].open_ended:
                notes.append(OPEN_ENDED_NOTE)
        else:
            for g in range(1, groups + 1):
                members = [i for i in node.instances if i.group == g]
                tail = f"; {OPEN_ENDED_NOTE}" if members[0].open_ended else ""
                notes.append(f"grouping {g}: " + ", ".join(i.label for i in members) + tail)
        notes.extend(node.notes)
        fid = self.add(
            pref_label=node.facet_label,
            kind=ConceptKind.FACET,
            alt_labels=frozenset(node.alt_labels),
            origin=node.origin,
            open_ended=any(i.open_ended for i in node.instances),
            notes=tuple(notes),
            connective=node.connective or None,
        )
        self.relations |= pair(fid, parent, RelationKind.BROADER)
        for inst in node.instances:
            iid = self.add(
                pref_label=inst.label,
                kind=ConceptKind.INSTANCE,
                open_ended=inst.open_ended,
                notes=(f"emendation: {inst.emendation}",) if inst.emendation else (),
            )
            self.relations |= pair(iid, fid, RelationKind.BROADER)
        for child in node.children:
            self.add_facet(child, fid, scope_keys)


def build_scheme(trees: Iterable[DomainParseTree]) -> ConceptScheme:
    """Turn parse trees into a concept scheme.

    Entries are processed in headword order so identifiers do not depend
    on the order the trees were supplied in.
    """
    trees = sorted(trees, key=lambda t: (fold_key(t.headword), t.headword))
    seen: dict[str, DomainParseTree] = {}
    for tree in trees:
        for key in {("label", fold_key(tree.headword)), ("slug", slugify(tree.headword) or "entry")}:
            if key in seen:
                other = seen[key]
                raise DuplicateHeadword(
                    f"headword {tree.headword!r} duplicates {other.headword!r} ({other.source_name}:{other.line})",
                    tree.line,
                    tree.col,
                    tree.source_name,
                )
            seen[key] = tree
    concepts: dict[str, Concept] = {}
    relations: set[Relation] = set()
    tops = set()
    for tree in trees:
        b = _Builder(tree)
        tops.add(b.build())
        concepts.update(b.concepts)
        relations |= b.relations
    return ConceptScheme(concepts, frozenset(relations), frozenset(tops))


def broader_cycle(relations: Iterable[Relation]) -> list[str] | None:
    graph: dict[str, set[str]] = defaultdict(set)
    for r in relations:
        if r.kind is RelationKind.BROADER:
            graph[r.subject].add(r.object)
    try:
        TopologicalSorter(graph).prepare()
    except CycleError as exc:
        return list(exc.args[1])
    return None


def check_scheme(scheme: ConceptScheme) -> list[Diagnostic]:
    """Thesaurus well-formedness checks; an empty list means the scheme is sound."""
    diags: list[Diagnostic] = []

    def err(code: str, message: str) -> None:
        diags.append(Diagnostic(Severity.ERROR, message, code=code))

    concepts = scheme.concepts
    for cid, c in sorted(concepts.items(), key=lambda kv: order_key(kv[0])):
        if c.id != cid:
            err("IdMismatch", f"concept stored under {cid!r} has id {c.id!r}")
        if not c.pref_label.strip():
            err("EmptyLabel", f"concept {cid} has an empty prefLabel")
        if not c.domains:
            err("NoDomain", f"concept {cid} belongs to no domain")
        if c.kind is ConceptKind.HEADWORD and len(c.domains) != 1:
            err("HeadwordDomain", f"headword {cid} must belong to exactly its own domain")
    rels = scheme.relations
    for r in sorted(rels, key=Relation.sort_key):
        if r.subject not in concepts or r.object not in concepts:
            err("DanglingReference", f"{r.kind.value}({r.subject}, {r.object}) references a missing concept")
        if r.subject == r.object:
            err("SelfRelation", f"{r.kind.value}({r.subject}, {r.object}) relates a concept to itself")
        mirror = Relation(r.object, r.subject, INVERSE[r.kind])
        if mirror not in rels:
            code = "RelatedAsymmetric" if r.kind is RelationKind.RELATED else "ReciprocityBroken"
            err(code, f"{r.kind.value}({r.subject}, {r.object}) lacks {mirror.kind.value}({mirror.subject}, {mirror.object})")
    cycle = broader_cycle(rels)
    if cycle:
        err("BroaderCycle", "broader hierarchy has a cycle: " + " -> ".join(cycle))
    for t in sorted(scheme.top_concepts, key=order_key):
        c = concepts.get(t)
        if c is None:
            err("DanglingReference", f"top concept {t} is not in the scheme")
        elif c.kind is not ConceptKind.HEADWORD:
            err("TopConceptKind", f"top concept {t} is a {c.kind.value}, not a headword")
        elif scheme.broader(t):
            err("TopConceptBroader", f"top concept {t} has a broader concept")
    for c in concepts.values():
        if c.kind is ConceptKind.HEADWORD and c.id not in scheme.top_concepts:
            err("HeadwordNotTop", f"headword {c.id} is not a top concept")
    reached = set(scheme.top_concepts)
    queue = deque(reached)
    narrower: dict[str, list[str]] = defaultdict(list)
    for r in rels:
        if r.kind is RelationKind.NARROWER:
            narrower[r.subject].append(r.object)
    while queue:
        for nxt in narrower[queue.popleft()]:
            if nxt not in reached:
                reached.add(nxt)
                queue.append(nxt)
    related_to_top = {r.subject for r in rels if r.kind is RelationKind.RELATED and r.object in scheme.top_concepts}
    for cid in sorted(set(concepts) - reached - related_to_top, key=order_key):
        err("Unreachable", f"concept {cid} ({concepts[cid].pref_label!r}) is not reachable from any top concept")
    return diags


@dataclass(frozen=True, slots=True)
class Occurrence:
    concept_id: str
    domain: str
    facet_path: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class AmbiguityRecord:
    label: str
    occurrences: tuple[Occurrence, ...]


def label_key(label: str) -> str:
    return " ".join(label.split()).casefold()


def find_homonyms(scheme: ConceptScheme) -> list[AmbiguityRecord]:
    """One record per case-folded prefLabel carried by two or more concepts."""
    groups: dict[str, list[Concept]] = defaultdict(list)
    for c in scheme.ordered():
        groups[label_key(c.pref_label)].append(c)
    records = []
    for key in sorted(groups):
        members = groups[key]
        if len(members) < 2:
            continue
        occ = tuple(Occurrence(c.id, ", ".join(c.domains), scheme.facet_path(c.id)) for c in members)
        records.append(AmbiguityRecord(members[0].pref_label, occ))
    return records
