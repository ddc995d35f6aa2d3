"""SKOS thesaurus as Turtle, and the matching reader."""

from __future__ import annotations

from collections import defaultdict

from ..diagnostics import ChambersError
from ..grammar import Origin
from ..kos import (
    Concept,
    ConceptKind,
    ConceptScheme,
    Relation,
    RelationKind,
    check_scheme,
)
from .iri import IriPolicy, mint_iris
from .turtle import DCTERMS, RDF_TYPE, SKOS, Iri, Literal, OutsideProfile, TurtleWriter, boolean, iri, literal, read_triples


class SchemeInvalid(ChambersError):
    pass


PREDICATE_ORDER = (
    "a",
    "dcterms:identifier",
    "skos:prefLabel",
    "skos:altLabel",
    "skos:inScheme",
    "skos:topConceptOf",
    "skos:hasTopConcept",
    "skos:broader",
    "skos:narrower",
    "skos:related",
    "skos:editorialNote",
    "ck:kind",
    "ck:domain",
    "ck:origin",
    "ck:openEnded",
    "ck:connective",
)

_RELATION_PREDICATES = {
    RelationKind.BROADER: "skos:broader",
    RelationKind.NARROWER: "skos:narrower",
    RelationKind.RELATED: "skos:related",
}


def _prefixes(policy: IriPolicy) -> list[tuple[str, str]]:
    return [("ck", policy.vocab), ("dcterms", DCTERMS), ("skos", SKOS)]


def emit_skos(scheme: ConceptScheme, policy: IriPolicy, *, collapse_facets: bool = False) -> str:
    """Serialize *scheme* as Turtle, subjects sorted by IRI.

    With *collapse_facets*, facet concepts are not published: their members
    hang directly from the nearest non-facet ancestor and carry the facet
    label as an editorial note.  Collapsed output does not round-trip.
    """
    problems = check_scheme(scheme)
    if problems:
        raise SchemeInvalid(f"{len(problems)} problem(s), first: {problems[0].message}")
    iris = mint_iris(scheme, policy)
    w = TurtleWriter(_prefixes(policy), PREDICATE_ORDER)
    root = w.node(policy.scheme_iri)
    root.add("a", "skos:ConceptScheme")

    hidden = {c.id for c in scheme.concepts.values() if collapse_facets and c.kind is ConceptKind.FACET}

    def visible_parents(cid: str) -> tuple[list[str], list[str]]:
        """Nearest published broader concepts, and the facet labels skipped to reach them."""
        parents, skipped = [], []
        for b in scheme.broader(cid):
            if b in hidden:
                up, labels = visible_parents(b)
                parents += up
                skipped += labels + [scheme.concepts[b].pref_label]
            else:
                parents.append(b)
        return parents, skipped

    for c in scheme.ordered():
        if c.id in hidden:
            continue
        node = w.node(iris[c.id])
        node.add("a", "skos:Concept")
        node.add("dcterms:identifier", literal(c.id))
        node.add("skos:prefLabel", literal(c.pref_label, "en"))
        node.add("skos:inScheme", iri(policy.scheme_iri))
        if c.alt_labels:
            node.add("skos:altLabel", *(literal(a, "en") for a in c.alt_labels))
        if c.id in scheme.top_concepts:
            node.add("skos:topConceptOf", iri(policy.scheme_iri))
            root.add("skos:hasTopConcept", iri(iris[c.id]))
        notes = list(c.notes)
        if collapse_facets:
            parents, skipped = visible_parents(c.id)
            for p in parents:
                node.add("skos:broader", iri(iris[p]))
                w.node(iris[p]).add("skos:narrower", iri(iris[c.id]))
            notes += [f"facet: {label}" for label in skipped]
            for r in scheme.related(c.id):
                if r not in hidden:
                    node.add("skos:related", iri(iris[r]))
        else:
            for kind, pred in _RELATION_PREDICATES.items():
                targets = scheme.targets(c.id, kind)
                if targets:
                    node.add(pred, *(iri(iris[t]) for t in targets))
        if notes:
            node.add("skos:editorialNote", *(literal(n, "en") for n in notes))
        node.add("ck:kind", literal(c.kind.value))
        node.add("ck:domain", *(literal(d) for d in c.domains))
        node.add("ck:origin", literal(c.origin.value))
        node.add("ck:openEnded", boolean(c.open_ended))
        if c.connective is not None:
            node.add("ck:connective", literal(c.connective))
    return w.render()


_KNOWN = {
    RDF_TYPE,
    DCTERMS + "identifier",
    SKOS + "prefLabel",
    SKOS + "altLabel",
    SKOS + "inScheme",
    SKOS + "topConceptOf",
    SKOS + "hasTopConcept",
    SKOS + "broader",
    SKOS + "narrower",
    SKOS + "related",
    SKOS + "editorialNote",
}
_VOCAB_TERMS = ("kind", "domain", "origin", "openEnded", "connective")


def read_turtle_subset(text: str, source: str = "<string>") -> ConceptScheme:
    """Rebuild a scheme from Turtle written by :func:`emit_skos`.

    Anything outside that profile raises :class:`OutsideProfile`.
    """
    triples = read_triples(text, source)
    vocab_ns = None
    for s, p, o in triples:
        if p.endswith("#kind"):
            vocab_ns = p[: -len("kind")]
            break
    known = set(_KNOWN)
    if vocab_ns is not None:
        known.update(vocab_ns + t for t in _VOCAB_TERMS)
    unknown = sorted({p for _, p, _ in triples if p not in known})
    if unknown:
        raise OutsideProfile("unknown predicate(s): " + ", ".join(unknown), 0, 0, source)

    props: dict[str, dict[str, list]] = defaultdict(lambda: defaultdict(list))
    for s, p, o in triples:
        key = p[len(vocab_ns):] if vocab_ns and p.startswith(vocab_ns) else p.rsplit("#", 1)[-1].rsplit("/", 1)[-1]
        props[s][key].append(o)

    def one(subject: str, key: str, typ):
        values = props[subject].get(key, [])
        if len(values) != 1 or not isinstance(values[0], typ):
            raise OutsideProfile(f"{subject} needs exactly one {key} value", 0, 0, source)
        return values[0]

    ids: dict[str, str] = {}
    schemes = []
    for subject, pv in props.items():
        types = pv.get("type", [])
        if Iri(SKOS + "Concept") in types:
            ids[subject] = one(subject, "identifier", Literal).value
        elif Iri(SKOS + "ConceptScheme") in types:
            schemes.append(subject)
        else:
            raise OutsideProfile(f"{subject} is neither a skos:Concept nor a skos:ConceptScheme", 0, 0, source)
    if len(schemes) != 1:
        raise OutsideProfile(f"expected exactly one skos:ConceptScheme, found {len(schemes)}", 0, 0, source)

    def ref(value) -> str:
        if not isinstance(value, Iri) or value.value not in ids:
            raise OutsideProfile(f"reference to unknown concept {value!r}", 0, 0, source)
        return ids[value.value]

    concepts: dict[str, Concept] = {}
    relations: set[Relation] = set()
    tops: set[str] = set()
    for subject, cid in ids.items():
        pv = props[subject]
        try:
            kind = ConceptKind(one(subject, "kind", Literal).value)
            origin = Origin(one(subject, "origin", Literal).value)
        except ValueError as exc:
            raise OutsideProfile(str(exc), 0, 0, source) from None
        connective = pv.get("connective")
        concepts[cid] = Concept(
            id=cid,
            pref_label=one(subject, "prefLabel", Literal).value,
            kind=kind,
            domains=tuple(v.value for v in pv.get("domain", [])),
            alt_labels=frozenset(v.value for v in pv.get("altLabel", [])),
            origin=origin,
            open_ended=one(subject, "openEnded", bool),
            notes=tuple(sorted(v.value for v in pv.get("editorialNote", []))),
            connective=connective[0].value if connective else None,
        )
        for kind_, key in ((RelationKind.BROADER, "broader"), (RelationKind.NARROWER, "narrower"), (RelationKind.RELATED, "related")):
            relations.update(Relation(cid, ref(o), kind_) for o in pv.get(key, []))
        if pv.get("topConceptOf"):
            tops.add(cid)
    for o in props[schemes[0]].get("hasTopConcept", []):
        tops.add(ref(o))
    return ConceptScheme(concepts, frozenset(relations), frozenset(tops))
