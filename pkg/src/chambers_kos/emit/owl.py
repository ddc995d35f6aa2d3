"""OWL 2 ontology (Turtle) from the taxonomy plus the concept scheme.

``DirectMap`` mirrors the tree: the root is equivalent to ``owl:Thing``,
children are subclasses, siblings are pairwise disjoint, and each domain
vocabulary hangs under its linked leaf class.  It refuses any input on
which that disjointness would be inconsistent.

``AxiomBased`` keeps the same classes but states no disjointness, lets a
label that occurs under several parents become one class with several
superclasses, and annotates classes with dividing principles and
connectives.
"""

from __future__ import annotations

import enum
from itertools import combinations

from ..diagnostics import ChambersError
from ..kos import ConceptKind, ConceptScheme, RelationKind, check_scheme
from ..taxonomy import LeafLinkReport, TaxonomyTree, link_leaves, validate_jepd
from .iri import IriPolicy, mint_iris
from .skos import SchemeInvalid
from .turtle import OWL, RDFS, SKOS, TurtleWriter, iri, literal


class OwlStrategy(enum.Enum):
    DIRECT_MAP = "DirectMap"
    AXIOM_BASED = "AxiomBased"


class JepdViolationInDirectMap(ChambersError):
    pass


PREDICATE_ORDER = (
    "a",
    "rdfs:label",
    "owl:equivalentClass",
    "rdfs:subClassOf",
    "owl:disjointWith",
    "rdfs:seeAlso",
    "ck:dividingPrinciple",
    "ck:connective",
    "ck:strategy",
    "rdfs:comment",
)

ANNOTATION_PROPERTIES = ("connective", "dividingPrinciple", "strategy")


def _refuse_direct_map(tree: TaxonomyTree, scheme: ConceptScheme, links: LeafLinkReport, policy: IriPolicy) -> None:
    violations = validate_jepd(tree)
    if violations:
        raise JepdViolationInDirectMap(
            "DirectMap needs pairwise-disjoint leaves; validate_jepd reports "
            + "; ".join(v.describe() for v in violations)
        )
    seen: dict[str, tuple[str, ...]] = {}
    for node, path in tree.nodes():
        key = policy.taxon_iri(node.label)
        if key in seen:
            raise JepdViolationInDirectMap(
                f"taxonomy label {node.label!r} names two classes: {'/'.join(seen[key])} and {'/'.join(path)}"
            )
        seen[key] = path
    # a concept under two leaves would be subsumed by two disjoint classes
    head_leaf = {cid: label for label, cid in links.matched}
    for c in scheme.ordered():
        leaves = sorted(_leaves_above(scheme, c.id, head_leaf))
        if len(leaves) > 1:
            raise JepdViolationInDirectMap(
                f"concept {c.id} ({c.pref_label!r}) falls under disjoint leaves {', '.join(leaves)}"
            )


def _leaves_above(scheme: ConceptScheme, cid: str, head_leaf: dict[str, str]) -> set[str]:
    found, stack, seen = set(), [cid], {cid}
    while stack:
        cur = stack.pop()
        if cur in head_leaf:
            found.add(head_leaf[cur])
        for b in scheme.broader(cur):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return found


def emit_owl(
    scheme: ConceptScheme,
    tree: TaxonomyTree,
    strategy: OwlStrategy,
    policy: IriPolicy,
    links: LeafLinkReport | None = None,
) -> str:
    problems = check_scheme(scheme)
    if problems:
        raise SchemeInvalid(f"{len(problems)} problem(s), first: {problems[0].message}")
    if links is None:
        links = link_leaves(tree, scheme)
    direct = strategy is OwlStrategy.DIRECT_MAP
    if direct:
        _refuse_direct_map(tree, scheme, links, policy)

    w = TurtleWriter(
        [("ck", policy.vocab), ("owl", OWL), ("rdfs", RDFS), ("skos", SKOS)],
        PREDICATE_ORDER,
    )
    onto = w.node(policy.ontology_iri)
    onto.add("a", "owl:Ontology")
    onto.add("ck:strategy", literal(strategy.value))
    for prop in ANNOTATION_PROPERTIES:
        w.node(policy.vocab + prop, f"ck:{prop}").add("a", "owl:AnnotationProperty")

    for node, path in tree.nodes():
        cls = w.node(policy.taxon_iri(node.label))
        cls.add("a", "owl:Class")
        cls.add("rdfs:label", literal(node.label, "en"))
        if len(path) == 1:
            if direct:
                cls.add("owl:equivalentClass", "owl:Thing")
        else:
            cls.add("rdfs:subClassOf", iri(policy.taxon_iri(path[-2])))
        if node.dividing_principle and not direct:
            cls.add("ck:dividingPrinciple", literal(node.dividing_principle, "en"))
        if direct:
            for a, b in combinations(sorted({policy.taxon_iri(c.label) for c in node.children}), 2):
                w.node(a).add("owl:disjointWith", iri(b))

    iris = mint_iris(scheme, policy)
    leaf_of = {cid: policy.taxon_iri(label) for label, cid in links.matched}
    class_of = {cid: leaf_of.get(cid, iris[cid]) for cid in iris}
    root_iri = policy.taxon_iri(tree.root.label)
    for c in scheme.ordered():
        if c.kind is ConceptKind.HEADWORD:
            if c.id in leaf_of:
                w.node(leaf_of[c.id]).add("rdfs:seeAlso", iri(iris[c.id]))
                continue
            cls = w.node(iris[c.id])
            cls.add("rdfs:subClassOf", iri(root_iri))
            cls.add("rdfs:comment", literal("domain headword not linked to a taxonomy leaf", "en"))
        else:
            cls = w.node(iris[c.id])
            for b in scheme.broader(c.id):
                cls.add("rdfs:subClassOf", iri(class_of[b]))
            for r in scheme.targets(c.id, RelationKind.RELATED):
                cls.add("rdfs:seeAlso", iri(class_of[r]))
            if c.connective and not direct:
                cls.add("ck:connective", literal(c.connective))
        cls.add("a", "owl:Class")
        cls.add("rdfs:label", literal(c.pref_label, "en"))
        if c.notes:
            cls.add("rdfs:comment", *(literal(n, "en") for n in c.notes))
    return w.render()
