import pytest
import rdflib
from hypothesis import assume, given, settings
from rdflib.namespace import OWL, RDFS, SKOS

from chambers_kos.emit import (
    EmptySlug,
    InvalidIri,
    IriPolicy,
    JepdViolationInDirectMap,
    OutsideProfile,
    OwlStrategy,
    SchemeInvalid,
    emit_owl,
    emit_skos,
    mint_iri,
    mint_iris,
    read_turtle_subset,
)
from chambers_kos.grammar import parse_document
from chambers_kos.kos import INTERPOLATED_NOTE, Concept, ConceptKind, ConceptScheme, Relation, RelationKind, build_scheme, isomorphic
from chambers_kos.taxonomy import load_taxonomy, parse_taxonomy
from chambers_kos.transcript import lex
from oracles import fixture, transcription

BASE = "https://example.org/chambers/"
POLICY = IriPolicy(BASE)


def scheme_of(*names):
    out = []
    for name in names:
        out += parse_document(lex(fixture(name).read_text(encoding="utf-8"), name))
    return build_scheme(out)


ALL = ("minerology.txt", "heathen.txt", "law.txt")


def concept(cid, label, domain, kind=ConceptKind.INSTANCE):
    return Concept(cid, label, kind, (domain,))


@pytest.mark.parametrize(
    "label, domain, tail",
    [("Phænomena", "MINEROLOGY", "minerology/phaenomena"), ("Senatus-consultum", "LAW", "law/senatus-consultum"),
     ("publish'd", "LAW", "law/publishd"), ("Cornu Ammonis", "MINEROLOGY", "minerology/cornu-ammonis")],
)
def test_mint_iri(label, domain, tail):
    assert mint_iri(concept("x-0001", label, domain), POLICY) == BASE + tail


def test_collisions_get_suffixes_in_build_order():
    a, b = concept("x-0001", "Feast", "X"), concept("x-0002", "Feast", "X")
    s = ConceptScheme({"x-0001": a, "x-0002": b})
    iris = mint_iris(s, POLICY)
    assert (iris["x-0001"], iris["x-0002"]) == (BASE + "x/feast", BASE + "x/feast-2")


def test_empty_slug_and_bad_base():
    with pytest.raises(EmptySlug):
        mint_iri(concept("x-0001", "&", "X"), POLICY)
    with pytest.raises(InvalidIri):
        IriPolicy("not an iri")


def test_minting_is_stable():
    s = scheme_of(*ALL)
    assert mint_iris(s, POLICY) == mint_iris(scheme_of(*ALL), POLICY)


def test_skos_mountain_broader_parts():
    ttl = emit_skos(scheme_of("minerology.txt"), POLICY)
    g = rdflib.Graph().parse(data=ttl, format="turtle")
    mountain = rdflib.URIRef(BASE + "minerology/mountain")
    parts = rdflib.URIRef(BASE + "minerology/parts")
    assert (mountain, SKOS.broader, parts) in g
    assert (parts, SKOS.narrower, mountain) in g


def test_empty_scheme_has_only_the_scheme_node():
    g = rdflib.Graph().parse(data=emit_skos(ConceptScheme(), POLICY), format="turtle")
    assert set(g.subjects()) == {rdflib.URIRef(BASE + "scheme")}
    assert (rdflib.URIRef(BASE + "scheme"), rdflib.RDF.type, SKOS.ConceptScheme) in g


def test_round_trip_and_reciprocity_in_output():
    s = scheme_of(*ALL)
    ttl = emit_skos(s, POLICY)
    assert isomorphic(read_turtle_subset(ttl), s)
    g = rdflib.Graph().parse(data=ttl, format="turtle")
    for a, _, b in g.triples((None, SKOS.broader, None)):
        assert (b, SKOS.narrower, a) in g
    assert len(list(g.subjects(rdflib.RDF.type, SKOS.Concept))) == len(s.concepts)


def test_output_carries_provenance_and_open_ended_markers():
    g = rdflib.Graph().parse(data=emit_skos(scheme_of("heathen.txt"), POLICY), format="turtle")
    ck = rdflib.Namespace(BASE + "vocab#")
    rites = rdflib.URIRef(BASE + "theology/rites")
    assert (rites, ck.origin, rdflib.Literal("Interpolated")) in g
    assert rdflib.Literal(INTERPOLATED_NOTE, lang="en") in set(g.objects(rites, SKOS.editorialNote))
    assert (rdflib.URIRef(BASE + "theology/genius"), ck.openEnded, rdflib.Literal(True)) in g


def test_skos_byte_determinism():
    assert emit_skos(scheme_of(*ALL), POLICY) == emit_skos(scheme_of(*reversed(ALL)), POLICY)


def test_invalid_scheme_is_refused():
    bad = ConceptScheme({"a": concept("a", "A", "X")}, frozenset({Relation("a", "b", RelationKind.BROADER)}))
    with pytest.raises(SchemeInvalid):
        emit_skos(bad, POLICY)


@pytest.mark.parametrize("text", ["<a> <b> .", "<a> <b> <c>", '@prefix x <y> .', "<a> <b> [ <c> <d> ] ."])
def test_malformed_turtle(text):
    with pytest.raises(OutsideProfile):
        read_turtle_subset(text)


def test_unknown_predicate_is_named():
    ttl = emit_skos(scheme_of("law.txt"), POLICY)
    ttl += f"\n<{BASE}law/act> <http://example.org/mystery> \"x\" .\n"
    with pytest.raises(OutsideProfile, match="http://example.org/mystery"):
        read_turtle_subset(ttl)


def test_collapsed_facets_hide_facet_nodes():
    g = rdflib.Graph().parse(data=emit_skos(scheme_of("law.txt"), POLICY, collapse_facets=True), format="turtle")
    act = rdflib.URIRef(BASE + "law/act")
    assert (act, SKOS.broader, rdflib.URIRef(BASE + "law/law")) in g
    assert (rdflib.URIRef(BASE + "law/publishd"), None, None) not in g


@settings(max_examples=60, deadline=None)
@given(transcription())
def test_random_round_trip(src):
    ts = parse_document(lex(src))
    assume(len({t.headword for t in ts}) == len(ts))
    s = build_scheme(ts)
    ttl = emit_skos(s, POLICY)
    assert isomorphic(read_turtle_subset(ttl), s)
    assert ttl == emit_skos(build_scheme(parse_document(lex(src))), POLICY)
    rdflib.Graph().parse(data=ttl, format="turtle")


# --- OWL -----------------------------------------------------------------------

CLEAN = "Knowledge\n  Natural\n    Minerology\n  Artificial\n    Theology\n"
DUPLICATED = "Knowledge\n  Natural\n    Minerology\n    Optics\n  Artificial\n    Theology\n    Optics\n"


def owl_graph(text):
    return rdflib.Graph().parse(data=text, format="turtle")


def taxon(label):
    return rdflib.URIRef(BASE + "taxonomy#" + label.lower())


def test_direct_map_disjoint_siblings():
    g = owl_graph(emit_owl(scheme_of("minerology.txt", "heathen.txt"), parse_taxonomy(CLEAN), OwlStrategy.DIRECT_MAP, POLICY))
    disjoint = {frozenset((a, b)) for a, _, b in g.triples((None, OWL.disjointWith, None))}
    assert disjoint == {frozenset((taxon("Natural"), taxon("Artificial")))}
    assert (taxon("Knowledge"), OWL.equivalentClass, OWL.Thing) in g
    assert (rdflib.URIRef(BASE + "minerology/parts"), RDFS.subClassOf, taxon("Minerology")) in g


def test_direct_map_refuses_duplicated_leaf():
    with pytest.raises(JepdViolationInDirectMap, match="Optics"):
        emit_owl(scheme_of("minerology.txt"), parse_taxonomy(DUPLICATED), OwlStrategy.DIRECT_MAP, POLICY)


def test_axiom_based_polyhierarchy():
    text = emit_owl(scheme_of("minerology.txt"), parse_taxonomy(DUPLICATED), OwlStrategy.AXIOM_BASED, POLICY)
    g = owl_graph(text)
    assert set(g.objects(taxon("Optics"), RDFS.subClassOf)) == {taxon("Natural"), taxon("Artificial")}
    assert not list(g.triples((None, OWL.disjointWith, None)))
    ck = rdflib.Namespace(BASE + "vocab#")
    assert (rdflib.URIRef(BASE + "minerology/parts"), ck.connective, rdflib.Literal("Its Parts, as")) in g


def test_direct_map_class_count():
    scheme = scheme_of("minerology.txt", "heathen.txt")
    tree = parse_taxonomy(CLEAN)
    g = owl_graph(emit_owl(scheme, tree, OwlStrategy.DIRECT_MAP, POLICY))
    classes = set(g.subjects(rdflib.RDF.type, OWL.Class))
    non_head = len(scheme.concepts) - len(scheme.top_concepts)
    assert len(classes) == len(tree.nodes()) + non_head


def test_owl_is_deterministic():
    tree = load_taxonomy(fixture("sample_taxonomy.txt"))
    a = emit_owl(scheme_of(*ALL), tree, OwlStrategy.AXIOM_BASED, POLICY)
    b = emit_owl(scheme_of(*reversed(ALL)), tree, OwlStrategy.AXIOM_BASED, POLICY)
    assert a == b
