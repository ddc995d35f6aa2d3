from .iri import EmptySlug, InvalidIri, IriPolicy, mint_iri, mint_iris
from .owl import JepdViolationInDirectMap, OwlStrategy, emit_owl
from .skos import SchemeInvalid, emit_skos, read_turtle_subset
from .turtle import OutsideProfile

__all__ = [
    "EmptySlug",
    "InvalidIri",
    "IriPolicy",
    "JepdViolationInDirectMap",
    "OutsideProfile",
    "OwlStrategy",
    "SchemeInvalid",
    "emit_owl",
    "emit_skos",
    "mint_iri",
    "mint_iris",
    "read_turtle_subset",
]
