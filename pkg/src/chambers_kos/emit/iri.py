"""Deterministic persistent identifiers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urlsplit

from ..diagnostics import ChambersError
from ..kos import Concept, ConceptScheme
from ..text import slugify


class EmptySlug(ChambersError):
    pass


class InvalidIri(ChambersError):
    pass


_FORBIDDEN = re.compile(r'[\s<>"{}|\\^`]')


@dataclass(frozen=True)
class IriPolicy:
    base_iri: str

    def __post_init__(self) -> None:
        base = self.base_iri
        parts = urlsplit(base)
        if not parts.scheme or not (parts.netloc or parts.scheme == "urn"):
            raise InvalidIri(f"base IRI {base!r} is not absolute")
        if _FORBIDDEN.search(base):
            raise InvalidIri(f"base IRI {base!r} contains characters not allowed in an IRI")
        if not base.endswith("/"):
            raise InvalidIri(f"base IRI {base!r} must end with '/'")

    @property
    def scheme_iri(self) -> str:
        return self.base_iri + "scheme"

    @property
    def ontology_iri(self) -> str:
        return self.base_iri + "ontology"

    @property
    def vocab(self) -> str:
        return self.base_iri + "vocab#"

    def taxon_iri(self, label: str) -> str:
        slug = slugify(label)
        if not slug:
            raise EmptySlug(f"taxonomy label {label!r} has no alphanumeric characters")
        return self.base_iri + "taxonomy#" + slug


def _stem(concept: Concept, policy: IriPolicy) -> str:
    if not concept.domains:
        raise ChambersError(f"concept {concept.id} has no domain")
    domain = slugify(concept.domains[0])
    label = slugify(concept.pref_label)
    if not domain:
        raise EmptySlug(f"domain {concept.domains[0]!r} of {concept.id} reduces to an empty slug")
    if not label:
        raise EmptySlug(f"label {concept.pref_label!r} of {concept.id} reduces to an empty slug")
    return f"{policy.base_iri}{domain}/{label}"


def mint_iri(concept: Concept, policy: IriPolicy, taken: set[str] | None = None) -> str:
    """``base + slug(domain) + "/" + slug(label)``, suffixed ``-2``, ``-3``...
    while the result is already in *taken* (which is updated)."""
    stem = _stem(concept, policy)
    iri, n = stem, 1
    if taken is not None:
        while iri in taken:
            n += 1
            iri = f"{stem}-{n}"
        taken.add(iri)
    return iri


def mint_iris(scheme: ConceptScheme, policy: IriPolicy) -> dict[str, str]:
    """IRIs for every concept, collisions resolved in build order."""
    taken: set[str] = set()
    return {c.id: mint_iri(c, policy, taken) for c in scheme.ordered()}
