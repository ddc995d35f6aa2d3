"""Byte-deterministic Turtle writing, and a reader for the writer's own profile.

The profile: ``@prefix`` lines, then one block per subject with a full
``<IRI>`` or prefixed-name subject, ``;``/``,`` separated predicate/object
lists, objects that are IRIs, prefixed names, ``"strings"`` with an
optional language tag, or ``true``/``false``.  No blank nodes, no
collections, no ``@base``, no numeric literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from ..diagnostics import ChambersError


class OutsideProfile(ChambersError):
    pass


RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
SKOS = "http://www.w3.org/2004/02/skos/core#"
DCTERMS = "http://purl.org/dc/terms/"
RDF_TYPE = RDF + "type"

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t", "'": "'", "b": "\b", "f": "\f"}


def literal(value: str, lang: str | None = None) -> str:
    body = "".join(_ESCAPES.get(ch, ch) for ch in value)
    return f'"{body}"@{lang}' if lang else f'"{body}"'


def iri(value: str) -> str:
    return f"<{value}>"


def boolean(value: bool) -> str:
    return "true" if value else "false"


@dataclass
class Node:
    """One subject block.  *subject* is the full IRI (used for sorting)."""

    subject: str
    rendered: str
    predicates: dict[str, set[str]]

    def add(self, predicate: str, *objects: str) -> None:
        self.predicates.setdefault(predicate, set()).update(objects)


class TurtleWriter:
    def __init__(self, prefixes: Sequence[tuple[str, str]], predicate_order: Sequence[str]) -> None:
        self.prefixes = sorted(prefixes)
        self.order = {p: i for i, p in enumerate(predicate_order)}
        self.nodes: dict[str, Node] = {}

    def node(self, subject: str, rendered: str | None = None) -> Node:
        if subject not in self.nodes:
            self.nodes[subject] = Node(subject, rendered or iri(subject), {})
        return self.nodes[subject]

    def render(self) -> str:
        out = [f"@prefix {p}: <{ns}> ." for p, ns in self.prefixes]
        for subject in sorted(self.nodes):
            node = self.nodes[subject]
            preds = sorted(node.predicates, key=lambda p: (self.order.get(p, len(self.order)), p))
            lines = []
            for p in preds:
                objs = sorted(node.predicates[p])
                lines.append(f"    {p} " + " ,\n        ".join(objs))
            out.append("")
            out.append(node.rendered + "\n" + " ;\n".join(lines) + " .")
        return "\n".join(out) + "\n"


@dataclass(frozen=True, slots=True)
class Iri:
    value: str


@dataclass(frozen=True, slots=True)
class Literal:
    value: str
    lang: str | None = None


Term = Iri | Literal | bool


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\\n]|\\.)*")(?:@(?P<lang>[A-Za-z]+(?:-[A-Za-z0-9]+)*))?
  | (?P<prefix_kw>@prefix\b)
  | (?P<bool>true|false)(?![\w:-])
  | (?P<a>a)(?![\w:-])
  | (?P<prefix>[A-Za-z][\w.-]*)?:(?P<local>[\w-]*)
  | (?P<punct>[;,.])
    """,
    re.VERBOSE,
)


_KINDS = ("ws", "iri", "string", "prefix_kw", "bool", "a", "pname", "punct")


def _tokens(text: str, source: str):
    pos, line = 0, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            snippet = text[pos : pos + 20].split("\n")[0]
            raise OutsideProfile(f"unexpected input {snippet!r}", line, 0, source)
        kind = next(k for k in _KINDS if m.group("local" if k == "pname" else k) is not None)
        if kind != "ws":
            yield kind, m, line
        line += m.group(0).count("\n")
        pos = m.end()


def _unescape(body: str, line: int, source: str) -> str:
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            nxt = body[i + 1]
            if nxt in _UNESCAPES:
                out.append(_UNESCAPES[nxt])
                i += 2
                continue
            if nxt in "uU":
                width = 4 if nxt == "u" else 8
                out.append(chr(int(body[i + 2 : i + 2 + width], 16)))
                i += 2 + width
                continue
            raise OutsideProfile(f"unsupported escape \\{nxt}", line, 0, source)
        out.append(ch)
        i += 1
    return "".join(out)


def read_triples(text: str, source: str = "<string>") -> list[tuple[str, str, Term]]:
    """Parse profile Turtle into ``(subject, predicate, object)`` triples with full IRIs."""
    toks = list(_tokens(text, source))
    prefixes: dict[str, str] = {}
    triples: list[tuple[str, str, Term]] = []
    i = 0

    def expect(kind: str):
        nonlocal i
        if i >= len(toks):
            raise OutsideProfile(f"unexpected end of input (expected {kind})", toks[-1][2] if toks else 1, 0, source)
        k, m, line = toks[i]
        if k != kind and not (kind == "." and k == "punct" and m.group(0) == "."):
            raise OutsideProfile(f"expected {kind}, found {m.group(0)!r}", line, 0, source)
        i += 1
        return m, line

    def term(kind_ok: set[str]):
        nonlocal i
        if i >= len(toks):
            raise OutsideProfile("unexpected end of input", 0, 0, source)
        k, m, line = toks[i]
        i += 1
        if k not in kind_ok:
            raise OutsideProfile(f"unexpected {m.group(0)!r}", line, 0, source)
        if k == "iri":
            return Iri(m.group(0)[1:-1])
        if k == "pname":
            prefix = m.group("prefix") or ""
            if prefix not in prefixes:
                raise OutsideProfile(f"undeclared prefix {prefix!r}", line, 0, source)
            return Iri(prefixes[prefix] + m.group("local"))
        if k == "a":
            return Iri(RDF_TYPE)
        if k == "bool":
            return m.group(0) == "true"
        return Literal(_unescape(m.group("string")[1:-1], line, source), m.group("lang"))

    def punct(ch: str) -> bool:
        return i < len(toks) and toks[i][0] == "punct" and toks[i][1].group(0) == ch

    while i < len(toks):
        k, m, line = toks[i]
        if k == "prefix_kw":
            i += 1
            pm, pline = expect("pname")
            if pm.group("local"):
                raise OutsideProfile("malformed @prefix declaration", pline, 0, source)
            ns = term({"iri"})
            if not punct("."):
                raise OutsideProfile("@prefix declaration must end with '.'", pline, 0, source)
            i += 1
            prefixes[pm.group("prefix") or ""] = ns.value
            continue
        subject = term({"iri", "pname"})
        while True:
            predicate = term({"iri", "pname", "a"})
            while True:
                obj = term({"iri", "pname", "string", "bool"})
                triples.append((subject.value, predicate.value, obj))
                if punct(","):
                    i += 1
                    continue
                break
            if punct(";"):
                i += 1
                if punct("."):
                    break
                continue
            break
        if not punct("."):
            tok = toks[i] if i < len(toks) else None
            found = tok[1].group(0) if tok else "end of input"
            raise OutsideProfile(f"expected '.', found {found!r}", tok[2] if tok else 0, 0, source)
        i += 1
    return triples
