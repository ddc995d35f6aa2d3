"""Parse one lexed vocabulary entry into a tree of facets and instances.

Rules, in priority order:

1. Entry head: a roman span starting with "or" names an alternate
   (the next italic span); one starting with "including" introduces
   small-caps scope areas.
2. A roman span opens a facet. It nests under the most recent
   non-nested facet when it starts with a nesting cue ("their",
   "whence", ...); otherwise it opens a new entry-level facet.
3. Italic spans are instances of the current facet.
4. ``&c.`` closes the running list as open-ended; ``.`` and ``;``
   close it as closed.  Italics after a closed list start a new
   grouping inside the same facet.
5. A long dash closes every facet and records a topic break.
6. ``@ord{n}`` starts ordinal section *n* at entry level.
7. ``@interp{L}`` opens a transcriber-supplied facet labelled *L* as a
   sibling of the current facet.
"""

from __future__ import annotations

import configparser
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .diagnostics import ChambersError, Diagnostic, Severity
from .transcript import (
    Directive,
    DirectiveKind,
    MissingDomainStart,
    PunctKind,
    PunctToken,
    StyledSpan,
    Style,
    TranscriptDocument,
    is_domain_start,
    split_entries,
)


class ParseError(ChambersError):
    pass


class DanglingConnective(ParseError):
    pass


class OrphanInstance(ParseError):
    pass


class NormalizationEmpty(ParseError):
    pass


class Origin(enum.Enum):
    TEXTUAL = "Textual"
    INTERPOLATED = "Interpolated"


DEFAULT_NESTING_CUES = ("their", "thereof", "with operations relating to 'em", "whence", "and their")
DEFAULT_STOP_WORDS = ("its", "their", "the", "as", "with", "whence", "in", "and")
DEFAULT_TAIL_WORDS = ("relating", "thereof")

_EDGE_PUNCT = ",;:.!?()[]\"—–"


@dataclass(frozen=True)
class GrammarConfig:
    nesting_cues: tuple[str, ...] = DEFAULT_NESTING_CUES
    stop_words: frozenset[str] = frozenset(DEFAULT_STOP_WORDS)
    tail_words: frozenset[str] = frozenset(DEFAULT_TAIL_WORDS)

    @classmethod
    def from_text(cls, text: str) -> "GrammarConfig":
        """Read ``key = a, b, c`` lines.

        ``nesting_cues`` extends the default cue set; ``stop_words`` and
        ``tail_words`` replace their defaults.
        """
        parser = configparser.ConfigParser(comment_prefixes=("#",), interpolation=None)
        parser.read_string("[grammar]\n" + text)
        section = parser["grammar"]

        def items(key: str) -> list[str]:
            return [" ".join(_words(v.casefold())) for v in section.get(key, "").split(",") if v.strip()]

        unknown = set(section) - {"nesting_cues", "stop_words", "tail_words"}
        if unknown:
            raise ChambersError(f"unknown grammar config key(s): {', '.join(sorted(unknown))}")
        cues = tuple(dict.fromkeys(DEFAULT_NESTING_CUES + tuple(items("nesting_cues"))))
        stop = frozenset(items("stop_words")) if "stop_words" in section else frozenset(DEFAULT_STOP_WORDS)
        tail = frozenset(items("tail_words")) if "tail_words" in section else frozenset(DEFAULT_TAIL_WORDS)
        return cls(cues, stop, tail)

    @classmethod
    def load(cls, path: str | Path) -> "GrammarConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


DEFAULT_CONFIG = GrammarConfig()


@dataclass(frozen=True, slots=True)
class InstanceRef:
    label: str
    open_ended: bool
    group: int = 1
    emendation: str | None = None
    line: int = 0
    col: int = 0


@dataclass(frozen=True, slots=True)
class FacetNode:
    connective: str
    facet_label: str
    instances: tuple[InstanceRef, ...] = ()
    children: tuple["FacetNode", ...] = ()
    origin: Origin = Origin.TEXTUAL
    ordinal_section: int | None = None
    alt_labels: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    line: int = 0
    col: int = 0

    def walk(self):
        """Pre-order traversal, self first."""
        yield self
        for child in self.children:
            yield from child.walk()

    @property
    def group_count(self) -> int:
        return max((i.group for i in self.instances), default=0)


@dataclass(frozen=True, slots=True)
class DomainParseTree:
    headword: str
    alt_name: str | None = None
    scope_areas: tuple[str, ...] = ()
    facets: tuple[FacetNode, ...] = ()
    topic_breaks: tuple[tuple[int, int], ...] = ()
    notes: tuple[str, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = ()
    source_name: str = ""
    line: int = 0
    col: int = 0

    def walk(self):
        for facet in self.facets:
            yield from facet.walk()


def _words(text: str) -> list[str]:
    out = []
    for raw in text.replace("’", "'").split():
        w = raw.strip(_EDGE_PUNCT)
        if w:
            out.append(w)
    return out


def _clean_label(words: list[str], config: GrammarConfig) -> list[str]:
    words = list(words)
    while words and words[0].casefold() in config.stop_words:
        words.pop(0)
    for i, w in enumerate(words):
        if w.casefold() in config.tail_words:
            words = words[:i]
            break
    while words and words[-1].casefold() in config.stop_words:
        words.pop()
    return words


def _split_on_or(words: list[str]) -> list[list[str]]:
    parts: list[list[str]] = [[]]
    for w in words:
        if w.casefold() == "or":
            parts.append([])
        else:
            parts[-1].append(w)
    return parts


def normalize_facet_label(connective: str, config: GrammarConfig = DEFAULT_CONFIG, *, strict: bool = False) -> str:
    """Reduce a connective phrase to its facet noun: ``"Its Parts, as"`` -> ``"Parts"``.

    When only stop words remain, raises :class:`NormalizationEmpty` if
    *strict*, otherwise returns the stripped connective unchanged.
    """
    if not connective.strip():
        raise ValueError("connective must be non-empty")
    label = _clean_label(_split_on_or(_words(connective))[0], config)
    if not label:
        if strict:
            raise NormalizationEmpty(f"connective {connective.strip()!r} has no content words")
        return connective.strip()
    return " ".join(label)


def facet_alt_labels(connective: str, config: GrammarConfig = DEFAULT_CONFIG) -> tuple[str, ...]:
    """Alternate facet names introduced by "or": ``"Fossils or Minerals, as"`` -> ``("Minerals",)``."""
    alts = []
    for part in _split_on_or(_words(connective))[1:]:
        cleaned = _clean_label(part, config)
        if cleaned:
            alts.append(" ".join(cleaned))
    return tuple(alts)


def is_nesting_cue(connective: str, config: GrammarConfig = DEFAULT_CONFIG) -> bool:
    words = [w.casefold() for w in _words(connective)]
    for cue in config.nesting_cues:
        cue_words = cue.split()
        if words[: len(cue_words)] == cue_words:
            return True
    return False


@dataclass(eq=False)
class _Facet:
    connective: str
    label: str
    origin: Origin
    section: int | None
    line: int
    col: int
    alt_labels: tuple[str, ...] = ()
    parent: "_Facet | None" = None
    nested: bool = False
    instances: list[InstanceRef] = field(default_factory=list)
    children: list["_Facet"] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    groups: int = 0

    def freeze(self, source: str) -> FacetNode:
        if not self.instances and not self.children:
            what = "interpolated facet" if self.origin is Origin.INTERPOLATED else "connective"
            raise DanglingConnective(
                f"{what} {self.connective or self.label!r} is not followed by any instances", self.line, self.col, source
            )
        return FacetNode(
            connective=self.connective,
            facet_label=self.label,
            instances=tuple(self.instances),
            children=tuple(c.freeze(source) for c in self.children),
            origin=self.origin,
            ordinal_section=self.section,
            alt_labels=self.alt_labels,
            notes=tuple(self.notes),
            line=self.line,
            col=self.col,
        )


class _EntryParser:
    def __init__(self, doc: TranscriptDocument, config: GrammarConfig) -> None:
        self.tokens = doc.tokens
        self.source = doc.source_name
        self.config = config
        self.pos = 0
        self.diags: list[Diagnostic] = []
        self.tree_notes: list[str] = []
        self.top: list[_Facet] = []
        self.anchor: _Facet | None = None
        self.current: _Facet | None = None
        self.section: int | None = None
        self.pending: list[StyledSpan] = []
        self.pending_notes: dict[int, str] = {}
        self.breaks: list[tuple[int, int]] = []

    def warn(self, tok, message: str, code: str) -> None:
        self.diags.append(Diagnostic(Severity.WARNING, message, tok.line, tok.col, self.source, code))

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def parse(self) -> DomainParseTree:
        if not self.tokens or not is_domain_start(self.tokens[0]):
            tok = self.peek()
            raise MissingDomainStart(
                "entry must begin with @domain", getattr(tok, "line", 0), getattr(tok, "col", 0), self.source
            )
        start = self.tokens[0]
        self.pos = 1
        alt_name, scope = self.parse_head()
        while self.pos < len(self.tokens):
            tok = self.tokens[self.pos]
            self.pos += 1
            self.step(tok)
        self.close_list(open_ended=False)
        facets = tuple(f.freeze(self.source) for f in self.top)
        return DomainParseTree(
            headword=start.label,
            alt_name=alt_name,
            scope_areas=tuple(scope),
            facets=facets,
            topic_breaks=tuple(self.breaks),
            notes=tuple(self.tree_notes),
            diagnostics=tuple(self.diags),
            source_name=self.source,
            line=start.line,
            col=start.col,
        )

    def skip_head_filler(self) -> None:
        while True:
            tok = self.peek()
            if isinstance(tok, PunctToken) and tok.kind in (PunctKind.COMMA, PunctKind.SEMICOLON, PunctKind.PERIOD):
                self.pos += 1
            elif isinstance(tok, Directive) and tok.kind is DirectiveKind.NOTE:
                self.tree_notes.append(tok.label)
                self.pos += 1
            else:
                return

    def parse_head(self) -> tuple[str | None, list[str]]:
        """Consume the "or NAME" and "including AREAS" clauses, in either order."""
        alt_name: str | None = None
        scope: list[str] = []
        while True:
            self.skip_head_filler()
            tok = self.peek()
            if not (isinstance(tok, StyledSpan) and tok.style is Style.ROMAN):
                return alt_name, scope
            words = [w.casefold() for w in _words(tok.text)]
            if words[:1] == ["or"] and alt_name is None:
                self.pos += 1
                self.skip_head_filler()
                nxt = self.peek()
                if not (isinstance(nxt, StyledSpan) and nxt.style is Style.ITALIC):
                    raise DanglingConnective("'or' at entry head must be followed by an italic name", tok.line, tok.col, self.source)
                self.pos += 1
                alt_name = nxt.label
            elif words[:1] == ["including"] and not scope:
                self.pos += 1
                scope = self.parse_scope(tok)
            else:
                return alt_name, scope

    def parse_scope(self, tok: StyledSpan) -> list[str]:
        scope: list[str] = []
        while True:
            self.skip_head_filler()
            nxt = self.peek()
            if isinstance(nxt, StyledSpan) and nxt.style is Style.SMALLCAPS:
                scope.append(nxt.label)
                self.pos += 1
            elif (
                isinstance(nxt, StyledSpan)
                and nxt.style is Style.ROMAN
                and {w.casefold() for w in _words(nxt.text)} <= {"and", "&"}
            ):
                self.pos += 1
            else:
                break
        if not scope:
            raise DanglingConnective("'including' at entry head lists no small-caps areas", tok.line, tok.col, self.source)
        return scope

    def step(self, tok) -> None:
        if isinstance(tok, StyledSpan):
            if tok.style is Style.ITALIC:
                self.add_instance(tok)
            else:
                if tok.style is Style.SMALLCAPS:
                    self.warn(tok, f"small-caps span {tok.label!r} in entry body treated as a facet heading", "SmallCapsInBody")
                self.open_textual(tok)
        elif isinstance(tok, PunctToken):
            kind = tok.kind
            if kind is PunctKind.COMMA:
                return
            if kind in (PunctKind.PERIOD, PunctKind.SEMICOLON):
                self.close_list(open_ended=False)
            elif kind is PunctKind.ET_CETERA:
                self.close_list(open_ended=True)
            elif kind is PunctKind.LONG_DASH:
                self.close_list(open_ended=False)
                prev = self.tokens[self.pos - 2]
                if not (isinstance(prev, PunctToken) and prev.kind is PunctKind.LONG_DASH):
                    self.breaks.append((tok.line, tok.col))
                self.current = self.anchor = None
            elif kind is PunctKind.ORDINAL:
                self.close_list(open_ended=False)
                self.section = tok.ordinal
                self.current = self.anchor = None
        elif isinstance(tok, Directive):
            if tok.kind is DirectiveKind.DOMAIN_START:
                raise ParseError("second @domain inside one entry; split the document first", tok.line, tok.col, self.source)
            if tok.kind is DirectiveKind.INTERPOLATE:
                self.open_interpolated(tok)
            else:
                self.attach_note(tok)

    def open_textual(self, tok: StyledSpan) -> None:
        self.close_list(open_ended=False)
        connective = tok.label
        try:
            label = normalize_facet_label(connective, self.config, strict=True)
        except NormalizationEmpty:
            self.warn(tok, f"connective {connective!r} has no content words; used verbatim as facet label", "NormalizationEmpty")
            label = connective
        facet = _Facet(
            connective, label, Origin.TEXTUAL, self.section, tok.line, tok.col, facet_alt_labels(connective, self.config)
        )
        if self.anchor is not None and is_nesting_cue(connective, self.config):
            facet.parent = self.anchor
            facet.nested = True
            self.anchor.children.append(facet)
        else:
            self.top.append(facet)
            self.anchor = facet
        self.current = facet

    def open_interpolated(self, tok: Directive) -> None:
        self.close_list(open_ended=False)
        facet = _Facet("", tok.label, Origin.INTERPOLATED, self.section, tok.line, tok.col)
        parent = self.current.parent if self.current is not None else None
        if parent is not None:
            facet.parent = parent
            facet.nested = True
            parent.children.append(facet)
        else:
            self.top.append(facet)
            self.anchor = facet
        self.current = facet

    def add_instance(self, tok: StyledSpan) -> None:
        if self.current is None:
            raise OrphanInstance(f"italic {tok.label!r} appears before any facet heading", tok.line, tok.col, self.source)
        self.pending.append(tok)

    def attach_note(self, tok: Directive) -> None:
        prev = self.tokens[self.pos - 2]
        if self.pending and prev is self.pending[-1]:
            self.pending_notes[len(self.pending) - 1] = tok.label
        elif self.current is not None:
            self.current.notes.append(tok.label)
        else:
            self.tree_notes.append(tok.label)

    def close_list(self, open_ended: bool) -> None:
        if not self.pending:
            return
        facet = self.current
        facet.groups += 1
        for i, span in enumerate(self.pending):
            facet.instances.append(
                InstanceRef(span.label, open_ended, facet.groups, self.pending_notes.get(i), span.line, span.col)
            )
        self.pending = []
        self.pending_notes = {}


def parse_entry(doc: TranscriptDocument, config: GrammarConfig = DEFAULT_CONFIG) -> DomainParseTree:
    """Parse a single entry (a document starting with ``@domain``)."""
    return _EntryParser(doc, config).parse()


def parse_document(doc: TranscriptDocument, config: GrammarConfig = DEFAULT_CONFIG) -> list[DomainParseTree]:
    return [parse_entry(entry, config) for entry in split_entries(doc)]


class Census(NamedTuple):
    instance_count: int
    facet_count: int
    open_ended_list_count: int


def entry_concept_census(tree: DomainParseTree) -> Census:
    instances = facets = open_lists = 0
    for facet in tree.walk():
        facets += 1
        instances += len(facet.instances)
        open_lists += len({i.group for i in facet.instances if i.open_ended})
    return Census(instances, facets, open_lists)
