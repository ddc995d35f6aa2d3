"""Transcription markup for the printed vocabulary, and its lexer.

The markup records only what a transcriber can see on the page:

    @domain{MINEROLOGY} roman{, or the} italic{History of EARTH};
    @ord{1}, roman{Its Parts, as} italic{Mountain}, italic{Mine}, &c.

``italic{..}``, ``roman{..}`` and ``sc{..}`` are styled spans (no nesting).
Outside spans only whitespace, ``,`` ``;`` ``.``, the long dash ``—``,
``&c.`` and ``@``-directives may appear.  Each token keeps the whitespace
that preceded it, so :func:`render` reproduces the source exactly.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Union

from .diagnostics import ChambersError, Diagnostic, Severity

LONG_DASH = "—"
ET_CETERA = "&c."


class LexError(ChambersError):
    pass


class UnbalancedDelimiter(LexError):
    pass


class UnknownDirective(LexError):
    pass


class EmptySpan(LexError):
    pass


class StrayText(LexError):
    """Characters outside any span that are not punctuation or markup."""


class MissingDomainStart(ChambersError):
    pass


class Style(enum.Enum):
    ROMAN = "roman"
    ITALIC = "italic"
    SMALLCAPS = "sc"


class PunctKind(enum.Enum):
    COMMA = ","
    SEMICOLON = ";"
    PERIOD = "."
    LONG_DASH = LONG_DASH
    ET_CETERA = ET_CETERA
    ORDINAL = "@ord"


class DirectiveKind(enum.Enum):
    DOMAIN_START = "domain"
    INTERPOLATE = "interp"
    NOTE = "note"


@dataclass(frozen=True, slots=True)
class StyledSpan:
    style: Style
    text: str
    line: int
    col: int
    pre: str = ""

    def markup(self) -> str:
        return f"{self.style.value}{{{self.text}}}"

    @property
    def label(self) -> str:
        """Span text with runs of whitespace collapsed."""
        return " ".join(self.text.split())


@dataclass(frozen=True, slots=True)
class PunctToken:
    kind: PunctKind
    line: int
    col: int
    ordinal: int | None = None
    pre: str = ""

    def markup(self) -> str:
        if self.kind is PunctKind.ORDINAL:
            return f"@ord{{{self.ordinal}}}"
        return self.kind.value


@dataclass(frozen=True, slots=True)
class Directive:
    kind: DirectiveKind
    value: str
    line: int
    col: int
    pre: str = ""

    def markup(self) -> str:
        return f"@{self.kind.value}{{{self.value}}}"

    @property
    def label(self) -> str:
        return " ".join(self.value.split())


Token = Union[StyledSpan, PunctToken, Directive]


@dataclass(frozen=True, slots=True)
class TranscriptDocument:
    tokens: tuple[Token, ...]
    source_name: str = "<string>"
    trailing: str = ""

    def __len__(self) -> int:
        return len(self.tokens)


_SPAN_OPEN = re.compile(r"([A-Za-z]+)\{")
_DIRECTIVE_OPEN = re.compile(r"@([A-Za-z]*)\{?")
_ORDINAL = re.compile(r"[1-9][0-9]*")
_SINGLE = {
    ",": PunctKind.COMMA,
    ";": PunctKind.SEMICOLON,
    ".": PunctKind.PERIOD,
    LONG_DASH: PunctKind.LONG_DASH,
}


class _Cursor:
    __slots__ = ("text", "pos", "line", "col", "source")

    def __init__(self, text: str, source: str) -> None:
        self.text = text
        self.source = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def advance(self, n: int) -> str:
        chunk = self.text[self.pos : self.pos + n]
        for ch in chunk:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += len(chunk)
        return chunk

    def error(self, cls: type[LexError], message: str, line: int | None = None, col: int | None = None):
        return cls(message, self.line if line is None else line, self.col if col is None else col, self.source)


def _read_braced(cur: _Cursor, what: str, line: int, col: int) -> str:
    """Consume ``...}`` after an opening brace and return the content."""
    start = cur.pos
    while cur.pos < len(cur.text):
        ch = cur.text[cur.pos]
        if ch == "}":
            content = cur.text[start : cur.pos]
            cur.advance(1)
            if not content.strip():
                raise cur.error(EmptySpan, f"empty {what}", line, col)
            return content
        if ch == "{":
            raise cur.error(UnbalancedDelimiter, f"'{{' inside {what} opened at {line}:{col} (nesting is not allowed)")
        cur.advance(1)
    raise cur.error(UnbalancedDelimiter, f"{what} is never closed", line, col)


def lex(source_text: str, source_name: str = "<string>") -> TranscriptDocument:
    """Tokenize transcription markup.

    Raises a :class:`LexError` subclass carrying the offending line/col.
    """
    cur = _Cursor(source_text, source_name)
    text = source_text
    tokens: list[Token] = []
    while True:
        ws_start = cur.pos
        while cur.pos < len(text) and text[cur.pos].isspace():
            cur.advance(1)
        pre = text[ws_start : cur.pos]
        if cur.pos >= len(text):
            return TranscriptDocument(tuple(tokens), source_name, pre)

        line, col = cur.line, cur.col
        ch = text[cur.pos]
        if text.startswith(ET_CETERA, cur.pos):
            cur.advance(len(ET_CETERA))
            tokens.append(PunctToken(PunctKind.ET_CETERA, line, col, pre=pre))
        elif ch in _SINGLE:
            cur.advance(1)
            tokens.append(PunctToken(_SINGLE[ch], line, col, pre=pre))
        elif ch == "@":
            m = _DIRECTIVE_OPEN.match(text, cur.pos)
            name = m.group(1)
            if not m.group(0).endswith("{"):
                raise cur.error(UnknownDirective, f"malformed directive '@{name}' (expected '{{')")
            if name == "ord":
                cur.advance(len(m.group(0)))
                value = _read_braced(cur, "@ord directive", line, col)
                if not _ORDINAL.fullmatch(value):
                    raise LexError(f"ordinal must be a positive integer, got {value!r}", line, col, source_name)
                tokens.append(PunctToken(PunctKind.ORDINAL, line, col, ordinal=int(value), pre=pre))
            else:
                try:
                    kind = DirectiveKind(name)
                except ValueError:
                    raise cur.error(UnknownDirective, f"unknown directive '@{name}'") from None
                cur.advance(len(m.group(0)))
                value = _read_braced(cur, f"@{name} directive", line, col)
                tokens.append(Directive(kind, value, line, col, pre=pre))
        elif ch == "}":
            raise cur.error(UnbalancedDelimiter, "'}' without an open span")
        elif ch == "{":
            raise cur.error(UnbalancedDelimiter, "'{' without a span style")
        else:
            m = _SPAN_OPEN.match(text, cur.pos)
            if m is None:
                end = cur.pos
                while end < len(text) and not text[end].isspace() and end - cur.pos < 20:
                    end += 1
                raise cur.error(StrayText, f"text outside a span: {text[cur.pos:end]!r}")
            try:
                style = Style(m.group(1))
            except ValueError:
                raise cur.error(UnknownDirective, f"unknown span style '{m.group(1)}'") from None
            cur.advance(len(m.group(0)))
            value = _read_braced(cur, f"{style.value} span", line, col)
            tokens.append(StyledSpan(style, value, line, col, pre=pre))


def render(doc: TranscriptDocument) -> str:
    """Inverse of :func:`lex`."""
    return "".join(tok.pre + tok.markup() for tok in doc.tokens) + doc.trailing


def is_domain_start(tok: Token) -> bool:
    return isinstance(tok, Directive) and tok.kind is DirectiveKind.DOMAIN_START


def validate_transcript(doc: TranscriptDocument) -> list[Diagnostic]:
    """Check the document-level invariants; an empty list means well-formed."""
    diags: list[Diagnostic] = []
    src = doc.source_name

    def err(tok: Token, msg: str) -> None:
        diags.append(Diagnostic(Severity.ERROR, msg, tok.line, tok.col, src, "TranscriptInvariant"))

    seen_domain = False
    preamble: list[Token] = []
    prev: Token | None = None
    for tok in doc.tokens:
        if prev is not None and (tok.line, tok.col) < (prev.line, prev.col):
            err(tok, f"position {tok.line}:{tok.col} precedes previous token at {prev.line}:{prev.col}")
        prev = tok
        if is_domain_start(tok):
            seen_domain = True
        elif not seen_domain and not (isinstance(tok, Directive) and tok.kind is DirectiveKind.NOTE):
            preamble.append(tok)
        if isinstance(tok, (StyledSpan, Directive)):
            value = tok.text if isinstance(tok, StyledSpan) else tok.value
            if not value.strip():
                err(tok, "empty span or directive argument")
            elif "{" in value or "}" in value:
                err(tok, "markup delimiter inside span text")
        if isinstance(tok, PunctToken) and tok.kind is PunctKind.ORDINAL and (tok.ordinal or 0) < 1:
            err(tok, "ordinal must be positive")
    if preamble:
        first = preamble[0]
        err(first, f"{len(preamble)} token(s) appear before the first @domain directive")
    return diags


def split_entries(doc: TranscriptDocument) -> list[TranscriptDocument]:
    """Cut a document into one sub-document per ``@domain`` entry.

    Notes before the first ``@domain`` are file-level remarks and are dropped;
    any other token there raises :class:`MissingDomainStart`.
    """
    entries: list[list[Token]] = []
    for tok in doc.tokens:
        if is_domain_start(tok):
            entries.append([tok])
        elif entries:
            entries[-1].append(tok)
        elif not (isinstance(tok, Directive) and tok.kind is DirectiveKind.NOTE):
            raise MissingDomainStart("token before the first @domain directive", tok.line, tok.col, doc.source_name)
    return [TranscriptDocument(tuple(toks), doc.source_name) for toks in entries]
