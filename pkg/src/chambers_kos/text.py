"""Label folding and slugs used for matching and identifier minting."""

from __future__ import annotations

import re
import unicodedata

# Characters NFKD does not decompose.
_LIGATURES = {
    "æ": "ae",
    "Æ": "AE",
    "œ": "oe",
    "Œ": "OE",
    "ß": "ss",
    "ſ": "s",
    "ø": "o",
    "Ø": "O",
    "đ": "d",
    "ł": "l",
    "Ł": "L",
}
_APOSTROPHES = "'’ʼ`"
_NON_ALNUM = re.compile(r"[^a-z0-9]+")


def fold_diacritics(text: str) -> str:
    for lig, repl in _LIGATURES.items():
        text = text.replace(lig, repl)
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def fold_key(label: str) -> str:
    """Case- and diacritic-insensitive comparison key."""
    return " ".join(fold_diacritics(label).casefold().split())


def slugify(label: str) -> str:
    """Lowercase ASCII slug: ``"Phænomena"`` -> ``"phaenomena"``.

    Returns an empty string when nothing alphanumeric survives.
    """
    text = fold_diacritics(label).casefold()
    for ch in _APOSTROPHES:
        text = text.replace(ch, "")
    return _NON_ALNUM.sub("-", text).strip("-")


def display_case(headword: str) -> str:
    """``"GEOMETRY"`` -> ``"Geometry"``; mixed-case input is returned as is."""
    if headword.isupper():
        return " ".join(
            "-".join(part.capitalize() for part in word.split("-")) for word in headword.lower().split()
        )
    return headword
