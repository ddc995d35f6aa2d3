"""The taxonomic tree from "Knowledge" down to the domain headwords.

Outline format: one label per line, two spaces of indentation per level,
an optional ``| principle`` suffix naming the dividing principle::

    Knowledge
      Natural | Natural and Scientifical
        Minerology
      Artificial | Artificial and Technical
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .diagnostics import ChambersError
from .kos import ConceptScheme, order_key
from .text import fold_key

ROOT_LABEL = "Knowledge"


class TaxonomyError(ChambersError):
    pass


class IndentJump(TaxonomyError):
    pass


class BadIndent(TaxonomyError):
    pass


class EmptyOutline(TaxonomyError):
    pass


class RootMismatch(TaxonomyError):
    pass


@dataclass(frozen=True, slots=True)
class TaxonNode:
    label: str
    children: tuple["TaxonNode", ...] = ()
    dividing_principle: str | None = None
    line: int = 0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self, path: tuple[str, ...] = ()):
        """Yield ``(node, path_to_node)`` pairs in pre-order."""
        here = path + (self.label,)
        yield self, here
        for child in self.children:
            yield from child.walk(here)


@dataclass(frozen=True)
class TaxonomyTree:
    root: TaxonNode
    leaf_index: Mapping[str, tuple[tuple[str, ...], ...]] = field(default_factory=dict)
    source_name: str = ""

    @classmethod
    def from_root(cls, root: TaxonNode, source_name: str = "") -> "TaxonomyTree":
        if root.label != ROOT_LABEL:
            raise RootMismatch(f"root must be {ROOT_LABEL!r}, got {root.label!r}", root.line, 1, source_name)
        index: dict[str, list[tuple[str, ...]]] = defaultdict(list)
        for node, path in root.walk():
            if node.is_leaf:
                index[node.label].append(path)
        return cls(root, {k: tuple(v) for k, v in index.items()}, source_name)

    def leaves(self) -> list[tuple[str, tuple[str, ...]]]:
        """Leaves in outline order with their root paths."""
        return [(node.label, path) for node, path in self.root.walk() if node.is_leaf]

    def nodes(self) -> list[tuple[TaxonNode, tuple[str, ...]]]:
        return list(self.root.walk())


def parse_taxonomy(outline_text: str, source_name: str = "<string>") -> TaxonomyTree:
    """Read an indented outline into a tree.  Blank and ``#`` lines are skipped."""
    rows: list[tuple[int, str, str | None, int]] = []
    for lineno, raw in enumerate(outline_text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        body = raw.rstrip()
        stripped = body.lstrip(" ")
        indent = len(body) - len(stripped)
        if stripped[0].isspace():
            raise BadIndent("indent with spaces only (no tabs)", lineno, indent + 1, source_name)
        if indent % 2:
            raise BadIndent(f"indentation of {indent} spaces is not a multiple of 2", lineno, 1, source_name)
        label, sep, principle = stripped.partition("|")
        label = " ".join(label.split())
        if not label:
            raise TaxonomyError("empty node label", lineno, indent + 1, source_name)
        rows.append((indent // 2, label, " ".join(principle.split()) or None if sep else None, lineno))
    if not rows:
        raise EmptyOutline("taxonomy outline has no nodes", 1, 1, source_name)
    depth0, label0, _, line0 = rows[0]
    if depth0 != 0 or label0 != ROOT_LABEL:
        raise RootMismatch(f"first line must be {ROOT_LABEL!r} at depth 0, got {label0!r}", line0, 1, source_name)

    # stack of (label, principle, line, children) builders, one per open depth
    stack: list[tuple[str, str | None, int, list[TaxonNode]]] = [(label0, rows[0][2], line0, [])]

    def close_to(depth: int) -> None:
        while len(stack) > depth + 1:
            label, principle, line, kids = stack.pop()
            stack[-1][3].append(TaxonNode(label, tuple(kids), principle, line))

    for depth, label, principle, lineno in rows[1:]:
        if depth == 0:
            raise RootMismatch(f"second top-level node {label!r}; the outline must have a single root", lineno, 1, source_name)
        if depth > len(stack):
            raise IndentJump(f"depth jumps from {len(stack) - 1} to {depth}", lineno, depth * 2 + 1, source_name)
        close_to(depth - 1)
        stack.append((label, principle, lineno, []))
    close_to(0)
    label, principle, line, kids = stack[0]
    return TaxonomyTree.from_root(TaxonNode(label, tuple(kids), principle, line), source_name)


def load_taxonomy(path: str | Path) -> TaxonomyTree:
    return parse_taxonomy(Path(path).read_text(encoding="utf-8"), str(path))


@dataclass(frozen=True, slots=True)
class JepdViolation:
    label: str
    paths: tuple[tuple[str, ...], ...]

    def describe(self) -> str:
        return f"{self.label!r} occurs {len(self.paths)} times: " + "; ".join("/".join(p) for p in self.paths)


def validate_jepd(tree: TaxonomyTree) -> list[JepdViolation]:
    """Pairwise-disjointness check over leaves.

    A leaf label (compared case- and diacritic-insensitively) that occurs
    more than once is a violation.  Joint exhaustiveness cannot be decided
    from the tree and is not checked.
    """
    groups: dict[str, list[tuple[str, tuple[str, ...]]]] = defaultdict(list)
    for label, path in tree.leaves():
        groups[fold_key(label)].append((label, path))
    return [
        JepdViolation(members[0][0], tuple(p for _, p in members))
        for members in groups.values()
        if len(members) > 1
    ]


@dataclass(frozen=True)
class LeafLinkReport:
    matched: tuple[tuple[str, str], ...]
    unmatched_leaves: tuple[str, ...]
    unmatched_headwords: tuple[str, ...]


def link_leaves(tree: TaxonomyTree, scheme: ConceptScheme) -> LeafLinkReport:
    """Match distinct leaf labels to top concepts (exact after case/diacritic folding).

    ``matched`` holds ``(leaf label, concept id)`` pairs in outline order;
    ``unmatched_headwords`` holds concept ids.
    """
    heads: dict[str, str] = {}
    for cid in sorted(scheme.top_concepts, key=order_key):
        heads.setdefault(fold_key(scheme.concepts[cid].pref_label), cid)
    matched: list[tuple[str, str]] = []
    unmatched: list[str] = []
    seen: set[str] = set()
    for label, _ in tree.leaves():
        key = fold_key(label)
        if key in seen:
            continue
        seen.add(key)
        if key in heads:
            matched.append((label, heads[key]))
        else:
            unmatched.append(label)
    used = {cid for _, cid in matched}
    rest = tuple(cid for cid in sorted(scheme.top_concepts, key=order_key) if cid not in used)
    return LeafLinkReport(tuple(matched), tuple(unmatched), rest)
