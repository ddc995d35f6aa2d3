"""Batch command line: ``chambers-kos <command> FILES... [options]``.

Diagnostics go to stderr as ``SEVERITY file:line:col message``; tables and
Turtle go to stdout unless ``--out`` names a directory.  Exit status is 0
when clean, 1 with warnings, 2 with errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .diagnostics import ChambersError, Diagnostic
from .grammar import DomainParseTree, FacetNode, entry_concept_census
from .pipeline import DEFAULT_BASE_IRI, OwlMode, PipelineConfig, PipelineResult, cmd_report_homonyms, run_pipeline
from .transcript import Directive, PunctToken, StyledSpan, lex


def _common(p: argparse.ArgumentParser, *, emit: bool = False) -> None:
    p.add_argument("files", nargs="*", type=Path, metavar="FILE", help="transcript files")
    p.add_argument("--grammar-config", type=Path, metavar="FILE", help="grammar overrides (key = value lines)")
    p.add_argument("--decisions", type=Path, metavar="FILE", help="disambiguation decisions (TSV)")
    if emit:
        p.add_argument("--taxonomy", type=Path, metavar="FILE", help="indented taxonomy outline")
        p.add_argument("--base-iri", default=DEFAULT_BASE_IRI, help=f"namespace for minted IRIs (default {DEFAULT_BASE_IRI})")
        p.add_argument("--owl", choices=[m.value for m in OwlMode], default="none", help="OWL strategy")
        p.add_argument("--out", type=Path, metavar="DIR", help="write artifacts here instead of stdout")
        p.add_argument("--name", default="chambers", help="artifact file stem")
        p.add_argument("--collapse-facets", action="store_true", help="hide facet concepts in the SKOS output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chambers-kos", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    lex_p = sub.add_parser("lex", help="print the token stream")
    lex_p.add_argument("files", nargs="*", type=Path, metavar="FILE")
    _common(sub.add_parser("parse", help="print parse trees and per-entry census"))
    _common(sub.add_parser("build", help="print the concept table"))
    _common(sub.add_parser("homonyms", help="print unresolved homonyms"))
    _common(sub.add_parser("validate", help="run every check, write nothing"), emit=True)
    _common(sub.add_parser("emit", help="write SKOS (and OWL) Turtle"), emit=True)
    _common(sub.add_parser("run", help="full pipeline with report.txt"), emit=True)
    return parser


def _config(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        transcript_paths=list(args.files),
        taxonomy_path=getattr(args, "taxonomy", None),
        decisions_path=args.decisions,
        base_iri=getattr(args, "base_iri", DEFAULT_BASE_IRI),
        owl_mode=OwlMode(getattr(args, "owl", "none")),
        output_dir=getattr(args, "out", None),
        grammar_config_path=args.grammar_config,
        name=getattr(args, "name", "chambers"),
        collapse_facets=getattr(args, "collapse_facets", False),
    )


def _print_diagnostics(diags: Sequence[Diagnostic], err: TextIO) -> None:
    for d in diags:
        print(d.format(), file=err)


def _cmd_lex(args, out, err) -> int:
    if not args.files:
        print("ERROR no transcript files given", file=err)
        return 2
    status = 0
    for path in args.files:
        try:
            doc = lex(path.read_text(encoding="utf-8"), str(path))
        except OSError as exc:
            print(f"ERROR {path}:0:0 {exc.strerror}", file=err)
            status = 2
            continue
        except ChambersError as exc:
            print(exc.to_diagnostic().format(), file=err)
            status = 2
            continue
        for tok in doc.tokens:
            if isinstance(tok, StyledSpan):
                desc = f"{tok.style.value}\t{tok.text}"
            elif isinstance(tok, PunctToken):
                desc = f"{tok.kind.value}" + (f"\t{tok.ordinal}" if tok.ordinal is not None else "")
            else:
                assert isinstance(tok, Directive)
                desc = f"@{tok.kind.value}\t{tok.value}"
            print(f"{path}:{tok.line}:{tok.col}\t{desc}", file=out)
    return status


def _print_facet(f: FacetNode, depth: int, out: TextIO) -> None:
    extra = f" [{f.origin.value}]" if f.origin.value != "Textual" else ""
    section = f" (section {f.ordinal_section})" if f.ordinal_section is not None else ""
    print(f"{'  ' * depth}{f.facet_label}{extra}{section}  <- {f.connective!r}", file=out)
    for inst in f.instances:
        mark = " &c." if inst.open_ended else ""
        print(f"{'  ' * (depth + 1)}- {inst.label} (group {inst.group}){mark}", file=out)
    for child in f.children:
        _print_facet(child, depth + 1, out)


def _print_tree(tree: DomainParseTree, out: TextIO) -> None:
    alt = f" or {tree.alt_name}" if tree.alt_name else ""
    print(f"{tree.headword}{alt}  ({tree.source_name})", file=out)
    for f in tree.facets:
        _print_facet(f, 1, out)
    c = entry_concept_census(tree)
    print(f"  census: instances={c.instance_count} facets={c.facet_count} open-ended={c.open_ended_list_count}", file=out)


def _finish(result: PipelineResult, err: TextIO) -> int:
    _print_diagnostics(result.diagnostics, err)
    return result.exit_code


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.command == "lex":
        return _cmd_lex(args, out, err)

    config = _config(args)
    if args.command in {"parse", "build", "homonyms", "validate"}:
        config.output_dir = None
    result = run_pipeline(config, write=args.command in {"emit", "run"}, write_report=args.command == "run")

    if args.command == "parse":
        for tree in result.trees:
            _print_tree(tree, out)
    elif args.command == "build" and result.scheme is not None:
        for c in result.scheme.ordered():
            broader = ",".join(result.scheme.broader(c.id))
            print(f"{c.id}\t{c.kind.value}\t{c.pref_label}\t{broader}", file=out)
    elif args.command == "homonyms" and result.scheme is not None:
        out.write(cmd_report_homonyms(result.homonyms))
    elif args.command == "emit" and config.output_dir is None and result.skos is not None:
        out.write(result.skos)
        if config.owl_mode is not OwlMode.NONE:
            print("INFO OWL output needs --out; only SKOS was printed", file=err)
    elif args.command == "run" and config.output_dir is None:
        out.write(result.report)
    return _finish(result, err)
