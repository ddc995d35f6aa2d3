"""lex -> parse -> build -> disambiguate -> validate -> emit, with a text report."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from .diagnostics import ChambersError, Diagnostic, Severity
from .disambig import ApplicationReport, DecisionSet, apply_decisions, load_decisions
from .emit import IriPolicy, OwlStrategy, emit_owl, emit_skos
from .grammar import DEFAULT_CONFIG, DomainParseTree, GrammarConfig, entry_concept_census, parse_document
from .kos import AmbiguityRecord, ConceptScheme, build_scheme, check_scheme, find_homonyms
from .taxonomy import JepdViolation, LeafLinkReport, TaxonomyTree, link_leaves, load_taxonomy, validate_jepd
from .transcript import lex, validate_transcript

DEFAULT_BASE_IRI = "https://example.org/chambers/"


class OwlMode(enum.Enum):
    DIRECT = "direct"
    AXIOM = "axiom"
    NONE = "none"


@dataclass
class PipelineConfig:
    transcript_paths: list[Path]
    taxonomy_path: Path | None = None
    decisions_path: Path | None = None
    base_iri: str = DEFAULT_BASE_IRI
    owl_mode: OwlMode = OwlMode.NONE
    output_dir: Path | None = None
    grammar_config_path: Path | None = None
    name: str = "chambers"
    collapse_facets: bool = False


@dataclass
class PipelineResult:
    exit_code: int = 0
    diagnostics: list[Diagnostic] = field(default_factory=list)
    trees: list[DomainParseTree] = field(default_factory=list)
    scheme: ConceptScheme | None = None
    decisions: ApplicationReport | None = None
    homonyms: list[AmbiguityRecord] = field(default_factory=list)
    taxonomy: TaxonomyTree | None = None
    jepd: list[JepdViolation] = field(default_factory=list)
    links: LeafLinkReport | None = None
    skos: str | None = None
    owl: str | None = None
    artifacts: dict[str, Path] = field(default_factory=dict)
    report: str = ""

    def add(self, severity: Severity, message: str, file: str = "", line: int = 0, col: int = 0, code: str = "") -> None:
        self.diagnostics.append(Diagnostic(severity, message, line, col, file, code))

    def add_error(self, exc: ChambersError, file: str = "") -> None:
        d = exc.to_diagnostic()
        if not d.file and file:
            d = Diagnostic(d.severity, d.message, d.line, d.col, file, d.code)
        self.diagnostics.append(d)

    @property
    def failed(self) -> bool:
        return any(d.severity is Severity.ERROR for d in self.diagnostics)


class _Stop(Exception):
    pass


def _parse_stage(config: PipelineConfig, grammar: GrammarConfig, result: PipelineResult) -> None:
    for path in config.transcript_paths:
        src = str(path)
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            result.add(Severity.ERROR, f"cannot read transcript: {exc.strerror}", src, code="IOError")
            continue
        try:
            doc = lex(text, src)
        except ChambersError as exc:
            result.add_error(exc, src)
            continue
        problems = validate_transcript(doc)
        result.diagnostics.extend(problems)
        if problems:
            continue
        try:
            trees = parse_document(doc, grammar)
        except ChambersError as exc:
            result.add_error(exc, src)
            continue
        for tree in trees:
            result.diagnostics.extend(tree.diagnostics)
        result.trees.extend(trees)
    if result.failed:
        raise _Stop


def _decision_stage(config: PipelineConfig, scheme: ConceptScheme, result: PipelineResult) -> ConceptScheme:
    if config.decisions_path is None:
        result.homonyms = find_homonyms(scheme)
    else:
        src = str(config.decisions_path)
        try:
            decisions: DecisionSet = load_decisions(config.decisions_path)
            scheme, report = apply_decisions(scheme, decisions)
        except OSError as exc:
            result.add(Severity.ERROR, f"cannot read decisions: {exc.strerror}", src, code="IOError")
            raise _Stop from None
        except ChambersError as exc:
            result.add_error(exc, src)
            raise _Stop from None
        result.decisions = report
        result.homonyms = report.unresolved
        for label in report.unmatched:
            result.add(Severity.WARNING, f"decision for {label!r} matches no concept", src, code="UnknownLabel")
        for message in report.warnings:
            result.add(Severity.WARNING, message, src, code="DecisionWarning")
    for rec in result.homonyms:
        ids = ", ".join(o.concept_id for o in rec.occurrences)
        result.add(Severity.WARNING, f"unresolved homonym {rec.label!r}: {ids}", code="UnresolvedHomonym")
    return scheme


def _taxonomy_stage(config: PipelineConfig, scheme: ConceptScheme, result: PipelineResult) -> None:
    if config.taxonomy_path is None:
        if config.owl_mode is not OwlMode.NONE:
            result.add(Severity.WARNING, "OWL output requested but no taxonomy given; skipped", code="NoTaxonomy")
        return
    src = str(config.taxonomy_path)
    try:
        tree = load_taxonomy(config.taxonomy_path)
    except OSError as exc:
        result.add(Severity.ERROR, f"cannot read taxonomy: {exc.strerror}", src, code="IOError")
        raise _Stop from None
    except ChambersError as exc:
        result.add_error(exc, src)
        raise _Stop from None
    result.taxonomy = tree
    result.jepd = validate_jepd(tree)
    severity = Severity.ERROR if config.owl_mode is OwlMode.DIRECT else Severity.WARNING
    for v in result.jepd:
        result.add(severity, f"JEPD violation: {v.describe()}", src, code="JepdViolation")
    result.links = link_leaves(tree, scheme)


def run_pipeline(config: PipelineConfig, *, write: bool = True, write_report: bool = True) -> PipelineResult:
    """Run every stage, stopping after the first stage that reports an error.

    Artifacts are written only when *write* is set and ``output_dir`` is given.
    """
    result = PipelineResult()
    try:
        if not config.transcript_paths:
            result.add(Severity.ERROR, "no transcript files given", code="Usage")
            raise _Stop
        try:
            policy = IriPolicy(config.base_iri)
            grammar = GrammarConfig.load(config.grammar_config_path) if config.grammar_config_path else DEFAULT_CONFIG
        except (ChambersError, OSError) as exc:
            result.add(Severity.ERROR, str(exc), code="Usage")
            raise _Stop from None
        _parse_stage(config, grammar, result)
        try:
            scheme = build_scheme(result.trees)
        except ChambersError as exc:
            result.add_error(exc)
            raise _Stop from None
        scheme = _decision_stage(config, scheme, result)
        result.scheme = scheme
        problems = check_scheme(scheme)
        result.diagnostics.extend(problems)
        if problems:
            raise _Stop
        _taxonomy_stage(config, scheme, result)
        if result.failed:
            raise _Stop
        try:
            result.skos = emit_skos(scheme, policy, collapse_facets=config.collapse_facets)
            if result.taxonomy is not None and config.owl_mode is not OwlMode.NONE:
                strategy = OwlStrategy.DIRECT_MAP if config.owl_mode is OwlMode.DIRECT else OwlStrategy.AXIOM_BASED
                result.owl = emit_owl(scheme, result.taxonomy, strategy, policy, result.links)
        except ChambersError as exc:
            result.add_error(exc)
            raise _Stop from None
    except _Stop:
        pass

    worst = max((d.severity for d in result.diagnostics), default=Severity.INFO)
    result.exit_code = {Severity.INFO: 0, Severity.WARNING: 1, Severity.ERROR: 2}[worst]
    if write and config.output_dir is not None:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        if result.skos is not None:
            result.artifacts["skos"] = out / f"{config.name}.skos.ttl"
        if result.owl is not None:
            result.artifacts["owl"] = out / f"{config.name}.owl.ttl"
        if write_report:
            result.artifacts["report"] = out / "report.txt"
    result.report = render_report(config, result)
    if write and config.output_dir is not None:
        for key, path in result.artifacts.items():
            text = {"skos": result.skos, "owl": result.owl, "report": result.report}[key]
            path.write_text(text, encoding="utf-8", newline="\n")
    return result


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *rows]]
    return "\n".join(lines) + "\n"


def cmd_report_homonyms(scheme_or_records: ConceptScheme | list[AmbiguityRecord]) -> str:
    """One row per homonymous label, sorted by label."""
    records = (
        find_homonyms(scheme_or_records) if isinstance(scheme_or_records, ConceptScheme) else scheme_or_records
    )
    rows = []
    for rec in sorted(records, key=lambda r: (r.label.casefold(), r.label)):
        where = "; ".join(f"{o.concept_id} [{' > '.join(o.facet_path) or o.domain}]" for o in rec.occurrences)
        rows.append([rec.label, str(len(rec.occurrences)), where])
    return _table(["LABEL", "COUNT", "OCCURRENCES"], rows)


def _section(title: str, body: str) -> str:
    return f"{title}\n{'-' * len(title)}\n{body.rstrip()}\n"


def render_report(config: PipelineConfig, result: PipelineResult) -> str:
    parts = [f"chambers-kos report: {config.name}\n"]
    diags = "\n".join(d.format() for d in result.diagnostics) or "none"
    parts.append(_section(f"Diagnostics ({len(result.diagnostics)})", diags))

    rows = []
    for tree in sorted(result.trees, key=lambda t: (t.headword.casefold(), t.headword)):
        c = entry_concept_census(tree)
        rows.append([tree.headword, tree.source_name, str(c.instance_count), str(c.facet_count), str(c.open_ended_list_count)])
    parts.append(_section("Entry census", _table(["HEADWORD", "SOURCE", "INSTANCES", "FACETS", "OPEN-ENDED LISTS"], rows)))

    if result.scheme is not None:
        parts.append(_section(f"Homonyms ({len(result.homonyms)} unresolved)", cmd_report_homonyms(result.homonyms)))

    if result.decisions is not None:
        d = result.decisions
        lines = [f"applied   {label}: {what}" for label, what in d.applied]
        lines += [f"ignored   {label}: {why}" for label, why in d.ignored]
        lines += [f"unmatched {label}" for label in d.unmatched]
        parts.append(_section("Decisions", "\n".join(lines) or "none"))
    else:
        parts.append(_section("Decisions", "no decisions file"))

    if result.taxonomy is not None:
        jepd = "\n".join(v.describe() for v in result.jepd) or "none (pairwise disjoint leaves)"
        parts.append(_section("JEPD violations", jepd + "\njoint exhaustiveness is a modeling claim and is not checked"))
        links = result.links
        body = [f"matched {len(links.matched)}, unmatched leaves {len(links.unmatched_leaves)}, "
                f"unmatched headwords {len(links.unmatched_headwords)}"]
        body += [f"matched   {leaf} = {cid}" for leaf, cid in links.matched]
        body += [f"leaf only {leaf}" for leaf in links.unmatched_leaves]
        body += [f"headword only {result.scheme.concepts[cid].pref_label} ({cid})" for cid in links.unmatched_headwords]
        parts.append(_section("Leaf links", "\n".join(body)))

    artifacts = "\n".join(p.name for k, p in sorted(result.artifacts.items())) or "none"
    parts.append(_section("Artifacts", artifacts))
    parts.append(f"exit code {result.exit_code}\n")
    return "\n".join(parts)
