"""Command-line front end: ``resolve``, ``batch`` and ``validate``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

from .kb import KBError, KnowledgeBase, ValidationReport, load_kb, validate_kb
from .tags import PosTag
from .wsd import ResolutionReport, report_to_dict, resolve_question

EXIT_OK = 0
EXIT_KB = 1
EXIT_USAGE = 2


@dataclass
class CliConfig:
    kb_dir: Path
    command: str
    question: str | None = None
    input_file: Path | None = None
    output_format: str = "text"
    ablation: str = "full"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _text_tag(tag: PosTag) -> str:
    return "IN" if tag is PosTag.Prep else tag.value


def format_tags(tagged) -> str:
    """Bracket notation for tagged words; punctuation is left out."""
    return " ".join(f"[{t.surface}/{_text_tag(t.tag)}]" for t in tagged if t.tag is not PosTag.Punct)


def format_chunks(chunks) -> str:
    return " ".join(f"[{c.text}/{c.kind}]" for c in chunks)


def format_report(report: ResolutionReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report_to_dict(report), ensure_ascii=False)
    lines = [
        f"question: {report.question}",
        f"tags: {format_tags(report.tagged)}",
        f"chunks: {format_chunks(report.chunks)}",
        f"structure: {report.structure.value}",
        f"answer type: {report.answer_type.value}",
        "triples: " + "; ".join(f"({s}, {r}, {o})" for s, r, o in report.question_graph.triples),
        "words:",
    ]
    for w in report.words:
        chosen = "-" if w.chosen is None else f"sense {w.chosen}"
        line = f"  {w.lemma}/{w.pos.value}: {chosen} ({w.status.value})"
        if len(w.candidates) > 1:
            line += (f" candidates={','.join(map(str, w.candidates))}"
                     f" surviving={','.join(map(str, w.surviving))}")
            if w.support:
                line += " support=" + ",".join(f"{k}:{v}" for k, v in sorted(w.support.items()))
            if w.context_inconclusive:
                line += " context-inconclusive"
        lines.append(line)
    annotated = [f"[{a.chunk.text}/{a.chunk.kind}" + (f"#{a.sense}]" if a.sense is not None else "]")
                 for a in report.unambiguous_chunks]
    lines.append("unambiguous chunks: " + " ".join(annotated))
    return "\n".join(lines)


def format_validation(report: ValidationReport) -> str:
    lines = [f"error {code}: {msg}" for code, msg in report.errors]
    lines += [f"warning {code}: {msg}" for code, msg in report.warnings]
    lines.append(report.summary())
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--kb", dest="kb_dir", default=os.environ.get("NLQ_KB_DIR"),
                        help="knowledge-base directory (default: $NLQ_KB_DIR)")
    common.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")
    common.add_argument("--ablation", choices=("full", "context-only"), default="full",
                        help="context-only skips the ontology mapping stage")

    parser = _Parser(prog="lexdisambig", description="Lexical disambiguation of questions.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("resolve", parents=[common], help="resolve one question")
    p.add_argument("question")
    p = sub.add_parser("batch", parents=[common], help="resolve one question per line of a file")
    p.add_argument("--input", dest="input_file", required=True)
    sub.add_parser("validate", parents=[common], help="check the knowledge base")
    return parser


def parse_config(argv) -> CliConfig:
    args = _build_parser().parse_args(argv)
    if args.command is None:
        raise _UsageError("lexdisambig: error: a command is required (resolve, batch, validate)")
    if not args.kb_dir:
        raise _UsageError("lexdisambig: error: --kb is required (or set NLQ_KB_DIR)")
    return CliConfig(
        kb_dir=Path(args.kb_dir),
        command=args.command,
        question=getattr(args, "question", None),
        input_file=Path(args.input_file) if getattr(args, "input_file", None) else None,
        output_format=args.output_format,
        ablation=args.ablation,
    )


def read_questions(path: Path) -> list[str]:
    questions = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            questions.append(line)
    return questions


def _load(config: CliConfig, out, err) -> KnowledgeBase | None:
    try:
        kb = load_kb(config.kb_dir)
    except (OSError, KBError) as exc:
        print(f"cannot load knowledge base: {exc}", file=err)
        return None
    report = validate_kb(kb.lexicon, kb.context, kb.ontology)
    if config.command == "validate" or not report.ok:
        print(format_validation(report), file=out if config.command == "validate" else err)
    return kb if report.ok else None


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except _UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code or EXIT_OK

    questions = None
    if config.command == "batch":
        try:
            questions = read_questions(config.input_file)
        except (OSError, UnicodeDecodeError) as exc:
            print(f"cannot read input file: {exc}", file=err)
            return EXIT_USAGE

    kb = _load(config, out, err)
    if kb is None:
        return EXIT_KB
    if config.command == "validate":
        return EXIT_OK

    resolve = partial(resolve_question, kb=kb, use_ontology=config.ablation == "full")
    if config.command == "resolve":
        print(format_report(resolve(config.question), config.output_format), file=out)
        return EXIT_OK

    with ThreadPoolExecutor() as pool:
        reports = list(pool.map(resolve, questions))
    sep = "\n" if config.output_format == "json" else "\n\n"
    if reports:
        print(sep.join(format_report(r, config.output_format) for r in reports), file=out)
    return EXIT_OK


def main():
    sys.exit(run())
