"""Per-question disambiguation pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

from .graph import (Candidate, Headwords, QuestionGraph, Triple, build_question_graph,
                    extract_headwords, map_sense)
from .kb import ContextKnowledge, KnowledgeBase, Lexicon, lookup_senses
from .snlp import (AnswerType, Chunk, QuestionStructure, TaggedToken, Token, chunk,
                   classify_answer_type, classify_structure, tag, tokenize)
from .tags import PosTag


class ResolutionStatus(Enum):
    Unambiguous = "Unambiguous"
    ResolvedByOntology = "ResolvedByOntology"
    ResolvedByContext = "ResolvedByContext"
    FallbackFirstSense = "FallbackFirstSense"
    Unknown = "Unknown"


@dataclass(frozen=True)
class ContextLabelSet:
    labels: frozenset[str] = frozenset()
    contributors: dict[str, tuple[str, ...]] = field(default_factory=dict)


class SenseCandidate(NamedTuple):
    sense_id: int
    labels: frozenset[str]
    anchor: str | None


@dataclass(frozen=True)
class WordResolution:
    lemma: str
    pos: PosTag
    candidates: tuple[int, ...]
    surviving: tuple[int, ...]
    chosen: int | None
    status: ResolutionStatus
    support: dict[int, int] = field(default_factory=dict)
    context_inconclusive: bool = False


@dataclass(frozen=True)
class AnnotatedChunk:
    """A chunk with the lemma of its Noun/Verb head and the sense chosen for it."""

    chunk: Chunk
    lemma: str | None
    sense: int | None


@dataclass(frozen=True)
class ResolutionReport:
    question: str
    tagged: tuple[TaggedToken, ...]
    chunks: tuple[Chunk, ...]
    structure: QuestionStructure
    answer_type: AnswerType
    question_graph: QuestionGraph
    words: tuple[WordResolution, ...]
    unambiguous_chunks: tuple[AnnotatedChunk, ...] = ()

    @property
    def per_word(self) -> dict[str, WordResolution]:
        return {w.lemma: w for w in self.words}


def derive_context_labels(headwords: Headwords, lexicon: Lexicon, ctx: ContextKnowledge,
                          ambiguous_lemma: str) -> ContextLabelSet:
    """Labels contributed by the unambiguous Noun/Verb headwords of the question."""
    contributors: dict[str, list[str]] = {}
    words = [(h.lemma, PosTag.Noun) for h in headwords.nodes] + \
            [(h.lemma, PosTag.Verb) for h in headwords.relations]
    for lemma, pos in words:
        if lemma == ambiguous_lemma or len(lookup_senses(lexicon, lemma, pos)) != 1:
            continue
        for label in sorted({lemma.lower()} | ctx.aliases(lemma)):
            who = contributors.setdefault(label, [])
            if lemma not in who:
                who.append(lemma)
    return ContextLabelSet(frozenset(contributors), {k: tuple(v) for k, v in contributors.items()})


def filter_senses(candidates: Sequence[SenseCandidate | tuple],
                  context: ContextLabelSet) -> tuple[list[SenseCandidate], bool]:
    """Keep senses sharing a label with the context.

    Returns ``(surviving, inconclusive)``.  When nothing matches, every
    candidate survives and ``inconclusive`` is True.
    """
    candidates = [SenseCandidate(*c) for c in candidates]
    wanted = {label.lower() for label in context.labels}
    surviving = [c for c in candidates if {l.lower() for l in c.labels} & wanted]
    if not surviving:
        return candidates, True
    return surviving, False


def _candidates_for(lemma: str, pos: PosTag, kb: KnowledgeBase) -> list[SenseCandidate]:
    out = []
    for sense in lookup_senses(kb.lexicon, lemma, pos):
        rec = kb.context.get(lemma, pos, sense.id)
        if rec is None:
            out.append(SenseCandidate(sense.id, frozenset(), None))
        else:
            out.append(SenseCandidate(sense.id, rec.labels, rec.concept_anchor))
    return out


def _resolve_word(lemma: str, pos: PosTag, kb: KnowledgeBase, headwords: Headwords,
                  qgraph: QuestionGraph, use_ontology: bool) -> WordResolution:
    candidates = _candidates_for(lemma, pos, kb)
    ids = tuple(c.sense_id for c in candidates)
    if not candidates:
        return WordResolution(lemma, pos, (), (), None, ResolutionStatus.Unknown)
    if len(candidates) == 1:
        return WordResolution(lemma, pos, ids, ids, ids[0], ResolutionStatus.Unambiguous)

    context = derive_context_labels(headwords, kb.lexicon, kb.context, lemma)
    surviving, inconclusive = filter_senses(candidates, context)
    kept = tuple(c.sense_id for c in surviving)
    if use_ontology:
        mapping = map_sense(kb.ontology, kb.lexicon, kb.context, qgraph, lemma,
                            [Candidate(c.sense_id, c.anchor) for c in surviving])
        support = dict(mapping.per_sense_support)
        chosen = mapping.chosen
    else:
        support = {sid: 0 for sid in kept}
        chosen = None

    if chosen is not None:
        status = ResolutionStatus.ResolvedByOntology
    elif len(kept) == 1:
        status, chosen = ResolutionStatus.ResolvedByContext, kept[0]
    else:
        status, chosen = ResolutionStatus.FallbackFirstSense, min(kept)
    return WordResolution(lemma, pos, ids, kept, chosen, status, support, inconclusive)


def resolve_question(text: str, kb: KnowledgeBase, *, use_ontology: bool = True) -> ResolutionReport:
    """Run the whole pipeline on one question.

    ``use_ontology=False`` skips the ontology stage, leaving mapping support at
    zero for every surviving sense.
    """
    tagged = tag(tokenize(text), kb.tagger, kb.lexicon)
    chunks = chunk(tagged)
    headwords = extract_headwords(chunks, kb.lexicon)
    qgraph = build_question_graph(headwords)

    words = []
    seen = set()
    ordered = sorted([(h.chunk, h.lemma, PosTag.Noun) for h in headwords.nodes] +
                     [(h.chunk, h.lemma, PosTag.Verb) for h in headwords.relations],
                     key=lambda item: item[0])
    for _, lemma, pos in ordered:
        if lemma in seen:
            continue
        seen.add(lemma)
        words.append(_resolve_word(lemma, pos, kb, headwords, qgraph, use_ontology))

    lemma_at = {h.chunk: h.lemma for h in headwords.nodes + headwords.relations}
    chosen = {w.lemma: w.chosen for w in words}
    annotated = []
    for i, ch in enumerate(chunks):
        lemma = lemma_at.get(i)
        annotated.append(AnnotatedChunk(ch, lemma, chosen.get(lemma)))

    return ResolutionReport(
        question=text,
        tagged=tuple(tagged),
        chunks=tuple(chunks),
        structure=classify_structure(tagged),
        answer_type=classify_answer_type(tagged),
        question_graph=qgraph,
        words=tuple(words),
        unambiguous_chunks=tuple(annotated),
    )


# -- serialisation ---------------------------------------------------------

def report_to_dict(report: ResolutionReport) -> dict:
    """Plain-data form of a report; keys appear in a fixed order."""
    return {
        "question": report.question,
        "tokens": [t.surface for t in report.tagged],
        "tags": [t.tag.value for t in report.tagged],
        "chunks": [
            {
                "kind": a.chunk.kind,
                "start": a.chunk.start,
                "end": a.chunk.end,
                "text": a.chunk.text,
                "headword": a.chunk.headword,
                "head_index": a.chunk.head_index,
                "lemma": a.lemma,
                "sense": a.sense,
            }
            for a in report.unambiguous_chunks
        ],
        "structure": report.structure.value,
        "answer_type": report.answer_type.value,
        "triples": [list(t) for t in report.question_graph.triples],
        "words": [
            {
                "lemma": w.lemma,
                "pos": w.pos.value,
                "candidates": list(w.candidates),
                "surviving": list(w.surviving),
                "chosen": w.chosen,
                "status": w.status.value,
                "support": {str(k): v for k, v in sorted(w.support.items())},
                "context_inconclusive": w.context_inconclusive,
            }
            for w in report.words
        ],
    }


def report_from_dict(data: dict) -> ResolutionReport:
    tagged = tuple(
        TaggedToken(Token(surface, i), PosTag.parse(tag_name))
        for i, (surface, tag_name) in enumerate(zip(data["tokens"], data["tags"]))
    )
    annotated = []
    for c in data["chunks"]:
        ch = Chunk(c["kind"], tagged[c["start"]:c["end"]], c["headword"], c["head_index"])
        annotated.append(AnnotatedChunk(ch, c["lemma"], c["sense"]))
    words = tuple(
        WordResolution(
            lemma=w["lemma"],
            pos=PosTag.parse(w["pos"]),
            candidates=tuple(w["candidates"]),
            surviving=tuple(w["surviving"]),
            chosen=w["chosen"],
            status=ResolutionStatus(w["status"]),
            support={int(k): v for k, v in w["support"].items()},
            context_inconclusive=w["context_inconclusive"],
        )
        for w in data["words"]
    )
    return ResolutionReport(
        question=data["question"],
        tagged=tagged,
        chunks=tuple(a.chunk for a in annotated),
        structure=QuestionStructure(data["structure"]),
        answer_type=AnswerType(data["answer_type"]),
        question_graph=QuestionGraph(tuple(Triple(*t) for t in data["triples"])),
        words=words,
        unambiguous_chunks=tuple(annotated),
    )
