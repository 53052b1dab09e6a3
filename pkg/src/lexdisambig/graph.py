"""Question graphs and sense selection by mapping onto the domain ontology."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple, Sequence

from .kb import ContextKnowledge, Edge, Lexicon, Ontology, lemmatize
from .snlp import Chunk
from .tags import PosTag

ORACLE_MAX_CANDIDATES = 8
ORACLE_MAX_NODES = 12


class HeadwordRef(NamedTuple):
    lemma: str
    chunk: int


class Triple(NamedTuple):
    subject: str
    relation: str
    object: str


class Candidate(NamedTuple):
    sense_id: int
    anchor: str | None


class Match(NamedTuple):
    edge: Edge
    triple: Triple
    sense_id: int


@dataclass(frozen=True)
class Headwords:
    nodes: tuple[HeadwordRef, ...] = ()
    relations: tuple[HeadwordRef, ...] = ()


@dataclass(frozen=True)
class QuestionGraph:
    triples: tuple[Triple, ...] = ()


@dataclass(frozen=True)
class MappingResult:
    chosen: int | None = None
    matched_triples: tuple[Match, ...] = ()
    per_sense_support: dict[int, int] = field(default_factory=dict)


def extract_headwords(chunks: Sequence[Chunk], lexicon: Lexicon) -> Headwords:
    """NP/PP heads become nodes and VP heads relations, keeping only Noun/Verb heads."""
    nodes, relations = [], []
    for i, ch in enumerate(chunks):
        tag = ch.head.tag
        if ch.kind in ("NP", "PP") and tag is PosTag.Noun:
            nodes.append(HeadwordRef(lemmatize(lexicon, ch.headword, PosTag.Noun), i))
        elif ch.kind == "VP" and tag is PosTag.Verb:
            relations.append(HeadwordRef(lemmatize(lexicon, ch.headword, PosTag.Verb), i))
    return Headwords(tuple(nodes), tuple(relations))


def build_question_graph(headwords: Headwords) -> QuestionGraph:
    """Link each relation's nearest preceding node to every node after it."""
    triples = []
    for rel in headwords.relations:
        before = [n for n in headwords.nodes if n.chunk < rel.chunk]
        if not before:
            continue
        subject = before[-1].lemma
        for obj in headwords.nodes:
            if obj.chunk > rel.chunk:
                triples.append(Triple(subject, rel.lemma, obj.lemma))
    return QuestionGraph(tuple(triples))


def _candidates(candidates) -> list[Candidate]:
    out = [Candidate(*c) for c in candidates]
    if len({c.sense_id for c in out}) != len(out):
        raise ValueError("candidate sense ids must be unique")
    return out


def _choose(support: dict[int, int]) -> int | None:
    best = None
    for sid in sorted(support):
        if support[sid] >= 1 and (best is None or support[sid] > support[best]):
            best = sid
    return best


def _concept_of(lemma: str, onto: Ontology, lexicon: Lexicon, ctx: ContextKnowledge | None):
    """Concept denoted by an unambiguous slot: its sense's anchor, else a same-named node."""
    if ctx is not None:
        entry = lexicon.get(lemma, PosTag.Noun)
        if entry is not None and len(entry.senses) == 1:
            rec = ctx.get(lemma, PosTag.Noun, entry.senses[0].id)
            if rec is not None and rec.concept_anchor is not None:
                return rec.concept_anchor
    return onto.find_node(lemma)


def _relation_forms(relation: str, lexicon: Lexicon) -> frozenset[str]:
    return frozenset({relation}) | lexicon.synonyms(relation, PosTag.Verb)


def map_sense(onto: Ontology, lexicon: Lexicon, ctx: ContextKnowledge | None, qgraph: QuestionGraph,
              ambiguous_lemma: str, candidates: Sequence[Candidate | tuple]) -> MappingResult:
    """Score each candidate sense by how many question triples it lets the ontology confirm.

    The ambiguous slot of a triple takes the candidate's anchor concept; the
    other slot and the relation (or any of its synonyms) must then line up
    with an ontology edge, in either direction.  Senses without an anchor score
    zero.
    """
    candidates = _candidates(candidates)
    relevant = [t for t in qgraph.triples if ambiguous_lemma in (t.subject, t.object)]
    if not relevant:
        return MappingResult()

    by_endpoints: dict[tuple[str, str], list[Edge]] = {}
    for e in onto.edges:
        by_endpoints.setdefault((e.source, e.target), []).append(e)
        by_endpoints.setdefault((e.target, e.source), []).append(e)

    support = {c.sense_id: 0 for c in candidates}
    matches = []
    for cand in sorted(candidates):
        if cand.anchor is None:
            continue
        for triple in relevant:
            subj = cand.anchor if triple.subject == ambiguous_lemma else \
                _concept_of(triple.subject, onto, lexicon, ctx)
            obj = cand.anchor if triple.object == ambiguous_lemma else \
                _concept_of(triple.object, onto, lexicon, ctx)
            if subj is None or obj is None:
                continue
            forms = _relation_forms(triple.relation, lexicon)
            hits = [e for e in by_endpoints.get((subj, obj), ()) if e.relation in forms]
            if hits:
                support[cand.sense_id] += 1
                matches.append(Match(min(hits), triple, cand.sense_id))
    return MappingResult(_choose(support), tuple(matches), support)


def enumerate_oracle(onto: Ontology, lexicon: Lexicon, qgraph: QuestionGraph, ambiguous_lemma: str,
                     candidates: Sequence[Candidate | tuple],
                     ctx: ContextKnowledge | None = None) -> MappingResult:
    """Brute-force reference for :func:`map_sense` at desk scale.

    Walks every (candidate, triple, edge, orientation, relation form)
    combination and asks, per combination, whether the edge endpoints denote
    the triple's slots.  Shares no matching code with ``map_sense``.
    """
    candidates = _candidates(candidates)
    if len(candidates) > ORACLE_MAX_CANDIDATES or len(onto.nodes) > ORACLE_MAX_NODES:
        raise ValueError(
            f"oracle limited to {ORACLE_MAX_CANDIDATES} candidates and {ORACLE_MAX_NODES} nodes"
        )

    def denotes(node: str, lemma: str) -> bool:
        # the slot's own anchor wins over the name match
        if ctx is not None:
            nouns = [e for e in lexicon if e.lemma == lemma and e.pos is PosTag.Noun]
            if nouns and len(nouns[0].senses) == 1:
                only = nouns[0].senses[0].id
                for rec in ctx.records.values():
                    if (rec.lemma, rec.pos, rec.sense_id) == (lemma, PosTag.Noun, only) \
                            and rec.concept_anchor is not None:
                        return node == rec.concept_anchor
        named = [n for n in sorted(onto.nodes) if n.lower() == lemma.lower()]
        return bool(named) and named[0] == node

    def relation_ok(edge_rel: str, rel: str) -> bool:
        if edge_rel == rel:
            return True
        for entry in lexicon:
            if entry.lemma == rel and entry.pos is PosTag.Verb:
                if any(edge_rel in s.synonyms for s in entry.senses):
                    return True
        return False

    if not any(ambiguous_lemma in (t.subject, t.object) for t in qgraph.triples):
        return MappingResult()

    support = {}
    matches = []
    for cand in sorted(candidates):
        support[cand.sense_id] = 0
        for triple in qgraph.triples:
            if ambiguous_lemma not in (triple.subject, triple.object):
                continue
            found = []
            for edge, flipped in product(sorted(onto.edges), (False, True)):
                if cand.anchor is None:
                    break
                a, b = (edge.target, edge.source) if flipped else (edge.source, edge.target)
                subj_ok = a == cand.anchor if triple.subject == ambiguous_lemma else denotes(a, triple.subject)
                obj_ok = b == cand.anchor if triple.object == ambiguous_lemma else denotes(b, triple.object)
                if subj_ok and obj_ok and relation_ok(edge.relation, triple.relation):
                    found.append(edge)
            if found:
                support[cand.sense_id] += 1
                matches.append(Match(min(found), triple, cand.sense_id))

    chosen = None
    top = max(support.values(), default=0)
    if top >= 1:
        chosen = min(sid for sid, n in support.items() if n == top)
    return MappingResult(chosen, tuple(matches), support)
