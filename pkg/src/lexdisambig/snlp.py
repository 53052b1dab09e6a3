"""Shallow NLP front end: tokenizer, rule-based tagger, chunker, question classifiers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .kb import Lexicon, TaggerRuleSet, lemmatize
from .tags import CONTENT_TAGS, PosTag

PUNCTUATION = frozenset("?.,!;:")


class Token(NamedTuple):
    surface: str
    index: int


class TaggedToken(NamedTuple):
    token: Token
    tag: PosTag

    @property
    def surface(self) -> str:
        return self.token.surface

    @property
    def index(self) -> int:
        return self.token.index


@dataclass(frozen=True)
class Chunk:
    kind: str  # "NP", "VP" or "PP"
    tokens: tuple[TaggedToken, ...]
    headword: str
    head_index: int

    @property
    def start(self) -> int:
        return self.tokens[0].index

    @property
    def end(self) -> int:
        """Index one past the last token."""
        return self.tokens[-1].index + 1

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    @property
    def head(self) -> TaggedToken:
        return self.tokens[self.head_index - self.start]


class AnswerType(Enum):
    PERSON = "PERSON"
    LOCATION = "LOCATION"
    TIME = "TIME"
    REASON = "REASON"
    MANNER = "MANNER"
    QUANTITY = "QUANTITY"
    ENTITY = "ENTITY"
    UNKNOWN = "UNKNOWN"


class QuestionStructure(Enum):
    Factoid = "Factoid"
    Complex = "Complex"


ANSWER_TYPES = {
    "who": AnswerType.PERSON,
    "whom": AnswerType.PERSON,
    "whose": AnswerType.PERSON,
    "where": AnswerType.LOCATION,
    "when": AnswerType.TIME,
    "why": AnswerType.REASON,
    "how": AnswerType.MANNER,
    "what": AnswerType.ENTITY,
    "which": AnswerType.ENTITY,
}
FACTOID_WORDS = frozenset({"who", "whom", "whose", "where", "when", "what", "which"})


def tokenize(text: str) -> list[Token]:
    surfaces = []
    for piece in text.split():
        lead = []
        while piece and piece[0] in PUNCTUATION:
            lead.append(piece[0])
            piece = piece[1:]
        trail = []
        while piece and piece[-1] in PUNCTUATION:
            trail.append(piece[-1])
            piece = piece[:-1]
        surfaces.extend(lead)
        if piece:
            surfaces.append(piece)
        surfaces.extend(reversed(trail))
    return [Token(s, i) for i, s in enumerate(surfaces)]


def detokenize(tokens) -> str:
    """Join tokens back into text, gluing punctuation to the preceding word."""
    out = ""
    for t in tokens:
        surface = t.surface
        if out and not (len(surface) == 1 and surface in PUNCTUATION):
            out += " "
        out += surface
    return out


def _lexicon_tag(word: str, lexicon: Lexicon) -> PosTag | None:
    hits = [pos for pos in sorted(CONTENT_TAGS, key=lambda p: p.value)
            if (lemmatize(lexicon, word, pos), pos) in lexicon]
    return hits[0] if len(hits) == 1 else None


def tag(tokens: list[Token], rules: TaggerRuleSet, lexicon: Lexicon) -> list[TaggedToken]:
    """Tag each token: word rules, then an unambiguous lexicon pos, then suffixes, then default."""
    tagged = []
    for tok in tokens:
        word = tok.surface.lower()
        pos = rules.word_tags.get(word)
        if pos is None:
            pos = _lexicon_tag(word, lexicon)
        if pos is None:
            for suffix, suffix_tag in rules.suffix_rules:
                if word.endswith(suffix):
                    pos = suffix_tag
                    break
        tagged.append(TaggedToken(tok, pos if pos is not None else rules.default_tag))
    return tagged


def _match_np(tagged: list[TaggedToken], i: int) -> int | None:
    """End index of an NP starting at ``i``, or None.  NP := Det? Adjective* Noun+ | Pron."""
    n = len(tagged)
    if i < n and tagged[i].tag is PosTag.Pron:
        return i + 1
    j = i
    if j < n and tagged[j].tag is PosTag.Det:
        j += 1
    while j < n and tagged[j].tag is PosTag.Adjective:
        j += 1
    k = j
    while k < n and tagged[k].tag is PosTag.Noun:
        k += 1
    return k if k > j else None


def _make(kind: str, span: tuple[TaggedToken, ...], head: TaggedToken) -> Chunk:
    return Chunk(kind, span, head.surface.lower(), head.index)


def _last_noun(span) -> TaggedToken:
    for t in reversed(span):
        if t.tag is PosTag.Noun:
            return t
    return span[-1]


def chunk(tagged: list[TaggedToken]) -> list[Chunk]:
    """Greedy left-to-right chunking into NP, VP and PP.

    Wh-words, auxiliaries, punctuation and anything the grammar cannot place
    stay outside every chunk.
    """
    chunks = []
    i, n = 0, len(tagged)
    while i < n:
        t = tagged[i].tag
        if t is PosTag.Prep:
            end = _match_np(tagged, i + 1)
            if end is not None:
                span = tuple(tagged[i:end])
                chunks.append(_make("PP", span, _last_noun(span[1:])))
                i = end
                continue
        elif t is PosTag.Verb:
            end = i
            while end < n and tagged[end].tag is PosTag.Verb:
                end += 1
            span = tuple(tagged[i:end])
            chunks.append(_make("VP", span, span[-1]))
            i = end
            continue
        elif t in (PosTag.Det, PosTag.Adjective, PosTag.Noun, PosTag.Pron):
            end = _match_np(tagged, i)
            if end is not None:
                span = tuple(tagged[i:end])
                chunks.append(_make("NP", span, _last_noun(span)))
                i = end
                continue
        i += 1
    return chunks


def _interrogative(tagged: list[TaggedToken]) -> tuple[int, str] | None:
    for pos, t in enumerate(tagged):
        word = t.surface.lower()
        if t.tag is PosTag.WhQ or word in ANSWER_TYPES:
            return pos, word
    return None


def classify_answer_type(tagged: list[TaggedToken]) -> AnswerType:
    found = _interrogative(tagged)
    if found is None:
        return AnswerType.UNKNOWN
    pos, word = found
    if word == "how" and pos + 1 < len(tagged) and tagged[pos + 1].surface.lower() in ("many", "much"):
        return AnswerType.QUANTITY
    return ANSWER_TYPES.get(word, AnswerType.UNKNOWN)


def classify_structure(tagged: list[TaggedToken]) -> QuestionStructure:
    found = _interrogative(tagged)
    if found is not None and found[1] in FACTOID_WORDS:
        return QuestionStructure.Factoid
    return QuestionStructure.Complex
