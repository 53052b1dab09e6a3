"""Knowledge-base data model and loaders.

A knowledge base is four line-oriented text files living in one directory:

    lexicon.kb    lemma|pos|sense_id|gloss|syn1,syn2,...
                  !inflect|surface|lemma|pos
    context.kb    lemma|pos|sense_id|label1,label2,...[|@ConceptName]
                  !alias|lemma|label1,label2,...
    ontology.kb   node|Name
                  edge|Source|relation_lemma|Target
    tagger.kb     word|surface|Tag
                  suffix|suffix_string|Tag
                  default|Tag

Lines starting with ``#`` are comments; blank lines are ignored.  Every
structure here is treated as immutable once loaded.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, TextIO

from .tags import CONTENT_TAGS, PosTag

LEXICON_FILE = "lexicon.kb"
CONTEXT_FILE = "context.kb"
ONTOLOGY_FILE = "ontology.kb"
TAGGER_FILE = "tagger.kb"

# tried independently against the original surface, first hit wins
SUFFIX_STRIPS = (("ies", "y"), ("es", ""), ("s", ""), ("ing", ""), ("ed", ""))

_LABEL_RE = re.compile(r"^[^\s|,&@#]+$")


class KBError(ValueError):
    """Raised when a knowledge-base file is malformed or inconsistent."""

    def __init__(self, message: str, *, line: int | None = None, code: str = "parse"):
        self.message = message
        self.line = line
        self.code = code
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Sense:
    id: int
    gloss: str
    synonyms: frozenset[str] = frozenset()


@dataclass(frozen=True)
class LexicalEntry:
    lemma: str
    pos: PosTag
    senses: tuple[Sense, ...]
    inflections: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.lemma != self.lemma.lower() or not self.lemma:
            raise KBError(f"lemma {self.lemma!r} must be non-empty lowercase", code="bad-lemma")
        if self.pos not in CONTENT_TAGS:
            raise KBError(f"{self.lemma}: {self.pos} is not a content part of speech", code="bad-pos")
        if not self.senses:
            raise KBError(f"{self.lemma}|{self.pos}: entry has no senses", code="empty-senses")
        prev = 0
        for sense in self.senses:
            if sense.id <= prev:
                raise KBError(
                    f"{self.lemma}|{self.pos}: sense ids must be positive and strictly increasing "
                    f"(got {sense.id} after {prev})",
                    code="sense-order",
                )
            prev = sense.id
            if self.lemma in sense.synonyms:
                raise KBError(f"{self.lemma}|{self.pos}#{sense.id}: lists itself as a synonym",
                              code="self-synonym")

    @property
    def ambiguous(self) -> bool:
        return len(self.senses) >= 2

    def sense(self, sense_id: int) -> Sense | None:
        for s in self.senses:
            if s.id == sense_id:
                return s
        return None


class Lexicon:
    """Sense inventory keyed by (lemma, pos)."""

    def __init__(self, entries: Iterable[LexicalEntry] = ()):
        self.entries: dict[tuple[str, PosTag], LexicalEntry] = {}
        self._inflected: dict[tuple[str, PosTag], str] = {}
        for entry in entries:
            key = (entry.lemma, entry.pos)
            if key in self.entries:
                raise KBError(f"duplicate entry {entry.lemma}|{entry.pos}", code="duplicate-key")
            self.entries[key] = entry
            for surface in entry.inflections:
                other = self._inflected.setdefault((surface, entry.pos), entry.lemma)
                if other != entry.lemma:
                    raise KBError(f"inflection {surface!r} maps to both {other} and {entry.lemma}",
                                  code="duplicate-key")

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[LexicalEntry]:
        return iter(self.entries.values())

    def __contains__(self, key):
        return key in self.entries

    def __eq__(self, other):
        return isinstance(other, Lexicon) and self.entries == other.entries

    def __repr__(self):
        return f"Lexicon({len(self)} entries)"

    def get(self, lemma: str, pos: PosTag) -> LexicalEntry | None:
        return self.entries.get((lemma, pos))

    def lemmas(self) -> set[str]:
        return {lemma for lemma, _ in self.entries}

    def match(self, word: str, pos: PosTag) -> str | None:
        """Exact lemma or listed inflection for ``pos``; no suffix stripping."""
        if (word, pos) in self.entries:
            return word
        return self._inflected.get((word, pos))

    def synonyms(self, lemma: str, pos: PosTag) -> frozenset[str]:
        entry = self.get(lemma, pos)
        if entry is None:
            return frozenset()
        return frozenset().union(*(s.synonyms for s in entry.senses))


class ContextRecord(NamedTuple):
    lemma: str
    pos: PosTag
    sense_id: int
    labels: frozenset[str]
    concept_anchor: str | None = None


@dataclass(frozen=True)
class ContextKnowledge:
    records: dict[tuple[str, PosTag, int], ContextRecord] = field(default_factory=dict)
    label_aliases: dict[str, frozenset[str]] = field(default_factory=dict)

    @classmethod
    def build(cls, records: Iterable[ContextRecord] = (), label_aliases=None) -> "ContextKnowledge":
        table = {}
        for rec in records:
            key = (rec.lemma, rec.pos, rec.sense_id)
            if key in table:
                raise KBError(f"duplicate context record {rec.lemma}|{rec.pos}|{rec.sense_id}",
                              code="duplicate-key")
            table[key] = rec
        aliases = {k: frozenset(v) for k, v in (label_aliases or {}).items()}
        return cls(table, aliases)

    def get(self, lemma: str, pos: PosTag, sense_id: int) -> ContextRecord | None:
        return self.records.get((lemma, pos, sense_id))

    def records_for(self, lemma: str, pos: PosTag) -> list[ContextRecord]:
        found = [r for (l, p, _), r in self.records.items() if l == lemma and p == pos]
        return sorted(found, key=lambda r: r.sense_id)

    def aliases(self, lemma: str) -> frozenset[str]:
        return self.label_aliases.get(lemma, frozenset())


class Edge(NamedTuple):
    source: str
    relation: str
    target: str


class Ontology:
    """Concept nodes plus labeled directed relation edges."""

    def __init__(self, nodes: Iterable[str] = (), edges: Iterable[Edge | tuple] = ()):
        node_set = set()
        self._by_lower: dict[str, str] = {}
        for name in nodes:
            if name in node_set:
                raise KBError(f"duplicate node {name!r}", code="duplicate-node")
            node_set.add(name)
        for name in sorted(node_set):
            self._by_lower.setdefault(name.lower(), name)
        edge_set = set()
        for e in edges:
            e = Edge(*e)
            for end in (e.source, e.target):
                if end not in node_set:
                    raise KBError(f"edge {e.source}-{e.relation}->{e.target} references "
                                  f"undeclared node {end!r}", code="undeclared-node")
            if e in edge_set:
                raise KBError(f"duplicate edge {e.source}-{e.relation}->{e.target}",
                              code="duplicate-edge")
            edge_set.add(e)
        self.nodes: frozenset[str] = frozenset(node_set)
        self.edges: frozenset[Edge] = frozenset(edge_set)

    def __eq__(self, other):
        return isinstance(other, Ontology) and (self.nodes, self.edges) == (other.nodes, other.edges)

    def __repr__(self):
        return f"Ontology({len(self.nodes)} nodes, {len(self.edges)} edges)"

    def find_node(self, name: str) -> str | None:
        """Case-insensitive node lookup."""
        return self._by_lower.get(name.lower())


@dataclass(frozen=True)
class TaggerRuleSet:
    word_tags: dict[str, PosTag] = field(default_factory=dict)
    suffix_rules: tuple[tuple[str, PosTag], ...] = ()
    default_tag: PosTag = PosTag.Unknown


@dataclass
class ValidationReport:
    errors: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        return f"{len(self.errors)} errors, {len(self.warnings)} warnings"


@dataclass(frozen=True)
class KnowledgeBase:
    lexicon: Lexicon
    context: ContextKnowledge
    ontology: Ontology
    tagger: TaggerRuleSet


# -- parsing ---------------------------------------------------------------

def _lines(source: str | TextIO) -> Iterator[tuple[int, list[str]]]:
    if isinstance(source, str):
        source = io.StringIO(source)
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, [f.strip() for f in line.split("|")]


def _pos(text: str, lineno: int) -> PosTag:
    try:
        return PosTag.parse(text)
    except ValueError as exc:
        raise KBError(str(exc), line=lineno) from None


def _sense_id(text: str, lineno: int) -> int:
    if not text.isdigit() or int(text) < 1:
        raise KBError(f"sense id must be a positive integer, got {text!r}", line=lineno)
    return int(text)


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _labels(text: str, lineno: int) -> frozenset[str]:
    labels = set()
    for part in text.split(","):
        for label in part.split("&"):
            label = label.strip().lower()
            if not _LABEL_RE.match(label):
                raise KBError(f"malformed context label {label!r} in {text!r}", line=lineno,
                              code="malformed-label")
            labels.add(label)
    return frozenset(labels)


def load_lexicon(source: str | TextIO) -> Lexicon:
    """Parse ``lexicon.kb`` text.  Sense lines of one entry must be contiguous."""
    order: list[tuple[str, PosTag]] = []
    senses: dict[tuple[str, PosTag], list[Sense]] = {}
    inflections: dict[tuple[str, PosTag], set[str]] = {}
    inflect_lines: dict[tuple[str, PosTag], int] = {}
    for lineno, fields in _lines(source):
        if fields[0] == "!inflect":
            if len(fields) != 4:
                raise KBError("inflection line needs !inflect|surface|lemma|pos", line=lineno)
            surface, lemma = fields[1].lower(), fields[2].lower()
            key = (lemma, _pos(fields[3], lineno))
            inflections.setdefault(key, set()).add(surface)
            inflect_lines.setdefault(key, lineno)
            continue
        if len(fields) not in (4, 5):
            raise KBError(f"expected lemma|pos|sense_id|gloss[|synonyms], got {len(fields)} fields",
                          line=lineno)
        lemma = fields[0]
        if not lemma or lemma != lemma.lower():
            raise KBError(f"lemma {lemma!r} must be non-empty lowercase", line=lineno)
        key = (lemma, _pos(fields[1], lineno))
        if key not in senses:
            senses[key] = []
            order.append(key)
        elif order[-1] != key:
            raise KBError(f"duplicate entry {lemma}|{key[1]}", line=lineno, code="duplicate-key")
        sid = _sense_id(fields[2], lineno)
        if senses[key] and sid <= senses[key][-1].id:
            raise KBError(f"{lemma}|{key[1]}: sense {sid} does not follow {senses[key][-1].id}",
                          line=lineno, code="sense-order")
        syns = frozenset(s.lower() for s in _split_list(fields[4])) if len(fields) == 5 else frozenset()
        if lemma in syns:
            raise KBError(f"{lemma} lists itself as a synonym", line=lineno, code="self-synonym")
        senses[key].append(Sense(sid, fields[3], syns))
    for key, lineno in inflect_lines.items():
        if key not in senses:
            raise KBError(f"inflection for {key[0]}|{key[1]} which has no senses", line=lineno,
                          code="empty-senses")
    return Lexicon(
        LexicalEntry(l, p, tuple(senses[(l, p)]), frozenset(inflections.get((l, p), ())))
        for l, p in order
    )


def load_context_knowledge(source: str | TextIO, lexicon: Lexicon) -> ContextKnowledge:
    records = []
    seen = {}
    aliases: dict[str, set[str]] = {}
    for lineno, fields in _lines(source):
        if fields[0] == "!alias":
            if len(fields) != 3:
                raise KBError("alias line needs !alias|lemma|labels", line=lineno)
            aliases.setdefault(fields[1].lower(), set()).update(_labels(fields[2], lineno))
            continue
        if len(fields) not in (4, 5):
            raise KBError(f"expected lemma|pos|sense_id|labels[|@Concept], got {len(fields)} fields",
                          line=lineno)
        lemma, pos, sid = fields[0].lower(), _pos(fields[1], lineno), _sense_id(fields[2], lineno)
        entry = lexicon.get(lemma, pos)
        if entry is None or entry.sense(sid) is None:
            raise KBError(f"{lemma}|{pos}|{sid} does not name a lexicon sense", line=lineno,
                          code="dangling-sense")
        anchor = None
        if len(fields) == 5:
            if not fields[4].startswith("@") or len(fields[4]) < 2:
                raise KBError(f"concept anchor must look like @Name, got {fields[4]!r}", line=lineno,
                              code="malformed-anchor")
            anchor = fields[4][1:]
        key = (lemma, pos, sid)
        if key in seen:
            raise KBError(f"duplicate context record {lemma}|{pos}|{sid} (first on line {seen[key]})",
                          line=lineno, code="duplicate-key")
        seen[key] = lineno
        records.append(ContextRecord(lemma, pos, sid, _labels(fields[3], lineno), anchor))
    return ContextKnowledge.build(records, aliases)


def load_ontology(source: str | TextIO) -> Ontology:
    nodes, edges = [], []
    for lineno, fields in _lines(source):
        kind = fields[0]
        if kind == "node" and len(fields) == 2 and fields[1]:
            nodes.append((lineno, fields[1]))
        elif kind == "edge" and len(fields) == 4 and all(fields[1:]):
            edges.append((lineno, Edge(fields[1], fields[2].lower(), fields[3])))
        else:
            raise KBError(f"unrecognised ontology line {'|'.join(fields)!r}", line=lineno)
    node_set = set()
    for lineno, name in nodes:
        if name in node_set:
            raise KBError(f"duplicate node {name!r}", line=lineno, code="duplicate-node")
        node_set.add(name)
    seen = set()
    for lineno, e in edges:
        for end in (e.source, e.target):
            if end not in node_set:
                raise KBError(f"edge references undeclared node {end!r}", line=lineno,
                              code="undeclared-node")
        if e in seen:
            raise KBError(f"duplicate edge {e.source}|{e.relation}|{e.target}", line=lineno,
                          code="duplicate-edge")
        seen.add(e)
    return Ontology([n for _, n in nodes], [e for _, e in edges])


def load_tagger_rules(source: str | TextIO) -> TaggerRuleSet:
    words, suffixes, default = {}, [], PosTag.Unknown
    for lineno, fields in _lines(source):
        kind = fields[0]
        if kind == "word" and len(fields) == 3:
            words[fields[1].lower()] = _pos(fields[2], lineno)
        elif kind == "suffix" and len(fields) == 3 and fields[1]:
            suffixes.append((fields[1].lower(), _pos(fields[2], lineno)))
        elif kind == "default" and len(fields) == 2:
            default = _pos(fields[1], lineno)
        else:
            raise KBError(f"unrecognised tagger line {'|'.join(fields)!r}", line=lineno)
    return TaggerRuleSet(words, tuple(suffixes), default)


def load_kb(directory: str | Path) -> KnowledgeBase:
    """Load the four KB files from ``directory``.  Raises OSError or KBError."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"knowledge-base directory not found: {directory}")

    def read(name):
        return (directory / name).read_text(encoding="utf-8")

    def wrap(name, fn, *args):
        try:
            return fn(read(name), *args)
        except KBError as exc:
            raise KBError(f"{name}: {exc}", code=exc.code) from exc

    lexicon = wrap(LEXICON_FILE, load_lexicon)
    return KnowledgeBase(
        lexicon=lexicon,
        context=wrap(CONTEXT_FILE, load_context_knowledge, lexicon),
        ontology=wrap(ONTOLOGY_FILE, load_ontology),
        tagger=wrap(TAGGER_FILE, load_tagger_rules),
    )


# -- serialisation ---------------------------------------------------------

def dump_lexicon(lexicon: Lexicon) -> str:
    out = []
    for entry in lexicon:
        for s in entry.senses:
            line = f"{entry.lemma}|{entry.pos.name}|{s.id}|{s.gloss}"
            if s.synonyms:
                line += "|" + ",".join(sorted(s.synonyms))
            out.append(line)
        for surface in sorted(entry.inflections):
            out.append(f"!inflect|{surface}|{entry.lemma}|{entry.pos.name}")
    return "\n".join(out) + "\n" if out else ""


def dump_context_knowledge(ctx: ContextKnowledge) -> str:
    out = []
    for rec in sorted(ctx.records.values(), key=lambda r: (r.lemma, r.pos.name, r.sense_id)):
        line = f"{rec.lemma}|{rec.pos.name}|{rec.sense_id}|{','.join(sorted(rec.labels))}"
        if rec.concept_anchor:
            line += f"|@{rec.concept_anchor}"
        out.append(line)
    for lemma in sorted(ctx.label_aliases):
        out.append(f"!alias|{lemma}|{','.join(sorted(ctx.label_aliases[lemma]))}")
    return "\n".join(out) + "\n" if out else ""


def dump_ontology(onto: Ontology) -> str:
    out = [f"node|{n}" for n in sorted(onto.nodes)]
    out += [f"edge|{e.source}|{e.relation}|{e.target}" for e in sorted(onto.edges)]
    return "\n".join(out) + "\n" if out else ""


def dump_tagger_rules(rules: TaggerRuleSet) -> str:
    out = [f"word|{w}|{t.name}" for w, t in rules.word_tags.items()]
    out += [f"suffix|{s}|{t.name}" for s, t in rules.suffix_rules]
    out.append(f"default|{rules.default_tag.name}")
    return "\n".join(out) + "\n"


# -- queries ---------------------------------------------------------------

def lookup_senses(lexicon: Lexicon, lemma: str, pos: PosTag) -> list[Sense]:
    entry = lexicon.get(lemma.lower(), pos)
    if entry is None:
        return []
    return sorted(entry.senses, key=lambda s: s.id)


def lemmatize(lexicon: Lexicon, surface: str, pos: PosTag) -> str:
    word = surface.lower()
    hit = lexicon.match(word, pos)
    if hit is not None:
        return hit
    for suffix, replacement in SUFFIX_STRIPS:
        if word.endswith(suffix) and len(word) > len(suffix):
            hit = lexicon.match(word[: -len(suffix)] + replacement, pos)
            if hit is not None:
                return hit
    return word


def validate_kb(lexicon: Lexicon, ctx: ContextKnowledge, onto: Ontology) -> ValidationReport:
    report = ValidationReport()
    for rec in sorted(ctx.records.values(), key=lambda r: (r.lemma, r.pos.name, r.sense_id)):
        if rec.concept_anchor is not None and rec.concept_anchor not in onto.nodes:
            report.errors.append((
                "dangling-anchor",
                f"{rec.lemma}|{rec.pos}|{rec.sense_id}: anchor @{rec.concept_anchor} "
                f"is not an ontology node",
            ))
    known = lexicon.lemmas()
    for entry in lexicon:
        if entry.ambiguous:
            records = ctx.records_for(entry.lemma, entry.pos)
            if not records:
                report.errors.append((
                    "uncovered-ambiguous",
                    f"ambiguous entry uncovered: {entry.lemma}|{entry.pos} has "
                    f"{len(entry.senses)} senses but no context records",
                ))
            anchored = {r.sense_id for r in records if r.concept_anchor}
            for s in entry.senses:
                if s.id not in anchored:
                    report.warnings.append((
                        "unanchored-sense",
                        f"{entry.lemma}|{entry.pos}|{s.id} has no concept anchor",
                    ))
        for s in entry.senses:
            for syn in sorted(s.synonyms - known):
                report.warnings.append((
                    "unknown-synonym",
                    f"{entry.lemma}|{entry.pos}|{s.id}: synonym {syn!r} is not in the lexicon",
                ))
    return report
