"""Random desk-scale mapping instances for oracle and property checks."""

import random

from lexdisambig.graph import Candidate, QuestionGraph, Triple
from lexdisambig.kb import ContextKnowledge, ContextRecord, LexicalEntry, Lexicon, Ontology, Sense
from lexdisambig.tags import PosTag

AMBIGUOUS = "amb"
RELATIONS = [f"r{i}" for i in range(6)]


def random_instance(seed, max_nodes=12, max_edges=20, max_candidates=8, max_triples=5):
    rng = random.Random(seed)
    names = [f"N{i}" if rng.random() < 0.7 else f"n{i}x".upper() for i in range(max_nodes)]
    # "n0"/"n1" collide case-insensitively with "N0"/"N1" when both are drawn
    nodes = rng.sample(names + ["n0", "n1"], rng.randint(0, max_nodes))

    edges = set()
    if nodes:
        for _ in range(rng.randint(0, max_edges)):
            edges.add((rng.choice(nodes), rng.choice(RELATIONS), rng.choice(nodes)))
    onto = Ontology(nodes, sorted(edges))

    entries = []
    for rel in RELATIONS:
        if rng.random() < 0.6:
            others = [r for r in RELATIONS if r != rel]
            syns = frozenset(rng.sample(others, rng.randint(0, 2)))
            entries.append(LexicalEntry(rel, PosTag.Verb, (Sense(1, f"{rel} gloss", syns),)))

    # slot lemmas: lowercase node names, plus one word no node is called
    slot_lemmas = sorted({n.lower() for n in names}) + ["stray"]
    records = []
    for lemma in slot_lemmas:
        roll = rng.random()
        if roll < 0.5:
            entries.append(LexicalEntry(lemma, PosTag.Noun, (Sense(1, "g"),)))
            if rng.random() < 0.3:
                anchor = rng.choice(nodes) if nodes and rng.random() < 0.8 else "Ghost"
                records.append(ContextRecord(lemma, PosTag.Noun, 1, frozenset({"x"}), anchor))
        elif roll < 0.65:
            entries.append(LexicalEntry(lemma, PosTag.Noun, (Sense(1, "g"), Sense(2, "h"))))

    sense_ids = sorted(rng.sample(range(1, 11), rng.randint(1, max_candidates)))
    entries.append(LexicalEntry(AMBIGUOUS, PosTag.Noun, tuple(Sense(i, f"s{i}") for i in sense_ids)))
    candidates = []
    for sid in sense_ids:
        roll = rng.random()
        anchor = None if roll < 0.2 else ("Ghost" if roll < 0.25 or not nodes else rng.choice(nodes))
        candidates.append(Candidate(sid, anchor))
    rng.shuffle(candidates)

    triples = []
    for _ in range(rng.randint(0, max_triples)):
        other = rng.choice(slot_lemmas + [AMBIGUOUS])
        rel = rng.choice(RELATIONS)
        roll = rng.random()
        if roll < 0.45:
            triples.append(Triple(AMBIGUOUS, rel, other))
        elif roll < 0.9:
            triples.append(Triple(other, rel, AMBIGUOUS))
        else:
            triples.append(Triple(other, rel, rng.choice(slot_lemmas)))

    ctx = ContextKnowledge.build(records)
    return onto, Lexicon(entries), ctx, QuestionGraph(tuple(triples)), AMBIGUOUS, candidates
