"""Exit criteria.  Each test prints one PASS/FAIL line (visible with ``pytest -s``)."""

import json
import random
import time

import pytest

from lexdisambig import load_kb
from lexdisambig.cli import format_chunks, format_tags, run
from lexdisambig.graph import enumerate_oracle, extract_headwords, map_sense
from lexdisambig.kb import ContextKnowledge, KBError, dump_ontology, load_ontology, validate_kb
from lexdisambig.snlp import chunk, tag, tokenize
from lexdisambig.tags import PosTag
from lexdisambig.wsd import (ContextLabelSet, ResolutionStatus, SenseCandidate, filter_senses,
                             report_to_dict, resolve_question)

from conftest import BANK_Q, CHAIR_Q, RIVER_Q
from randkb import random_instance

STEP1_TAGS = "[How/Wh-Q] [can/Aux] [student/Noun] [deposit/Verb] [money/Noun] [into/IN] [the/Det] [bank/Noun]"
STEP2_CHUNKS = "[student/NP] [deposit/VP] [money/NP] [into the bank/PP]"


@pytest.fixture
def verdict(capsys):
    def emit(number, name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}" + (f" ({detail})" if detail else ""))
        assert ok, detail
    return emit


def test_1_worked_example(kb_dir, verdict):
    start = time.perf_counter()
    kb = load_kb(kb_dir)
    rep = resolve_question(BANK_Q, kb)
    elapsed_ms = (time.perf_counter() - start) * 1000
    hw = extract_headwords(rep.chunks, kb.lexicon)
    bank = rep.per_word["bank"]
    checks = {
        "tags": format_tags(rep.tagged) == STEP1_TAGS,
        "chunks": format_chunks(rep.chunks) == STEP2_CHUNKS,
        "nodes": [h.lemma for h in hw.nodes] == ["student", "money", "bank"],
        "relations": [h.lemma for h in hw.relations] == ["deposit"],
        "surviving": bank.surviving == (2, 3, 4, 6),
        "chosen": bank.chosen == 2 and bank.status is ResolutionStatus.ResolvedByOntology,
        "runtime": elapsed_ms < 100,
    }
    failed = [k for k, ok in checks.items() if not ok]
    verdict(1, "worked-example fidelity", not failed,
            f"{elapsed_ms:.1f} ms" + (f"; failed {failed}" if failed else ""))


def test_2_factoid_classification(kb, verdict):
    rep = resolve_question(CHAIR_Q, kb)
    ok = rep.answer_type.value == "PERSON" and rep.structure.value == "Factoid"
    verdict(2, "factoid classification", ok, f"{rep.answer_type.value}/{rep.structure.value}")


def test_3_river_reading(kb, verdict):
    bank = resolve_question(RIVER_Q, kb).per_word["bank"]
    verdict(3, "river reading", bank.chosen == 1, f"bank -> sense {bank.chosen} ({bank.status.value})")


def test_4_oracle_equivalence(verdict):
    start = time.perf_counter()
    disagreements, out_of_bounds = [], []
    for seed in range(1000):
        onto, lex, ctx, qg, amb, cands = random_instance(seed)
        if len(onto.nodes) > 12 or len(onto.edges) > 20 or len(cands) > 8 or len(qg.triples) > 5:
            out_of_bounds.append(seed)
        if map_sense(onto, lex, ctx, qg, amb, cands) != enumerate_oracle(onto, lex, qg, amb, cands, ctx=ctx):
            disagreements.append(seed)
    elapsed = time.perf_counter() - start
    ok = not disagreements and not out_of_bounds and elapsed < 10
    verdict(4, "oracle equivalence", ok,
            f"1000 instances, {len(disagreements)} disagreements, {elapsed:.2f} s")


def _fuzz_vocabulary(kb):
    words = set(kb.tagger.word_tags)
    for entry in kb.lexicon:
        words.add(entry.lemma)
        words |= entry.inflections
        words.add(entry.lemma + "s")
        words.add(entry.lemma + "ing")
    words |= {"zorp", "blick", "quux", "xy", "Bank", "RIVER", "Money", "deposited", "banks?"}
    return sorted(words)


def _spans_ok(chunks):
    last_end = 0
    for c in chunks:
        idx = [t.index for t in c.tokens]
        if idx != list(range(c.start, c.end)) or c.start < last_end:
            return False
        last_end = c.end
    return True


def test_5_property_suite(kb, verdict):
    rng = random.Random(5)
    vocab = _fuzz_vocabulary(kb)
    violations = []
    for n in range(10_000):
        words = [rng.choice(vocab) for _ in range(rng.randint(0, 12))]
        if rng.random() < 0.3:
            words = [w.upper() if rng.random() < 0.3 else w for w in words]
        text = " ".join(words) + rng.choice(["", "?", " ?", "."])

        tokens = tokenize(text)
        tagged = tag(tokens, kb.tagger, kb.lexicon)
        if len(tagged) != len(tokens):
            violations.append((n, "tag length"))
        if not _spans_ok(chunk(tagged)):
            violations.append((n, "chunk spans"))

        rep = resolve_question(text, kb)
        for w in rep.words:
            if not set(w.surviving) <= set(w.candidates):
                violations.append((n, "surviving not subset"))
            if w.chosen is not None and w.chosen not in w.surviving:
                violations.append((n, "chosen not surviving"))
            if w.candidates and not w.surviving:
                violations.append((n, "filter emptied candidates"))
            if len(w.candidates) >= 2:
                cands = [SenseCandidate(sid, rec.labels if rec else frozenset(), rec.concept_anchor if rec else None)
                         for sid in w.candidates
                         for rec in [kb.context.get(w.lemma, w.pos, sid)]]
                labels = frozenset(rng.sample(["money", "river", "play", "zz"], rng.randint(0, 2)))
                if not filter_senses(cands, ContextLabelSet(labels))[0]:
                    violations.append((n, "filter emptied candidates"))
        if not _spans_ok(rep.chunks):
            violations.append((n, "report chunk spans"))
        first = json.dumps(report_to_dict(rep))
        second = json.dumps(report_to_dict(resolve_question(text, kb)))
        if first != second:
            violations.append((n, "nondeterministic"))
    verdict(5, "property suite", not violations, f"10000 questions, {len(violations)} violations")


def test_6_ablation_separation(kb_dir, kb, verdict, capsys):
    full = resolve_question(BANK_Q, kb).per_word["bank"]
    code = run(["resolve", "--kb", str(kb_dir), "--ablation", "context-only", "--format", "json", BANK_Q])
    data = json.loads(capsys.readouterr().out)
    ablated = next(w for w in data["words"] if w["lemma"] == "bank")
    ok = (code == 0
          and full.status is ResolutionStatus.ResolvedByOntology
          and ablated["status"] == "FallbackFirstSense"
          and full.surviving == (2, 3, 4, 6)
          and ablated["surviving"] == [2, 3, 4, 6])
    verdict(6, "ablation separation", ok, f"{full.status.value} -> {ablated['status']}")


def test_7_kb_validation(kb, verdict):
    base = validate_kb(kb.lexicon, kb.context, kb.ontology)

    # dangling anchor: point one bank sense at a node that does not exist
    records = dict(kb.context.records)
    rec = records[("bank", PosTag.Noun, 2)]
    records[("bank", PosTag.Noun, 2)] = rec._replace(concept_anchor="Vault")
    dangling = validate_kb(kb.lexicon, ContextKnowledge(records, kb.context.label_aliases), kb.ontology)

    # uncovered ambiguous entry: drop every context record of course
    kept = [r for r in kb.context.records.values() if r.lemma != "course"]
    uncovered = validate_kb(kb.lexicon, ContextKnowledge.build(kept, kb.context.label_aliases), kb.ontology)

    # edge to undeclared node: the ontology file no longer loads
    try:
        load_ontology(dump_ontology(kb.ontology) + "edge|Student|deposit|Vault\n")
        undeclared_errors = 0
    except KBError as exc:
        undeclared_errors = int(exc.code == "undeclared-node")

    counts = (len(base.errors), len(dangling.errors), len(uncovered.errors), undeclared_errors)
    ok = counts[0] == 0 and all(c >= 1 for c in counts[1:])
    verdict(7, "KB validation", ok, f"errors base/dangling/uncovered/undeclared = {counts}")
