#!/usr/bin/env python3
"""Regenerates the bundled toy data under data/toy.

Everything is drawn from a fixed seed, so rerunning the script reproduces
the committed files byte for byte.
"""

import argparse
import json
import random
from pathlib import Path

SEED = 20240611

# informal word -> (academic alternatives, non-academic alternatives)
ALTERNATIVES = {
    "said": (["report", "state", "claim"], ["tell", "mention", "announce", "declare", "allege"]),
    "get": (["obtain", "acquire"], ["grab", "fetch"]),
    "buy": (["purchase", "acquire"], ["grab", "pick"]),
    "show": (["demonstrate", "illustrate"], ["display", "reveal"]),
    "big": (["substantial", "considerable"], ["huge", "large"]),
    "think": (["consider", "assume"], ["guess", "believe"]),
    "use": (["utilize", "employ"], ["apply", "try"]),
    "help": (["assist", "facilitate"], ["aid", "support"]),
    "find": (["identify", "determine"], ["discover", "spot"]),
    "need": (["require", "necessitate"], ["want", "lack"]),
    "start": (["commence", "initiate"], ["begin", "launch"]),
    "end": (["terminate", "conclude"], ["finish", "stop"]),
    "try": (["attempt", "endeavor"], ["test", "shot"]),
    "keep": (["retain", "maintain"], ["hold", "save"]),
    "look": (["examine", "investigate"], ["check", "watch"]),
    "make": (["construct", "generate"], ["build", "create"]),
    "ask": (["inquire", "request"], ["question", "beg"]),
    "lots": (["numerous", "multiple"], ["plenty", "tons"]),
    "enough": (["sufficient", "adequate"], ["plenty", "ample"]),
    "fix": (["resolve", "rectify"], ["repair", "mend"]),
}

# Lemma used for inflected informal targets.
LEMMAS = {"said": "say"}

ACADEMIC_WORDS = sorted({w for acad, _ in ALTERNATIVES.values() for w in acad} | {
    "analysis", "hypothesis", "methodology", "empirical", "significant", "framework",
    "evaluation", "corpus", "approach", "baseline", "experiment", "annotation",
    "model", "results", "evidence", "propose", "paper", "dataset",
})

ACADEMIC_BIGRAMS = ["error rate", "neural network", "experimental results",
                    "language model", "feature set", "training data"]

# Words that have no academic alternative and stay formal.
PLAIN_WORDS = ["pacific", "first", "financial", "corp", "shareholders", "table", "dog",
               "car", "company", "river", "window", "garden", "monday", "london",
               "teacher", "kitchen", "bottle", "street", "morning", "village"]

PLAIN_ALTERNATIVES = {
    "first": ["premier"], "financial": ["monetary", "fiscal"],
    "corp": ["corporation", "company"], "company": ["firm", "business"],
    "table": ["desk"], "dog": ["hound", "puppy"], "car": ["vehicle", "auto"],
    "river": ["stream"], "window": ["pane"], "garden": ["yard"],
    "teacher": ["tutor", "instructor"], "kitchen": ["galley"], "bottle": ["flask"],
    "street": ["road", "avenue"], "morning": ["dawn"], "village": ["hamlet", "town"],
}

REVIEW_WORDS = ["great", "product", "love", "bad", "works", "price", "cheap", "awesome",
                "returned", "broke", "happy", "fast", "shipping", "stars", "recommend",
                "okay", "terrible", "nice", "perfect", "worth"]

STOPWORDS = """a about above after again against all am an and any are as at be because
been before being below between both but by can could did do does doing down during each
few for from further had has have having he her here hers herself him himself his how i if
in into is it its itself just me more most my myself no nor not now of off on once only or
other our ours ourselves out over own same she should so some such than that the their
theirs them themselves then there these they this those through to too under until up very
was we were what when where which while who whom why will with would you your yours
yourself yourselves it's don't i'm""".split()

POS = {}
for w in ACADEMIC_WORDS:
    POS[w] = "NOUN"
for w in ["report", "state", "claim", "obtain", "acquire", "purchase", "demonstrate",
          "illustrate", "consider", "assume", "utilize", "employ", "assist", "facilitate",
          "identify", "determine", "require", "necessitate", "commence", "initiate",
          "terminate", "conclude", "attempt", "endeavor", "retain", "maintain", "examine",
          "investigate", "construct", "generate", "inquire", "request", "resolve",
          "rectify", "propose"]:
    POS[w] = "VERB"
for w in ["substantial", "considerable", "numerous", "multiple", "sufficient", "adequate",
          "empirical", "significant", "experimental", "neural", "financial", "pacific",
          "first", "great", "bad", "cheap", "awesome", "happy", "fast", "terrible", "nice",
          "perfect", "big", "huge", "large", "okay"]:
    POS[w] = "ADJ"
for w in ["error", "rate", "network", "results", "language", "model", "feature", "set",
          "training", "data", "corp", "shareholders", "product", "price", "shipping",
          "stars"] + PLAIN_WORDS[5:]:
    POS.setdefault(w, "NOUN")
for w in STOPWORDS:
    POS.setdefault(w, "DET" if w in ("a", "an", "the", "this", "that", "these", "those")
                   else "ADP" if w in ("of", "in", "on", "at", "by", "for", "with", "to", "from")
                   else "PRON" if w in ("i", "we", "you", "he", "she", "it", "they", "me")
                   else "CONJ" if w in ("and", "or", "but", "nor")
                   else "OTHER")
for w in ALTERNATIVES:
    POS.setdefault(w, "VERB")


def write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def academic_corpus(rng):
    docs = []
    for d in range(80):
        focus = rng.sample(ACADEMIC_WORDS, 3)
        words = []
        for f in focus:
            words += [f] * 3
        words += rng.sample(ACADEMIC_WORDS, 8)
        words += rng.sample(STOPWORDS[:60], 8)
        rng.shuffle(words)
        bigram = ACADEMIC_BIGRAMS[d % len(ACADEMIC_BIGRAMS)]
        pos = rng.randrange(len(words))
        words[pos:pos] = bigram.split() + ["and", "the"] + bigram.split()
        if d % 2 == 0:
            words[0:0] = ["we", "report", "that", "the", "error", "rate", "is", "low"]
        docs.append(" ".join(words).capitalize() + ".")
    return docs


def review_corpus(rng):
    docs = []
    informal = list(ALTERNATIVES)
    for d in range(120):
        focus = rng.sample(informal, 2)
        words = []
        for f in focus:
            words += [f] * 3
        words += rng.sample(REVIEW_WORDS, 6)
        words += rng.sample(STOPWORDS[:60], 8)
        words += rng.sample(PLAIN_WORDS[5:], 2)
        rng.shuffle(words)
        if d % 2 == 1:
            words[0:0] = ["my", "friend", "said", "it", "was", "great"]
        if d == 7:
            words += ["the", "error", "rate", "was", "fine"]
        docs.append(" ".join(words).capitalize() + "!")
    return docs


def embeddings(rng, vocab):
    lines = []
    dim = 8
    informal = set(ALTERNATIVES) | {"say"}
    academic = set(ACADEMIC_WORDS)
    for w in sorted(vocab):
        base = [0.0] * dim
        if w in informal:
            base[0] = 1.0
        elif w in academic:
            base[1] = 1.0
        else:
            base[2] = 1.0
        vec = [b + rng.gauss(0, 0.35) for b in base]
        lines.append(w + " " + " ".join(f"{v:.4f}" for v in vec))
    return "\n".join(lines) + "\n"


def freq_lists(rng, vocab):
    web, general = [], []
    informal = set(ALTERNATIVES) | {"say"}
    academic = set(ACADEMIC_WORDS)
    for w in sorted(vocab):
        if w in informal:
            wc, gc = rng.randint(40000, 90000), rng.randint(50, 400)
        elif w in academic:
            wc, gc = rng.randint(3000, 9000), rng.randint(5000, 20000)
        elif w in STOPWORDS:
            wc, gc = rng.randint(100000, 300000), rng.randint(50000, 100000)
        else:
            wc, gc = rng.randint(200, 2500), rng.randint(20, 600)
        web.append(f"{w}\t{wc}")
        general.append(f"{w}\t{gc}")
    header = "# word\tcount\n"
    return header + "\n".join(web) + "\n", header + "\n".join(general) + "\n"


def sentence_records(rng, prefix, count):
    records = []
    informal = list(ALTERNATIVES)
    for s in range(count):
        sid = f"{prefix}{s:03d}"
        slots = [("informal", rng.choice(informal)),
                 ("academic", rng.choice(ACADEMIC_WORDS)),
                 ("plain", rng.choice(PLAIN_WORDS)),
                 ("informal", rng.choice(informal)),
                 ("plain", rng.choice(PLAIN_WORDS))]
        tokens = []
        targets = []
        for kind, word in slots:
            tokens.append(rng.choice(["the", "a", "we", "they", "it", "of"]))
            targets.append((len(tokens), kind, word))
            tokens.append(word.capitalize() if kind == "plain" and rng.random() < 0.5 else word)
        tokens.append(".")
        for index, kind, word in targets:
            subs = []
            if kind == "informal":
                acad, other = ALTERNATIVES[word]
                for a in acad:
                    subs.append({"word": a, "weight": rng.randint(1, 4)})
                for o in rng.sample(other, min(2, len(other))):
                    subs.append({"word": o, "weight": rng.randint(1, 3)})
            elif kind == "academic":
                subs.append({"word": rng.choice(ACADEMIC_WORDS), "weight": rng.randint(1, 3)})
            else:
                for alt in PLAIN_ALTERNATIVES.get(word, []):
                    subs.append({"word": alt, "weight": rng.randint(1, 3)})
            rec = {"id": sid, "tokens": tokens, "target_index": index,
                   "pos": POS.get(word, "NOUN"), "substitutes": subs}
            if word in LEMMAS:
                rec["lemma"] = LEMMAS[word]
            records.append(rec)
    return records


def said_example():
    tokens = ["Pacific", "First", "Financial", "Corp", "said", "shareholders"]
    subs = [
        [],
        [{"word": "premier", "weight": 1}],
        [{"word": "monetary", "weight": 1}, {"word": "fiscal", "weight": 1}],
        [{"word": "corporation", "weight": 2}, {"word": "company", "weight": 1}],
        [{"word": w, "weight": c} for w, c in [("report", 3), ("state", 2), ("claim", 1),
                                                ("allege", 1), ("announce", 1),
                                                ("mention", 1), ("declare", 1)]],
    ]
    pos = ["NOUN", "ADJ", "ADJ", "NOUN", "VERB"]
    records = []
    for i in range(5):
        rec = {"id": "ex1", "tokens": tokens, "target_index": i, "pos": pos[i],
               "substitutes": subs[i]}
        if i == 4:
            rec["lemma"] = "say"
        records.append(rec)
    return records


def reporting_verbs_resource():
    header = "tokens\tn\tacad_rate\tnonacad_rate\tratio\tsources\tlabel"
    rows = ["claim\t1\t40\t10\t4\ttfidf\tacademic",
            "report\t1\t60\t20\t3\ttfidf\tacademic",
            "state\t1\t50\t25\t2\ttfidf\tacademic",
            "allege\t1\t2\t8\t4\ttfidf\tnonacademic",
            "declare\t1\t3\t9\t3\ttfidf\tnonacademic",
            "mention\t1\t5\t15\t3\ttfidf\tnonacademic",
            "say\t1\t10\t90\t9\ttfidf\tnonacademic"]
    rows.sort(key=lambda r: r.split("\t")[0])
    return "#threshold\t1.5\n" + header + "\n" + "\n".join(rows) + "\n"


def synonyms():
    lines = ["# word\tsynonym\tscore"]
    for word, (acad, other) in sorted(ALTERNATIVES.items()):
        keys = [word] + ([LEMMAS[word]] if word in LEMMAS else [])
        for key in keys:
            for i, a in enumerate(acad):
                lines.append(f"{key}\t{a}\t{0.9 - 0.1 * i:.1f}")
            for i, o in enumerate(other):
                lines.append(f"{key}\t{o}\t{0.6 - 0.1 * i:.1f}")
    for word, alts in sorted(PLAIN_ALTERNATIVES.items()):
        for a in alts:
            lines.append(f"{word}\t{a}\t0.5")
    return "\n".join(lines) + "\n"


def synthetic_iwi(rng):
    """500 Fe1-shaped rows: informal rows have high web counts, low academic
    counts and lower word/sentence similarity; 10% of labels are flipped."""
    rows = []
    for i in range(500):
        informal = i % 2 == 0
        if informal:
            web = rng.gauss(60000, 9000)
            general = rng.gauss(300, 120)
            academic = rng.gauss(40, 15)
            cos = rng.gauss(0.2, 0.1)
        else:
            web = rng.gauss(25000, 9000)
            general = rng.gauss(2500, 700)
            academic = rng.gauss(400, 120)
            cos = rng.gauss(0.6, 0.1)
        label = informal if rng.random() >= 0.10 else not informal
        feats = [max(web, 0.0), max(general, 0.0), max(academic, 0.0), cos]
        rows.append(("informal" if label else "formal") + "\t" +
                    "\t".join(f"{v:.6g}" for v in feats))
    header = "# label\tfreq_web\tfreq_general\tfreq_academic\tcos_word_sent\n"
    return header + "\n".join(rows[:400]) + "\n", header + "\n".join(rows[400:]) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "toy"))
    args = parser.parse_args()
    out = Path(args.out)
    rng = random.Random(SEED)

    acad = academic_corpus(rng)
    reviews = review_corpus(rng)
    write(out / "acad.txt", "\n".join(acad) + "\n")
    write(out / "nonacad.txt", "\n".join(reviews) + "\n")
    write(out / "stopwords.txt", "\n".join(STOPWORDS) + "\n")
    write(out / "pos_lexicon.tsv",
          "\n".join(f"{w}\t{t}" for w, t in sorted(POS.items())) + "\n")

    train = sentence_records(rng, "tr", 120)
    test = sentence_records(rng, "te", 40) + said_example()
    write(out / "lexsub_train.jsonl", "".join(json.dumps(r) + "\n" for r in train))
    write(out / "lexsub_test.jsonl", "".join(json.dumps(r) + "\n" for r in test))
    write(out / "said_example.jsonl", "".join(json.dumps(r) + "\n" for r in said_example()))
    write(out / "reporting_verbs_resource.tsv", reporting_verbs_resource())
    write(out / "synonyms.tsv", synonyms())

    vocab = set(ACADEMIC_WORDS) | set(ALTERNATIVES) | set(PLAIN_WORDS) | set(REVIEW_WORDS)
    vocab |= set(STOPWORDS) | {"say", "error", "rate", "neural", "network", "experimental",
                               "language", "feature", "set", "training", "data", "premier",
                               "monetary", "fiscal", "corporation", "friend", "low", "fine"}
    for _, other in ALTERNATIVES.values():
        vocab |= set(other)
    write(out / "embeddings.txt", embeddings(rng, vocab))
    web, general = freq_lists(rng, vocab)
    write(out / "web_freq.tsv", web)
    write(out / "general_freq.tsv", general)

    reference = ["analysis", "hypothesis", "methodology", "framework", "evaluation",
                 "paradigm", "error rate", "neural network", "ontology", "epistemology"]
    write(out / "reference_list.txt", "\n".join(reference) + "\n")
    write(out / "external_academic.txt", "# extra academic words\nparadigm\nontology\nepistemology\n")

    train_rows, test_rows = synthetic_iwi(rng)
    write(out / "iwi_synthetic_train.tsv", train_rows)
    write(out / "iwi_synthetic_test.tsv", test_rows)


if __name__ == "__main__":
    main()
