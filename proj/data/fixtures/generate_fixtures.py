#!/usr/bin/env python3
"""Regenerates the offline fixture resources in this directory.

Every attackable key word gets a small neighbourhood:
  fragile - flips the victim strongly, but some languages normalise it on the
            round trip to a canonical word that restores the original label
  robust  - flips the victim weakly and passes through every translation table
  mild    - shifts the score toward the other class without flipping
Some clusters also carry a strong neighbour with the wrong part of speech.
"""

import json
import math
from pathlib import Path

HERE = Path(__file__).resolve().parent
LANGS = ["es", "de", "fr"]

# key, weight, (fragile, weight, langs, canonical, canonical weight),
# (robust, weight), (mild, weight), optional (wrong-POS neighbour, weight, tag)
POSITIVE = [
    ("irresistible", 2.5, ("gargantuan", -4.5, "es de fr", "giant", 0.5), ("inexorable", -1.5), ("tempting", 1.0), None),
    ("well", 1.5, ("opportune", -3.5, "es de", "timely", 0.5), ("better", -1.5), ("properly", 0.5), None),
    ("good", 2.0, ("dire", -4.0, "es", "serious", 0.0), ("passable", -1.5), ("decent", 0.5), ("goods", -5.0, "NOUN")),
    ("great", 2.5, ("gigantic", -4.5, "es de fr", "big", 0.5), ("towering", -1.5), ("major", 1.0), None),
    ("wonderful", 3.0, ("prodigious", -5.0, "es fr", "huge", 0.5), ("uncanny", -1.5), ("amazing", 2.0), None),
    ("excellent", 3.0, ("sterling", -5.0, "de", "solid", 0.5), ("clinical", -1.5), ("fine", 1.0), None),
    ("brilliant", 3.0, ("blinding", -5.0, "es de fr", "bright", 0.5), ("glaring", -1.5), ("clever", 1.5), None),
    ("charming", 2.0, ("disarming", -4.0, "fr", "pleasant", 0.5), ("cloying", -1.5), ("sweet", 1.0), ("charm", -5.0, "NOUN")),
    ("delightful", 2.5, ("ravishing", -4.5, "es de", "beautiful", 1.0), ("heady", -1.5), ("pleasing", 1.0), None),
    ("superb", 3.0, ("grandiose", -5.0, "es de fr", "grand", 0.5), ("overblown", -1.5), ("splendid", 1.5), None),
    ("lovely", 2.0, ("comely", -4.0, "de fr", "pretty", 1.0), ("quaint", -1.5), ("nice", 1.0), None),
    ("enjoyable", 2.0, ("diverting", -4.0, "es", "entertaining", 1.0), ("fleeting", -1.5), ("pleasurable", 1.0), None),
    ("moving", 1.5, ("poignant", -3.5, "es de fr", "touching", 0.5), ("harrowing", -1.5), ("stirring", 0.5), None),
    ("fun", 2.0, ("larky", -4.0, "de", "playful", 1.0), ("silly", -1.5), ("amusing", 1.0), None),
    ("gripping", 2.0, ("riveting", -4.0, "es fr", "fascinating", 1.0), ("tense", -1.5), ("absorbing", 1.0), None),
]

NEGATIVE = [
    ("awful", -2.5, ("frightful", 4.5, "es de fr", "dreadful", -1.0), ("unholy", 1.5), ("poor", -1.0), None),
    ("boring", -2.0, ("soporific", 4.0, "es", "sleepy", -0.5), ("restful", 1.5), ("slow", -0.5), None),
    ("dull", -2.0, ("matte", 4.0, "es de fr", "flat", -0.5), ("muted", 1.5), ("plain", -0.5), None),
    ("terrible", -2.5, ("tremendous", 4.5, "de fr", "enormous", 0.0), ("fearsome", 1.5), ("severe", -1.0), None),
    ("bad", -2.0, ("wicked", 4.0, "es de", "evil", -1.0), ("naughty", 1.5), ("lousy", -1.5), None),
    ("tedious", -2.0, ("laborious", 4.0, "fr", "hard", -0.5), ("painstaking", 1.5), ("tiresome", -1.0), None),
    ("horrible", -3.0, ("monstrous", 5.0, "es de fr", "colossal", 0.0), ("unreal", 1.5), ("nasty", -1.5), None),
    ("mediocre", -1.5, ("moderate", 3.5, "es de fr", "average", -0.5), ("modest", 1.5), ("ordinary", -0.5), None),
    ("disappointing", -2.0, ("sobering", 4.0, "de", "grave", -0.5), ("humbling", 1.5), ("weak", -1.0), None),
    ("bland", -1.5, ("neutral", 3.5, "es fr", "unremarkable", -0.5), ("gentle", 1.5), ("flavorless", -0.5), None),
]

# Context words with non-zero weight.
CONTEXT = {
    "exceptionally": 0.5, "inspire": 1.0, "worthy": 0.5, "love": 1.0, "generous": 0.5,
    "mess": -1.0, "disaster": -1.0, "waste": -1.0, "annoying": -0.5, "heart": 0.5,
    "direful": -3.0,
}

# Translation quirks outside the clusters: "direful" survives every round trip
# as "terrible"; "awful" normalises to "terrible" through Spanish.
EXTRA_TRANSLATIONS = {
    "es": [("direful", "terrible"), ("awful", "terrible_es")],
    "de": [("direful", "schrecklich"), ("well acted", "gut gespielt")],
    "fr": [("direful", "terrible_fr")],
}
EXTRA_BACK = {
    "es": [("terrible", "terrible"), ("terrible_es", "terrible")],
    "de": [("schrecklich", "terrible"), ("gut gespielt", "well played")],
    "fr": [("terrible_fr", "terrible")],
}

# Languages whose round trip repairs deletion and adjacent-swap typos of the
# key sentiment words.
TYPO_LANGS = ["es", "fr"]

STOPWORDS = """a an the is was were be been are am and or but of to in on at by for with from as
it its this that these those i me my we our you your he she they them their his her so very just
has have had do does did not no than then there here what which who""".split()

HOMOGLYPHS = [("l", "1"), ("o", "0"), ("e", "3"), ("a", "4"), ("s", "5")]

# Cosine of each neighbour role to its key word, varied per cluster so the
# candidate order is not the same everywhere.
ROLE_COS = [
    {"fragile": 0.92, "robust": 0.84, "mild": 0.71, "wrong": 0.88},
    {"fragile": 0.81, "robust": 0.90, "mild": 0.66, "wrong": 0.86},
    {"fragile": 0.88, "robust": 0.77, "mild": 0.93, "wrong": 0.80},
]
FAR_COS = 0.3  # below the 0.5 neighbour threshold

CORPUS = [
    # long review-style sentences
    ("drawing on an irresistible , languid romanticism , byler reveals the ways in which a sultry evening "
     "or a beer-fueled afternoon in the sun can inspire even the most retiring heart to venture forth .", 1),
    ("Exceptionally well acted by Diane Lane and Richard Gere .", 1),
    ("a good movie", 1),
    ("a great film with a great cast", 1),
    ("the story is wonderful and the score is lovely", 1),
    ("an excellent , brilliant piece of cinema", 1),
    ("charming from start to finish", 1),
    ("a delightful little comedy that never drags", 1),
    ("superb performances all around .", 1),
    ("a lovely film about family", 1),
    ("genuinely enjoyable , if slight", 1),
    ("a moving portrait of grief and hope", 1),
    ("this is fun , good fun", 1),
    ("a gripping thriller from the first scene", 1),
    ("the cast is great and the writing is good", 1),
    ("wonderful !", 1),
    ("an irresistible comedy with a generous heart", 1),
    ("the director delivers a superb and moving drama", 1),
    ("a brilliant script , well acted", 1),
    ("gripping and fun , the best heist movie in years", 1),
    ("delightful , charming and worthy of your time", 1),
    ("an enjoyable ride with an excellent soundtrack", 1),
    ("I fell in love with this place , the food was good !", 1),
    ("the staff were lovely and the coffee was great", 1),
    ("excellent service , wonderful views", 1),
    ("a good , solid , well made thriller", 1),
    ("moving and gripping in equal measure", 1),
    ("the film is fun but the plot is a mess", 1),
    ("a superb cast rescues a tired script", 1),
    ("brilliant", 1),
    # negatives
    ("an awful movie", 0),
    ("boring and dull from start to finish", 0),
    ("the plot is terrible", 0),
    ("a bad film with a bad script", 0),
    ("tedious , horrible , a waste of time", 0),
    ("a mediocre sequel", 0),
    ("a disappointing and bland effort", 0),
    ("the acting is awful and the story is boring", 0),
    ("horrible service and a dull menu", 0),
    ("terrible food , bad service", 0),
    ("a tedious exercise in style", 0),
    ("bland , mediocre and far too long", 0),
    ("I have an direful experience , the lady made a disaster in my head", 0),
    ("disappointing", 0),
    ("the sequel is dull and the jokes are annoying", 0),
    ("awful pacing ruins a decent idea", 0),
    # misclassified by the lexicon victim (skipped by every attack)
    ("not good at all", 0),
    ("not a bad film", 1),
    ("the food was good but the service was awful and slow", 1),
    ("a boring title hides a wonderful , excellent story", 0),
]


def main():
    lexicon = dict(CONTEXT)
    pos = {}
    synonyms = {}
    clusters = []
    tables = {(s, t): [] for l in LANGS for (s, t) in (("en", l), (l, "en"))}

    for ci, (key, w, fragile, robust, mild, wrong) in enumerate(POSITIVE + NEGATIVE):
        fw, fweight, flangs, canon, cweight = fragile
        lexicon[key] = w
        lexicon[fw] = fweight
        lexicon[canon] = cweight
        lexicon[robust[0]] = robust[1]
        lexicon[mild[0]] = mild[1]
        tag = "ADV" if key in ("well",) else "ADJ"
        for word in (key, fw, robust[0], mild[0]):
            pos[word] = [tag]
        pos[canon] = [tag]
        members = {"fragile": fw, "robust": robust[0], "mild": mild[0]}
        if wrong:
            lexicon[wrong[0]] = wrong[1]
            pos[wrong[0]] = [wrong[2]]
            members["wrong"] = wrong[0]
        clusters.append((key, members, ROLE_COS[ci % len(ROLE_COS)]))
        order = [robust[0], fw, mild[0]] if ci % 2 == 0 else [fw, mild[0], robust[0]]
        synonyms[key] = order
        for l in flangs.split():
            foreign = f"{canon}_{l}"
            tables[("en", l)].append((fw, foreign))
            tables[(l, "en")].append((foreign, canon))

    keys = [c[0] for c in POSITIVE + NEGATIVE]
    for l in TYPO_LANGS:
        seen = set(lexicon)
        for key in keys:
            variants = [key[:i] + key[i + 1:] for i in range(len(key))]
            variants += [key[:i] + key[i + 1] + key[i] + key[i + 2:] for i in range(len(key) - 1)]
            for v in variants:
                if v != key and v not in seen:
                    seen.add(v)
                    tables[("en", l)].append((v, key))

    for l in LANGS:
        tables[("en", l)].extend(EXTRA_TRANSLATIONS[l])
        tables[(l, "en")].extend(EXTRA_BACK[l])
    pos["better"] = ["ADJ", "ADV"]
    pos["properly"] = ["ADV"]

    # Embeddings: one axis per cluster plus one private axis per neighbour.
    # A far word per cluster sits below the neighbour threshold.
    n_private = sum(len(m) + 1 for _, m, _ in clusters)
    dim = len(clusters) + n_private
    rows = []
    private = len(clusters)
    for ci, (key, members, cos) in enumerate(clusters):
        v = [0.0] * dim
        v[ci] = 1.0
        rows.append((key, v))
        for role, word in list(members.items()) + [("far", f"{key}ish")]:
            c = FAR_COS if role == "far" else cos[role]
            v = [0.0] * dim
            v[ci] = c
            v[private] = math.sqrt(1.0 - c * c)
            private += 1
            rows.append((word, v))

    with open(HERE / "embeddings.txt", "w") as f:
        for word, v in rows:
            f.write(word + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
    with open(HERE / "sentiment.tsv", "w") as f:
        for word in sorted(lexicon):
            f.write(f"{word}\t{lexicon[word]}\n")
    with open(HERE / "pos.tsv", "w") as f:
        for word in sorted(pos):
            f.write(word + "\t" + "\t".join(pos[word]) + "\n")
    with open(HERE / "synonyms.tsv", "w") as f:
        for word in sorted(synonyms):
            f.write(word + "\t" + "\t".join(synonyms[word]) + "\n")
    with open(HERE / "stopwords.txt", "w") as f:
        f.write("\n".join(sorted(set(STOPWORDS))) + "\n")
    with open(HERE / "homoglyphs.tsv", "w") as f:
        for a, b in HOMOGLYPHS:
            f.write(f"{a}\t{b}\n")
    for (s, t), rows_ in tables.items():
        with open(HERE / f"translate_{s}_{t}.tsv", "w") as f:
            for a, b in rows_:
                f.write(f"{a}\t{b}\n")
    with open(HERE / "corpus.jsonl", "w") as f:
        for i, (text, label) in enumerate(CORPUS):
            f.write(json.dumps({"id": f"fx{i:02d}", "text": text, "label": label}) + "\n")

    manifest = [
        "# Offline fixture resources (regenerate with generate_fixtures.py)",
        "stopwords=stopwords.txt",
        "synonyms=synonyms.tsv",
        "pos=pos.tsv",
        "homoglyphs=homoglyphs.tsv",
        "sentiment=sentiment.tsv",
        "embeddings=embeddings.txt",
    ]
    for l in LANGS:
        manifest.append(f"translation.en-{l}=translate_en_{l}.tsv")
        manifest.append(f"translation.{l}-en=translate_{l}_en.tsv")
    (HERE / "manifest.txt").write_text("\n".join(manifest) + "\n")


if __name__ == "__main__":
    main()
