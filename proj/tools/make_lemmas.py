#!/usr/bin/env python3
"""Regenerate data/lemmas.tsv from the spacy-lookups-data wheel.

usage: make_lemmas.py <spacy_lookups_data-*.whl> <stoplist.txt> <out.tsv>

Only lowercase alphabetic surface/lemma pairs are kept. Surface forms that
are themselves stopwords are dropped so function words map to themselves,
and lemma chains are resolved so that lookup is idempotent.
"""
import gzip
import json
import sys
import zipfile


def main():
    wheel, stoplist_path, out_path = sys.argv[1:4]
    with zipfile.ZipFile(wheel) as z:
        table = json.loads(gzip.decompress(
            z.read("spacy_lookups_data/data/en_lemma_lookup.json.gz")))
    stop = {l.strip() for l in open(stoplist_path)
            if l.strip() and not l.startswith("#")}

    raw = {}
    for surface, lemma in table.items():
        s, l = surface.lower(), lemma.lower()
        if not (s.isascii() and s.isalpha() and l.isascii() and l.isalpha()):
            continue
        if s in stop or s == l:
            continue
        raw.setdefault(s, l)

    def resolve(word):
        seen = [word]
        while word in raw:
            word = raw[word]
            if word in seen:
                # cycle: settle on its smallest member
                return min(seen[seen.index(word):])
            seen.append(word)
        return word

    resolved = {s: resolve(s) for s in raw}
    with open(out_path, "w") as out:
        out.write("# surface<TAB>lemma, derived from WordNet 3.0 via spacy-lookups-data\n")
        for s in sorted(resolved):
            if resolved[s] != s:
                out.write(f"{s}\t{resolved[s]}\n")


if __name__ == "__main__":
    main()
