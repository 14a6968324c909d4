# Copyright 2026 The lexmeta authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates corpus.jsonl from the hand-written statement tables below."""

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))


def stmt(sid, rows, tree, deps, references=None):
    tokens = [{"surface": s, "lemma": l, "pos": p} for (s, l, p) in rows]
    text = " ".join(r[0] for r in rows)
    out = {
        "id": sid,
        "text": text,
        "tokens": tokens,
        "tree": tree,
        "deps": [{"index": i + 1, "head": h, "label": lab} for i, (h, lab) in enumerate(deps)],
    }
    if references:
        out["references"] = references
    return out


S1_ROWS = [
    ("Within", "within", "P"), ("the", "the", "D"), ("limits", "limit", "N"),
    (",", ",", "PUNC"), ("the", "the", "D"), ("municipal", "municipal", "A"),
    ("authorities", "authority", "N"), ("may", "may", "V"),
    ("temporarily", "temporarily", "ADV"), ("regulate", "regulate", "V"),
    ("the", "the", "D"), ("traffic", "traffic", "N"), ("on", "on", "P"),
    ("the", "the", "D"), ("public", "public", "A"), ("roads", "road", "N"),
    (",", ",", "PUNC"), ("provided", "provide", "C"), ("that", "that", "C"),
    ("these", "these", "D"), ("regulations", "regulation", "N"),
    ("concern", "concern", "V"), ("the", "the", "D"),
    ("municipal", "municipal", "A"), ("roads", "road", "N"), (".", ".", "PUNC"),
]
S1_TREE = ("(SENT (PP (P Within) (NP (D the) (N limits))) (PUNC ,)"
           " (NP (D the) (A municipal) (N authorities))"
           " (VP (VN (V may)) (ADV temporarily) (VN (V regulate))"
           " (NP (D the) (N traffic)) (PP (P on) (NP (D the) (A public) (N roads))))"
           " (PUNC ,)"
           " (Ssub (C provided) (C that) (NP (D these) (N regulations)) (VN (V concern))"
           " (NP (D the) (A municipal) (N roads))) (PUNC .))")
S1_DEPS = [
    (10, "MOD"), (3, "DET"), (1, "P-OBJ"), (10, "PONCT"), (7, "DET"), (7, "MOD"),
    (10, "SUJ"), (10, "AUXTPS"), (10, "MOD"), (0, "ROOT"), (12, "DET"), (10, "OBJ"),
    (10, "MOD"), (16, "DET"), (16, "MOD"), (13, "P-OBJ"), (10, "PONCT"), (22, "DEP"),
    (22, "DEP"), (21, "DET"), (22, "SUJ"), (10, "MOD"), (25, "DET"), (25, "MOD"),
    (22, "OBJ"), (10, "PONCT"),
]

S2_ROWS = [
    ("One", "one", "PRO"), ("who", "who", "PROREL"), ("performs", "perform", "V"),
    ("vehicle", "vehicle", "N"), ("inspections", "inspection", "N"),
    ("without", "without", "P"), ("the", "the", "D"), ("agreement", "agreement", "N"),
    ("shall", "shall", "V"), ("be", "be", "V"), ("punished", "punish", "V"),
    ("with", "with", "P"), ("an", "a", "D"), ("imprisonment", "imprisonment", "N"),
    ("of", "of", "P"), ("eight", "eight", "D"), ("days", "day", "N"), (".", ".", "PUNC"),
]
S2_TREE = ("(SENT (NP (PRO One) (Srel (PROREL who) (VN (V performs))"
           " (NP (N vehicle) (N inspections)) (PP (P without) (NP (D the) (N agreement)))))"
           " (VP (VN (V shall)) (VPinf (VN (V be) (V punished))"
           " (PP (P with) (NP (D an) (N imprisonment) (PP (P of) (NP (D eight) (N days)))))))"
           " (PUNC .))")
S2_DEPS = [
    (11, "SUJ"), (3, "SUJ"), (1, "MODREL"), (5, "MOD"), (3, "OBJ"), (3, "MOD"),
    (8, "DET"), (6, "P-OBJ"), (11, "AUXTPS"), (11, "AUXPASS"), (0, "ROOT"),
    (11, "MOD"), (14, "DET"), (12, "P-OBJ"), (14, "MOD"), (17, "DET"), (15, "P-OBJ"),
    (11, "PONCT"),
]

S3_ROWS = [
    ("The", "the", "D"), ("investigating", "investigate", "A"), ("judge", "judge", "N"),
    ("may", "may", "V"), ("pronounce", "pronounce", "V"), ("the", "the", "D"),
    ("prohibition", "prohibition", "N"), ("of", "of", "P"), ("driving", "drive", "N"),
    ("at", "at", "P"), ("the", "the", "D"), ("request", "request", "N"),
    ("of", "of", "P"), ("the", "the", "D"), ("prosecutor", "prosecutor", "N"),
    ("against", "against", "P"), ("a", "a", "D"), ("person", "person", "N"),
    ("who", "who", "PROREL"), ("is", "be", "V"), ("sued", "sue", "V"),
    ("for", "for", "P"), ("an", "a", "D"), ("offense", "offense", "N"), (".", ".", "PUNC"),
]
S3_TREE = ("(SENT (NP (D The) (A investigating) (N judge))"
           " (VP (VN (V may)) (VN (V pronounce))"
           " (NP (D the) (N prohibition) (PP (P of) (NP (N driving))))"
           " (PP (P at) (NP (D the) (N request)) (PP (P of) (NP (D the) (N prosecutor))))"
           " (PP (P against) (NP (D a) (N person))"
           " (Srel (PROREL who) (VN (V is) (V sued)) (PP (P for) (NP (D an) (N offense))))))"
           " (PUNC .))")
S3_DEPS = [
    (3, "DET"), (3, "MOD"), (5, "SUJ"), (5, "AUXTPS"), (0, "ROOT"), (7, "DET"),
    (5, "OBJ"), (7, "MOD"), (8, "P-OBJ"), (5, "MOD"), (12, "DET"), (10, "P-OBJ"),
    (12, "MOD"), (15, "DET"), (13, "P-OBJ"), (5, "MOD"), (18, "DET"), (16, "P-OBJ"),
    (21, "SUJ"), (21, "AUXPASS"), (18, "MODREL"), (21, "MOD"), (24, "DET"),
    (22, "P-OBJ"), (5, "PONCT"),
]

FIG4_ROWS = [("Within", "within", "P"), ("the", "the", "D"), ("limits", "limit", "N")]
FIG4_TREE = "(PP (P Within) (NP (D the) (N limits)))"
FIG4_DEPS = [(0, "ROOT"), (3, "DET"), (1, "P-OBJ")]

FIG5_ROWS = [
    ("the", "the", "D"), ("municipal", "municipal", "A"), ("authorities", "authority", "N"),
    ("regulate", "regulate", "V"), ("the", "the", "D"), ("traffic", "traffic", "N"),
]
FIG5_TREE = ("(SENT (NP (D the) (A municipal) (N authorities))"
             " (VP (VN (V regulate)) (NP (D the) (N traffic))))")
FIG5_DEPS = [(3, "DET"), (3, "MOD"), (4, "SUJ"), (0, "ROOT"), (6, "DET"), (4, "OBJ")]


def main():
    statements = [
        stmt("s1", S1_ROWS, S1_TREE, S1_DEPS),
        stmt("s2", S2_ROWS, S2_TREE, S2_DEPS),
        stmt("s3", S3_ROWS, S3_TREE, S3_DEPS),
        stmt("fig4", FIG4_ROWS, FIG4_TREE, FIG4_DEPS),
        stmt("fig5", FIG5_ROWS, FIG5_TREE, FIG5_DEPS),
    ]
    with open(os.path.join(HERE, "corpus.jsonl"), "w") as fh:
        for s in statements:
            fh.write(json.dumps(s, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
