"""Training pairs: tokenized state triples in, tokenized programs out.

A sample is made by drawing a random program, executing it at N=0,1,2,
and keeping it only if every constraint holds (valid indices, minimum
detector degree, nonempty states, term caps, token-length caps).
Sequence A concatenates the three states; sequence B is the program.
"""

import json
import tempfile
from pathlib import Path

from qmeta import decode, encode_code, encode_states, parse_state
from qmeta.datagen import GenConfig, generate_corpus, generate_record, read_corpus

# tokenization is bit-exact and invertible
triple = ["+1[xxxx] +1[yyyy]", "+1[xxxxxx] +1[yyyyyy]", "+1[xxxxxxxx] +1[yyyyyyyy]"]
states = [parse_state(t) for t in triple]
ids = encode_states(states, "optics")
print("sequence A ids:", ids[:14], "...")
print("decoded:", decode(ids, "optics", "states"))

code_text = "e(0,1,0,0)\nfor ii in range(N):\n    e(2+2*ii,3+2*ii,1,1)\n"
b_ids = encode_code(code_text, "optics")
print("\nsequence B ids:", b_ids)
print("decoded:\n" + decode(b_ids, "optics", "code"))

# the generation grid: 2^5 constraint combinations
grid = GenConfig.grid()
print(f"\n{len(grid)} sub-dataset configs, e.g. {grid[0].tag}")

# one record, fully deterministic given (config, seed, index)
record, rejections = generate_record(grid[5], 2024, 0)
print("\nexample record (config", record.config_tag + "):")
print("  states:", record.state_texts)
print("  code:\n" + "\n".join("    " + l for l in record.code_text.splitlines()))
print("  rejected draws on the way:", dict(rejections))

# corpora are shuffled JSON-lines files with a manifest
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "corpus.jsonl"
    manifest = generate_corpus(grid[:2], 12, out, seed=7)
    print("\nmanifest:", json.dumps(manifest, indent=1, sort_keys=True)[:300], "...")
    print("records:", len(read_corpus(out)))
