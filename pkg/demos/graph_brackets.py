"""Knotted trivalent graphs: what the harness does today and what it waits for.

The label-bracket ruleset ships as a skeleton whose local relations are TODO
until transcribed. Every computation that needs a missing body stops with
"ruleset incomplete: <id>", and the sweep records that per cell.

Run: python3 demos/graph_brackets.py
"""

from collections import Counter

from labelbracket import KINDS, bundled_rules, enumerate_move_sites, load_diagram, sweep, validate_diagram
from labelbracket.rules import DATA_DIR

CORPUS = DATA_DIR / "corpus"
graphs = [(n, load_diagram(CORPUS / f"{n}.kd")) for n in ("theta", "handcuff", "trefoil-theta")]

for name, d in graphs:
    sites = {k: len(enumerate_move_sites(d, k)) for k in KINDS}
    print(f"{name:14} valid={validate_diagram(d).ok}  move sites {sites}")

skeleton = bundled_rules("label-bracket")
print(f"\nlabel-bracket rules still TODO: {', '.join(skeleton.incomplete())}")
rows = sweep(graphs, skeleton, KINDS, deterministic=True)
print(f"sweep outcomes: {dict(Counter((r['outcome'], r['detail']) for r in rows))}")

# With the Kauffman ruleset the vertices survive as generators, so moves
# through a vertex (Ω4, Ω5) stay Unknown while Ω2 and Ω3 still certify.
kauffman = bundled_rules("kauffman")
rows = sweep(graphs, kauffman, ("Ω2", "Ω5"), deterministic=True, max_nodes=5000)
print(f"kauffman on graphs: {dict(Counter((r['move'], r['outcome']) for r in rows))}")
