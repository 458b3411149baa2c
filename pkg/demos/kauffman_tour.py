"""Walk through the classical Kauffman bracket with the bundled corpus.

Run: python3 demos/kauffman_tour.py
"""

from collections import Counter

from labelbracket import (apply_move, bracket, bundled_rules, certify_invariance,
                          enumerate_move_sites, load_diagram)
from labelbracket.rules import DATA_DIR

CORPUS = DATA_DIR / "corpus"
rules = bundled_rules("kauffman")

print("Brackets, normalized so the empty diagram is 1:")
for name in ("unknot", "kink-right", "kink-left", "hopf", "trefoil", "figure-eight", "torus-2-5"):
    res = bracket(load_diagram(CORPUS / f"{name}.kd"), rules)
    print(f"  {name:13} {res.state_count:3} states  {res.normalized}")

# An Ω2 move adds two crossings; the state sums of both diagrams agree in the
# quotient module, and the certificate is a replayable list of rewrite steps.
hopf = load_diagram(CORPUS / "hopf.kd")
move = enumerate_move_sites(hopf, "Ω2", "over")[0]
result = certify_invariance(hopf, move, rules)
print(f"\nΩ2 on the Hopf link: {type(result).__name__}, certificate of {len(result.trace)} steps")
steps = Counter((s.rule_id, s.direction) for s in result.trace.from_a + result.trace.from_b)
for (rule_id, direction), n in sorted(steps.items()):
    print(f"  {n} x {rule_id} {direction}")

# A kink multiplies the bracket by -A^3 or -A^-3, so Ω1 is never certified.
trefoil = load_diagram(CORPUS / "trefoil.kd")
kink = enumerate_move_sites(trefoil, "Ω1", "L+")[0]
before = bracket(trefoil, rules).normalized
after = bracket(apply_move(trefoil, kink), rules).normalized
print(f"\nΩ1 (L+) on the trefoil:\n  before {before}\n  after  {after}")
print(f"  certification: {type(certify_invariance(trefoil, kink, rules, max_nodes=2000)).__name__}")
