"""Which surrogate cells straddle target cells, and a picture of it.

Writes ``abstain_vs_zero_one.svg`` next to this script.
"""
from pathlib import Path

from polyembed import zoo
from polyembed.embedding import analyze
from polyembed.links import diagnose_consistency
from polyembed.plot import render_svg
from polyembed.rational import fmt_vec

abstain = zoo.abstain(4).scaled(2)
v = diagnose_consistency(abstain, zoo.zero_one(4))
print("abstain vs 0-1:", v.status)
print("  cells that fit:", ", ".join(v.restriction))
for w in v.witnesses:
    print(f"  cell {w.cell} is optimal at {fmt_vec(w.p)} and {fmt_vec(w.p_prime)},")
    print(f"  where the modes {w.reports} and {w.reports_prime} do not overlap")

# Weston-Watkins: cells whose top block ties two labels are the problem.
ww = analyze(zoo.ww_hinge(3))
v = diagnose_consistency(ww.embedded, zoo.zero_one(3))
print("\nWeston-Watkins vs 0-1:", v.status)
print("  offending points:", ", ".join(v.offending))

svg = render_svg(zoo.abstain(3), overlay=zoo.zero_one(3))
out = Path(__file__).with_name("abstain_vs_zero_one.svg")
out.write_text(svg, encoding="utf-8")
print("\nwrote", out)
