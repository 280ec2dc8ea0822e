"""Top-k hinge surrogate: quotient, embedded loss, and the argmax link."""
from polyembed import zoo
from polyembed.embedding import analyze
from polyembed.links import diagnose_consistency, verify_proposed_link
from polyembed.rational import Q, fmt_vec
from polyembed.surrogate import lineality_space

L = zoo.topk_surrogate(4, 2)
print("lineality directions:", [fmt_vec(b) for b in lineality_space(L)])

an = analyze(L)
print(f"embedded loss: {len(an.embedded.reports)} reports, trim of {len(an.trim.vectors)}")
print("against top-2:", diagnose_consistency(an.embedded, zoo.top_k(4, 2)).status)

res = verify_proposed_link(L, zoo.top_k(4, 2), zoo.argmax_link(2), Q("1/8"), n_samples=2000)
print("argmax link at epsilon 1/8:", "verified" if res else "refuted", f"({res.count} points)" if res else "")
