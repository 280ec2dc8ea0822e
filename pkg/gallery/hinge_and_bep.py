"""Hinge loss and its binary-encoded cousin, from embedding to regret bound.

Run with ``python gallery/hinge_and_bep.py``.
"""
from polyembed import zoo
from polyembed.embedding import analyze, verify_embedding
from polyembed.links import build_link, envelope, link, verify_proposed_link
from polyembed.rational import Q, fmt, fmt_vec
from polyembed.regret import empirical_transfer_check, regret_bound_constant

# The hinge loss restricted to {-1, 1} is twice the 0-1 loss.
hinge = zoo.hinge()
an = analyze(hinge)
print("hinge representative points:", [fmt_vec(p) for p in an.points])
target = zoo.zero_one(2, ("-1", "+1")).scaled(2)
print("embeds 2 x 0-1:", bool(verify_embedding(hinge, target)))

art = build_link(hinge, target=target)
print("largest safe epsilon:", fmt(art.epsilon_max))
for u in (Q(-5), Q(0), Q("3/2")):
    print(f"  u = {fmt(u):>4}  allowed {envelope(art, (u,))}  link -> {link(art, (u,))}")

# A sign link with its threshold at 1 instead of 0 fails for every epsilon.
bad = verify_proposed_link(hinge, target, zoo.shifted_sign_link, Q("1/4"), n_samples=500)
print("shifted sign link:", "refuted at u =", fmt_vec(bad.u), "p =", fmt_vec(bad.p))

rep = regret_bound_constant(hinge, target, art.with_epsilon(1))
print("regret constant:", fmt(rep.c_bound), f"(loss gap {fmt(rep.c_ell)}, Hoffman {fmt(rep.hoffman)})")

# Four labels coded by two signs, with the origin standing in for abstention.
bep, code = zoo.bep(4)
twice_abstain = zoo.abstain(4).scaled(2)
print("\nBEP embeds 2 x abstain:", bool(verify_embedding(bep, twice_abstain)))
art = build_link(bep, target=twice_abstain)
print("largest safe epsilon:", fmt(art.epsilon_max))
print("envelope at (3/5, 1/5):", envelope(art.with_epsilon(Q("1/2")), (Q("3/5"), Q("1/5"))))
check = empirical_transfer_check(bep, zoo.abstain(4), zoo.psi_inf(4), 1, n_samples=2000)
print(f"regret ratio with c = 1: max {fmt(check.max_sampled_ratio)}, violations {check.violations}")
