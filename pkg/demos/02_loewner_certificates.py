"""
Certifying operator monotonicity by sampling
============================================

A function is matrix monotone of order n when every n-point Loewner matrix of
divided differences is positive semi-definite.  The certifier draws random
point sets and looks for a negative eigenvalue.  A clean run is evidence, not
proof; a rejection comes with a witness that anyone can re-check.
"""

import numpy as np

import wydskew as ws

print(ws.loewner_matrix(np.sqrt, [1.0, 4.0]).entries)
print(ws.loewner_matrix(np.square, [1.0, 2.0]).entries, "<- determinant -1")

# Constructed metric functions pass, whatever the generator.
for h in [ws.builtin_power(0.1), ws.builtin_bridge(0.25), ws.builtin_exotic()]:
    rep = ws.certify_operator_monotone(ws.construct_f(h), max_order=6, trials=200, seed=0)
    print(f"{h.name:12s} {rep.verdict:20s} worst scaled eigenvalue {rep.worst_eigenvalue:+.2e}")

# Convex generators: the raw quotient is decreasing, the normalised one monotone.
h = ws.builtin_power(-0.5)
print(ws.certify_operator_monotone(ws.construct_f(h, normalize=False), decreasing=True).verdict)
print(ws.certify_operator_monotone(ws.construct_f(h)).verdict)

# Rejections carry the offending points.
rep = ws.certify_operator_monotone(np.exp, max_order=2, trials=200, seed=0)
print(rep.verdict, rep.witness["points"], "re-check:", ws.recheck_witness(np.exp, rep))

# Convexity uses matrix pairs instead of point sets.
print("t^1.5:", ws.certify_operator_convex(ws.builtin_power(1.5)).verdict)
print("sqrt :", ws.certify_operator_convex(np.sqrt).verdict)
