"""
Four roads to the same number
=============================

For h = t^p the skew information can be computed as a kernel sum in the
eigenbasis of the state, through the modular operator, or straight from the
commutator formula -1/2 Tr [rho^p, A][rho^(1-p), A].  Agreement of the three
is the main correctness check of the library.
"""

import numpy as np

import wydskew as ws

rho = np.diag([0.75, 0.25])
A = np.array([[0.0, 1.0], [1.0, 0.0]])
wy = ws.MorozovaCencov.from_generator(ws.builtin_power(0.5))

print("c(3/4, 1/4)    =", ws.c_value(wy, 0.75, 0.25))
print("chat(3/4, 1/4) =", ws.c_hat(wy, 0.75, 0.25))
print("spectral  ", ws.masi_spectral(wy, rho, A).value)
print("modular   ", ws.masi_modular(ws.builtin_power(0.5), rho, A).value)
print("commutator", ws.wyd_commutator(rho, A, 0.5).value)
print("exact     ", 1 - np.sqrt(3) / 2)

# Random instances across exponents and dimensions.
rng = np.random.default_rng(1)
worst = 0.0
for p in np.round(np.arange(0.1, 1.0, 0.1), 1):
    h = ws.builtin_power(p)
    mc = ws.MorozovaCencov.from_generator(h)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        r, B = ws.random_density_matrix(n, rng), ws.random_hermitian(n, rng)
        vals = [ws.masi_spectral(mc, r, B).value, ws.masi_modular(h, r, B).value,
                ws.wyd_commutator(r, B, p).value]
        worst = max(worst, (max(vals) - min(vals)) / max(vals))
print("worst relative spread over 180 instances:", worst)

# Skew information never exceeds the variance.
r, B = ws.random_density_matrix(4, 7), ws.random_hermitian(4, 7)
print("I =", ws.masi_spectral(ws.builtin_exotic(), r, B).value, "<= Var =", ws.variance(r, B))
