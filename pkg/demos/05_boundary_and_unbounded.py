"""
Rank-deficient states and unbounded measures
============================================

Regular metrics (f(0) > 0) extend to the boundary of state space through
chat(x, 0) = x / f(0).  Metrics with f(0) = 0 do not; for them the quadratic
form without the f(0)/2 prefactor is used, and only on invertible states.
"""

import numpy as np

import wydskew as ws

A = np.array([[0.0, 1.0], [1.0, 0.0]])
pure = np.diag([1.0, 0.0])
wy = ws.MorozovaCencov.from_generator(ws.builtin_power(0.5))
print("pure state:", ws.masi_spectral(wy, pure, A).value)

# Approach from the interior; the gap closes like sqrt(eps).
for eps in (1e-3, 1e-4, 1e-5, 1e-6):
    mixed = (1 - eps) * pure + eps * np.eye(2) / 2
    print(f"eps = {eps:.0e}  I = {ws.masi_spectral(wy, mixed, A).value:.8f}")

# Exponents outside (0, 1): the unbounded measure against its commutator form.
rho = np.diag([0.75, 0.25])
for p in (-0.5, 1.5):
    h = ws.builtin_power(p)
    print(f"p = {p:+.1f}  unbounded {ws.unbounded_masi(h, rho, A).value:.12f}  "
          f"commutator {ws.unbounded_wyd_commutator(rho, A, p).value:.12f}")

try:
    ws.unbounded_masi(ws.builtin_power(1.5), pure, A)
except ws.DomainError as exc:
    print("refused:", exc)
