"""
From a generator to a metric function
=====================================

A generator h is a positive function on (0, inf) with h(1) = 1.  From h and
its partner h#(t) = t / h(t) we build

    f(t) = k (t - 1)^2 / ((h(t) - 1)(h#(t) - 1)),   k = h'(1)(1 - h'(1)),

a normalised symmetric function whose value at 0 is the metric constant.
"""

import numpy as np

import wydskew as ws

# The square root is the classic case; f collapses to ((sqrt t + 1) / 2)^2.
h = ws.builtin_power(0.5)
f = ws.construct_f(h)
t = np.array([0.25, 1.0, 4.0, 9.0])
print("t          ", t)
print("f(t)       ", f(t))
print("closed form", 0.25 * (np.sqrt(t) + 1) ** 2)
print("f(0) =", f.metric_constant, " regular:", f.regular)

# The three transforms are involutions.
x = np.logspace(-2, 2, 5)
for name, op in [("sharp", ws.sharp), ("star", ws.star), ("tilde", ws.tilde)]:
    twice = op(op(h))
    print(f"{name:5s} applied twice, max deviation:", np.max(np.abs(twice(x) - h(x))))

# Swapping h for h# leaves f unchanged.
h3 = ws.builtin_power(0.3)
print("f from h vs f from h#:", np.max(np.abs(ws.construct_f(h3)(x) - ws.construct_f(ws.sharp(h3))(x))))

# The piecewise generator below is neither a power nor a mean.  Its derivative
# at 1 is 2 - 2 ln 2 and its partner tends to 1/e at the origin.
ex = ws.builtin_exotic()
fe = ws.construct_f(ex)
print("exotic h(2) =", ex(2.0), " h'(1) =", ws.derivative_at_one(ex))
print("exotic f(0) =", fe.metric_constant)
print("symmetry:", ws.symmetry_class(ex))

# Exponents in (1, 2) give convex generators.  The raw quotient is negative;
# the factor k < 0 flips it into a positive metric function with f(0) = 0.
convex = ws.builtin_power(1.5)
print("raw f(4)  =", ws.construct_f(convex, normalize=False)(4.0))
print("norm f(4) =", ws.construct_f(convex)(4.0), " f(0) =", ws.construct_f(convex).metric_constant)

# Near t = 1 the quotient is 0/0.  A Taylor patch takes over inside 1e-4.
for u in (-2e-4, -5e-5, 0.0, 5e-5, 2e-4):
    print(f"f(1 + {u:+.0e}) = {f(1 + u):.15f}")
