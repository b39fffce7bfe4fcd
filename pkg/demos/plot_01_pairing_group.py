"""
A pairing group you can read
============================

The transparent backend stores every group element as its discrete log,
so the bilinear map is plain multiplication mod p. That makes it useless
for secrecy and ideal for checking algebra by eye.
"""

import random

import numpy as np

from hpabe import group_setup, pair

params = group_setup(64, "transparent", seed=b"demo")
print(f"p = {params.p} ({params.p.bit_length()} bits), insecure={params.insecure}")

g = params.g
rng = random.Random(0)
a, b = params.scalar(rng.randrange(params.p)), params.scalar(rng.randrange(params.p))

# bilinearity, symmetry
lhs = pair(g ** a, g ** b)
print("e(g^a, g^b) == e(g,g)^(ab):", lhs == pair(g, g) ** (a * b))
print("symmetric:", lhs == pair(g ** b, g ** a))

# in the transparent backend the "element" is just the exponent
print("log e(g^a, g^b) =", lhs.rep, "=", a.value * b.value % params.p)

# pairing a fixed point against random points spreads evenly over GT
reps = np.array([pair(g ** 3, g ** params.scalar(rng.randrange(1, params.p))).rep for _ in range(5000)])
counts, _ = np.histogram(reps / params.p, bins=10, range=(0, 1))
print("decile counts:", counts.tolist())

# elements serialize to fixed width
blob = lhs.to_bytes()
print(f"{len(blob)} bytes:", blob.hex())
