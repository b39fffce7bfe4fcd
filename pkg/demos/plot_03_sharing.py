"""
Splitting a secret along the policy tree
========================================

AND nodes split their value additively; OR nodes copy it. Any pruned
satisfying subtree then sums back to the root secret.
"""

import random

from hpabe import AttributeList, Universe, assign_shares, group_setup, normalize, parse_policy, pruned_sets
from hpabe.sharing import verify_reconstruction

params = group_setup(61, "transparent", seed=b"sharing")
universe = Universe.from_dict({"a": ["x", "y"], "b": ["x", "y"], "c": ["x", "y"]})
policy = normalize(parse_policy("a=x AND (b=x OR c=y)", universe))

rng = random.Random(3)
secret = params.scalar(rng.randrange(params.p))
shares = assign_shares(policy, secret, rng)
print("secret:", secret.value)
for i, s in sorted(shares.shares.items()):
    print(f"  share[{universe.names[i]}] = {s.value}")

L = AttributeList.parse(universe, "a=x,b=x,c=y")
for pruned in pruned_sets(policy, L):
    names = sorted(universe.names[i] for i in pruned)
    print(f"pruned set {names}: reconstructs = {verify_reconstruction(shares, pruned)}")

# an unsatisfying list has no pruned sets at all
print(pruned_sets(policy, AttributeList.parse(universe, "a=y,b=x,c=y")))
