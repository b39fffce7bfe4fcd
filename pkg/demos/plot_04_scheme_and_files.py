"""
Encrypting to a hidden policy
=============================

Ciphertexts carry a slot for every value of every attribute, so their
size says nothing about the policy. The key holder does not see the
policy either, and searches subsets of their own attributes until the
message tag matches.
"""

import random

from hpabe import AttributeList, NotSatisfied, Universe, group_setup, setup, keygen, encrypt
from hpabe.formats import dump_ciphertext
from hpabe.hybrid import hybrid_decrypt, hybrid_encrypt
from hpabe.scheme import blind_decrypt, random_message

rng = random.Random(4)
params = group_setup(64, "transparent", seed=b"scheme")
universe = Universe.from_dict({"dept": ["cs", "ee", "me"], "level": ["phd", "ms", "bs"]})
pk, mk = setup(universe, params, rng)

alice = keygen(mk, AttributeList.parse(universe, "dept=cs,level=phd"), rng)
bob = keygen(mk, AttributeList.parse(universe, "dept=me,level=phd"), rng)

M = random_message(params, rng)
for policy in ["dept=cs AND level=phd", "dept=cs OR level=bs", "level in {phd, ms}"]:
    ct = encrypt(pk, M, policy, rng)
    print(f"{policy:24s} {len(dump_ciphertext(ct))} bytes, {ct.component_count} components")
    for who, sk in [("alice", alice), ("bob", bob)]:
        try:
            out, attempts = blind_decrypt(sk, ct)
            print(f"    {who}: ok after {attempts} attempt(s), correct={out == M}")
        except NotSatisfied as exc:
            print(f"    {who}: {exc} ({exc.attempts} attempts)")

# bulk data goes through the hybrid container
document = b"quarterly numbers\n" * 1000
blob = hybrid_encrypt(pk, "dept in {cs, ee}", document, rng).to_bytes()
print(f"hybrid: {len(document)} -> {len(blob)} bytes")
print("alice recovers it:", hybrid_decrypt(alice, blob) == document)
