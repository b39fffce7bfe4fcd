"""Hidden-policy CP-ABE: setup, key generation, encryption, blind decryption.

The ciphertext holds a component pair for every ``(attribute, value)`` slot
of the universe. Slots allowed by the policy carry ``(g^s_i, T_it^s_i)``;
the rest carry unrelated random pairs, so the layout never depends on the
policy. A decryptor who does not know the policy tries subsets of its own
attributes and recognises success through a hash tag of the message.

Random draws happen in a fixed order (documented per function) so that a
seeded or scripted ``rng`` reproduces every value.
"""

from __future__ import annotations

import hashlib
import random
import secrets
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import NotSatisfied, UniverseMismatch
from .pairing import GElement, GroupParams, GTElement, Scalar, pair, random_scalar
from .policy import AttributeList, Policy, Universe, leaves, normalize, parse_policy
from .sharing import assign_shares, pruned_sets

DEFAULT_SEARCH_BOUND = 20


@dataclass(frozen=True)
class PublicKey:
    params: GroupParams
    universe: Universe
    Y: GTElement
    T: tuple[tuple[GElement, ...], ...]


@dataclass(frozen=True)
class MasterKey:
    params: GroupParams
    universe: Universe
    alpha: Scalar
    a: tuple[tuple[Scalar, ...], ...]

    def public_key(self) -> PublicKey:
        g = self.params.g
        return PublicKey(
            self.params,
            self.universe,
            self.params.gt ** self.alpha,
            tuple(tuple(g ** x for x in row) for row in self.a),
        )


@dataclass(frozen=True)
class SecretKey:
    params: GroupParams
    attrs: AttributeList
    D0: GElement
    D: tuple[tuple[GElement, GElement], ...]

    @property
    def universe(self) -> Universe:
        return self.attrs.universe


@dataclass(frozen=True)
class Ciphertext:
    params: GroupParams
    universe_digest: bytes
    C: GTElement
    C0: GElement
    components: tuple[tuple[tuple[GElement, GElement], ...], ...]
    tag: bytes

    @property
    def component_count(self) -> int:
        return sum(len(row) for row in self.components)


def message_tag(M: GTElement) -> bytes:
    return hashlib.sha256(b"ABE-TAG" + M.to_bytes()).digest()


def setup(
    universe: Universe, params: GroupParams, rng: random.Random | None = None
) -> tuple[PublicKey, MasterKey]:
    """Draw order: every ``a_it`` in (attribute, value) order, then ``alpha``."""
    rng = rng or secrets.SystemRandom()
    a = tuple(tuple(random_scalar(params, rng) for _ in range(n)) for n in universe.sizes())
    alpha = random_scalar(params, rng)
    mk = MasterKey(params, universe, alpha, a)
    return mk.public_key(), mk


def keygen(mk: MasterKey, attrs: AttributeList, rng: random.Random | None = None) -> SecretKey:
    """Draw order: ``r``, then one ``lambda_i`` per attribute."""
    if attrs.universe != mk.universe:
        raise UniverseMismatch("attribute list is over a different universe than the master key")
    rng = rng or secrets.SystemRandom()
    params = mk.params
    g = params.g
    r = random_scalar(params, rng)
    D0 = g ** (mk.alpha - r)
    D = []
    for i, t in enumerate(attrs.indices):
        lam = random_scalar(params, rng)
        D.append((g ** (r + lam * mk.a[i][t]), g ** lam))
    return SecretKey(params, attrs, D0, tuple(D))


def encrypt(
    pk: PublicKey, M: GTElement, policy: Policy | str, rng: random.Random | None = None
) -> Ciphertext:
    """Encrypt ``M`` so that only attribute lists satisfying ``policy`` recover it.

    Draw order: ``s``, the AND-node draws of the share assignment (tree
    order), then ``(z, z')`` for each disallowed slot in (attribute, value)
    order.
    """
    if isinstance(policy, str):
        policy = parse_policy(policy, pk.universe)
    if policy.universe != pk.universe:
        raise UniverseMismatch("policy is over a different universe than the public key")
    if M.params != pk.params:
        raise UniverseMismatch("message is not in this group")
    rng = rng or secrets.SystemRandom()
    params = pk.params
    g = params.g
    policy = normalize(policy)

    s = random_scalar(params, rng)
    shares = assign_shares(policy, s, rng)
    allowed = _allowed_values(policy)
    components = []
    for i, row in enumerate(pk.T):
        s_i = shares[i]
        slots = []
        for t, T_it in enumerate(row):
            if t in allowed[i]:
                slots.append((g ** s_i, T_it ** s_i))
            else:
                z, z2 = random_scalar(params, rng), random_scalar(params, rng)
                slots.append((g ** z, g ** z2))
        components.append(tuple(slots))
    return Ciphertext(
        params,
        pk.universe.digest,
        M * pk.Y ** s,
        g ** s,
        tuple(components),
        message_tag(M),
    )


def _allowed_values(policy: Policy) -> dict[int, frozenset[int]]:
    return {leaf.attr: leaf.allowed for leaf in leaves(policy.root)}


def _check_pair(sk: SecretKey, ct: Ciphertext):
    if sk.params != ct.params:
        raise UniverseMismatch("key and ciphertext use different groups")
    if sk.universe.digest != ct.universe_digest:
        raise UniverseMismatch("key and ciphertext are bound to different universes")
    if tuple(len(row) for row in ct.components) != sk.universe.sizes():
        raise UniverseMismatch("ciphertext layout does not match the key's universe")


def _factors(sk: SecretKey, ct: Ciphertext) -> tuple[GTElement, list[GTElement]]:
    # base = C / e(C0, D0); each factor e(C_i2, D_i2) / e(C_i1, D_i1) at the key's own slot
    base = ct.C / pair(ct.C0, sk.D0)
    factors = []
    for i, t in enumerate(sk.attrs.indices):
        c1, c2 = ct.components[i][t]
        d1, d2 = sk.D[i]
        factors.append(pair(c2, d2) / pair(c1, d1))
    return base, factors


def _combine(base: GTElement, factors: Sequence[GTElement], subset: Sequence[int]) -> GTElement:
    m = base
    for i in subset:
        m = m * factors[i]
    return m


def candidate_subsets(n: int):
    """Full set first, then every non-empty proper subset by decreasing size."""
    full = tuple(range(n))
    yield full
    for k in range(n - 1, 0, -1):
        yield from combinations(full, k)


def blind_decrypt(
    sk: SecretKey, ct: Ciphertext, max_attrs_for_search: int = DEFAULT_SEARCH_BOUND
) -> tuple[GTElement, int]:
    """Decrypt without the policy. Returns the message and candidates tried.

    Raises ``NotSatisfied`` (with ``attempts`` set) when no subset verifies.
    """
    _check_pair(sk, ct)
    n = len(sk.attrs)
    if n > max_attrs_for_search:
        raise ValueError(f"{n} attributes exceeds the search bound of {max_attrs_for_search}")
    base, factors = _factors(sk, ct)
    attempts = 0
    for subset in candidate_subsets(n):
        attempts += 1
        m = _combine(base, factors, subset)
        if message_tag(m) == ct.tag:
            return m, attempts
    raise NotSatisfied(attempts=attempts)


def decrypt(
    sk: SecretKey, ct: Ciphertext, max_attrs_for_search: int = DEFAULT_SEARCH_BOUND
) -> GTElement:
    return blind_decrypt(sk, ct, max_attrs_for_search)[0]


def decrypt_with_policy(sk: SecretKey, ct: Ciphertext, policy: Policy) -> GTElement:
    """Decrypt knowing the true policy, using the first satisfying leaf set."""
    _check_pair(sk, ct)
    sets = pruned_sets(normalize(policy), sk.attrs)
    if not sets:
        raise NotSatisfied()
    base, factors = _factors(sk, ct)
    m = _combine(base, factors, sorted(sets[0]))
    if message_tag(m) != ct.tag:
        raise NotSatisfied()
    return m


def key_consistency(pk: PublicKey, sk: SecretKey) -> list[GTElement]:
    """``e(D_i1, g) / e(D_i2, T_{i,t_i})`` per attribute; all equal ``e(g,g)^r``."""
    g = pk.params.g
    return [
        pair(d1, g) / pair(d2, pk.T[i][t])
        for i, ((d1, d2), t) in enumerate(zip(sk.D, sk.attrs.indices))
    ]


def random_message(params: GroupParams, rng: random.Random | None = None) -> GTElement:
    return params.gt ** random_scalar(params, rng)
