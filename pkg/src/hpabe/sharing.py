"""Top-down secret sharing over a normalized AND/OR policy tree."""

from __future__ import annotations

import random
import secrets
from dataclasses import dataclass
from itertools import product

from .pairing import Scalar, random_scalar
from .policy import And, AttributeList, Leaf, Node, Policy, PolicyError, check_same_universe


@dataclass(frozen=True)
class ShareMap:
    secret: Scalar
    shares: dict[int, Scalar]

    def __getitem__(self, attr: int) -> Scalar:
        return self.shares[attr]

    def __len__(self):
        return len(self.shares)


def assign_shares(policy: Policy, secret: Scalar, rng: random.Random | None = None) -> ShareMap:
    """Split ``secret`` down the tree.

    An AND node hands random values to all children but the last, which gets
    the node value minus their sum; an OR node copies its value to every
    child. A leaf's share is the value it ends up with.
    """
    if not policy.normalized:
        raise PolicyError("shares can only be assigned over a normalized policy")
    rng = rng or secrets.SystemRandom()
    params = secret.params
    shares: dict[int, Scalar] = {}

    def visit(node: Node, value: Scalar):
        if isinstance(node, Leaf):
            shares[node.attr] = value
        elif isinstance(node, And):
            rest = value
            for child in node.children[:-1]:
                v = random_scalar(params, rng)
                rest = rest - v
                visit(child, v)
            visit(node.children[-1], rest)
        else:
            for child in node.children:
                visit(child, value)

    visit(policy.root, secret)
    return ShareMap(secret, shares)


def pruned_sets(policy: Policy, attrs: AttributeList) -> list[frozenset[int]]:
    """Leaf sets of every satisfying subtree, smallest structure first.

    Empty exactly when ``attrs`` does not satisfy ``policy``.
    """
    check_same_universe(attrs.universe, policy.universe)

    def walk(node: Node) -> list[frozenset[int]]:
        if isinstance(node, Leaf):
            return [frozenset({node.attr})] if attrs[node.attr] in node.allowed else []
        parts = [walk(c) for c in node.children]
        if isinstance(node, And):
            if not all(parts):
                return []
            return [frozenset().union(*combo) for combo in product(*parts)]
        return [s for part in parts for s in part]

    seen = set()
    out = []
    for s in walk(policy.root):
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def verify_reconstruction(share_map: ShareMap, pruned: frozenset[int]) -> bool:
    missing = [i for i in pruned if i not in share_map.shares]
    if missing:
        raise KeyError(f"attribute indices {missing} have no share")
    total = sum((share_map.shares[i] for i in pruned), share_map.secret.params.scalar(0))
    return total == share_map.secret
