"""Attribute universes, attribute lists and AND/OR access policies.

A universe is an ordered list of attributes, each with an ordered list of
possible values. Indices are zero-based everywhere in code; the order in the
universe file is the index order.

Policy text::

    policy   := or_expr
    or_expr  := and_expr ("OR" and_expr)*
    and_expr := term ("AND" term)*
    term     := leaf | "(" policy ")"
    leaf     := ident "=" ident | ident "in" "{" ident ("," ident)* "}"

Each attribute may appear in at most one leaf.
"""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

from .errors import UniverseMismatch

_IDENT = re.compile(r"[A-Za-z0-9_-]+")


class PolicyError(ValueError):
    """Base class for every policy diagnostic."""


class PolicySyntaxError(PolicyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownNameError(PolicyError):
    pass


class DuplicateAttributeError(PolicyError):
    pass


@dataclass(frozen=True)
class Universe:
    names: tuple[str, ...]
    values: tuple[tuple[str, ...], ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise ValueError("one value list per attribute is required")
        if not self.names:
            raise ValueError("a universe needs at least one attribute")
        if len(set(self.names)) != len(self.names):
            raise ValueError("attribute names must be unique")
        for name, vals in zip(self.names, self.values):
            _check_ident(name)
            if not vals:
                raise ValueError(f"attribute {name!r} has no values")
            if len(set(vals)) != len(vals):
                raise ValueError(f"values of {name!r} must be unique")
            for v in vals:
                _check_ident(v)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def from_dict(cls, mapping: dict[str, Sequence[str]]) -> Universe:
        return cls(tuple(mapping), tuple(tuple(v) for v in mapping.values()))

    @classmethod
    def parse(cls, text: str) -> Universe:
        """Read the ``name: v1, v2`` line format; ``#`` starts a comment."""
        mapping = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name, sep, rest = line.partition(":")
            if not sep:
                raise ValueError(f"line {lineno}: expected 'name: v1, v2, ...'")
            name = name.strip()
            if name in mapping:
                raise ValueError(f"line {lineno}: attribute {name!r} declared twice")
            mapping[name] = [v.strip() for v in rest.split(",")]
            if any(not v for v in mapping[name]):
                raise ValueError(f"line {lineno}: empty value name")
        return cls.from_dict(mapping)

    def to_text(self) -> str:
        return "".join(f"{n}: {', '.join(vs)}\n" for n, vs in zip(self.names, self.values))

    @property
    def digest(self) -> bytes:
        return hashlib.sha256(self.to_text().encode()).digest()

    def __len__(self):
        return len(self.names)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(v) for v in self.values)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownNameError(f"unknown attribute {name!r}") from None

    def value_index(self, attr: int, value: str) -> int:
        try:
            return self.values[attr].index(value)
        except ValueError:
            raise UnknownNameError(
                f"unknown value {value!r} for attribute {self.names[attr]!r}"
            ) from None


def _check_ident(s: str):
    if not isinstance(s, str) or not _IDENT.fullmatch(s):
        raise ValueError(f"invalid identifier {s!r}")


@dataclass(frozen=True)
class AttributeList:
    """A total assignment: one value index per universe attribute."""

    universe: Universe
    indices: tuple[int, ...]

    def __post_init__(self):
        sizes = self.universe.sizes()
        if len(self.indices) != len(sizes):
            raise ValueError(
                f"attribute list has {len(self.indices)} entries, universe has {len(sizes)}"
            )
        for i, (t, n) in enumerate(zip(self.indices, sizes)):
            if not 0 <= t < n:
                raise ValueError(f"value index {t} out of range for {self.universe.names[i]!r}")

    @classmethod
    def from_names(cls, universe: Universe, assignment: dict[str, str]) -> AttributeList:
        missing = [n for n in universe.names if n not in assignment]
        if missing:
            raise ValueError(f"attribute list must assign every attribute; missing {missing}")
        for name in assignment:
            universe.index(name)
        return cls(
            universe,
            tuple(universe.value_index(i, assignment[n]) for i, n in enumerate(universe.names)),
        )

    @classmethod
    def parse(cls, universe: Universe, text: str) -> AttributeList:
        """Parse ``"dept=cs,level=phd"``."""
        assignment = {}
        for item in text.split(","):
            name, sep, value = item.strip().partition("=")
            if not sep:
                raise ValueError(f"expected name=value, got {item.strip()!r}")
            name, value = name.strip(), value.strip()
            if name in assignment:
                raise ValueError(f"attribute {name!r} assigned twice")
            assignment[name] = value
        return cls.from_names(universe, assignment)

    def __len__(self):
        return len(self.indices)

    def __getitem__(self, i):
        return self.indices[i]

    def __str__(self):
        u = self.universe
        return ",".join(f"{n}={u.values[i][t]}" for i, (n, t) in enumerate(zip(u.names, self.indices)))


@dataclass(frozen=True)
class Leaf:
    attr: int
    allowed: frozenset[int]

    def __post_init__(self):
        if not self.allowed:
            raise PolicyError("a leaf must allow at least one value")


@dataclass(frozen=True)
class And:
    children: tuple[Node, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise PolicyError("AND needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple[Node, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise PolicyError("OR needs at least two children")


Node = Union[Leaf, And, Or]


@dataclass(frozen=True)
class Policy:
    root: Node
    universe: Universe
    normalized: bool = False

    def __post_init__(self):
        seen = set()
        sizes = self.universe.sizes()
        for leaf in leaves(self.root):
            if not 0 <= leaf.attr < len(sizes):
                raise UnknownNameError(f"attribute index {leaf.attr} outside universe")
            if leaf.attr in seen:
                raise DuplicateAttributeError(
                    f"attribute {self.universe.names[leaf.attr]!r} appears in more than one leaf"
                )
            if not all(0 <= t < sizes[leaf.attr] for t in leaf.allowed):
                raise UnknownNameError("leaf allows a value index outside the universe")
            seen.add(leaf.attr)
        if self.normalized and len(seen) != len(sizes):
            raise PolicyError("a normalized policy must mention every attribute")

    def same_structure(self, other: Policy) -> bool:
        return self.root == other.root and self.universe == other.universe

    def __str__(self):
        return print_policy(self)


def leaves(node: Node) -> Iterable[Leaf]:
    if isinstance(node, Leaf):
        yield node
    else:
        for child in node.children:
            yield from leaves(child)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z0-9_-]+)|(?P<punct>[=(){},]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolicySyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, universe: Universe):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.universe = universe

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, text, where = self.take()
        if text != value or kind == "eof":
            raise PolicySyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", where)

    def is_keyword(self, word: str) -> bool:
        kind, text, _ = self.peek()
        return kind == "ident" and text == word

    def policy(self) -> Node:
        children = [self.and_expr()]
        while self.is_keyword("OR"):
            self.take()
            children.append(self.and_expr())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def and_expr(self) -> Node:
        children = [self.term()]
        while self.is_keyword("AND"):
            self.take()
            children.append(self.term())
        return children[0] if len(children) == 1 else And(tuple(children))

    def term(self) -> Node:
        kind, text, where = self.peek()
        if text == "(" and kind == "punct":
            self.take()
            node = self.policy()
            self.expect(")")
            return node
        return self.leaf()

    def ident(self, what: str) -> tuple[str, int]:
        kind, text, where = self.take()
        if kind != "ident" or text in ("AND", "OR"):
            raise PolicySyntaxError(f"expected {what}, found {text or 'end of input'!r}", where)
        return text, where

    def leaf(self) -> Leaf:
        name, _ = self.ident("attribute name")
        attr = self.universe.index(name)
        kind, text, where = self.take()
        if kind == "punct" and text == "=":
            value, _ = self.ident("value")
            return Leaf(attr, frozenset({self.universe.value_index(attr, value)}))
        if kind == "ident" and text == "in":
            self.expect("{")
            allowed = []
            while True:
                value, vpos = self.ident("value")
                t = self.universe.value_index(attr, value)
                if t in allowed:
                    raise PolicySyntaxError(f"value {value!r} listed twice", vpos)
                allowed.append(t)
                kind, text, where = self.take()
                if text == "}" and kind == "punct":
                    break
                if text != "," or kind != "punct":
                    raise PolicySyntaxError(f"expected ',' or '}}', found {text or 'end of input'!r}", where)
            return Leaf(attr, frozenset(allowed))
        raise PolicySyntaxError(f"expected '=' or 'in', found {text or 'end of input'!r}", where)


def parse_policy(text: str, universe: Universe) -> Policy:
    parser = _Parser(text, universe)
    if parser.peek()[0] == "eof":
        raise PolicySyntaxError("empty policy", 0)
    root = parser.policy()
    kind, tok, where = parser.peek()
    if kind != "eof":
        raise PolicySyntaxError(f"unexpected {tok!r}", where)
    return Policy(root, universe)


def print_policy(policy: Policy) -> str:
    u = policy.universe

    def show(node: Node, top: bool) -> str:
        if isinstance(node, Leaf):
            name = u.names[node.attr]
            vals = [u.values[node.attr][t] for t in sorted(node.allowed)]
            if len(vals) == 1:
                return f"{name}={vals[0]}"
            return f"{name} in {{{', '.join(vals)}}}"
        op = " AND " if isinstance(node, And) else " OR "
        text = op.join(show(c, False) for c in node.children)
        return text if top else f"({text})"

    return show(policy.root, True)


# -- semantics -------------------------------------------------------------


def check_same_universe(a: Universe, b: Universe):
    if a is not b and a != b:
        raise UniverseMismatch("attribute list and policy use different universes")


def satisfies(attrs: AttributeList, policy: Policy) -> bool:
    check_same_universe(attrs.universe, policy.universe)
    return _eval(policy.root, attrs.indices)


def _eval(node: Node, indices: Sequence[int]) -> bool:
    if isinstance(node, Leaf):
        return indices[node.attr] in node.allowed
    if isinstance(node, And):
        return all(_eval(c, indices) for c in node.children)
    return any(_eval(c, indices) for c in node.children)


def normalize(policy: Policy) -> Policy:
    """Mention every universe attribute, adding omitted ones as wildcards.

    Wildcard leaves allow every value, so satisfaction is unchanged.
    """
    if policy.normalized:
        return policy
    present = {leaf.attr for leaf in leaves(policy.root)}
    wild = tuple(
        Leaf(i, frozenset(range(n)))
        for i, n in enumerate(policy.universe.sizes())
        if i not in present
    )
    root = policy.root
    if wild:
        if isinstance(root, And):
            root = And(root.children + wild)
        else:
            root = And((root,) + wild)
    return replace(policy, root=root, normalized=True)


# -- random generation (tests, demos, the security game) --------------------


def random_universe(rng: random.Random, max_attrs: int = 6, max_values: int = 4) -> Universe:
    n = rng.randint(1, max_attrs)
    return Universe.from_dict(
        {f"a{i}": [f"v{i}_{t}" for t in range(rng.randint(1, max_values))] for i in range(n)}
    )


def random_policy(
    universe: Universe, rng: random.Random, max_depth: int = 3, cover_all: bool = False
) -> Policy:
    """A random AND/OR tree of depth at most ``max_depth`` (a leaf is depth 0)."""
    sizes = universe.sizes()
    attrs = list(range(len(sizes)))
    rng.shuffle(attrs)
    if not cover_all:
        attrs = attrs[: rng.randint(1, len(attrs))]

    def build(group: list[int], depth: int) -> Node:
        if len(group) == 1:
            i = group[0]
            k = rng.randint(1, sizes[i])
            return Leaf(i, frozenset(rng.sample(range(sizes[i]), k)))
        gate = And if rng.random() < 0.5 else Or
        if depth == 1:
            return gate(tuple(build([i], 0) for i in group))
        parts = rng.randint(2, len(group))
        cuts = sorted(rng.sample(range(1, len(group)), parts - 1))
        chunks = [group[a:b] for a, b in zip([0] + cuts, cuts + [len(group)])]
        return gate(tuple(build(c, depth - 1) for c in chunks))

    if max_depth < 1:
        attrs = attrs[:1]
    return Policy(build(attrs, max_depth), universe)


def random_attribute_list(universe: Universe, rng: random.Random) -> AttributeList:
    return AttributeList(universe, tuple(rng.randrange(n) for n in universe.sizes()))
