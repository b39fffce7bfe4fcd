import itertools
import random
from pathlib import Path

import pytest

from hpabe.errors import UniverseMismatch
from hpabe.policy import (
    And,
    AttributeList,
    DuplicateAttributeError,
    Leaf,
    Or,
    Policy,
    PolicyError,
    PolicySyntaxError,
    UnknownNameError,
    Universe,
    leaves,
    normalize,
    parse_policy,
    print_policy,
    random_attribute_list,
    random_policy,
    random_universe,
    satisfies,
)

DATA = Path(__file__).parent / "data"


def corpus():
    for line in (DATA / "policy_corpus.txt").read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        kind, _, text = line.partition("|")
        yield kind, text


def oracle_satisfies(indices, root):
    """Post-order evaluation with an explicit stack; shares no code with satisfies()."""
    stack = [(root, False)]
    results = {}
    while stack:
        node, expanded = stack.pop()
        if type(node).__name__ == "Leaf":
            results[id(node)] = indices[node.attr] in node.allowed
        elif not expanded:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
        else:
            vals = [results[id(c)] for c in node.children]
            results[id(node)] = min(vals) if type(node).__name__ == "And" else max(vals)
    return bool(results[id(root)])


@pytest.fixture
def uni():
    return Universe.from_dict({"dept": ["cs", "ee"], "level": ["phd", "ms", "bs"]})


def test_universe_file_format():
    u = Universe.parse((DATA / "universe_demo.txt").read_text())
    assert u.names == ("dept", "level", "dept_group")
    assert u.values[2] == ("sys", "ai")
    assert Universe.parse(u.to_text()) == u


@pytest.mark.parametrize(
    "text",
    ["dept cs", "dept: cs\ndept: ee", "dept: cs,,ee", "dept:", "dept: c s", "x: a, a"],
)
def test_bad_universe_files(text):
    with pytest.raises(ValueError):
        Universe.parse(text)


def test_universe_digest_depends_on_order():
    a = Universe.from_dict({"x": ["1", "2"], "y": ["3"]})
    b = Universe.from_dict({"y": ["3"], "x": ["1", "2"]})
    assert a.digest != b.digest


def test_attribute_list_must_be_total(uni):
    assert AttributeList.parse(uni, "dept=ee, level=bs").indices == (1, 2)
    with pytest.raises(ValueError):
        AttributeList.parse(uni, "dept=cs")
    with pytest.raises(ValueError):
        AttributeList.parse(uni, "dept=cs,level=ms,dept=ee")
    with pytest.raises(UnknownNameError):
        AttributeList.parse(uni, "dept=cs,level=ms,age=3")
    with pytest.raises(ValueError):
        AttributeList(uni, (0, 3))


def test_parse_single_leaf():
    u = Universe.from_dict({"dept": ["cs", "ee"]})
    assert parse_policy("dept=cs", u).root == Leaf(0, frozenset({0}))


def test_parse_multi_valued_leaf(uni):
    p = parse_policy("dept=cs AND level in {phd, ms}", uni)
    assert p.root == And((Leaf(0, frozenset({0})), Leaf(1, frozenset({0, 1}))))
    assert not p.normalized


def test_duplicate_attribute_rejected(uni):
    with pytest.raises(DuplicateAttributeError):
        parse_policy("dept=cs AND dept=ee", uni)
    with pytest.raises(DuplicateAttributeError):
        parse_policy("(dept=cs AND (level=phd OR level=ms))", uni)


def test_precedence_or_looser_than_and():
    u = Universe.from_dict({"a": ["x"], "b": ["x"], "c": ["x"]})
    p = parse_policy("a=x AND b=x OR c=x", u)
    assert isinstance(p.root, Or)
    assert isinstance(p.root.children[0], And)
    p = parse_policy("a=x OR b=x AND c=x", u)
    assert isinstance(p.root, Or)
    assert isinstance(p.root.children[1], And)


def test_parentheses_keep_nesting():
    u = Universe.from_dict({"a": ["x"], "b": ["x"], "c": ["x"]})
    p = parse_policy("a=x AND (b=x AND c=x)", u)
    assert len(p.root.children) == 2
    assert parse_policy("a=x AND b=x AND c=x", u).root.children.__len__() == 3


def test_syntax_error_reports_position(uni):
    with pytest.raises(PolicySyntaxError) as exc:
        parse_policy("dept=cs AND )", uni)
    assert exc.value.position == 12


def test_error_corpus():
    u = Universe.parse((DATA / "universe_demo.txt").read_text())
    for kind, text in corpus():
        if kind == "ok":
            parse_policy(text, u)
        else:
            with pytest.raises(PolicyError) as exc:
                parse_policy(text, u)
            assert str(exc.value), text


def test_print_leaf(uni):
    assert print_policy(Policy(Leaf(0, frozenset({0})), uni)) == "dept=cs"
    assert print_policy(Policy(Leaf(1, frozenset({2, 0})), uni)) == "level in {phd, bs}"


def test_print_keeps_child_order(uni):
    p = Policy(Or((Leaf(1, frozenset({1})), Leaf(0, frozenset({0})))), uni)
    assert print_policy(p) == "level=ms OR dept=cs"


def test_round_trip_random_policies():
    rng = random.Random(11)
    for _ in range(500):
        u = random_universe(rng, max_attrs=6, max_values=4)
        p = random_policy(u, rng, max_depth=3)
        q = parse_policy(print_policy(p), u)
        assert q.same_structure(p), print_policy(p)


def test_random_policy_depth_bound():
    def depth(node):
        return 0 if isinstance(node, Leaf) else 1 + max(depth(c) for c in node.children)

    rng = random.Random(2)
    for _ in range(300):
        u = random_universe(rng)
        assert depth(random_policy(u, rng, max_depth=3).root) <= 3


def test_satisfies_examples(uni):
    w = parse_policy("dept=cs AND level in {phd, ms}", uni)
    assert satisfies(AttributeList.parse(uni, "dept=cs,level=phd"), w)
    assert not satisfies(AttributeList.parse(uni, "dept=ee,level=phd"), w)


def test_flat_policy_is_componentwise_equality(uni):
    w = parse_policy("dept=ee AND level=ms", uni)
    for L in itertools.product(range(2), range(3)):
        assert satisfies(AttributeList(uni, L), w) == (L == (1, 1))


def test_satisfies_matches_oracle():
    rng = random.Random(12)
    for _ in range(200):
        u = random_universe(rng)
        w = random_policy(u, rng)
        L = random_attribute_list(u, rng)
        assert satisfies(L, w) == oracle_satisfies(L.indices, w.root)


def test_satisfies_universe_mismatch(uni):
    other = Universe.from_dict({"dept": ["cs"]})
    with pytest.raises(UniverseMismatch):
        satisfies(AttributeList(other, (0,)), parse_policy("dept=cs", uni))


def test_normalize_adds_wildcards(uni):
    n = normalize(parse_policy("dept=cs", uni))
    assert n.normalized
    assert n.root == And((Leaf(0, frozenset({0})), Leaf(1, frozenset({0, 1, 2}))))


def test_normalize_extends_and_root():
    u = Universe.from_dict({"a": ["x", "y"], "b": ["x"], "c": ["x", "y"]})
    n = normalize(parse_policy("a=x AND b=x", u))
    assert len(n.root.children) == 3
    assert n.root.children[2] == Leaf(2, frozenset({0, 1}))


def test_normalize_keeps_complete_policy(uni):
    w = parse_policy("dept=cs OR level=ms", uni)
    n = normalize(w)
    assert n.root == w.root and n.normalized


def test_normalize_idempotent():
    rng = random.Random(13)
    for _ in range(200):
        u = random_universe(rng)
        once = normalize(random_policy(u, rng))
        assert normalize(once) == once
        assert sorted(leaf.attr for leaf in leaves(once.root)) == list(range(len(u)))


def test_normalize_preserves_satisfaction_exhaustively():
    u = Universe.from_dict({"a": ["0", "1"], "b": ["0", "1"], "c": ["0", "1"]})
    rng = random.Random(14)
    lists = [AttributeList(u, L) for L in itertools.product(range(2), repeat=3)]
    assert len(lists) == 8
    for _ in range(100):
        w = random_policy(u, rng)
        n = normalize(w)
        for L in lists:
            assert satisfies(L, w) == satisfies(L, n)


def test_unnormalized_flag_guard(uni):
    with pytest.raises(PolicyError):
        Policy(Leaf(0, frozenset({0})), uni, normalized=True)


def test_interior_nodes_need_two_children():
    with pytest.raises(PolicyError):
        And((Leaf(0, frozenset({0})),))
    with pytest.raises(PolicyError):
        Leaf(0, frozenset())
