"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""

import itertools
import os
import random
import time

import pytest

from conftest import ACCEPTANCE_RESULTS, ScriptedRandom
from hpabe.cli import main
from hpabe.errors import NotSatisfied
from hpabe.formats import dump_ciphertext
from hpabe.game import DlogAdversary, LengthInspectorAdversary, RandomGuessAdversary, run_game
from hpabe.pairing import GTElement, group_setup, pair, random_scalar
from hpabe.policy import (
    And,
    AttributeList,
    Leaf,
    Or,
    Policy,
    Universe,
    leaves,
    normalize,
    random_attribute_list,
    random_policy,
    random_universe,
    satisfies,
)
from hpabe.scheme import blind_decrypt, decrypt, decrypt_with_policy, encrypt, keygen, random_message, setup
from hpabe.sharing import assign_shares, pruned_sets, verify_reconstruction

GAME_UNIVERSE = Universe.from_dict({"dept": ["cs", "ee", "me"], "level": ["phd", "ms", "bs"], "site": ["n", "s"]})


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}"
    ACCEPTANCE_RESULTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def big():
    params = group_setup(64, "transparent", seed=b"acceptance")
    assert params.p >= 2 ** 61
    return params


def test_1_hand_vector():
    start = time.perf_counter()
    params = group_setup(7, "transparent", prime=101)
    u = Universe.from_dict({"a1": ["v11", "v12"], "a2": ["v21", "v22"]})
    pk, mk = setup(u, params, ScriptedRandom([2, 3, 5, 11, 7]))
    sk = keygen(mk, AttributeList.parse(u, "a1=v11,a2=v21"), ScriptedRandom([9, 4, 6]))
    M = GTElement(params, 25)
    ct = encrypt(pk, M, "a1=v11 AND a2=v21", ScriptedRandom([10, 3]))
    out, attempts = blind_decrypt(sk, ct)
    elapsed = time.perf_counter() - start
    got = {
        "D0": sk.D0.rep,
        "D11": sk.D[0][0].rep,
        "C": ct.C.rep,
        "C0": ct.C0.rep,
        "M": out.rep,
    }
    ok = got == {"D0": 99, "D11": 17, "C": 95, "C0": 10, "M": 25} and attempts == 1 and elapsed < 1.0
    record(1, "hand vector", ok, f"{got}, {elapsed * 1000:.1f} ms")


def test_2_round_trip_suite(big):
    rng = random.Random(2)
    start = time.perf_counter()
    counts = {"sat_ok": 0, "sat_bad": 0, "unsat_ok": 0, "unsat_bad": 0}
    for _ in range(1000):
        u = random_universe(rng, max_attrs=6, max_values=4)
        w = random_policy(u, rng, max_depth=3)
        pk, mk = setup(u, big, rng)
        want = rng.random() < 0.5
        for _ in range(16):
            L = random_attribute_list(u, rng)
            if satisfies(L, w) == want:
                break
        sk = keygen(mk, L, rng)
        M = random_message(big, rng)
        ct = encrypt(pk, M, w, rng)
        if satisfies(L, w):
            counts["sat_ok" if decrypt(sk, ct) == M else "sat_bad"] += 1
        else:
            try:
                decrypt(sk, ct)
                counts["unsat_bad"] += 1
            except NotSatisfied:
                counts["unsat_ok"] += 1
    elapsed = time.perf_counter() - start
    ok = counts["sat_bad"] == counts["unsat_bad"] == 0 and elapsed < 60
    record(2, "round-trip suite (1000 instances)", ok, f"{counts}, {elapsed:.1f} s")


def test_3_share_reconstruction(big):
    rng = random.Random(3)
    checked = failures = 0
    for _ in range(1000):
        u = random_universe(rng)
        w = normalize(random_policy(u, rng))
        s = random_scalar(big, rng)
        shares = assign_shares(w, s, rng)
        for L in _all_lists(w):
            if not satisfies(L, w):
                continue
            for pruned in pruned_sets(w, L):
                checked += 1
                failures += not verify_reconstruction(shares, pruned)
    record(3, "share reconstruction", failures == 0 and checked > 0,
           f"{checked} pruned sets, {failures} failures")


def _all_lists(policy):
    """One list per leaf-truth pattern.

    Pruned sets depend only on which leaves a list satisfies, so one allowed
    and one disallowed value per attribute covers every satisfying list.
    """
    u = policy.universe
    allowed = {leaf.attr: leaf.allowed for leaf in leaves(policy.root)}
    choices = []
    for i, n in enumerate(u.sizes()):
        ok = min(allowed[i])
        rest = [t for t in range(n) if t not in allowed[i]]
        choices.append([ok] + rest[:1])
    return [AttributeList(u, idx) for idx in itertools.product(*choices)]


def test_4_bilinearity(big):
    rng = random.Random(4)
    g = big.g
    gt = pair(g, g)
    bad = 0
    for _ in range(1000):
        a, b = random_scalar(big, rng), random_scalar(big, rng)
        bad += pair(g ** a, g ** b) != gt ** (a * b)
        bad += pair(g ** a, g ** b) != pair(g ** b, g ** a)
    ok = bad == 0 and not gt.is_identity()
    record(4, "bilinearity", ok, f"1000 trials, {bad} violations, e(g,g) non-trivial={not gt.is_identity()}")


def test_5_policy_shape_hiding(big):
    rng = random.Random(5)
    u = Universe.from_dict({"a": ["1", "2", "3", "4"], "b": ["x", "y"], "c": ["p", "q", "r"], "d": ["m"]})
    pk, _ = setup(u, big, rng)
    mismatched = 0
    for _ in range(100):
        w0, w1 = random_policy(u, rng), random_policy(u, rng)
        c0 = encrypt(pk, random_message(big, rng), w0, rng)
        c1 = encrypt(pk, random_message(big, rng), w1, rng)
        if len(dump_ciphertext(c0)) != len(dump_ciphertext(c1)) or c0.component_count != c1.component_count:
            mismatched += 1
    record(5, "policy-shape hiding", mismatched == 0, f"100 pairs, {mismatched} mismatched")


def test_6_security_game(big):
    details = []
    ok = True
    for name, adv, trials, seed in [
        ("random-guess", RandomGuessAdversary(), 10_000, 61),
        ("length-inspector", LengthInspectorAdversary(), 10_000, 62),
    ]:
        r = run_game(adv, GAME_UNIVERSE, big, trials, random.Random(seed))
        low, high = r.confidence_interval
        ok &= r.completed == trials and abs(r.advantage) <= 0.03 and r.ci_contains_zero()
        details.append(f"{name} adv={r.advantage:+.4f} ci=[{low:+.4f}, {high:+.4f}]")
    r = run_game(DlogAdversary(), GAME_UNIVERSE, big, 1000, random.Random(63))
    ok &= r.completed == 1000 and r.advantage >= 0.45
    details.append(f"dlog adv={r.advantage:+.4f}")
    record(6, "security game", ok, "; ".join(details))


def _and_of_leaves(u, rng):
    """Root AND over single-attribute leaves, normalized so every attribute appears."""
    sizes = u.sizes()
    parts = []
    for i, n in enumerate(sizes):
        if rng.random() < 0.7:
            k = rng.randrange(1, n + 1)
            parts.append(Leaf(i, frozenset(rng.sample(range(n), k))))
    if len(parts) < 2:
        parts = [Leaf(i, frozenset({rng.randrange(n)})) for i, n in enumerate(sizes)]
    return normalize(Policy(And(tuple(parts)), u))


def test_7_blind_aware_agreement(big):
    rng = random.Random(7)
    disagreements = or_rooted = 0
    for _ in range(500):
        u = random_universe(rng)
        if len(u.names) < 2:
            u = Universe.from_dict({"x": ["0", "1"], "y": ["0", "1", "2"]})
        w = random_policy(u, rng, max_depth=3)
        or_rooted += isinstance(w.root, Or)
        pk, mk = setup(u, big, rng)
        L = random_attribute_list(u, rng)
        sk = keygen(mk, L, rng)
        M = random_message(big, rng)
        ct = encrypt(pk, M, w, rng)
        outcomes = []
        for fn in (lambda: decrypt(sk, ct), lambda: decrypt_with_policy(sk, ct, w)):
            try:
                outcomes.append(fn())
            except NotSatisfied:
                outcomes.append(None)
        disagreements += outcomes[0] != outcomes[1] or (outcomes[0] == M) != satisfies(L, w)

    sat = first = 0
    for _ in range(500):
        u = random_universe(rng)
        if len(u.names) < 2:
            continue
        w = _and_of_leaves(u, rng)
        pk, mk = setup(u, big, rng)
        L = random_attribute_list(u, rng)
        if not satisfies(L, w):
            continue
        M = random_message(big, rng)
        out, attempts = blind_decrypt(keygen(mk, L, rng), encrypt(pk, M, w, rng))
        sat += 1
        first += out == M and attempts == 1
    ok = disagreements == 0 and or_rooted > 0 and sat > 0 and first == sat
    record(7, "blind/aware agreement", ok,
           f"500 instances ({or_rooted} OR-rooted), {disagreements} disagreements; "
           f"AND-rooted first-candidate {first}/{sat}")


def test_8_cli_end_to_end(tmp_path, capsys):
    def run(*argv):
        return main([str(a) for a in argv])

    (tmp_path / "universe.txt").write_text("dept: cs, ee, me\nlevel: phd, ms, bs\n")
    data = os.urandom(1 << 20)
    (tmp_path / "big.bin").write_bytes(data)
    rcs = [
        run("setup", "--universe", tmp_path / "universe.txt", "--pk", tmp_path / "pk.bin",
            "--mk", tmp_path / "mk.bin", "--bits", "64"),
        run("keygen", "--mk", tmp_path / "mk.bin", "--attrs", "dept=cs,level=ms", "--out", tmp_path / "good.sk"),
        run("keygen", "--mk", tmp_path / "mk.bin", "--attrs", "dept=me,level=ms", "--out", tmp_path / "bad.sk"),
        run("encrypt", "--pk", tmp_path / "pk.bin", "--policy", "dept in {cs, ee} AND level in {phd, ms}",
            "--in", tmp_path / "big.bin", "--out", tmp_path / "big.abe"),
        run("decrypt", "--sk", tmp_path / "good.sk", "--in", tmp_path / "big.abe", "--out", tmp_path / "back.bin"),
    ]
    identical = (tmp_path / "back.bin").read_bytes() == data
    rc_bad = run("decrypt", "--sk", tmp_path / "bad.sk", "--in", tmp_path / "big.abe", "--out", tmp_path / "leak.bin")
    leaked = (tmp_path / "leak.bin").exists()
    capsys.readouterr()
    ok = rcs == [0] * 5 and identical and rc_bad == 2 and not leaked
    record(8, "CLI end-to-end", ok,
           f"exit codes {rcs}, 1 MiB identical={identical}, wrong key exit {rc_bad}, output written={leaked}")
