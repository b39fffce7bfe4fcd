"""Indistinguishability game for hidden-policy CP-ABE, played empirically.

Each trial:

1. the adversary names two challenge policies ``W0``, ``W1``;
2. the challenger runs setup and hands over the public key;
3. phase 1: key queries, each admissible only if the attribute list satisfies
   both policies or neither;
4. the adversary submits ``M0``, ``M1`` (equal if any granted key satisfies
   both policies) and receives ``Encrypt(PK, M_d, W_d)``;
5. phase 2: more key queries under the same rule;
6. the adversary guesses ``d``.

The advantage estimate is ``correct / completed - 1/2`` with a Wilson 95%
interval.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import IO, Iterable

from scipy.stats import binomtest

from .formats import dump_ciphertext
from .pairing import GElement, GroupParams, GTElement, pair, random_scalar
from .policy import (
    And,
    AttributeList,
    Leaf,
    Node,
    Or,
    Policy,
    Universe,
    normalize,
    random_policy,
    satisfies,
)
from .scheme import Ciphertext, MasterKey, PublicKey, SecretKey, encrypt, keygen, random_message, setup


class InadmissibleQuery(Exception):
    """A key query that would trivially reveal the challenge bit."""


class GameAbort(Exception):
    """The adversary broke the game interface; the trial is discarded."""


@dataclass
class GameTranscript:
    trial: int
    policies: tuple[Policy, Policy] | None = None
    queries: list[tuple[tuple[int, ...], bool]] = field(default_factory=list)
    d: int | None = None
    guess: int | None = None
    aborted: str | None = None

    @property
    def correct(self) -> bool:
        return self.aborted is None and self.guess == self.d

    def to_line(self) -> str:
        verdicts = ",".join(
            f"{'.'.join(map(str, attrs))}:{'ok' if ok else 'rejected'}" for attrs, ok in self.queries
        )
        status = "ok" if self.aborted is None else f"aborted:{self.aborted}"
        guess = "-" if self.guess is None else self.guess
        d = "-" if self.d is None else self.d
        return (
            f"trial={self.trial}\td={d}\tguess={guess}\tqueries={len(self.queries)}"
            f"\tverdicts={verdicts or '-'}\tstatus={status}"
        )


def parse_transcript_line(line: str) -> dict:
    """Inverse of ``GameTranscript.to_line`` for offline analysis."""
    fields = dict(part.split("=", 1) for part in line.rstrip("\n").split("\t"))
    out = {
        "trial": int(fields["trial"]),
        "d": None if fields["d"] == "-" else int(fields["d"]),
        "guess": None if fields["guess"] == "-" else int(fields["guess"]),
        "queries": int(fields["queries"]),
        "status": fields["status"],
        "verdicts": [],
    }
    if fields["verdicts"] != "-":
        for item in fields["verdicts"].split(","):
            attrs, verdict = item.rsplit(":", 1)
            out["verdicts"].append((tuple(int(x) for x in attrs.split(".")), verdict == "ok"))
    return out


def write_transcripts(transcripts: Iterable[GameTranscript], out: IO[str]):
    for t in transcripts:
        out.write(t.to_line() + "\n")


class KeyOracle:
    """Answers key queries for one trial, enforcing admissibility."""

    def __init__(
        self,
        mk: MasterKey,
        policies: tuple[Policy, Policy],
        transcript: GameTranscript,
        rng: random.Random,
        max_queries: int | None = None,
    ):
        self.mk = mk
        self.policies = policies
        self.transcript = transcript
        self.rng = rng
        self.max_queries = max_queries
        self.granted_both = False
        self.messages_equal: bool | None = None

    def __call__(self, attrs: AttributeList) -> SecretKey:
        if self.max_queries is not None and len(self.transcript.queries) >= self.max_queries:
            raise GameAbort("query budget exhausted")
        sat0 = satisfies(attrs, self.policies[0])
        sat1 = satisfies(attrs, self.policies[1])
        ok = sat0 == sat1
        if ok and sat0 and self.messages_equal is False:
            ok = False
        self.transcript.queries.append((attrs.indices, ok))
        if not ok:
            raise InadmissibleQuery("key query distinguishes the challenge policies")
        if sat0:
            self.granted_both = True
        return keygen(self.mk, attrs, self.rng)


class Adversary:
    """Base adversary: random challenge policies, no queries, random guess.

    ``self.rng`` is reset by the game at the start of every trial.
    """

    rng: random.Random

    def begin(self, universe: Universe, params: GroupParams, rng: random.Random) -> tuple[Policy, Policy]:
        self.rng = rng
        self.universe = universe
        self.params = params
        return random_policy(universe, rng), random_policy(universe, rng)

    def phase1(self, pk: PublicKey, oracle: KeyOracle):
        pass

    def messages(self, pk: PublicKey) -> tuple[GTElement, GTElement]:
        return random_message(pk.params, self.rng), random_message(pk.params, self.rng)

    def phase2(self, ct: Ciphertext, oracle: KeyOracle):
        pass

    def guess(self, pk: PublicKey, ct: Ciphertext) -> int:
        return self.rng.randrange(2)


class RandomGuessAdversary(Adversary):
    pass


class LengthInspectorAdversary(Adversary):
    """Compares the challenge length against encryptions under each policy."""

    def begin(self, universe, params, rng):
        self.policies = super().begin(universe, params, rng)
        return self.policies

    def guess(self, pk, ct):
        observed = len(dump_ciphertext(ct))
        lengths = [
            len(dump_ciphertext(encrypt(pk, random_message(pk.params, self.rng), w, self.rng)))
            for w in self.policies
        ]
        matches = [b for b, n in enumerate(lengths) if n == observed]
        if len(matches) == 1:
            return matches[0]
        return self.rng.randrange(2)


class DlogAdversary(Adversary):
    """Reads exponents straight out of a transparent-backend ciphertext.

    For each challenge policy it rebuilds the share tree bottom-up from the
    allowed slots and checks whether it reconstructs ``log C0``.
    """

    def begin(self, universe, params, rng):
        if not params.insecure:
            raise GameAbort("dlog adversary needs the transparent backend")
        self.rng = rng
        self.universe = universe
        self.params = params
        sizes = universe.sizes()
        if len(sizes) == 1:
            first = Leaf(0, frozenset({0}))
            last = Leaf(0, frozenset({sizes[0] - 1}))
            self.policies = (Policy(first, universe), Policy(last, universe))
        else:
            self.policies = (
                Policy(And(tuple(Leaf(i, frozenset({0})) for i in range(len(sizes)))), universe),
                Policy(Or(tuple(Leaf(i, frozenset({n - 1})) for i, n in enumerate(sizes))), universe),
            )
        return self.policies

    def _derived(self, node: Node, pk: PublicKey, ct: Ciphertext):
        p = pk.params.p
        if isinstance(node, Leaf):
            values = set()
            for t in node.allowed:
                c1, c2 = ct.components[node.attr][t]
                if c2.rep != pk.T[node.attr][t].rep * c1.rep % p:
                    return None
                values.add(c1.rep)
            return values.pop() if len(values) == 1 else None
        children = [self._derived(c, pk, ct) for c in node.children]
        if any(v is None for v in children):
            return None
        if isinstance(node, And):
            return sum(children) % p
        return children[0] if len(set(children)) == 1 else None

    def guess(self, pk, ct):
        s = ct.C0.rep
        matches = [
            b for b, w in enumerate(self.policies) if self._derived(normalize(w).root, pk, ct) == s
        ]
        if len(matches) == 1:
            return matches[0]
        return self.rng.randrange(2)


@dataclass
class GameResult:
    trials: int
    completed: int
    correct: int
    transcripts: list[GameTranscript]

    @property
    def advantage(self) -> float:
        if not self.completed:
            return 0.0
        return self.correct / self.completed - 0.5

    @property
    def confidence_interval(self) -> tuple[float, float]:
        """95% interval for the advantage."""
        if not self.completed:
            return (-0.5, 0.5)
        ci = binomtest(self.correct, self.completed).proportion_ci(0.95, method="wilson")
        return ci.low - 0.5, ci.high - 0.5

    def ci_contains_zero(self) -> bool:
        low, high = self.confidence_interval
        return low <= 0.0 <= high


def _trial_rng(seed: int, trial: int) -> random.Random:
    material = seed.to_bytes(32, "big") + trial.to_bytes(8, "big")
    return random.Random(hashlib.sha256(material).digest())


def play_trial(
    adversary: Adversary,
    universe: Universe,
    params: GroupParams,
    trial: int,
    rng: random.Random,
    max_queries: int | None = None,
) -> GameTranscript:
    transcript = GameTranscript(trial)
    try:
        w0, w1 = adversary.begin(universe, params, rng)
        if w0.universe != universe or w1.universe != universe:
            raise GameAbort("challenge policies use another universe")
        transcript.policies = (w0, w1)
        pk, mk = setup(universe, params, rng)
        oracle = KeyOracle(mk, (w0, w1), transcript, rng, max_queries)
        adversary.phase1(pk, oracle)

        m0, m1 = adversary.messages(pk)
        if oracle.granted_both and m0 != m1:
            raise GameAbort("messages must be equal after a key satisfying both policies")
        oracle.messages_equal = m0 == m1
        d = rng.randrange(2)
        transcript.d = d
        ct = encrypt(pk, (m0, m1)[d], (w0, w1)[d], rng)

        adversary.phase2(ct, oracle)
        guess = adversary.guess(pk, ct)
        if guess not in (0, 1):
            raise GameAbort(f"guess must be 0 or 1, got {guess!r}")
        transcript.guess = guess
    except GameAbort as exc:
        transcript.aborted = str(exc)
    except InadmissibleQuery:
        transcript.aborted = "adversary ignored a rejected key query"
    return transcript


def run_game(
    adversary: Adversary,
    universe: Universe,
    params: GroupParams,
    trials: int,
    rng: random.Random | None = None,
    max_queries: int | None = None,
) -> GameResult:
    """Play ``trials`` independent trials.

    Each trial draws from its own stream derived from one seed taken from
    ``rng``, so re-running with an identically seeded ``rng`` replays every
    transcript exactly.
    """
    rng = rng or random.SystemRandom()
    seed = rng.getrandbits(256)
    transcripts = [
        play_trial(adversary, universe, params, i, _trial_rng(seed, i), max_queries)
        for i in range(trials)
    ]
    completed = [t for t in transcripts if t.aborted is None]
    return GameResult(trials, len(completed), sum(t.correct for t in completed), transcripts)


@dataclass(frozen=True)
class DBDHInstance:
    params: GroupParams
    ga: GElement
    gb: GElement
    gc: GElement
    Z: GTElement
    real: bool


def make_dbdh_instance(params: GroupParams, real: bool, rng: random.Random | None = None) -> DBDHInstance:
    """Draw order: ``a``, ``b``, ``c``, then the random exponent of ``Z`` if not real."""
    rng = rng or random.SystemRandom()
    g = params.g
    a, b, c = (random_scalar(params, rng) for _ in range(3))
    if real:
        Z = pair(g, g) ** (a * b * c)
    else:
        Z = params.gt ** rng.randrange(params.p)
    return DBDHInstance(params, g ** a, g ** b, g ** c, Z, real)
