"""
Playing the indistinguishability game
=====================================

Adversaries choose two policies, query keys that cannot tell them apart,
and guess which policy the challenge was encrypted under. Honest
adversaries hover at zero advantage. One that reads discrete logs off the
transparent backend wins every time, which is the point of calling that
backend insecure.
"""

import random
import sys

from hpabe import Universe, group_setup
from hpabe.game import DlogAdversary, LengthInspectorAdversary, RandomGuessAdversary, run_game, write_transcripts

params = group_setup(61, "transparent", seed=b"game")
universe = Universe.from_dict({"dept": ["cs", "ee", "me"], "level": ["phd", "ms", "bs"]})

for adversary, trials in [
    (RandomGuessAdversary(), 2000),
    (LengthInspectorAdversary(), 2000),
    (DlogAdversary(), 300),
]:
    result = run_game(adversary, universe, params, trials, random.Random(5))
    low, high = result.confidence_interval
    print(f"{type(adversary).__name__:26s} advantage {result.advantage:+.3f}  95% CI [{low:+.3f}, {high:+.3f}]")

# transcripts are tab-separated lines, one per trial
write_transcripts(result.transcripts[:3], sys.stdout)
