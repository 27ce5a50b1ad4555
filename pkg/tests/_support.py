import json
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).parent / "fixtures"


def load_json(rel):
    return json.loads((FIXTURES / rel).read_text())


class HistoryScorer:
    """Random but reproducible scorer: the distribution depends on the full token history.

    ``peaky`` sharpens distributions so greedy and beam paths differ more often;
    ``ties`` quantises probabilities so exact score ties occur.
    """

    def __init__(self, vocab_size, seed, start_id=0, end_id=1, peaky=1.0, ties=False):
        self.vocab_size = vocab_size
        self.start_id = start_id
        self.end_id = end_id
        self.seed = seed
        self.peaky = peaky
        self.ties = ties

    def initial_state(self):
        return ()

    def step(self, state, prev_token):
        history = state + (prev_token,)
        rng = np.random.default_rng([self.seed, *history])
        if self.ties:
            weights = rng.integers(1, 3, size=self.vocab_size).astype(float)
        else:
            weights = rng.random(self.vocab_size) ** self.peaky + 1e-3
        return np.log(weights / weights.sum()), history


# acceptance bookkeeping, filled by conftest hooks and test_acceptance
SESSION = {"start": None, "files": set()}
CRITERIA = {}
