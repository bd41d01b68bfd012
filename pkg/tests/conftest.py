import random
import sys

import pytest

from afalab.approx import ABOVE, ApproximationTrace
from afalab.graphs import DecreasingString, FamilySpec


def random_above_trace(rng: random.Random, inputs: int = 20, max_value: int = 8, max_changes: int = 4,
                       max_gap: int = 5) -> ApproximationTrace:
    """A complete from-above trace with random drops at random stages."""
    events = {}
    for x in range(rng.randint(1, inputs)):
        v = rng.randint(0, max_value)
        evs, s = [(0, v)], 0
        for _ in range(rng.randint(0, max_changes)):
            if v == 0:
                break
            v = rng.randint(0, v - 1)
            s += rng.randint(1, max_gap)
            evs.append((s, v))
        events[x] = evs
    return ApproximationTrace.from_events(events, ABOVE, complete=True)


def random_string(rng: random.Random, max_val: int = 6, max_len: int = 3) -> DecreasingString:
    k = rng.randint(1, min(max_len, max_val + 1))
    return DecreasingString(tuple(sorted(rng.sample(range(max_val + 1), k), reverse=True)))


def random_family(rng: random.Random, max_spokes: int = 12, max_val: int = 6, max_len: int = 3) -> FamilySpec:
    return FamilySpec.explicit([random_string(rng, max_val, max_len) for _ in range(rng.randint(1, max_spokes))])


@pytest.fixture
def rng():
    return random.Random(20261015)


S = DecreasingString.of


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance.RESULTS:
            terminalreporter.write_line(line)
