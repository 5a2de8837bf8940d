# coding:utf8
"""
Counter-based random streams.

A stream is fully determined by ``(seed, purpose, *counters)``; re-creating it
replays exactly the same draws. Worker scheduling therefore cannot change any
random number, and shadow training can replay a client's minibatches.
"""
import numpy as np

# purposes
DATA = 1
INIT = 2
SELECT = 3
DECIDE = 4
TRAIN = 5
BUDGET = 6
PROBE = 7
PARTITION = 8

__all__ = ["stream", "DATA", "INIT", "SELECT", "DECIDE", "TRAIN", "BUDGET", "PROBE", "PARTITION"]


def stream(seed: int, purpose: int, *counters: int) -> np.random.Generator:
    """
        Build an independent Philox generator
    Args:
        seed: run seed
        purpose: one of the module constants
        *counters: e.g. client id and round index

    Returns:
        numpy.random.Generator

    """
    entropy = [int(seed), int(purpose)] + [int(c) for c in counters]
    if any(x < 0 for x in entropy):
        raise ValueError("stream keys must be non-negative: {}".format(entropy))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
