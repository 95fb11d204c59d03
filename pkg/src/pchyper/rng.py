"""Seed derivation so that every retry, trial and experiment cell gets its own reproducible stream."""
import hashlib
import random


def derive_seed(master: int | None, *parts) -> int:
    text = ":".join(str(p) for p in (master, *parts))
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def make_rng(master: int | None, *parts) -> random.Random:
    return random.Random(derive_seed(master, *parts))
