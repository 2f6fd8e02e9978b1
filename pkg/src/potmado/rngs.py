"""Splittable random streams for reproducible parallel simulation.

Every simulation entry point takes either an explicit ``numpy.random.Generator``
or a master seed from which per-unit streams are derived.  Derivation is
keyed by an integer path, e.g. ``(copula_index, iteration_index)``, so the
stream a work unit sees never depends on how work is scheduled across
processes.  The bit generator is Philox (counter based), which makes key
derivation cheap and collision free.
"""

from __future__ import annotations

import numpy as np


def derive_rng(master_seed: int, *path: int) -> np.random.Generator:
    """Return an independent generator for the work unit identified by ``path``.

    The same ``(master_seed, *path)`` always yields the same stream, and
    distinct paths yield statistically independent streams.
    """
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))
