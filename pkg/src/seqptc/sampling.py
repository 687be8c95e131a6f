"""Seeded generators for problem specs and planner scenarios."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, List, Sequence

import numpy as np

from .param import ProblemSpec
from .planner import EVEN, GENERAL, Scenario, projection_frame


def enumerate_specs(ds: Iterable[int], ms: Iterable[int], ns: Iterable[int], rmax: int) -> Iterator[ProblemSpec]:
    """All specs with non-decreasing r_i in 1..rmax, sorted by (d, m, n, r)."""
    for d in sorted(ds):
        for m in sorted(ms):
            for n in sorted(ns):
                for r in itertools.combinations_with_replacement(range(1, rmax + 1), n):
                    yield ProblemSpec.create(d, m, r)


def _coords(rng: np.random.Generator, k: int, d: int) -> np.ndarray:
    # three decimals keep documents readable and make exact ties easy to engineer
    return np.round(rng.uniform(-4.0, 4.0, size=(k, d)), 3)


def random_scenario(
    rng: np.random.Generator,
    d: int,
    m: int,
    r: Sequence[int],
    mode: str = GENERAL,
    ties: int = 0,
) -> Scenario:
    """Random scenario; ``ties`` robot targets are moved onto another symbol's projection.

    Ties are made by sliding a target along the projection line, so the
    slices stay configurations of distinct points.
    """
    obstacles = _coords(rng, m, d)
    targets: List[np.ndarray] = [_coords(rng, ri, d) for ri in r]
    if mode == EVEN and np.allclose(obstacles[0], obstacles[1]):
        obstacles[1] += 1.0
    if ties:
        probe = Scenario.create(obstacles, targets, mode, check=False)
        frame = projection_frame(probe)
        flat = [(i, k) for i, t in enumerate(targets) for k in range(len(t))]
        for _ in range(ties):
            i, k = flat[rng.integers(len(flat))]
            pool = [obstacles[j] for j in range(m)] + [
                targets[a][b] for a, b in flat if (a, b) != (i, k)
            ]
            anchor = pool[rng.integers(len(pool))]
            p = targets[i][k]
            targets[i][k] = p + (frame.q(anchor) - frame.q(p)) * frame.e
    return Scenario.create(obstacles, targets, mode)
