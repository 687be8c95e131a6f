"""Slow reference rewriter used to cross-check :class:`seqptc.algebra.Reducer`.

It works on whole linear combinations of words and, at every step, applies
one randomly chosen legal move (adjacent swap, square-zero, three-term
relation, slot identification) until nothing applies.  Nothing is cached and
no move order is privileged, so agreement with the optimized reducer is
evidence that the normal form does not depend on the rewriting strategy.
"""

from __future__ import annotations

import random
from typing import Dict, List, Sequence, Tuple

from .algebra import BASE, Gen, Mono, Parity
from .param import ProblemSpec


def slot_classes(spec: ProblemSpec) -> Dict[Gen, Gen]:
    """Union-find over all w^s_ij using the raw identifications; min slot represents each class."""
    parent: Dict[Gen, Gen] = {}

    def find(g):
        while parent[g] != g:
            parent[g] = parent[parent[g]]
            g = parent[g]
        return g

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            parent[hi] = lo

    rn = spec.r_max
    for j in range(2, spec.N + 1):
        for i in range(1, j):
            for s in range(1, rn + 1):
                parent[(s, i, j)] = (s, i, j)
    for j in range(2, spec.N + 1):
        for i in range(1, j):
            for s in range(1, rn + 1):
                for s2 in range(1, rn + 1):
                    if j <= spec.m:
                        union((s, i, j), (s2, i, j))  # obstacle pairs never move
                    else:
                        stop = spec.r[j - spec.m - 1]
                        if s >= stop and s2 >= stop:
                            union((s, i, j), (s2, i, j))  # robot j-m is frozen
    out = {}
    for g in parent:
        rep = find(g)
        out[g] = (BASE, g[1], g[2]) if g[2] <= spec.m else rep
    return out


def _key(g: Gen):
    return (g[0], g[2], g[1])


def _moves(word: Mono) -> List[Tuple[str, int]]:
    moves = []
    for k in range(len(word) - 1):
        a, b = word[k], word[k + 1]
        if a == b:
            moves.append(("zero", k))
        elif _key(a) > _key(b):
            moves.append(("swap", k))
        elif a[0] == b[0] and a[2] == b[2]:
            moves.append(("arnold", k))
    return moves


def naive_reduce(word: Sequence[Gen], spec: ProblemSpec, rng: random.Random, max_steps: int = 10**6) -> Dict[Mono, int]:
    """Normal form of the ordered product of (slot, i, j) generators, i < j."""
    cls = slot_classes(spec)
    flip = spec.parity is Parity.ODD
    pending: Dict[Mono, int] = {tuple(cls[(max(s, 1), i, j)] for s, i, j in word): 1}
    done: Dict[Mono, int] = {}
    for _ in range(max_steps):
        if not pending:
            break
        w = rng.choice(sorted(pending))
        c = pending.pop(w)
        moves = _moves(w)
        if not moves:
            done[w] = done.get(w, 0) + c
            continue
        kind, k = rng.choice(moves)
        head, tail = w[:k], w[k + 2 :]
        if kind == "zero":
            continue
        a, b = w[k], w[k + 1]
        if kind == "swap":
            new = [(head + (b, a) + tail, -c if flip else c)]
        else:
            s, i1, p = a
            _, i2, _ = b
            ab = cls[(max(s, 1), i1, i2)]
            new = [(head + (ab, b) + tail, c), (head + (ab, a) + tail, -c)]
        for nw, nc in new:
            v = pending.get(nw, 0) + nc
            if v:
                pending[nw] = v
            else:
                pending.pop(nw, None)
    else:
        raise RuntimeError("naive rewriter did not terminate")
    return {k: v for k, v in done.items() if v}
