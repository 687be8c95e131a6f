"""Invariant checks shared by the ``selftest`` and ``sweep`` commands.

Each check returns a :class:`CheckResult`; a failing result carries the
first counterexample found.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .algebra import AlgebraElement, Parity, is_admissible, make_generator, straighten
from .bounds import (
    UnsupportedRegimeError,
    WitnessError,
    even_witness,
    odd_witness,
    tc_exact,
    upper_bound,
)
from .naive import naive_reduce
from .param import ProblemSpec, canonicalize_generator, diagonal_image, reducer_for
from .planner import EVEN, GENERAL, plan, rule_count, validate
from .sampling import random_scenario


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tail = f"  {self.detail}" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}{tail}"

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.ok, "detail": self.detail}


def poincare_coefficients(n_points: int, top: int) -> List[int]:
    """Coefficients of prod_{j=1}^{N-1} (1 + j t) up to t^top."""
    coeffs = [1]
    for j in range(1, n_points):
        nxt = coeffs + [0]
        for k in range(len(coeffs)):
            nxt[k + 1] += j * coeffs[k]
        coeffs = nxt
    return (coeffs + [0] * (top + 1))[: top + 1]


def check_arnold(max_points: int = 6) -> CheckResult:
    for parity in Parity:
        for N in range(3, max_points + 1):
            for i, j, p in itertools.combinations(range(1, N + 1), 3):
                lhs = straighten([(i, p), (j, p)], parity, N)
                rhs = straighten([(i, j), (j, p)], parity, N) - straighten([(i, j), (i, p)], parity, N)
                if lhs != rhs:
                    return CheckResult("arnold relations", False, f"N={N} {parity.value} ({i},{j},{p})")
                if straighten([(i, j), (i, j)], parity, N):
                    return CheckResult("arnold relations", False, f"w[{i},{j}]^2 != 0")
    return CheckResult("arnold relations", True, f"N<={max_points}, both parities")


def check_basis_counts(max_points: int = 6, max_degree: int = 4) -> CheckResult:
    """Products of k generators span exactly the admissible monomials, counted by the Poincare polynomial."""
    for parity in Parity:
        for N in range(2, max_points + 1):
            gens = [(i, j) for j in range(2, N + 1) for i in range(1, j)]
            expect = poincare_coefficients(N, max_degree)
            for k in range(max_degree + 1):
                seen = set()
                for word in itertools.combinations(gens, k):
                    x = straighten(word, parity, N)
                    seen.update(x.terms)
                admissible = {m for m in seen if is_admissible(m)}
                if seen != admissible or len(seen) != expect[k]:
                    return CheckResult(
                        "basis counts", False, f"N={N} degree {k}: {len(seen)} monomials, expected {expect[k]}"
                    )
    return CheckResult("basis counts", True, f"N<={max_points}, degree<={max_degree}")


def check_ring_axioms(trials: int, seed: int) -> CheckResult:
    rng = random.Random(seed)
    for t in range(trials):
        parity = rng.choice(list(Parity))
        N = rng.randint(3, 6)

        def rand():
            x = AlgebraElement.zero(N, parity)
            for _ in range(rng.randint(1, 3)):
                term = AlgebraElement.one(N, parity)
                for _ in range(rng.randint(1, 2)):
                    j = rng.randint(2, N)
                    term = term * make_generator(rng.randint(1, j - 1), j, N, parity)
                x = x + term * rng.randint(-3, 3)
            return x

        a, b, c = rand(), rand(), rand()
        if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c or (a + b) * c != a * c + b * c:
            return CheckResult("ring axioms", False, f"trial {t}: {a} | {b} | {c}")
    return CheckResult("ring axioms", True, f"{trials} random triples")


def check_graded_commutativity(max_points: int = 5) -> CheckResult:
    for parity in Parity:
        sign = -1 if parity is Parity.ODD else 1
        for N in range(2, max_points + 1):
            gens = [make_generator(i, j, N, parity) for j in range(2, N + 1) for i in range(1, j)]
            for x, y in itertools.product(gens, repeat=2):
                if x * y != y * x * sign:
                    return CheckResult("graded commutativity", False, f"{x} vs {y}")
    return CheckResult("graded commutativity", True, f"N<={max_points}")


def check_oracle(trials: int, seed: int) -> CheckResult:
    rng = random.Random(seed)
    for t in range(trials):
        d = rng.choice([2, 3])
        m = rng.choice([2, 3])
        n = rng.randint(1, 5 - m)
        r = [rng.randint(1, 3) for _ in range(n)]
        spec = ProblemSpec.create(d, m, r)
        word = []
        for _ in range(rng.randint(1, 5)):
            j = rng.randint(2, spec.N)
            word.append((rng.randint(1, spec.r_max), rng.randint(1, j - 1), j))
        fast = reducer_for(spec).reduce([canonicalize_generator(*g, spec) for g in word])
        slow = naive_reduce(word, spec, rng)
        if fast != slow:
            return CheckResult("oracle equivalence", False, f"{spec.label()} word={word}")
    return CheckResult("oracle equivalence", True, f"{trials} random products")


def check_planner(per_mode: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    for mode in (GENERAL, EVEN):
        for k in range(per_mode):
            d = 2 if mode == EVEN else int(rng.choice([2, 3]))
            m = int(rng.integers(2, 4))
            n = int(rng.integers(1, 4))
            r = [int(x) for x in rng.integers(1, 4, size=n)]
            sc = random_scenario(rng, d, m, r, mode, ties=2 if k % 3 == 0 else 0)
            rep = validate(plan(sc), sc)
            if not rep.passed:
                return CheckResult("planner certification", False, f"{mode} #{k}: {rep.to_dict()}")
    return CheckResult("planner certification", True, f"{per_mode} scenarios per mode")


def spec_record(spec: ProblemSpec) -> CheckResult:
    """TC identities for one spec: witness count, nonvanishing, kernel membership, rule counts."""
    name = f"tc {spec.label()}"
    odd = spec.d % 2 == 1
    try:
        w = odd_witness(spec) if odd else even_witness(spec)
    except WitnessError as exc:
        return CheckResult(name, False, str(exc))
    upper = upper_bound(spec)
    expected = upper if odd else upper - 1
    if any(diagonal_image(f) for f in w.factors):
        return CheckResult(name, False, "factor outside diagonal kernel")
    if w.count != expected:
        return CheckResult(name, False, f"witness has {w.count} factors, expected {expected}")
    if not w.nonzero:
        reason = "witness product vanishes"
        if spec.r_max == 1:
            reason += " (r_n = 1: the diagonal is the identity, so no nonzero kernel product exists)"
        return CheckResult(name, False, reason)
    if rule_count(spec, GENERAL) != spec.R + spec.m:
        return CheckResult(name, False, "general rule count")
    if not odd and rule_count(spec, EVEN) - 1 != w.count:
        return CheckResult(name, False, "even rule count")
    try:
        rep = tc_exact(spec)
    except UnsupportedRegimeError as exc:
        return CheckResult(name, False, str(exc))
    return CheckResult(name, rep.exact == expected, f"exact={rep.exact} terms={len(w.product)}")


def selftest(seed: int = 0) -> List[CheckResult]:
    return [
        check_arnold(6),
        check_graded_commutativity(5),
        check_basis_counts(6, 4),
        check_ring_axioms(200, seed),
        check_oracle(100, seed),
        check_planner(20, seed),
    ]


def sweep(specs: Sequence[ProblemSpec]) -> List[CheckResult]:
    return [spec_record(s) for s in specs]
