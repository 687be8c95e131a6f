"""Cohomology of the multi-schedule space E_B^r.

A point of E_B^r is a tuple of r_n configurations sharing the obstacle
positions, in which robot i is frozen from its r_i-th node onwards.  Each
node s contributes a copy ``w^s_ij`` of the generators of H*(F(R^d, m+n)).
Copies that are forced equal (obstacle pairs, and pairs whose larger index
is a robot that has already stopped) are identified eagerly, so every
element is stored in the admissible basis ``wbar * wbar^0 * ... *
wbar^{l-1}``.

Slot 0 is the base slot shared by all obstacle-only pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .algebra import (
    BASE,
    AlgebraElement,
    AlgebraError,
    Gen,
    Mono,
    Parity,
    Reducer,
    _accumulate,
    make_generator,
    multiply_terms,
    render,
)


class SpecError(ValueError):
    """Problem parameters outside the supported regime."""


@dataclass(frozen=True)
class ProblemSpec:
    """(d, m, n, r) with the targets counts sorted non-decreasingly.

    ``order[k]`` is the original (0-based) label of the robot that sits at
    sorted position k, so results can be mapped back to user labels.
    """

    d: int
    m: int
    r: Tuple[int, ...]
    order: Tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def create(cls, d: int, m: int, r: Sequence[int]) -> "ProblemSpec":
        r = [int(x) for x in r]
        order = tuple(sorted(range(len(r)), key=lambda k: r[k]))
        return cls(int(d), int(m), tuple(r[k] for k in order), order)

    def __post_init__(self):
        if self.d < 2:
            raise SpecError(f"d >= 2 required (got d={self.d})")
        if self.m < 2:
            raise SpecError(f"m >= 2 required (got m={self.m})")
        if len(self.r) < 1:
            raise SpecError("n >= 1 required (at least one robot)")
        if any(x < 1 for x in self.r):
            raise SpecError(f"every r_i >= 1 required (got {list(self.r)})")
        if list(self.r) != sorted(self.r):
            raise SpecError("r must be non-decreasing; use ProblemSpec.create to sort")
        if not self.order:
            object.__setattr__(self, "order", tuple(range(len(self.r))))

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def R(self) -> int:
        return sum(self.r)

    @property
    def N(self) -> int:
        return self.m + self.n

    @property
    def r_max(self) -> int:
        return self.r[-1]

    @property
    def parity(self) -> Parity:
        return Parity.from_dimension(self.d)

    @cached_property
    def block_ends(self) -> Tuple[int, ...]:
        """n_1 < ... < n_l = n: last sorted robot index of each block of equal r."""
        ends = [k + 1 for k in range(self.n - 1) if self.r[k] < self.r[k + 1]]
        return tuple(ends + [self.n])

    @property
    def ell(self) -> int:
        return len(self.block_ends)

    @cached_property
    def stop_times(self) -> Tuple[int, ...]:
        """r_{n_1} < ... < r_{n_l}."""
        return tuple(self.r[e - 1] for e in self.block_ends)

    def block_of_slot(self, s: int) -> int:
        """u such that r_{n_u} < s <= r_{n_{u+1}} (with r_{n_0} = 0)."""
        for u, stop in enumerate(self.stop_times):
            if s <= stop:
                return u
        raise SpecError(f"slot {s} outside 1..{self.r_max}")

    def block_start(self, u: int) -> int:
        """n_u (with n_0 = 0)."""
        return 0 if u == 0 else self.block_ends[u - 1]

    def label(self) -> str:
        return f"d={self.d} m={self.m} r={','.join(map(str, self.r))}"


def canonicalize_generator(s: int, i: int, j: int, spec: ProblemSpec) -> Gen:
    """Canonical representative of ``w^s_ij``."""
    if not 1 <= i < j <= spec.N:
        raise AlgebraError(f"w^{s}[{i},{j}]: need 1 <= i < j <= {spec.N}")
    if not 1 <= s <= spec.r_max:
        raise AlgebraError(f"slot {s} outside 1..{spec.r_max}")
    if j <= spec.m:
        return (BASE, i, j)
    return (min(s, spec.r[j - spec.m - 1]), i, j)


def _canon_for(spec: ProblemSpec):
    m, r = spec.m, spec.r

    def canon(g: Gen) -> Gen:
        s, i, j = g
        if j <= m:
            return (BASE, i, j) if s != BASE else g
        cap = r[j - m - 1]
        return (cap, i, j) if s > cap else g

    return canon


@lru_cache(maxsize=None)
def reducer_for(spec: ProblemSpec) -> Reducer:
    return Reducer(spec.parity, _canon_for(spec))


class ParamElement:
    """Immutable exact element of H*(E_B^r; Z) in the admissible basis."""

    __slots__ = ("_terms", "spec", "_hash")

    def __init__(self, terms: Mapping[Mono, int], spec: ProblemSpec):
        self._terms = {k: int(v) for k, v in terms.items() if v}
        self.spec = spec
        self._hash = None

    @property
    def terms(self) -> Mapping[Mono, int]:
        return dict(self._terms)

    @classmethod
    def one(cls, spec: ProblemSpec) -> "ParamElement":
        return cls({(): 1}, spec)

    @classmethod
    def zero(cls, spec: ProblemSpec) -> "ParamElement":
        return cls({}, spec)

    @classmethod
    def from_word(cls, word: Iterable[Gen], spec: ProblemSpec, coeff: int = 1) -> "ParamElement":
        """Reduce an ordered product of (slot, i, j) generators."""
        gens = [canonicalize_generator(s, i, j, spec) if s != BASE else _base(i, j, spec) for s, i, j in word]
        terms = reducer_for(spec).reduce(gens)
        return cls({k: coeff * v for k, v in terms.items()}, spec)

    def _check(self, other) -> None:
        if not isinstance(other, ParamElement):
            raise TypeError(f"cannot combine ParamElement with {type(other).__name__}")
        if other.spec != self.spec:
            raise AlgebraError(f"spec mismatch: {self.spec.label()} vs {other.spec.label()}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        _accumulate(out, other._terms, 1)
        return ParamElement(out, self.spec)

    def __sub__(self, other):
        self._check(other)
        out = dict(self._terms)
        _accumulate(out, other._terms, -1)
        return ParamElement(out, self.spec)

    def __neg__(self):
        return ParamElement({k: -v for k, v in self._terms.items()}, self.spec)

    def __mul__(self, other):
        if isinstance(other, int):
            return ParamElement({k: v * other for k, v in self._terms.items()}, self.spec)
        return param_multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, ParamElement):
            return NotImplemented
        return self.spec == other.spec and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __str__(self):
        return render(self._terms, sep=" ")

    def __repr__(self):
        return f"ParamElement({self}; {self.spec.label()})"


def _base(i: int, j: int, spec: ProblemSpec) -> Gen:
    if not 1 <= i < j <= spec.m:
        raise AlgebraError(f"base class w[{i},{j}] needs 1 <= i < j <= m={spec.m}")
    return (BASE, i, j)


def generator(s: int, i: int, j: int, spec: ProblemSpec) -> ParamElement:
    """``w^s_ij`` as an element (canonicalized)."""
    return ParamElement({(canonicalize_generator(s, i, j, spec),): 1}, spec)


def param_multiply(a: ParamElement, b: ParamElement) -> ParamElement:
    a._check(b)
    return ParamElement(multiply_terms(reducer_for(a.spec), a._terms, b._terms), a.spec)


def param_product(factors: Iterable[ParamElement], spec: ProblemSpec) -> ParamElement:
    out = ParamElement.one(spec)
    for f in factors:
        out = param_multiply(out, f)
        if not out:
            break
    return out


def diagonal_image(x: ParamElement) -> AlgebraElement:
    """Image under the map induced by the diagonal E -> E_B^r (forget slots)."""
    spec = x.spec
    N, parity = spec.N, spec.parity
    out = AlgebraElement.zero(N, parity)
    for mono, c in x._terms.items():
        term = AlgebraElement({(): c}, N, parity)
        for _, i, j in mono:
            term = term * make_generator(i, j, N, parity)
        out = out + term
    return out


def kernel_generators(spec: ProblemSpec) -> List[ParamElement]:
    """Distinct nonzero classes ``w^s_ij - w^s'_ij`` (s' > s), in a fixed order."""
    seen = set()
    out = []
    for j in range(2, spec.N + 1):
        for i in range(1, j):
            for s in range(1, spec.r_max + 1):
                for s2 in range(s + 1, spec.r_max + 1):
                    hi = canonicalize_generator(s2, i, j, spec)
                    lo = canonicalize_generator(s, i, j, spec)
                    if hi == lo or (lo, hi) in seen:
                        continue
                    seen.add((lo, hi))
                    out.append(ParamElement({(hi,): 1, (lo,): -1}, spec))
    return out


def is_basis_monomial(mono: Sequence[Gen], spec: ProblemSpec) -> bool:
    """Membership in the admissible basis, with monomials in canonical order.

    Base factors need J increasing in {2..m}; factors of slot s (block u)
    need J increasing in {m+n_u+1, ..., m+n}.
    """
    prev_slot, prev_j = -1, 0
    for g in mono:
        s, i, j = g
        if not 1 <= i < j <= spec.N:
            return False
        if s == BASE:
            if j > spec.m:
                return False
        else:
            if not 1 <= s <= spec.r_max:
                return False
            if j <= spec.m + spec.block_start(spec.block_of_slot(s)):
                return False
        if s < prev_slot or (s == prev_slot and j <= prev_j):
            return False
        if s != prev_slot:
            prev_slot = s
        prev_j = j
    return True


def render_monomial(mono: Sequence[Gen]) -> str:
    return render({tuple(mono): 1}, sep=" ")

