"""Exact cohomology ring of the configuration space F(R^d, N).

The ring is generated by classes ``w_ij`` (1 <= i < j <= N) of degree d-1,
subject to the Arnold relations::

    w_ij * w_ij = 0
    w_ip * w_jp = w_ij * (w_jp - w_ip)        for i < j < p

Elements are stored as exact integer combinations of admissible monomials
(second indices strictly increasing).  The rewriting kernel below is shared
with :mod:`seqptc.param`, where generators additionally carry a time slot.
"""

from __future__ import annotations

import enum
from typing import Callable, Dict, Iterable, Mapping, Tuple

Gen = Tuple[int, int, int]  # (slot, i, j); the plain algebra only uses slot 0
Mono = Tuple[Gen, ...]
Terms = Dict[Mono, int]

BASE = 0


class AlgebraError(ValueError):
    """Invalid index, mismatched ambient data, or an illegal relabeling."""


class Parity(enum.Enum):
    """Parity of the generator degree d-1."""

    EVEN = "even"  # d odd: generators commute
    ODD = "odd"  # d even: generators anticommute

    @classmethod
    def from_dimension(cls, d: int) -> "Parity":
        return cls.EVEN if d % 2 == 1 else cls.ODD

    @property
    def anticommuting(self) -> bool:
        return self is Parity.ODD


def sort_key(g: Gen):
    return (g[0], g[2], g[1])


class Reducer:
    """Straightens words of generators into admissible normal form.

    ``canon`` maps a generator to its canonical representative (identity
    for the plain algebra; slot identification for the parametrized one).
    Results are memoized on the sorted word, so one reducer should be kept
    per (parity, canon) pair.
    """

    def __init__(self, parity: Parity, canon: Callable[[Gen], Gen] | None = None):
        self.parity = parity
        self.canon = canon if canon is not None else (lambda g: g)
        self._cache: Dict[Mono, Mapping[Mono, int]] = {}

    def _sort(self, word: list) -> Tuple[int, Mono | None]:
        # insertion sort; sign tracks transpositions of odd-degree generators
        sign = 1
        flip = self.parity.anticommuting
        for a in range(1, len(word)):
            g = word[a]
            kg = sort_key(g)
            b = a - 1
            while b >= 0 and sort_key(word[b]) > kg:
                word[b + 1] = word[b]
                b -= 1
                if flip:
                    sign = -sign
            word[b + 1] = g
        for a in range(len(word) - 1):
            if word[a] == word[a + 1]:
                return 0, None
        return sign, tuple(word)

    def reduce(self, word: Iterable[Gen]) -> Terms:
        """Normal form of the ordered product of ``word``."""
        sign, mono = self._sort([self.canon(g) for g in word])
        if mono is None:
            return {}
        base = self._reduce_sorted(mono)
        if sign == 1:
            return dict(base)
        return {k: -v for k, v in base.items()}

    def _reduce_sorted(self, mono: Mono) -> Mapping[Mono, int]:
        hit = self._cache.get(mono)
        if hit is not None:
            return hit
        out: Terms = {}
        for k in range(len(mono) - 1):
            s, a, p = mono[k]
            s2, b, p2 = mono[k + 1]
            if s == s2 and p == p2:
                # w_ap w_bp = w_ab w_bp - w_ab w_ap   (a < b < p)
                head, tail = mono[:k], mono[k + 2 :]
                w_ab = (s, a, b)
                _accumulate(out, self.reduce(head + (w_ab, (s, b, p)) + tail), 1)
                _accumulate(out, self.reduce(head + (w_ab, (s, a, p)) + tail), -1)
                break
        else:
            out = {mono: 1}
        self._cache[mono] = out
        return out


def _accumulate(acc: Terms, terms: Mapping[Mono, int], scale: int) -> None:
    for mono, c in terms.items():
        v = acc.get(mono, 0) + scale * c
        if v:
            acc[mono] = v
        else:
            acc.pop(mono, None)


def multiply_terms(reducer: Reducer, a: Mapping[Mono, int], b: Mapping[Mono, int]) -> Terms:
    out: Terms = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            _accumulate(out, reducer.reduce(ma + mb), ca * cb)
    return out


_REDUCERS: Dict[Parity, Reducer] = {}


def _plain_reducer(parity: Parity) -> Reducer:
    r = _REDUCERS.get(parity)
    if r is None:
        r = _REDUCERS[parity] = Reducer(parity)
    return r


class AlgebraElement:
    """Immutable element of H*(F(R^d, N); Z)."""

    __slots__ = ("_terms", "n_points", "parity", "_hash")

    def __init__(self, terms: Mapping[Mono, int], n_points: int, parity: Parity):
        self._terms = {k: int(v) for k, v in terms.items() if v}
        self.n_points = n_points
        self.parity = parity
        self._hash = None

    @property
    def terms(self) -> Mapping[Mono, int]:
        return dict(self._terms)

    @classmethod
    def one(cls, n_points: int, parity: Parity) -> "AlgebraElement":
        return cls({(): 1}, n_points, parity)

    @classmethod
    def zero(cls, n_points: int, parity: Parity) -> "AlgebraElement":
        return cls({}, n_points, parity)

    def _check(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"cannot combine AlgebraElement with {type(other).__name__}")
        if other.n_points != self.n_points or other.parity is not self.parity:
            raise AlgebraError(
                f"mismatched algebras: N={self.n_points}/{self.parity.value} "
                f"vs N={other.n_points}/{other.parity.value}"
            )

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        _accumulate(out, other._terms, 1)
        return AlgebraElement(out, self.n_points, self.parity)

    def __sub__(self, other):
        self._check(other)
        out = dict(self._terms)
        _accumulate(out, other._terms, -1)
        return AlgebraElement(out, self.n_points, self.parity)

    def __neg__(self):
        return AlgebraElement({k: -v for k, v in self._terms.items()}, self.n_points, self.parity)

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraElement({k: v * other for k, v in self._terms.items()}, self.n_points, self.parity)
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (
            self.n_points == other.n_points
            and self.parity is other.parity
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_points, self.parity, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self._terms}) <= 1

    def __str__(self):
        return render(self._terms)

    def __repr__(self):
        return f"AlgebraElement({self}, N={self.n_points}, {self.parity.value})"


def _render_gen(g: Gen) -> str:
    s, i, j = g
    return f"w[{i},{j}]" if s == BASE else f"w{s}[{i},{j}]"


def monomial_order(mono: Mono):
    """Degree first, then colex on canonical factor keys (last factor decides first)."""
    return (len(mono), [sort_key(g) for g in reversed(mono)])


def render(terms: Mapping[Mono, int], sep: str = "") -> str:
    """Stable text form, e.g. ``-2*w[1,3]w[2,4] + w[1,2]w[3,4]``."""
    if not terms:
        return "0"
    parts = []
    for mono in sorted(terms, key=monomial_order):
        c = terms[mono]
        body = sep.join(_render_gen(g) for g in mono) or "1"
        if abs(c) != 1:
            body = f"{abs(c)}*{body}" if mono else str(abs(c))
        parts.append(("-" if c < 0 else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        text += f" {sgn} {body}"
    return text


def swap_sign(parity: Parity) -> int:
    """Sign relating w_ji to w_ij: the antipodal map of S^{d-1} has degree (-1)^d."""
    return -1 if parity is Parity.EVEN else 1


def make_generator(i: int, j: int, n_points: int, parity: Parity = Parity.EVEN) -> AlgebraElement:
    """The class ``w_ij``; for i > j this is ``(-1)^d w_ji``."""
    if i == j:
        raise AlgebraError(f"w[{i},{j}]: indices must differ")
    for x in (i, j):
        if not 1 <= x <= n_points:
            raise AlgebraError(f"index {x} outside 1..{n_points}")
    if i < j:
        return AlgebraElement({((BASE, i, j),): 1}, n_points, parity)
    return AlgebraElement({((BASE, j, i),): swap_sign(parity)}, n_points, parity)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    terms = multiply_terms(_plain_reducer(a.parity), a._terms, b._terms)
    return AlgebraElement(terms, a.n_points, a.parity)


def straighten(factors: Iterable[Tuple[int, int]], parity: Parity, n_points: int | None = None) -> AlgebraElement:
    """Normal form of the ordered product of base generators ``(i, j)``, i < j."""
    factors = list(factors)
    for i, j in factors:
        if not i < j:
            raise AlgebraError(f"straighten expects i < j, got ({i},{j})")
    if n_points is None:
        n_points = max((j for _, j in factors), default=1)
    terms = _plain_reducer(parity).reduce((BASE, i, j) for i, j in factors)
    return AlgebraElement(terms, n_points, parity)


def product(elements: Iterable[AlgebraElement], n_points: int, parity: Parity) -> AlgebraElement:
    out = AlgebraElement.one(n_points, parity)
    for e in elements:
        out = out * e
    return out


def substitute_hom(
    x: AlgebraElement,
    relabel: Mapping[Tuple[int, int], Tuple[int, int]] | Callable[[Tuple[int, int]], Tuple[int, int]],
    n_points: int | None = None,
) -> AlgebraElement:
    """Apply the ring map sending each ``w_ij`` to ``w_f(i,j)``.

    ``relabel`` is a dict or callable on index pairs; reversed target pairs
    pick up the ``(-1)^d`` orientation sign.  Callers are responsible for
    passing a relabeling that respects the relations (e.g. one induced by an
    injective map of points).
    """
    f = relabel.__getitem__ if isinstance(relabel, Mapping) else relabel
    n_out = x.n_points if n_points is None else n_points
    images: Dict[Gen, AlgebraElement] = {}
    out = AlgebraElement.zero(n_out, x.parity)
    for mono, c in x._terms.items():
        term = AlgebraElement({(): c}, n_out, x.parity)
        for g in mono:
            img = images.get(g)
            if img is None:
                try:
                    i2, j2 = f((g[1], g[2]))
                except KeyError:
                    raise AlgebraError(f"relabeling undefined on ({g[1]},{g[2]})") from None
                img = images[g] = make_generator(i2, j2, n_out, x.parity)
            term = term * img
        out = out + term
    return out


def is_admissible(mono: Mono) -> bool:
    """Second indices strictly increasing, each factor with i < j."""
    last = 0
    for _, i, j in mono:
        if not (i < j and j > last):
            return False
        last = j
    return True
