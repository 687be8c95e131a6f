"""Upper bounds, cup-length witnesses and exact values of TC_r.

The lower bounds come from products of classes in the kernel of the
diagonal map; a nonzero product of k such classes forces TC_r >= k.  The
witness products are expanded exactly by the reduction engine instead of
being trusted from a hand calculation.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Tuple

from .algebra import sort_key
from .param import (
    ParamElement,
    ProblemSpec,
    SpecError,
    canonicalize_generator,
    diagonal_image,
    generator,
    param_product,
    reducer_for,
)


class UnsupportedRegimeError(SpecError):
    """No closed-form value is claimed for these parameters."""


class WrongParityError(SpecError):
    pass


class WitnessError(RuntimeError):
    """A witness product vanished or a factor left the diagonal kernel."""


@dataclass(frozen=True)
class Witness:
    product: ParamElement
    factors: Tuple[ParamElement, ...]
    labels: Tuple[str, ...]
    obstacles_effective: int

    @property
    def count(self) -> int:
        return len(self.factors)

    @property
    def nonzero(self) -> bool:
        return bool(self.product)


@dataclass(frozen=True)
class TcReport:
    spec: ProblemSpec
    upper: int  # tight upper bound (dimensional for odd d, even-line planner for even d)
    upper_dimensional: int
    lower: int
    exact: int
    witness_factor_count: int
    witness_nonzero: bool
    witness_terms: int
    hdim_numerator: int
    hdim_bound: Fraction = field(repr=False)

    def to_line(self) -> str:
        s = self.spec
        return (
            f"d={s.d} m={s.m} n={s.n} r={','.join(map(str, s.r))} "
            f"upper={self.upper} lower={self.lower} exact={self.exact} "
            f"factors={self.witness_factor_count} nonzero={int(self.witness_nonzero)} "
            f"terms={self.witness_terms} hdim_bound={self.hdim_bound}"
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        out["spec"] = {"d": self.spec.d, "m": self.spec.m, "n": self.spec.n, "r": list(self.spec.r)}
        out["hdim_bound"] = str(self.hdim_bound)
        return out


def _require_regime(spec: ProblemSpec) -> None:
    # ProblemSpec already rejects m < 2 and n < 1; kept explicit for callers
    # constructing specs by other means.
    if spec.m < 2:
        raise UnsupportedRegimeError("m >= 2 required")
    if spec.n < 1:
        raise UnsupportedRegimeError("n >= 1 required")


def hdim_total(spec: ProblemSpec) -> int:
    """Closed-form homotopy-dimension bound of E_B^r used in the dimensional estimate."""
    dm = spec.d - 1
    total = 0
    prev_stop, prev_end = 0, 0
    for stop, end in zip(spec.stop_times, spec.block_ends):
        total += (stop - prev_stop) * (spec.n - prev_end) * dm
        prev_stop, prev_end = stop, end
    return total + (spec.m - 1) * dm


def hdim_bound(spec: ProblemSpec) -> Fraction:
    """Strict bound (hdim + 1)/(d - 1) on TC_r."""
    return Fraction(hdim_total(spec) + 1, spec.d - 1)


def upper_bound(spec: ProblemSpec) -> int:
    _require_regime(spec)
    value = spec.R + spec.m - 1
    # the strict fractional bound is value + 1/(d-1)
    assert hdim_bound(spec) == value + Fraction(1, spec.d - 1)
    return value


def reference_tc(d: int, n: int, r: int) -> int:
    """Sequential TC_r of F(R^d, n) (no obstacles)."""
    if min(d, n, r) < 2:
        raise SpecError(f"reference_tc needs d, n, r >= 2 (got d={d}, n={n}, r={r})")
    return r * (n - 1) - (0 if d % 2 else 1)


def reference_param_tc(d: int, m: int, n: int, r: int) -> int:
    """TC_r of the obstacle fibration with a common target count r."""
    if min(d, m, r) < 2 or n < 1:
        raise SpecError(f"reference_param_tc needs d, m, r >= 2 and n >= 1 (got d={d}, m={m}, n={n}, r={r})")
    return r * n + m - (1 if d % 2 else 2)


class _Builder:
    """Collects linear kernel classes for a witness."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.factors: List[ParamElement] = []
        self.labels: List[str] = []

    def diff(self, s: int, s2: int, i: int, j: int) -> None:
        """Append w^s_ij - w^s2_ij."""
        spec = self.spec
        self.labels.append(f"(w{s}[{i},{j}] - w{s2}[{i},{j}])")
        if max(s, s2) > spec.r_max:
            # single node: every slot coincides, so the class is zero
            self.factors.append(ParamElement.zero(spec))
            return
        self.factors.append(generator(s, i, j, spec) - generator(s2, i, j, spec))


def _effective_split(spec: ProblemSpec):
    """Treat robots with a single target as extra obstacles.

    Such robots are frozen at every node, so E_B^r (and the diagonal) is the
    same space for the problem with m + n_1 obstacles and the remaining
    robots.  Returns (M, sub) where M is the effective obstacle count and sub
    describes the remaining robots' block structure; with r_n = 1 no robot
    remains and the literal construction is kept.
    """
    ones = sum(1 for x in spec.r if x == 1)
    if ones == 0 or ones == spec.n:
        return spec.m, spec.r
    return spec.m + ones, spec.r[ones:]


def _blocks(r: Tuple[int, ...]):
    """[(lo, hi, start, end)] with lo = r_{n_u}, hi = r_{n_{u+1}}, robots start..end-1 (0-based)."""
    out = []
    lo, start = 0, 0
    for k in range(len(r)):
        if k == len(r) - 1 or r[k] < r[k + 1]:
            out.append((lo, r[k], start, k + 1))
            lo, start = r[k], k + 1
    return out


def odd_witness(spec: ProblemSpec) -> Witness:
    """Nonzero product of R+m-1 diagonal-kernel classes for odd d."""
    _require_regime(spec)
    if spec.d % 2 == 0:
        raise WrongParityError(f"odd_witness needs odd d (got d={spec.d})")
    M, r = _effective_split(spec)
    nr = len(r)
    b = _Builder(spec)
    first = M + 1
    for i in range(2, M + 1):
        b.diff(1, 2, i, first)
    for u, (lo, hi, start, end) in enumerate(_blocks(r)):
        s0 = max(lo + 1, 2)
        for j in range(M + start + 1, M + end + 1):
            b.diff(s0, 1, 1, j)
        for s in range(s0, hi + 1):
            for j in range(M + start + 1, M + nr + 1):
                b.diff(s, 1, 1, j)
    return _finish(spec, b, M)


def even_witness(spec: ProblemSpec) -> Witness:
    """Nonzero product of R+m-2 diagonal-kernel classes for even d."""
    _require_regime(spec)
    if spec.d % 2 == 1:
        raise WrongParityError(f"even_witness needs even d (got d={spec.d})")
    M, r = _effective_split(spec)
    nr = len(r)
    b = _Builder(spec)
    first = M + 1
    for i in range(2, M + 1):
        b.diff(1, 2, i, first)
    for j in range(M + 2, M + nr + 1):
        b.diff(2, 1, j - 1, j)
    for u, (lo, hi, start, end) in enumerate(_blocks(r)):
        for s in range(max(lo + 1, 2), hi + 1):
            for j in range(M + start + 1, M + nr + 1):
                b.diff(s, 1, 1, j)
    return _finish(spec, b, M)


def worked_example_witness() -> Witness:
    """The alternative six-factor witness of the worked example d=3, m=2, r=(2,3)."""
    spec = ProblemSpec.create(3, 2, (2, 3))
    b = _Builder(spec)
    for s, s2, i, j in [(2, 1, 1, 3), (2, 1, 1, 3), (2, 1, 1, 4), (2, 1, 1, 4), (2, 1, 2, 3), (3, 1, 1, 4)]:
        b.diff(s, s2, i, j)
    return _finish(spec, b, spec.m)


def _finish(spec: ProblemSpec, b: _Builder, M: int) -> Witness:
    for f, label in zip(b.factors, b.labels):
        if diagonal_image(f):
            raise WitnessError(f"factor {label} is not in the diagonal kernel")
    product = param_product(b.factors, spec)
    return Witness(product, tuple(b.factors), tuple(b.labels), M)


def odd_marker_monomial(spec: ProblemSpec):
    """The basis monomial singled out in the nonvanishing argument (odd d).

    w_12 w_23 ... w_2M * w^1_{2,M+1} prod_j w^1_{1j} * prod_{s>=2} prod_{j in J_s} w^s_{1j},
    with J_s the robots still moving at node s.  Returned in canonical order.
    """
    M, r = _effective_split(spec)
    nr = len(r)
    if nr == 0 or r[0] < 2:
        return None
    gens = []

    def add(s, i, j):
        gens.append(canonicalize_generator(s, i, j, spec) if j > spec.m else (0, i, j))

    add(1, 1, 2)
    for j in range(3, M + 1):
        add(1, 2, j)
    add(1, 2, M + 1)
    for j in range(M + 2, M + nr + 1):
        add(1, 1, j)
    for lo, hi, start, end in _blocks(r):
        for s in range(max(lo + 1, 2), hi + 1):
            for j in range(M + start + 1, M + nr + 1):
                add(s, 1, j)
    mono = tuple(sorted(gens, key=sort_key))
    # the marker must already be a normal-form word
    assert reducer_for(spec).reduce(mono) == {mono: 1}
    return mono


def tc_exact(spec: ProblemSpec) -> TcReport:
    """Exact TC_r from a verified witness and the matching upper bound."""
    from .planner import rule_count

    _require_regime(spec)
    if spec.r_max < 2:
        raise UnsupportedRegimeError(
            "r_n >= 2 required: with a single node the diagonal is the identity and no witness exists"
        )
    dimensional = upper_bound(spec)
    if spec.d % 2 == 1:
        w = odd_witness(spec)
        expected = dimensional
    else:
        w = even_witness(spec)
        expected = rule_count(spec, "even") - 1
        if expected != dimensional - 1:
            raise WitnessError(f"even rule count {expected + 1} disagrees with bound {dimensional}")
    if not w.nonzero:
        raise WitnessError(f"witness product vanished for {spec.label()}")
    if w.count != expected:
        raise WitnessError(f"witness has {w.count} factors, expected {expected}")
    return TcReport(
        spec=spec,
        upper=expected,
        upper_dimensional=dimensional,
        lower=w.count,
        exact=expected,
        witness_factor_count=w.count,
        witness_nonzero=True,
        witness_terms=len(w.product),
        hdim_numerator=hdim_total(spec) + 1,
        hdim_bound=hdim_bound(spec),
    )
