from fractions import Fraction

import pytest

from seqptc.bounds import (
    UnsupportedRegimeError,
    WrongParityError,
    even_witness,
    hdim_bound,
    odd_marker_monomial,
    odd_witness,
    reference_param_tc,
    reference_tc,
    worked_example_witness,
    tc_exact,
    upper_bound,
)
from seqptc.param import ProblemSpec, SpecError, diagonal_image, generator, kernel_generators
from seqptc.sampling import enumerate_specs


def spec(d, m, r):
    return ProblemSpec.create(d, m, r)


@pytest.mark.parametrize("d, m, r, value", [(3, 2, (2, 3), 6), (3, 2, (1,), 2), (5, 3, (1, 2, 2), 7)])
def test_upper_bound(d, m, r, value):
    assert upper_bound(spec(d, m, r)) == value


def test_fractional_bound_is_just_above_upper():
    s = spec(3, 2, (2, 3))
    assert hdim_bound(s) == Fraction(13, 2)


@pytest.mark.parametrize("d, n, r, value", [(3, 2, 2, 2), (2, 2, 2, 1), (3, 3, 4, 8)])
def test_reference_tc(d, n, r, value):
    assert reference_tc(d, n, r) == value


def test_reference_domain():
    with pytest.raises(SpecError):
        reference_tc(3, 1, 2)
    with pytest.raises(SpecError):
        reference_param_tc(3, 1, 2, 2)


def test_odd_witness_worked_example():
    w = odd_witness(spec(3, 2, (2, 3)))
    assert w.labels == (
        "(w1[2,3] - w2[2,3])",
        "(w2[1,3] - w1[1,3])",
        "(w2[1,3] - w1[1,3])",
        "(w2[1,4] - w1[1,4])",
        "(w3[1,4] - w1[1,4])",
        "(w3[1,4] - w1[1,4])",
    )
    assert w.count == 6 and w.nonzero
    assert odd_marker_monomial(spec(3, 2, (2, 3))) in w.product.terms


def test_worked_example_witness_expansion():
    w = worked_example_witness()
    assert w.count == 6
    assert str(w.product) == (
        "-4*w[1,2] w1[2,3] w1[1,4] w2[1,3] w2[1,4] w3[1,4] + 4*w[1,2] w1[1,3] w1[1,4] w2[2,3] w2[1,4] w3[1,4]"
    )


def test_even_witness_examples():
    w = even_witness(spec(2, 2, (2,)))
    assert w.labels == ("(w1[2,3] - w2[2,3])", "(w2[1,3] - w1[1,3])")
    assert w.nonzero
    w = even_witness(spec(4, 3, (2, 2)))
    assert w.count == 5 and w.nonzero


def test_parity_errors():
    with pytest.raises(WrongParityError):
        odd_witness(spec(2, 2, (2,)))
    with pytest.raises(WrongParityError):
        even_witness(spec(3, 2, (2,)))


@pytest.mark.parametrize("d, m, r", [(3, 2, (1,)), (2, 2, (1, 1)), (4, 3, (1, 1, 1))])
def test_single_node_has_no_kernel_product(d, m, r):
    # one node: the diagonal is an isomorphism, so nothing nonzero lies in its kernel
    s = spec(d, m, r)
    assert kernel_generators(s) == []
    for j in range(2, s.N + 1):
        for i in range(1, j):
            assert diagonal_image(generator(1, i, j, s))
    w = odd_witness(s) if d % 2 else even_witness(s)
    assert not w.nonzero
    with pytest.raises(UnsupportedRegimeError, match="r_n >= 2"):
        tc_exact(s)


def test_single_robot_frozen_acts_as_obstacle():
    # a robot with one target behaves like an extra obstacle once another robot moves
    a = odd_witness(spec(3, 2, (1, 2)))
    b = odd_witness(spec(3, 3, (2,)))
    assert a.nonzero and a.count == b.count == 4
    assert a.obstacles_effective == 3


@pytest.mark.parametrize("d, m, r, value", [(3, 2, (2, 3), 6), (2, 2, (2,), 2), (4, 2, (2, 3), 5), (5, 3, (1, 3), 6)])
def test_tc_exact(d, m, r, value):
    rep = tc_exact(spec(d, m, r))
    assert rep.exact == rep.lower == rep.upper == value
    assert rep.witness_nonzero


def test_tc_exact_is_monotone():
    values = {}
    for s in enumerate_specs([3, 2], [2, 3], [1, 2], 3):
        if s.r_max >= 2:
            values[(s.d, s.m, s.r)] = tc_exact(s).exact
    for (d, m, r), v in values.items():
        for k in range(len(r)):
            bumped = tuple(sorted(r[:k] + (r[k] + 1,) + r[k + 1 :]))
            if (d, m, bumped) in values:
                assert values[(d, m, bumped)] >= v
        if (d, m + 1, r) in values:
            assert values[(d, m + 1, r)] >= v


def test_report_serialization():
    rep = tc_exact(spec(3, 2, (2, 3)))
    assert rep.to_line().startswith("d=3 m=2 n=2 r=2,3 upper=6 lower=6 exact=6")
    doc = rep.to_dict()
    assert doc["spec"] == {"d": 3, "m": 2, "n": 2, "r": [2, 3]}
    assert doc["hdim_bound"] == "13/2"
