import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqptc.algebra import BASE, AlgebraElement, AlgebraError, Parity, make_generator
from seqptc.naive import naive_reduce, slot_classes
from seqptc.param import (
    ParamElement,
    ProblemSpec,
    SpecError,
    canonicalize_generator,
    diagonal_image,
    generator,
    is_basis_monomial,
    kernel_generators,
    param_product,
    reducer_for,
)

S23 = ProblemSpec.create(3, 2, (2, 3))


def w(s, i, j, spec=S23):
    return generator(s, i, j, spec)


def test_spec_sorting_keeps_original_labels():
    spec = ProblemSpec.create(3, 2, (3, 1, 2))
    assert spec.r == (1, 2, 3)
    assert spec.order == (1, 2, 0)
    assert spec == ProblemSpec.create(3, 2, (1, 2, 3))


@pytest.mark.parametrize(
    "args, msg",
    [((1, 2, (2,)), "d >= 2"), ((3, 1, (2,)), "m >= 2"), ((3, 2, ()), "n >= 1"), ((3, 2, (0,)), "r_i >= 1")],
)
def test_spec_rejects_bad_parameters(args, msg):
    with pytest.raises(SpecError, match=msg):
        ProblemSpec.create(*args)


def test_block_structure():
    spec = ProblemSpec.create(3, 2, (1, 1, 3, 3, 4))
    assert spec.block_ends == (2, 4, 5)
    assert spec.stop_times == (1, 3, 4)
    assert [spec.block_of_slot(s) for s in (1, 2, 3, 4)] == [0, 1, 1, 2]
    assert spec.block_start(0) == 0 and spec.block_start(2) == 4


def test_canonical_slots():
    assert canonicalize_generator(3, 1, 3, S23) == (2, 1, 3)
    assert canonicalize_generator(3, 1, 2, S23) == (BASE, 1, 2)
    assert canonicalize_generator(1, 3, 4, S23) == (1, 3, 4)
    with pytest.raises(AlgebraError):
        canonicalize_generator(4, 1, 3, S23)
    with pytest.raises(AlgebraError):
        canonicalize_generator(1, 3, 3, S23)


def test_three_term_relation_in_one_slot():
    assert w(2, 1, 3) * w(2, 2, 3) == w(1, 1, 2) * w(2, 2, 3) - w(1, 1, 2) * w(2, 1, 3)


def test_identified_slots_square_to_zero():
    assert w(3, 1, 3) * w(2, 1, 3) == 0


def test_unit():
    x = w(1, 1, 3) + w(2, 3, 4)
    assert ParamElement.one(S23) * x == x
    assert param_product([], S23) == ParamElement.one(S23)


def test_diagonal_image():
    assert diagonal_image(w(2, 1, 3) - w(1, 1, 3)) == 0
    assert diagonal_image(w(1, 1, 3)) == make_generator(1, 3, 4, Parity.EVEN)
    assert diagonal_image((w(2, 1, 3) - w(1, 1, 3)) * (w(2, 1, 4) - w(1, 1, 4))) == 0


def test_kernel_generators_enumeration():
    # independent enumeration: all (s < s') differences whose canonical slots differ
    got = {tuple(sorted(x.terms.items())) for x in kernel_generators(S23)}
    expected = set()
    for i, j in [(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]:
        slots = sorted({canonicalize_generator(s, i, j, S23)[0] for s in (1, 2, 3)})
        for a in range(len(slots)):
            for b in range(a + 1, len(slots)):
                x = w(slots[b], i, j) - w(slots[a], i, j)
                expected.add(tuple(sorted(x.terms.items())))
    assert got == expected
    assert len(got) == 11
    assert all(g[1:] != (1, 2) for x in kernel_generators(S23) for mono in x.terms for g in mono)
    assert kernel_generators(ProblemSpec.create(3, 2, (1,))) == []


def test_basis_membership():
    mono = ((BASE, 1, 2), (1, 1, 3), (2, 1, 4), (3, 3, 4))
    assert is_basis_monomial(mono, S23)
    assert not is_basis_monomial(((3, 1, 3),), S23)
    assert is_basis_monomial((), S23)


def test_rendering():
    x = w(1, 1, 2) * w(1, 1, 3) * w(2, 1, 4)
    assert str(x) == "w[1,2] w1[1,3] w2[1,4]"


def test_mixing_specs_is_an_error():
    with pytest.raises(AlgebraError):
        w(1, 1, 3) + w(1, 1, 3, ProblemSpec.create(3, 2, (2, 2)))


def test_slot_classes_agree_with_canonicalization():
    for spec in [S23, ProblemSpec.create(2, 3, (1, 2)), ProblemSpec.create(3, 2, (1, 3, 3))]:
        cls = slot_classes(spec)
        for (s, i, j), rep in cls.items():
            assert rep == canonicalize_generator(s, i, j, spec)


@st.composite
def spec_and_word(draw):
    d = draw(st.sampled_from([2, 3]))
    m = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(1, 5 - m))
    r = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    spec = ProblemSpec.create(d, m, r)
    gens = st.integers(2, spec.N).flatmap(
        lambda j: st.tuples(st.integers(1, spec.r_max), st.integers(1, j - 1), st.just(j))
    )
    return spec, draw(st.lists(gens, min_size=1, max_size=5))


@settings(max_examples=80, deadline=None)
@given(spec_and_word(), st.integers(0, 2**32 - 1))
def test_reducer_matches_naive_rewriter(case, seed):
    spec, word = case
    fast = reducer_for(spec).reduce([canonicalize_generator(*g, spec) for g in word])
    assert fast == naive_reduce(word, spec, random.Random(seed))
    for mono in fast:
        assert is_basis_monomial(mono, spec)


@settings(max_examples=40, deadline=None)
@given(spec_and_word())
def test_diagonal_is_a_ring_map(case):
    spec, word = case
    x = ParamElement.from_word(word, spec)
    factors = [make_generator(i, j, spec.N, spec.parity) for _, i, j in word]
    expect = AlgebraElement.one(spec.N, spec.parity)
    for f in factors:
        expect = expect * f
    assert diagonal_image(x) == expect
