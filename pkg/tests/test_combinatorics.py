import itertools

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from overpartlab import combinatorics as cb
from overpartlab.combinatorics import (
    BijectionError,
    ClassSpec,
    ClassTag,
    InvalidParameters,
    Overpartition,
    ParameterSet,
)
from overpartlab.hyperseries import parity_overpartition_products
from overpartlab.series import EXACT, Monomial, pochhammer

PLAIN_TAGS = [ClassTag.U, ClassTag.UBAR, ClassTag.G, ClassTag.H, ClassTag.GBAR, ClassTag.C, ClassTag.D]


def params_strategy(max_d=4, max_k=3, f_min=0):
    return (st.integers(1, max_d).flatmap(lambda d: st.tuples(
        st.just(d), st.integers(1, max_k), st.integers(1, d), st.integers(f_min, d)))
        .flatmap(lambda t: st.integers(0, t[1]).map(lambda a: ParameterSet(t[0], t[1], a, t[2], t[3]))))


def overpartition_number_oracle(N):
    num = pochhammer(Monomial(-1, 0, 1), Monomial(1, 0, 1), EXACT, N)
    den = pochhammer(Monomial(1, 0, 1), Monomial(1, 0, 1), EXACT, N).invert(N)
    return (num * den).q_coefficients(N)


def test_overpartition_counts_match_product():
    N = 25
    expected = overpartition_number_oracle(N)
    small = [len(cb.enumerate_overpartitions(n)) for n in range(13)]
    assert small == expected[:13]
    all_tag = ClassSpec(ClassTag.ALL, 1, 1, 1)
    assert cb.weight_counts(all_tag, N) == expected


def test_empty_partition_of_zero():
    assert [str(o) for o in cb.enumerate_overpartitions(0)] == ["()"]


def test_four_four_one():
    ops = {str(o) for o in cb.enumerate_overpartitions(9)}
    assert {"4+4+1", "4~+4+1", "4+4+1~", "4~+4+1~"} <= ops
    same = [o for o in cb.enumerate_overpartitions(9)
            if sorted(v for v, _ in o.as_list()) == [1, 4, 4]]
    assert len(same) == 4


def test_parse_round_trip():
    for text in ["()", "1", "3~+3+2+1~", "7~+7+7+5"]:
        assert str(Overpartition.parse(text)) == text
    op = Overpartition.parse("4~+4+1")
    assert (op.weight(), op.parts(), op.f(4), op.fbar(4), op.fbar(1)) == (9, 3, 1, 1, 0)


def test_overlined_copy_at_most_once():
    with pytest.raises(ValueError):
        Overpartition.parse("4~+4~")


@pytest.mark.parametrize("bad, needle", [
    (dict(d=0, k=1, a=0, e=1, f=1), "d >= 1"),
    (dict(d=2, k=0, a=0, e=1, f=1), "k >= 1"),
    (dict(d=2, k=1, a=2, e=1, f=1), "a <= k"),
    (dict(d=2, k=1, a=0, e=3, f=1), "e <= d"),
    (dict(d=2, k=1, a=0, e=1, f=3), "f <= d"),
])
def test_parameter_validation(bad, needle):
    with pytest.raises(InvalidParameters, match=needle):
        ParameterSet(**bad)


def test_empty_is_always_in_u_class():
    p = ParameterSet(3, 2, 1, 3, 2)
    assert cb.satisfies(Overpartition(), ClassTag.U, p)
    assert cb.count_class(ClassTag.U, p, 0, 0) == 1


def test_zero_second_index_is_empty():
    p0 = ParameterSet(2, 2, 0, 2, 0)
    assert cb.count_class(ClassTag.U, p0, None, 5) == 0
    assert not cb.satisfies(Overpartition.from_parts([1]), ClassTag.U, p0)
    for n in range(1, 10):
        assert all(not cb.satisfies(o, ClassTag.U, p0) for o in cb.enumerate_overpartitions(n))


def test_negative_arguments_count_zero():
    p = ParameterSet(2, 2, 1, 2, 2)
    assert cb.count_class(ClassTag.U, p, -1, 3) == 0
    assert cb.count_class(ClassTag.U, p, 2, -1) == 0
    assert cb.count_class(ClassTag.U, p, 4, 3) == 0


def test_u_class_matches_parity_product():
    # first index dk+e = 6 and second index da+f = 4 are the parity theorem's 2K, 2A
    p = ParameterSet(2, 2, 1, 2, 2)
    prod = parity_overpartition_products(3, 2, 12)["even"].q_coefficients(12)
    brute = [sum(cb.satisfies(o, ClassTag.U, p) for o in cb.enumerate_overpartitions(n)) for n in range(13)]
    assert brute == prod


def spec_strategy():
    def build(p, tag):
        return cb.class_spec(tag, p, "literal")
    return st.tuples(params_strategy(f_min=1), st.sampled_from(PLAIN_TAGS)).map(lambda t: build(*t))


@given(spec_strategy())
def test_counter_agrees_with_literal_predicate(spec):
    assume(not (spec.tag == ClassTag.C and spec.first < 2))
    N = 9
    tab = cb.count_table(spec, N)
    for n in range(N + 1):
        members = [o for o in cb.enumerate_overpartitions(n) if cb.satisfies_spec(o, spec)]
        for m in range(n + 1):
            assert tab[m, n] == sum(o.parts() == m for o in members)


@given(spec_strategy(), st.integers(0, 9))
def test_descent_enumerator_agrees_with_predicate(spec, n):
    got = sorted(map(str, cb.iter_class(spec, n)))
    want = sorted(str(o) for o in cb.enumerate_overpartitions(n) if cb.satisfies_spec(o, spec))
    assert got == want


@given(params_strategy(f_min=1), st.integers(0, 9))
def test_hbar_pairs_by_brute_force(p, n):
    for reading in cb.READINGS[ClassTag.HBAR]:
        spec = ClassSpec(ClassTag.HBAR, p.d, p.first, p.d * p.a + p.d, reading)
        pool = [cb.enumerate_overpartitions(w) for w in range(n + 1)]
        brute = sum(cb.hbar_pair_satisfies(lam, mu, spec)
                    for w in range(n + 1) for lam in pool[w] for mu in pool[n - w])
        assert cb.count_class_spec(spec, None, n) == brute


@given(params_strategy(f_min=1), st.integers(0, 12))
def test_padding_does_not_change_verdict(p, n):
    for op in cb.enumerate_overpartitions(min(n, 8)):
        freq = {i: op.f(i) for i in range(1, op.largest + 1) if op.f(i)}
        over = [i for i in range(1, op.largest + 1) if op.fbar(i)]
        padded = Overpartition({**freq, op.largest + 5: 0}, over)
        assert cb.satisfies(op, ClassTag.U, p) == cb.satisfies(padded, ClassTag.U, p)


@given(params_strategy())
def test_barred_class_independent_of_f(p):
    N = 20
    ref = cb.count_table(ClassSpec(ClassTag.UBAR, p.d, p.first, p.d * p.a + p.d), N)
    for f in range(1, p.d + 1):
        other = cb.count_table(ClassSpec(ClassTag.UBAR, p.d, p.first, p.d * p.a + f), N)
        assert np.array_equal(ref, other)


def test_d_equal_one_is_the_c_class():
    for k, a in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]:
        c = cb.count_table(ClassSpec(ClassTag.C, 1, k, a), 20)
        u = cb.count_table(ClassSpec(ClassTag.U, 1, k, a), 20)
        assert np.array_equal(c, u)


def test_generating_function_shape():
    g = cb.gen_fun(ClassTag.U, ParameterSet(3, 1, 1, 3, 2), 14)
    assert g[0, 0] == 1
    assert all(0 <= m <= n for (m, n), _ in g.items())


@given(params_strategy(f_min=1))
def test_bijection_round_trip(p):
    W = 14
    spec = cb.u_spec(p)
    for n in range(W + 1):
        for op in cb.iter_class(spec, n):
            if not cb.is_eligible(op, p):
                continue
            case = op.fbar(1)
            img = cb.bijection_forward(op, p)
            assert cb.satisfies_spec(img, cb.bijection_target(p, case))
            assert img.weight() == n - op.parts()
            assert op.parts() == img.parts() + p.second - 1 + p.d * case
            assert cb.bijection_inverse(img, p, case) == op


def test_inverse_of_empty():
    p = ParameterSet(2, 2, 1, 2, 2)
    c = p.second - 1
    assert cb.bijection_inverse(Overpartition(), p, 0) == Overpartition({1: c})
    with pytest.raises(BijectionError):
        cb.bijection_forward(Overpartition(), p)


def test_forward_rejects_ineligible():
    p = ParameterSet(2, 2, 1, 2, 2)
    with pytest.raises(BijectionError, match="f_1"):
        cb.bijection_forward(Overpartition.parse("5+3+1+1+1~"), p)
