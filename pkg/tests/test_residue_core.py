import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparse10adic.residue_core import (
    DecimalResidue,
    DomainError,
    ExponentClass,
    StepFactors,
    candidate_digits,
    class_modulus,
    lift_class,
    lift_digits,
    min_representative,
    pow2_mod,
    same_power_residue,
    step_factor,
)


@pytest.mark.parametrize("p,k,want", [(3, 1, 8), (103, 5, 43008), (4, 4, 16), (10, 3, 24)])
def test_pow2_mod_examples(p, k, want):
    assert pow2_mod(p, k) == DecimalResidue(want, k)


def test_pow2_mod_rejects_small_exponent():
    with pytest.raises(DomainError):
        pow2_mod(2, 3)
    with pytest.raises(DomainError):
        pow2_mod(5, 0)


@given(st.integers(1, 40), st.integers(0, 2000))
def test_pow2_mod_matches_full_integer(k, extra):
    p = k + extra
    assert pow2_mod(p, k).value == (1 << p) % 10**k


@pytest.mark.parametrize("k,K,want", [(2, 2, 16), (3, 3, 576)])
def test_step_factor_examples(k, K, want):
    assert step_factor(k, K).value == want


@pytest.mark.parametrize("k", range(2, 9))
def test_step_factor_is_power_of_two(k):
    K = k + 3
    assert step_factor(k, K).value == pow(2, 4 * 5 ** (k - 2), 10**K)


@settings(max_examples=50)
@given(st.data())
def test_step_factor_fifth_power_chain(data):
    K = data.draw(st.integers(3, 64))
    k = data.draw(st.integers(2, K - 1))
    mod = 10**K
    assert step_factor(k + 1, K).value == pow(step_factor(k, K).value, 5, mod)


def test_step_factor_domain():
    with pytest.raises(DomainError):
        step_factor(1, 4)
    with pytest.raises(DomainError):
        step_factor(5, 4)


def test_same_power_residue_examples():
    assert same_power_residue(103, 3, 3)
    assert same_power_residue(2103, 103, 6) is False
    assert same_power_residue(12500 + 2103, 2103, 6)
    with pytest.raises(DomainError):
        same_power_residue(3, 5, 1)


@given(st.integers(1, 7), st.integers(0, 3000), st.integers(0, 3000))
def test_same_power_residue_agrees_with_digits(m, a, b):
    i, j = m + max(a, b), m + min(a, b)
    same = (1 << i) % 10**m == (1 << j) % 10**m
    assert same_power_residue(i, j, m) == same


def test_candidate_digits_first_position():
    # exponents 3, 7, 11, 15, 19: units digit 8 each time, tens digit varies
    got = candidate_digits(pow2_mod(3, 2), ExponentClass(3, 1), 1)
    assert sorted(a for _, a in got) == [0, 2, 4, 6, 8]
    for j, a in got:
        assert (1 << (3 + 4 * j)) // 10 % 10 == a


def test_candidate_digits_after_103():
    got = candidate_digits(pow2_mod(103, 4), ExponentClass(3, 3), 3, check=True)
    assert [a for _, a in got] == [3, 1, 9, 7, 5]


@settings(max_examples=100)
@given(st.integers(1, 6), st.integers(0, 5000))
def test_candidate_digits_distinct_same_parity(m, extra):
    p = m + 1 + extra
    c = ExponentClass(p % class_modulus(m), m)
    got = candidate_digits(pow2_mod(p, m + 1), c, m, check=True)
    digits = [a for _, a in got]
    assert len(set(digits)) == 5
    assert len({a % 2 for a in digits}) == 1
    step = class_modulus(m)
    assert digits == [(1 << (p + j * step)) // 10**m % 10 for j in range(5)]


def test_candidate_digits_domain():
    with pytest.raises(DomainError):
        candidate_digits(pow2_mod(3, 2), ExponentClass(3, 2), 1)
    with pytest.raises(DomainError):
        candidate_digits(pow2_mod(3, 1), ExponentClass(3, 1), 1)


def test_lift_and_representatives():
    c = ExponentClass(3, 1)
    assert lift_class(c, 0) == ExponentClass(3, 2)
    assert lift_class(c, 2) == ExponentClass(11, 2)
    with pytest.raises(DomainError):
        lift_class(c, 5)
    assert min_representative(ExponentClass(3, 3), 0) == 3
    assert min_representative(ExponentClass(3, 3), 3) == 103
    assert min_representative(ExponentClass(2103, 6), 2103) == 14603
    assert pow(2, 14603, 10**6) == pow(2, 2103, 10**6) == 3008


@given(st.integers(1, 12), st.integers(0, 10**9))
def test_lift_digits_rebuild_residue(level, r):
    c = ExponentClass(r % class_modulus(level), level)
    js = lift_digits(c)
    assert len(js) == level
    assert js[0] + sum(j * class_modulus(k - 1) for k, j in enumerate(js[1:], start=2)) == c.residue


@settings(max_examples=60)
@given(st.integers(1, 20), st.integers(0, 10**6))
def test_step_factor_lift_matches_pow(level, r):
    table = StepFactors(level + 8)
    c = ExponentClass(r % class_modulus(level), level)
    got = table.lift(c)
    p = min_representative(c, table.precision)
    assert got.truncate(level) == pow2_mod(p, level)
    # canonical lift: divisible by 2**K, and a member of the class beyond K digits
    assert got.value % 2**table.precision == 0
    assert got.digit(level) % 2 == pow2_mod(p, level + 1).digit(level) % 2


def test_decimal_residue():
    x = DecimalResidue(43008, 5)
    assert x.digit(0) == 8 and x.digit(3) == 3 and x.digit(4) == 4
    assert x.truncate(3) == DecimalResidue(8, 3)
    assert str(DecimalResidue(8, 3)) == "008"
    with pytest.raises(DomainError):
        x.digit(5)
    with pytest.raises(DomainError):
        DecimalResidue(1000, 3)
    with pytest.raises(DomainError):
        ExponentClass(100, 3)
