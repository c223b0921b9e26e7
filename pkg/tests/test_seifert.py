from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from linkform.errors import InvalidDataError
from linkform.seifert import (
    SeifertData,
    euler_invariant,
    fibre_sum,
    r_p,
    relevant_primes,
    reorder_at_prime,
    seifert,
    validate,
)


def valid_seifert(max_r=5, max_alpha=12, max_beta=9):
    pair = st.tuples(
        st.integers(2, max_alpha), st.integers(-max_beta, max_beta)
    ).filter(lambda ab: ab[1] != 0 and __import__("math").gcd(*ab) == 1)
    return st.builds(
        SeifertData,
        st.integers(0, 2),
        st.lists(pair, min_size=1, max_size=max_r).map(tuple),
    )


def test_validate_examples():
    assert validate(seifert((2, 1), (3, 1))) == []
    assert any("gcd" in v for v in validate(seifert((4, 2))))
    assert any("alpha" in v for v in validate(seifert((1, 5))))
    assert any("empty" in v for v in validate(SeifertData(0, ())))


def test_euler_examples():
    assert euler_invariant(seifert((2, 1), (2, 1), (2, 1), (2, -1))) == -1
    assert euler_invariant(seifert((3, 1), (3, 1), (3, -2), genus=1)) == 0
    assert euler_invariant(seifert((9, -4), (3, 1))) == Fraction(1, 9)


def test_reorder_examples():
    S, perm = reorder_at_prime(seifert((3, 1), (9, 2), (2, 1)), 3)
    assert S.pairs == ((9, 2), (3, 1), (2, 1))
    assert perm == (1, 0, 2)
    again, perm2 = reorder_at_prime(S, 3)
    assert again == S and perm2 == (0, 1, 2)
    unchanged, _ = reorder_at_prime(seifert((4, 1), (8, 3), (2, 1)), 3)
    assert unchanged.pairs == ((4, 1), (8, 3), (2, 1))


def test_fibre_sum_examples():
    A = seifert((3, 1), (3, -1))
    B = seifert((5, 2), (5, -2))
    C = fibre_sum(A, B)
    assert C.pairs == ((3, 1), (3, -1), (5, 2), (5, -2))
    assert euler_invariant(C) == 0
    with pytest.raises(InvalidDataError):
        fibre_sum(A, SeifertData(0, ()))


@given(valid_seifert(), valid_seifert())
def test_fibre_sum_euler_additive(A, B):
    assert euler_invariant(fibre_sum(A, B)) == euler_invariant(A) + euler_invariant(B)


@given(valid_seifert(), st.sampled_from([2, 3, 5]))
def test_reorder_idempotent_and_multiset(S, p):
    S1, _ = reorder_at_prime(S, p)
    S2, perm = reorder_at_prime(S1, p)
    assert S1 == S2
    assert perm == tuple(range(S.r))
    assert sorted(S1.pairs) == sorted(S.pairs)


def test_r_p_examples():
    S = seifert((2, 1), (2, 1), (2, 1), (2, -1))
    assert r_p(S, 2) == 4
    assert r_p(S, 3) == 0
    assert r_p(seifert((9, 7), (3, -1), (3, -1)), 3) == 3


@given(valid_seifert(), valid_seifert(), st.sampled_from([2, 3, 5]))
def test_r_p_additive(A, B, p):
    assert r_p(fibre_sum(A, B), p) == r_p(A, p) + r_p(B, p)


def test_relevant_primes_sees_euler_numerator():
    # cone orders contribute {2,3}; the numerator of eps brings in 5
    S = seifert((2, 1), (3, 1))
    assert euler_invariant(S) == Fraction(-5, 6)
    assert relevant_primes(S) == (2, 3, 5)


def test_json_round_trip():
    S = seifert((2, 1), (2, 1), (2, 1), (2, -1), genus=1)
    assert SeifertData.from_json(S.to_json()) == S
