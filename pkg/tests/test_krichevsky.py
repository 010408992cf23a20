import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randzip.core import ContractError, ResourceError
from randzip.generators import Bernoulli, MarkovSource
from randzip.krichevsky import (
    KrichevskyParams,
    all_words,
    blockwise_codelength,
    ceil_bits,
    codelength,
    expected_codelength,
    kt_factors,
    log_measure,
    log_measure_rows,
)

import oracles

F = Fraction

# Factor lists printed for x = 01010 (the m = 0 third factor read as (3/2)/3).
WORKED_FACTORS_M0 = [F(1, 2) / 1, F(1, 2) / 2, F(3, 2) / 3, F(3, 2) / 4, F(5, 2) / 5]
WORKED_FACTORS_M1 = [F(1, 2), F(1, 2) / 1, F(1, 2) / 1, F(3, 2) / 2, F(3, 2) / 2]


def test_worked_factor_lists_match_literal_formula():
    assert oracles.kt_factors_literal("01010", 0) == WORKED_FACTORS_M0
    assert oracles.kt_factors_literal("01010", 1) == WORKED_FACTORS_M1
    assert math.prod(WORKED_FACTORS_M0) == F(3, 256)
    assert math.prod(WORKED_FACTORS_M1) == F(9, 128)


@pytest.mark.parametrize("m, factors", [(0, WORKED_FACTORS_M0), (1, WORKED_FACTORS_M1)])
def test_worked_example_factors(m, factors):
    assert kt_factors("01010", m) == factors


@pytest.mark.parametrize(
    "x, m, logm, length",
    [
        ("01010", 0, -math.log2(3 / 256), 7),
        ("01010", 1, -math.log2(9 / 128), 4),
        ("0", 0, 1.0, 1),
    ],
)
def test_worked_examples(x, m, logm, length):
    assert log_measure(x, m) == pytest.approx(logm, abs=1e-9)
    assert codelength(x, m) == length


def test_worked_example_decimal_values():
    assert log_measure("01010", 0) == pytest.approx(6.41504, abs=1e-5)
    assert log_measure("01010", 1) == pytest.approx(3.83007, abs=1e-5)


def test_empty_word_is_rejected():
    with pytest.raises(ContractError):
        log_measure("", 0)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("t", [1, 2, 5, 9])
def test_exact_against_rational_oracle(m, t):
    for x in oracles.words(t):
        assert kt_factors(x, m) == oracles.kt_factors_literal(x, m)
        q = oracles.kt_measure(x, m)
        assert log_measure(x, m) == pytest.approx(-math.log2(q), abs=1e-9)
        assert codelength(x, m) == oracles.exact_ceil_neglog2(q)


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="01", min_size=1, max_size=16), st.integers(0, 4))
def test_random_words_against_oracle(x, m):
    q = oracles.kt_measure(x, m)
    assert log_measure(x, m) == pytest.approx(-math.log2(q), abs=1e-8)
    assert codelength(x, m) == oracles.exact_ceil_neglog2(q)


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("t", range(1, 13))
def test_normalisation(m, t):
    total = np.exp2(-log_measure_rows(all_words(t), m)).sum()
    assert total == pytest.approx(1.0, abs=1e-9)


@given(st.text(alphabet="01", min_size=1, max_size=40), st.sampled_from("01"), st.integers(0, 4))
def test_extension_costs_information(x, a, m):
    assert log_measure(x + a, m) > log_measure(x, m)


def test_order_zero_symmetry():
    base = "0001111"
    values = {round(log_measure("".join(p), 0), 12) for p in set(itertools.permutations(base))}
    assert len(values) == 1


@pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
def test_redundancy_bound(p):
    t = 10
    h = oracles.binary_entropy(p)
    e = expected_codelength(0, t, Bernoulli(p))
    assert h < e <= h + math.log2(t) / (2 * t) + 3 / t


def test_expected_codelength_fair_coin_bruteforce():
    t = 8
    brute = sum(oracles.kt_codelength(w, 0) for w in oracles.words(t)) / 2**t / t
    assert expected_codelength(0, t, Bernoulli(0.5)) == pytest.approx(brute, abs=1e-12)


def test_expected_codelength_degenerate_source():
    assert expected_codelength(0, 8, Bernoulli(1.0)) == codelength("1" * 8, 0) / 8


def test_expected_codelength_p07_above_entropy():
    assert expected_codelength(0, 10, Bernoulli(0.7)) >= 0.88129


def test_expected_codelength_markov_source():
    src = MarkovSource(1, (0.9, 0.2))
    t = 6
    brute = 0.0
    for w in oracles.words(t):
        prob = 0.5
        for i in range(1, t):
            q0 = src.p_zero[int(w[i - 1])]
            prob *= q0 if w[i] == "0" else 1 - q0
        brute += prob * oracles.kt_codelength(w, 1)
    assert expected_codelength(1, t, src) == pytest.approx(brute / t, abs=1e-12)


def test_expected_codelength_resource_limit():
    with pytest.raises(ResourceError):
        expected_codelength(0, 21, Bernoulli(0.5))


def test_blockwise_sums_blocks():
    x = "0110100111" + "0001110101"
    assert blockwise_codelength(x, 1, 10) == codelength(x[:10], 1) + codelength(x[10:], 1)


def test_blockwise_worked_example():
    assert blockwise_codelength("0101001010", 0, 5) == 14


def test_blockwise_single_short_block():
    assert blockwise_codelength("01010", 0, 8) == 7


def test_blockwise_tail_block_coded_at_its_length():
    x = "01101001110"
    assert blockwise_codelength(x, 0, 4) == sum(codelength(x[i : i + 4], 0) for i in (0, 4, 8))


def test_ceil_guard():
    assert ceil_bits(3.0 + 1e-12) == 3
    assert ceil_bits(3.0 - 1e-12) == 3
    assert ceil_bits(3.01) == 4


def test_params_warn_on_large_memory():
    with pytest.warns(UserWarning):
        KrichevskyParams(m=4, t=8)
    with pytest.raises(ContractError):
        KrichevskyParams(m=0, t=0)
