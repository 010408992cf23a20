import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randzip.core import ContractError
from randzip.krichevsky import all_words, blockwise_codelength, codelength, log_measure
from randzip.mixture import (
    MixtureWeights,
    blockwise_codelength_rho,
    codelength_rho,
    default_max_order,
    default_weights,
    log_mixture_measure,
    log_mixture_rows,
)

import oracles


def rational_mixture(x: str, max_order: int) -> Fraction:
    return sum(
        Fraction(1, (i + 1) * (i + 2)) * oracles.kt_measure(x, i) for i in range(max_order + 1)
    )


def test_default_weights_values():
    assert default_weights(0).beta == (0.5,)
    assert default_weights(2).beta == pytest.approx((1 / 2, 1 / 6, 1 / 12))
    assert math.fsum(default_weights(2).beta) == pytest.approx(0.75)


@pytest.mark.parametrize("M", range(0, 15))
def test_default_weights_telescope(M):
    assert math.fsum(default_weights(M).beta) == pytest.approx(1 - 1 / (M + 2), abs=1e-15)


def test_weights_validation():
    with pytest.raises(ContractError):
        MixtureWeights(1, (0.5, 0.6))
    with pytest.raises(ContractError):
        MixtureWeights(1, (0.5, 0.0))
    with pytest.raises(ContractError):
        MixtureWeights(2, (0.5, 0.1))


def test_single_term():
    assert log_mixture_measure("0", default_weights(0)) == pytest.approx(2.0, abs=1e-12)
    assert codelength_rho("0", default_weights(0)) == 2


def test_two_term_example():
    # (1/2)(3/256) + (1/6)(9/128) = 9/512
    q = rational_mixture("01010", 1)
    assert q == Fraction(9, 512)
    assert log_mixture_measure("01010", default_weights(1)) == pytest.approx(
        -math.log2(q), abs=1e-9
    )
    assert log_mixture_measure("01010", default_weights(1)) == pytest.approx(5.83007, abs=1e-5)
    assert codelength_rho("01010", default_weights(1)) == 6


def test_rho_dominance_example():
    assert codelength_rho("01010", default_weights(0)) <= 1 + 7


@settings(max_examples=80, deadline=None)
@given(st.text(alphabet="01", min_size=1, max_size=40), st.integers(0, 5))
def test_mixture_below_each_term(x, M):
    w = default_weights(M)
    value = log_mixture_measure(x, w)
    for j in range(M + 1):
        assert value <= -math.log2(w.beta[j]) + log_measure(x, j) + 1e-9


@pytest.mark.parametrize("t", range(1, 17, 3))
def test_stability_against_rational_oracle(t):
    rng = np.random.default_rng(t)
    w = default_weights(4)
    for _ in range(20):
        x = "".join(map(str, rng.integers(0, 2, t)))
        exact = -math.log2(rational_mixture(x, 4))
        assert log_mixture_measure(x, w) == pytest.approx(exact, abs=1e-8)


@pytest.mark.parametrize("t", range(1, 11))
@pytest.mark.parametrize("M", [0, 3, 6])
def test_sub_probability(t, M):
    w = default_weights(M)
    total = np.exp2(-log_mixture_rows(all_words(t), w)).sum()
    assert total == pytest.approx(math.fsum(w.beta), abs=1e-9)


def test_blockwise_rho_sums_blocks():
    w = default_weights(2)
    x = "0110100111" + "0001110101"
    assert blockwise_codelength_rho(x, w, 10) == codelength_rho(x[:10], w) + codelength_rho(x[10:], w)
    assert blockwise_codelength_rho(x, w, 40) == codelength_rho(x, w)


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="01", min_size=1, max_size=64), st.integers(1, 16))
def test_blockwise_dominance(x, t):
    w = default_weights(3)
    blocks = math.ceil(len(x) / t)
    rho = blockwise_codelength_rho(x, w, t)
    for j in range(4):
        assert rho <= blockwise_codelength(x, j, t) + blocks * math.ceil(-math.log2(w.beta[j]))


def test_default_max_order():
    assert default_max_order(1) == 0
    assert default_max_order(14) == 3
    assert default_max_order(1 << 13) == 12
    assert default_max_order(1 << 14) == 12


def test_dominance_small_exhaustive():
    w = default_weights(3)
    for t in range(1, 8):
        for x in oracles.words(t):
            rho = codelength_rho(x, w)
            for j in range(4):
                assert rho <= math.ceil(-math.log2(w.beta[j])) + codelength(x, j)
