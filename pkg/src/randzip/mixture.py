"""Twice-universal code: a weighted mixture of Krichevsky measures of all memories.

R^t(x) = sum_i beta_i K_i^t(x), truncated at a maximal memory M. The weights are
left unnormalised after truncation, so R^t stays a sub-probability and every
code length remains valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ContractError, as_bits
from .krichevsky import block_log_measures, ceil_bits, ceil_bits_array, log_measure_rows

DEFAULT_MAX_ORDER_CAP = 12


@dataclass(frozen=True)
class MixtureWeights:
    max_order: int
    beta: tuple[float, ...]

    def __post_init__(self):
        if self.max_order < 0 or len(self.beta) != self.max_order + 1:
            raise ContractError("beta must hold exactly max_order + 1 weights")
        if any(b <= 0 for b in self.beta):
            raise ContractError("mixture weights must be positive")
        if math.fsum(self.beta) > 1 + 1e-12:
            raise ContractError("mixture weights must sum to at most 1")

    @property
    def log2_beta(self) -> np.ndarray:
        return np.log2(np.asarray(self.beta, dtype=float))


def default_weights(max_order: int) -> MixtureWeights:
    """beta_i = 1/((i+1)(i+2)) for i = 0..M; the sum telescopes to 1 - 1/(M+2)."""
    if max_order < 0:
        raise ContractError("max_order must be non-negative")
    beta = tuple(1.0 / ((i + 1) * (i + 2)) for i in range(max_order + 1))
    return MixtureWeights(max_order, beta)


def default_max_order(t: int) -> int:
    """min(12, floor(log2 t)) for block length t."""
    if t < 1:
        raise ContractError("block length must be >= 1")
    return min(DEFAULT_MAX_ORDER_CAP, t.bit_length() - 1)


def log_mixture_rows(words: np.ndarray, weights: MixtureWeights) -> np.ndarray:
    """-log2 R^t for every row, combined with max-anchored log-sum-exp."""
    words = np.asarray(words, dtype=np.int64)
    # terms[i, r] = log2(beta_i K_i(row r))
    terms = np.stack(
        [lb - log_measure_rows(words, i) for i, lb in enumerate(weights.log2_beta)]
    )
    top = terms.max(axis=0)
    return -(top + np.log2(np.exp2(terms - top).sum(axis=0)))


def log_mixture_measure(x, weights: MixtureWeights) -> float:
    x = as_bits(x)
    if x.n < 1:
        raise ContractError("log_mixture_measure needs a non-empty word")
    return float(log_mixture_rows(x.bits[None, :], weights)[0])


def codelength_rho(x, weights: MixtureWeights) -> int:
    """rho^t(x) = ceil(-log2 R^t(x))."""
    return ceil_bits(log_mixture_measure(x, weights))


def blockwise_codelength_rho(x, weights: MixtureWeights, t: int) -> int:
    """Sum of rho^t over consecutive t-blocks (shorter tail coded at its length)."""
    logs = block_log_measures(x, t, lambda rows: log_mixture_rows(rows, weights))
    return int(ceil_bits_array(logs).sum())
