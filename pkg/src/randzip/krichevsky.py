"""Krichevsky (add-1/2) measures K_m^t and their code lengths.

The memory-m measure codes the first min(m, t) symbols uniformly and every
later symbol with the sequential estimate

    (N(context, symbol) + 1/2) / (N(context) + 1)

where the counts cover the symbols seen so far. Per context the product of
these factors has the closed form Gamma(a+1/2) Gamma(b+1/2) / (pi Gamma(a+b+1))
for final counts (a, b), which is what the vectorised code evaluates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .core import ContractError, ResourceError, as_bits, context_indices

_LN2 = math.log(2.0)
_LGAMMA_HALF = float(gammaln(0.5))

# Largest block length accepted by exhaustive enumeration.
MAX_ENUMERATION_LENGTH = 20


@dataclass(frozen=True)
class KrichevskyParams:
    """Model memory ``m`` and block length ``t`` of a blockwise code."""

    m: int
    t: int

    def __post_init__(self):
        if self.m < 0 or self.t < 1:
            raise ContractError("need m >= 0 and t >= 1")
        if (1 << self.m) > self.t:
            warnings.warn(
                f"2^m = {1 << self.m} exceeds block length t = {self.t}; "
                "the memory-m code cannot learn its contexts",
                stacklevel=3,
            )


def ceil_bits(value: float) -> int:
    """Ceil of a log-domain length, snapping values within 1e-9 of an integer."""
    r = round(value)
    if abs(value - r) < 1e-9:
        return int(r)
    return int(math.ceil(value))


def ceil_bits_array(values: np.ndarray) -> np.ndarray:
    r = np.rint(values)
    return np.where(np.abs(values - r) < 1e-9, r, np.ceil(values)).astype(np.int64)


def pattern_counts(words: np.ndarray, m: int) -> np.ndarray:
    """Final (context, symbol) counts per row: shape (rows, 2^m, 2)."""
    rows, t = words.shape
    width = 2 << m
    if t <= m:
        return np.zeros((rows, 1 << m, 2), dtype=np.int64)
    idx = context_indices(words, m) * 2 + words[:, m:]
    idx += (np.arange(rows, dtype=np.int64) * width)[:, None]
    counts = np.bincount(idx.ravel(), minlength=rows * width)
    return counts.reshape(rows, 1 << m, 2)


def log2_kt(zeros, ones):
    """log2 of the Krichevsky-Trofimov probability for final counts."""
    zeros = np.asarray(zeros, dtype=float)
    ones = np.asarray(ones, dtype=float)
    val = gammaln(zeros + 0.5) + gammaln(ones + 0.5) - 2 * _LGAMMA_HALF - gammaln(zeros + ones + 1)
    return val / _LN2


def log_measure_rows(words: np.ndarray, m: int) -> np.ndarray:
    """-log2 K_m^t for every row of a 2-D 0/1 array of equal-length words."""
    words = np.asarray(words, dtype=np.int64)
    if words.ndim != 2 or words.shape[1] < 1:
        raise ContractError("expected a non-empty 2-D array of words")
    if m < 0:
        raise ContractError("memory m must be non-negative")
    t = words.shape[1]
    counts = pattern_counts(words, m)
    kt = log2_kt(counts[..., 0], counts[..., 1]).sum(axis=1)
    return min(m, t) - kt


def log_measure(x, m: int) -> float:
    """-log2 K_m^t(x) in bits, where t = |x|."""
    x = as_bits(x)
    if x.n < 1:
        raise ContractError("log_measure needs a non-empty word")
    return float(log_measure_rows(x.bits[None, :], m)[0])


def codelength(x, m: int) -> int:
    """kappa_m^t(x) = ceil(-log2 K_m^t(x)) in bits."""
    return ceil_bits(log_measure(x, m))


def kt_factors(x, m: int) -> list[Fraction]:
    """Exact sequential factors of K_m^t(x), one per symbol."""
    x = as_bits(x)
    bits = x.tolist()
    if not bits:
        raise ContractError("kt_factors needs a non-empty word")
    factors = [Fraction(1, 2)] * min(m, len(bits))
    seen: dict[tuple, list[int]] = {}
    for i in range(m, len(bits)):
        ctx = tuple(bits[i - m : i])
        c = seen.setdefault(ctx, [0, 0])
        a = bits[i]
        factors.append((c[a] + Fraction(1, 2)) / (c[0] + c[1] + 1))
        c[a] += 1
    return factors


def split_blocks(x, t: int):
    """Full t-blocks as a 2-D array plus the shorter tail (possibly empty)."""
    if t < 1:
        raise ContractError("block length t must be >= 1")
    bits = as_bits(x).bits
    full = bits.size // t
    return bits[: full * t].reshape(full, t), bits[full * t :]


def block_log_measures(x, t: int, log_rows) -> np.ndarray:
    """Apply a row-wise log-measure to each t-block, tail block included."""
    blocks, tail = split_blocks(x, t)
    parts = []
    if blocks.shape[0]:
        parts.append(log_rows(blocks))
    if tail.size:
        parts.append(log_rows(tail[None, :]))
    return np.concatenate(parts) if parts else np.zeros(0)


def blockwise_codelength(x, m: int, t: int) -> int:
    """Code length of the blockwise code: kappa_m^t summed over t-blocks.

    Counts restart at each block. A final block shorter than ``t`` is coded
    with the measure at its own length.
    """
    logs = block_log_measures(x, t, lambda rows: log_measure_rows(rows, m))
    return int(ceil_bits_array(logs).sum())


def all_words(t: int) -> np.ndarray:
    """Every word of {0,1}^t as rows, in lexicographic order."""
    if t > MAX_ENUMERATION_LENGTH:
        raise ResourceError(f"enumerating 2^{t} words exceeds the limit 2^{MAX_ENUMERATION_LENGTH}")
    codes = np.arange(1 << t, dtype=np.int64)
    shifts = np.arange(t - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.int64)


def expected_codelength(m: int, t: int, source) -> float:
    """Exact per-letter expected code length (1/t) sum_u nu(u) kappa_m^t(u).

    ``source`` is any object with a ``probabilities(words)`` method returning
    the probability of every row, e.g. :class:`randzip.generators.Bernoulli`
    or :class:`randzip.generators.MarkovSource`.
    """
    if t < 1:
        raise ContractError("t must be >= 1")
    words = all_words(t)
    probs = np.asarray(source.probabilities(words), dtype=float)
    lengths = ceil_bits_array(log_measure_rows(words, m))
    return float(np.dot(probs, lengths) / t)
