"""Calibration and adversarial sources.

* Bernoulli and general order-k Markov streams.
* Two-faced Markov chains: order-k chains whose k-blocks are exactly uniform
  while the conditional entropy of order k is h(nu) < 1.
* The duplicated-block sequence y(x) = u_0 u_0 u_1 u_1 ..., with blocks u_k of
  doubly exponential length, and its partial-copy variant u_k u_k^gamma.

All randomness comes from numpy's PCG64 generator seeded with the caller's
integer seed, so every stream is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .core import BitSequence, ContractError, ResourceError, as_bits

# Largest j + block length handled by the exact forward recursion.
MAX_EXACT_HORIZON = 24


class GenerationError(RuntimeError):
    def __init__(self, message: str, produced: int):
        super().__init__(f"{message} (produced {produced} symbols)")
        self.produced = produced


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# -- i.i.d. and Markov sources ----------------------------------------------


@dataclass(frozen=True)
class Bernoulli:
    """i.i.d. source with P(1) = p."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ContractError("Bernoulli parameter must lie in [0, 1]")

    def probabilities(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words)
        ones = words.sum(axis=1)
        zeros = words.shape[1] - ones
        return (self.p ** ones) * ((1.0 - self.p) ** zeros)


@dataclass(frozen=True)
class MarkovSource:
    """Order-k chain given by P(next = 0 | context) for each of the 2^k contexts.

    Contexts are indexed by their integer value with the oldest symbol most
    significant. The first k symbols are uniform on {0,1}^k.
    """

    order: int
    p_zero: tuple[float, ...]

    def __post_init__(self):
        if self.order < 0 or len(self.p_zero) != 1 << self.order:
            raise ContractError("p_zero needs one entry per context (2^order)")
        if any(not 0.0 <= q <= 1.0 for q in self.p_zero):
            raise ContractError("transition probabilities must lie in [0, 1]")

    def probabilities(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        k = self.order
        t = words.shape[1]
        probs = np.full(words.shape[0], 0.5 ** min(k, t))
        table = np.asarray(self.p_zero)
        ctx = np.zeros(words.shape[0], dtype=np.int64)
        for j in range(min(k, t)):
            ctx = (ctx << 1) | words[:, j]
        mask = (1 << k) - 1
        for j in range(k, t):
            q0 = table[ctx]
            sym = words[:, j]
            probs *= np.where(sym == 0, q0, 1.0 - q0)
            ctx = ((ctx << 1) | sym) & mask
        return probs

    def generate(self, n: int, seed: int) -> BitSequence:
        return _run_chain(self.order, np.asarray(self.p_zero), n, seed)


def generate_bernoulli(p: float, n: int, seed: int) -> BitSequence:
    """n i.i.d. bits with P(1) = p."""
    Bernoulli(p)
    if n < 0:
        raise ContractError("length must be non-negative")
    return BitSequence((rng(seed).random(n) < p).astype(np.uint8))


def generate_markov(p_zero: Sequence[float], n: int, seed: int) -> BitSequence:
    order = max(0, len(p_zero).bit_length() - 1)
    return MarkovSource(order, tuple(p_zero)).generate(n, seed)


def _run_chain(k: int, table: np.ndarray, n: int, seed: int) -> BitSequence:
    if n < k:
        raise ContractError(f"need n >= order ({k})")
    g = rng(seed)
    head = g.integers(0, 2, size=k, dtype=np.uint8)
    uniforms = g.random(n - k).tolist()
    thresholds = table.tolist()
    out = np.empty(n, dtype=np.uint8)
    out[:k] = head
    ctx = 0
    for b in head.tolist():
        ctx = (ctx << 1) | b
    mask = (1 << k) - 1
    body = []
    for u in uniforms:
        b = 0 if u < thresholds[ctx] else 1
        body.append(b)
        ctx = ((ctx << 1) | b) & mask
    out[k:] = body
    return BitSequence(out)


# -- two-faced chains --------------------------------------------------------

VARIANTS = ("T", "T_hat")


@dataclass(frozen=True)
class TwoFacedParams:
    """Order ``k``, bias ``nu``, matrix family ``variant`` and stream seed."""

    k: int
    nu: float
    variant: str = "T"
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ContractError("two-faced order must be >= 1")
        if not 0.0 < self.nu < 1.0:
            raise ContractError("nu must lie strictly between 0 and 1")
        if self.variant not in VARIANTS:
            raise ContractError(f"variant must be one of {VARIANTS}")

    def as_markov(self) -> MarkovSource:
        table = tuple(
            transition_prob(_word(c, self.k), self) for c in range(1 << self.k)
        )
        return MarkovSource(self.k, table)


def _word(code: int, k: int) -> list[int]:
    return [(code >> s) & 1 for s in range(k - 1, -1, -1)]


def transition_prob(context, params: TwoFacedParams) -> float:
    """P(next symbol = 0 | context) for the two-faced chain.

    Unrolls T_{j+1}(.|b u) = T_j(.|u) if b = 0 else That_j(.|u), and
    That_{j+1}(.|b u) = That_j(.|u) if b = 0 else T_j(.|u), down to
    T_1(0|0) = nu, T_1(0|1) = 1 - nu and That_1 its complement. The first
    context symbol is the oldest.
    """
    ctx = as_bits(context).tolist()
    if len(ctx) != params.k:
        raise ContractError(f"context must have length k = {params.k}")
    hat = params.variant == "T_hat"
    for b in ctx[:-1]:
        if b == 1:
            hat = not hat
    if ctx[-1] == 1:
        hat = not hat
    return 1.0 - params.nu if hat else params.nu


def generate_two_faced(params: TwoFacedParams, n: int) -> BitSequence:
    """Uniform first k symbols, then the two-faced transitions."""
    src = params.as_markov()
    return _run_chain(params.k, np.asarray(src.p_zero), n, params.seed)


def block_distribution(source: MarkovSource, block_len: int, horizon: int = 0) -> dict[str, float]:
    """Exact law of x_{j+1} ... x_{j+L} for an order-k chain started uniformly.

    Forward recursion over the 2^k states (the last k symbols), extended past
    k symbols when the block is longer than the order.
    """
    k = source.order
    if block_len < 1 or horizon < 0:
        raise ContractError("need block length >= 1 and horizon >= 0")
    if horizon + max(block_len, k) > MAX_EXACT_HORIZON:
        raise ResourceError(
            f"horizon + block length exceeds the exact limit {MAX_EXACT_HORIZON}"
        )
    table = np.asarray(source.p_zero, dtype=float)
    states = 1 << k
    dist = np.full(states, 1.0 / states)
    mask = states - 1
    codes = np.arange(states)
    nxt0 = (codes << 1) & mask
    for _ in range(horizon):
        new = np.zeros(states)
        np.add.at(new, nxt0, dist * table)
        np.add.at(new, nxt0 | 1, dist * (1.0 - table))
        dist = new
    if block_len <= k:
        # The block is the oldest block_len symbols of the state.
        law = np.zeros(1 << block_len)
        np.add.at(law, codes >> (k - block_len), dist)
        return {_label(c, block_len): float(p) for c, p in enumerate(law)}
    # Extend the state distribution into a joint law over longer words.
    words = dist
    for _ in range(block_len - k):
        ctx = np.arange(words.size) & mask
        q0 = table[ctx]
        words = np.stack([words * q0, words * (1.0 - q0)], axis=1).ravel()
    return {_label(c, block_len): float(p) for c, p in enumerate(words)}


def _label(code: int, width: int) -> str:
    return format(code, f"0{width}b") if width else ""


def exact_block_marginals(params: TwoFacedParams, block_len: int, horizon: int = 0) -> dict[str, float]:
    """Exact law of the block x_{j+1} ... x_{j+k'} for k' <= k."""
    if block_len > params.k:
        raise ContractError("block length must not exceed the chain order")
    return block_distribution(params.as_markov(), block_len, horizon)


def conditional_entropy(source: MarkovSource, order: int) -> float:
    """Exact h_s = H(x_{s+1} | x_1 ... x_s) of the chain started uniformly.

    Computed as H(blocks of length s+1) - H(blocks of length s) from
    :func:`block_distribution`; the uniform start is stationary for two-faced
    chains, so this is the stationary order-s entropy there.
    """
    if order < 0:
        raise ContractError("order must be non-negative")

    def block_entropy(length: int) -> float:
        if length == 0:
            return 0.0
        p = np.array(list(block_distribution(source, length).values()))
        p = p[p > 0]
        return float(-(p * np.log2(p)).sum())

    return block_entropy(order + 1) - block_entropy(order)


# -- the duplicated-block sequence --------------------------------------------


def u_block_bounds(k: int) -> tuple[int, int]:
    """0-based [start, stop) of u_k in the source: x_{2^{2^k}-1} .. x_{2^{2^{k+1}}-2}."""
    return (1 << (1 << k)) - 2, (1 << (1 << (k + 1))) - 2


Source = Union[BitSequence, int, Callable[[int], BitSequence]]


@dataclass(frozen=True)
class YSequenceParams:
    """Source bits (or an integer seed), duplication fraction and target length."""

    source: Source
    gamma: float = 1.0
    max_length: int = 131068
    _gamma_exact: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ContractError("gamma must lie in (0, 1]")
        if self.max_length < 4:
            raise ContractError("max_length must be >= 4")
        object.__setattr__(
            self, "_gamma_exact", Fraction(self.gamma).limit_denominator(1 << 20)
        )

    def copy_length(self, block_len: int) -> int:
        """ceil(gamma |u|), the length of u^gamma."""
        return math.ceil(self._gamma_exact * block_len)


def _source_bits(source: Source, needed: int) -> np.ndarray:
    if isinstance(source, (int, np.integer)) and not isinstance(source, bool):
        # prefix of generate_bernoulli(0.5, n, seed) for any n >= needed
        return generate_bernoulli(0.5, needed, int(source)).bits
    if callable(source):
        return as_bits(source(needed)).bits
    return as_bits(source).bits


def build_y_sequence(params: YSequenceParams) -> BitSequence:
    """u_0 u_0^gamma u_1 u_1^gamma ... truncated to ``max_length`` symbols."""
    target = params.max_length
    # Source symbols needed to fill the target length.
    needed = 0
    produced = 0
    k = 0
    while produced < target:
        lo, hi = u_block_bounds(k)
        take = min(hi - lo, target - produced)
        needed = lo + take
        produced += (hi - lo) + params.copy_length(hi - lo)
        k += 1
    src = _source_bits(params.source, needed)
    out: list[np.ndarray] = []
    produced = 0
    k = 0
    while produced < target:
        lo, hi = u_block_bounds(k)
        if src.size < min(hi, lo + target - produced):
            raise GenerationError(
                f"source exhausted inside u_{k} (needs {min(hi, lo + target - produced)} symbols, "
                f"has {src.size})",
                produced,
            )
        u = src[lo:hi]
        for piece in (u, u[: params.copy_length(u.size)]):
            piece = piece[: target - produced]
            out.append(piece)
            produced += piece.size
            if produced >= target:
                break
        k += 1
    return BitSequence(np.concatenate(out))
