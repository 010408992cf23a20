"""Code-length randomness tests and significance-budgeted batteries.

For a code f and input x of length n the statistic is tau = n - |f(x)|. The
word is declared non-random at level alpha when

    tau >= log2(1/alpha) + 1,

i.e. when |f(x)| <= n - log2(1/alpha) - 1. Since fewer than 2^(L+1) words can
have codewords of length <= L under an injective code, at most alpha 2^n words
of length n are rejected. A battery runs member i at level alpha * omega_i with
sum(omega) <= 1 and rejects when any member rejects.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from .core import ContractError, as_bits
from .krichevsky import blockwise_codelength
from .lz77 import codelength_lz
from .mixture import blockwise_codelength_rho, default_max_order, default_weights as mixture_weights

RANDOM = "random"
NON_RANDOM = "non-random"
KINDS = ("kappa", "rho", "lz77")
DEFAULT_BLOCK_CAP = 1 << 14
MIN_BATTERY_LENGTH = 64


@dataclass(frozen=True)
class TestSpec:
    """One code-length test.

    ``kind`` is ``"kappa"`` (blockwise Krichevsky code with memory ``m``),
    ``"rho"`` (blockwise mixture up to memory ``max_order``) or ``"lz77"``.
    ``t`` is the block length; ``None`` codes the whole input as one block.
    """

    __test__ = False  # keep pytest from collecting this class

    kind: str
    m: Optional[int] = None
    t: Optional[int] = None
    max_order: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(f"unknown test kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "kappa" and (self.m is None or self.m < 0):
            raise ContractError("kappa test needs a memory m >= 0")
        if self.t is not None and self.t < 1:
            raise ContractError("block length must be >= 1")
        if self.max_order is not None and self.max_order < 0:
            raise ContractError("max_order must be >= 0")

    @property
    def name(self) -> str:
        if self.kind == "kappa":
            return f"kappa[m={self.m}]"
        if self.kind == "rho":
            return "rho" if self.max_order is None else f"rho[M={self.max_order}]"
        return "lz77"

    def params(self) -> dict:
        return {k: v for k, v in (("m", self.m), ("t", self.t), ("max_order", self.max_order)) if v is not None}

    def codelength(self, x) -> tuple[int, dict]:
        """Code length of ``x`` and the fully resolved parameters used."""
        x = as_bits(x)
        if self.kind == "lz77":
            return codelength_lz(x), {}
        t = self.t if self.t is not None else x.n
        if self.kind == "kappa":
            return blockwise_codelength(x, self.m, t), {"m": self.m, "t": t}
        order = self.max_order if self.max_order is not None else default_max_order(t)
        return blockwise_codelength_rho(x, mixture_weights(order), t), {"max_order": order, "t": t}


@dataclass(frozen=True)
class TestDecision:
    __test__ = False

    test_name: str
    params: dict
    n: int
    codelength: int
    tau: int
    alpha: float
    threshold: float
    log2_p_bound: int
    p_bound: float
    verdict: str

    @property
    def rejects(self) -> bool:
        return self.verdict == NON_RANDOM

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TestDecision":
        return cls(**d)


def statistic_tau(n: int, codelength: int) -> int:
    """tau = n - |f(x)|; negative when the code expands the input."""
    if n < 0 or codelength < 0:
        raise ContractError("n and codelength must be non-negative")
    return int(n) - int(codelength)


def threshold(alpha: float) -> float:
    check_alpha(alpha)
    return math.log2(1.0 / alpha) + 1.0


def check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ContractError(f"significance level must lie in (0, 1), got {alpha}")


def decide(tau: int, alpha: float) -> tuple[float, str, float, int]:
    """Threshold, verdict, p-value bound and its exact log2 for a statistic.

    The bound is P(tau >= s) <= 2^-(s-1) under the uniform hypothesis; the
    float form is floored at the smallest subnormal so it stays positive.
    """
    thr = threshold(alpha)
    verdict = NON_RANDOM if tau >= thr else RANDOM
    log2_p = min(0, 1 - int(tau))
    p = max(math.ldexp(1.0, log2_p), math.ulp(0.0))
    return thr, verdict, p, log2_p


def run_test(x, spec: TestSpec, alpha: float) -> TestDecision:
    """Compute the spec's code length on ``x`` and apply the decision rule."""
    x = as_bits(x)
    if x.n < 1:
        raise ContractError("cannot test an empty sequence")
    check_alpha(alpha)
    length, params = spec.codelength(x)
    tau = statistic_tau(x.n, length)
    thr, verdict, p, log2_p = decide(tau, alpha)
    return TestDecision(spec.name, params, x.n, length, tau, alpha, thr, log2_p, p, verdict)


def default_weights(count: int) -> tuple[float, ...]:
    """omega_i = 1/(i(i+1)) for i = 1..count; sums to 1 - 1/(count+1)."""
    if count < 1:
        raise ContractError("need at least one weight")
    return tuple(1.0 / (i * (i + 1)) for i in range(1, count + 1))


@dataclass(frozen=True)
class BatteryConfig:
    alpha: float
    members: tuple[TestSpec, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        check_alpha(self.alpha)
        if not self.members or len(self.members) != len(self.weights):
            raise ContractError("battery needs one positive weight per member")
        if any(w <= 0 for w in self.weights) or math.fsum(self.weights) > 1 + 1e-12:
            raise ContractError("battery weights must be positive and sum to at most 1")

    @property
    def member_alphas(self) -> tuple[float, ...]:
        return tuple(self.alpha * w for w in self.weights)

    @property
    def alpha_budget(self) -> float:
        return math.fsum(self.member_alphas)


@dataclass(frozen=True)
class BatteryReport:
    n: int
    alpha: float
    alpha_budget: float
    weights: tuple[float, ...]
    decisions: tuple[TestDecision, ...]
    verdict: str = field(default=RANDOM)

    @property
    def rejects(self) -> bool:
        return self.verdict == NON_RANDOM

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "alpha_budget": self.alpha_budget,
            "weights": list(self.weights),
            "verdict": self.verdict,
            "tests": [d.to_dict() for d in self.decisions],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BatteryReport":
        return cls(
            n=d["n"],
            alpha=d["alpha"],
            alpha_budget=d["alpha_budget"],
            weights=tuple(d["weights"]),
            decisions=tuple(TestDecision.from_dict(t) for t in d["tests"]),
            verdict=d["verdict"],
        )


def run_battery(x, config: BatteryConfig) -> BatteryReport:
    """Run every member at alpha * omega_i; reject if any member rejects."""
    x = as_bits(x)
    decisions = tuple(
        run_test(x, spec, a) for spec, a in zip(config.members, config.member_alphas)
    )
    verdict = NON_RANDOM if any(d.rejects for d in decisions) else RANDOM
    return BatteryReport(x.n, config.alpha, config.alpha_budget, config.weights, decisions, verdict)


def default_memories(n: int) -> list[int]:
    """{0, 1, 2, ceil(log2 log2 n), ceil(sqrt(log2 n))}, ascending."""
    log_n = math.log2(n) if n > 1 else 0.0
    loglog = math.ceil(math.log2(log_n)) if log_n > 1 else 0
    root = math.ceil(math.sqrt(log_n))
    return sorted({0, 1, 2, loglog, root})


def default_battery(n: int, alpha: float = 0.01, *, min_length: int = MIN_BATTERY_LENGTH) -> BatteryConfig:
    """Battery for inputs of length n: Krichevsky tests with n-dependent
    memories, the mixture test and the LZ77 test, weighted by omega* in order.

    ``min_length`` guards against lengths too short for the memory formulas;
    lowering it is meant for exhaustive level checks on tiny words.
    """
    if n < min_length:
        raise ContractError(f"default battery needs n >= {min_length}, got {n}")
    t = min(n, DEFAULT_BLOCK_CAP)
    members = [TestSpec("kappa", m=m, t=t) for m in default_memories(n)]
    members.append(TestSpec("rho", t=t, max_order=default_max_order(t)))
    members.append(TestSpec("lz77"))
    return BatteryConfig(alpha, tuple(members), default_weights(len(members)))
