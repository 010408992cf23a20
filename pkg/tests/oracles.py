"""Independent brute-force oracles used to freeze expected values.

Nothing here imports the package: each oracle re-derives its answer from
first principles (string scans, rational arithmetic, explicit matrices).
"""

from fractions import Fraction
from itertools import product
import math


def words(n):
    return ["".join(w) for w in product("01", repeat=n)]


def occurrences(x: str, w: str) -> int:
    """Overlapping occurrences of w in x; the empty word occurs len(x)+1 times."""
    if not w:
        return len(x) + 1
    return sum(1 for i in range(len(x) - len(w) + 1) if x[i : i + len(w)] == w)


def kt_factors_literal(x: str, m: int):
    """Factors of K_m^t(x) evaluated straight from the count formulas.

    m = 0: prod_{i=0}^{t-1} (N_{x_1..x_i}(x_{i+1}) + 1/2) / (i + 1).
    m > 0: 1/2 per symbol of the first min(m, t), then for i = m..t-1
    (N_{x_1..x_i}(x_{i+1-m}..x_{i+1}) + 1/2) / (N_{x_1..x_{i-1}}(x_{i+1-m}..x_i) + 1).
    Indices are 1-based as in the formula; x[a-1:b] is x_a..x_b.
    """
    t = len(x)
    half = Fraction(1, 2)
    if m == 0:
        return [(occurrences(x[:i], x[i]) + half) / (i + 1) for i in range(t)]
    out = [half] * min(m, t)
    for i in range(m, t):
        word = x[i - m : i + 1]  # x_{i+1-m} .. x_{i+1}
        ctx = x[i - m : i]  # x_{i+1-m} .. x_i
        out.append((occurrences(x[:i], word) + half) / (occurrences(x[: i - 1], ctx) + 1))
    return out


def kt_measure(x: str, m: int) -> Fraction:
    return math.prod(kt_factors_literal(x, m), start=Fraction(1))


def kt_codelength(x: str, m: int) -> int:
    """ceil(-log2 K) computed exactly: smallest L with 2^-L <= K."""
    k = kt_measure(x, m)
    L = 0
    while Fraction(1, 2**L) > k:
        L += 1
    return L


def exact_ceil_neglog2(q: Fraction) -> int:
    L = 0
    while Fraction(1, 2**L) > q:
        L += 1
    return L


def lz_parse_bruteforce(x: str):
    """Greedy parse by scanning every earlier start; smallest start wins ties."""
    out = []
    i = 0
    n = len(x)
    while i < n:
        best_len, best_p = 0, 0
        for p in range(i):
            l = 0
            while i + l < n and x[p + l] == x[i + l]:
                l += 1
            if l > best_len:
                best_len, best_p = l, p
        if best_len >= 2:
            out.append((best_p + 1, best_len))
            i += best_len
        else:
            out.append((0, int(x[i])))
            i += 1
    return out


def elias_delta(m: int) -> str:
    b = bin(m)[2:]
    size = bin(len(b))[2:]
    return "0" * (len(size) - 1) + size + b[1:]


def truncated_binary(v: int, k: int) -> str:
    """Phased-in code: the first 2^b - k values get b-1 bits, the rest b bits."""
    if k == 1:
        return ""
    b = math.ceil(math.log2(k))
    u = 2**b - k
    if v < u:
        return format(v, f"0{b - 1}b") if b > 1 else ""
    return format(v + u, f"0{b}b")


def lz_cost(x: str, pointer: str = "truncated") -> int:
    total = 0
    produced = 0
    for p, payload in lz_parse_bruteforce(x):
        if pointer == "truncated":
            total += len(truncated_binary(p, produced + 1))
        else:
            total += len(elias_delta(p + 1))
        total += 1 if p == 0 else len(elias_delta(payload))
        produced += 1 if p == 0 else payload
    return total


def two_faced_matrix(k: int, nu, hat: bool = False):
    """P(0 | context) columns of T_k (or That_k) by matrix concatenation.

    T_1 = [nu, 1-nu], That_1 = [1-nu, nu]; T_{j+1} = [T_j | That_j] and
    That_{j+1} = [That_j | T_j]. Column c is the context whose bits, oldest
    first, spell c in binary.
    """
    t, th = [nu, 1 - nu], [1 - nu, nu]
    for _ in range(k - 1):
        t, th = t + th, th + t
    return th if hat else t


def parity_rule(context: str, nu, hat: bool = False):
    even = context.count("1") % 2 == 0
    return nu if even != hat else 1 - nu


def chain_word_probs(k: int, nu, length: int, hat: bool = False) -> dict:
    """Exact probabilities of every word of the given length (>= k)."""
    cols = two_faced_matrix(k, nu, hat)
    probs = {}
    for w in words(length):
        p = Fraction(1, 2**k) if isinstance(nu, Fraction) else 2.0**-k
        for i in range(k, length):
            q0 = cols[int(w[i - k : i], 2)]
            p *= q0 if w[i] == "0" else 1 - q0
        probs[w] = p
    return probs


def binary_entropy(p: float) -> float:
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))
