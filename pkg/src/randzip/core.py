"""Bit sequences, input parsing, pattern counting and plug-in entropy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np


class ContractError(ValueError):
    """A precondition of a public operation was violated."""


class BitParseError(ValueError):
    """Input bytes could not be interpreted as bits."""

    def __init__(self, offset: int, char: str):
        super().__init__(f"invalid symbol {char!r} at byte offset {offset}")
        self.offset = offset
        self.char = char


class ResourceError(RuntimeError):
    """A request exceeds the size limits of an exact computation."""


FORMATS = ("raw-msb-first", "ascii01")


class BitSequence:
    """Immutable finite binary word x_1 ... x_n backed by a uint8 array."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Union["BitSequence", Iterable[int], np.ndarray, str] = ()):
        if isinstance(bits, BitSequence):
            arr = bits._bits
        elif isinstance(bits, str):
            arr = _from_text(bits)
        else:
            arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
            if arr.size and not np.isin(arr, (0, 1)).all():
                raise ContractError("bit sequence symbols must be 0 or 1")
            arr = arr.astype(np.uint8).ravel()
        arr = arr.copy() if arr.flags.writeable else arr
        arr.flags.writeable = False
        self._bits = arr

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 view of the symbols."""
        return self._bits

    @property
    def n(self) -> int:
        return int(self._bits.size)

    def __len__(self) -> int:
        return int(self._bits.size)

    def __iter__(self):
        return iter(self._bits.tolist())

    def __getitem__(self, item):
        if isinstance(item, slice):
            return BitSequence(self._bits[item])
        return int(self._bits[item])

    def __add__(self, other) -> "BitSequence":
        return BitSequence(np.concatenate([self._bits, as_bits(other).bits]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((self.n, self._bits.tobytes()))

    def __str__(self) -> str:
        return self._bits.tobytes().translate(_TO_ASCII).decode("ascii")

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 64:
            s = s[:61] + "..."
        return f"BitSequence('{s}', n={self.n})"

    def tolist(self) -> list[int]:
        return self._bits.tolist()

    def to_bytes(self) -> bytes:
        """Pack MSB-first; a trailing partial byte is zero padded."""
        return np.packbits(self._bits).tobytes()


_TO_ASCII = bytes.maketrans(b"\x00\x01", b"01")


def _from_text(text: str) -> np.ndarray:
    raw = text.encode("ascii", errors="replace")
    arr = np.frombuffer(raw, dtype=np.uint8)
    keep = ~np.isin(arr, np.frombuffer(b" \t\r\n\v\f", dtype=np.uint8))
    arr = arr[keep]
    bad = (arr != ord("0")) & (arr != ord("1"))
    if bad.any():
        offset = int(np.flatnonzero(keep)[np.argmax(bad)])
        raise BitParseError(offset, chr(raw[offset]))
    return (arr - ord("0")).astype(np.uint8)


def as_bits(x) -> BitSequence:
    """Coerce a BitSequence, 0/1 iterable, or '0101' string to BitSequence."""
    return x if isinstance(x, BitSequence) else BitSequence(x)


def parse_bits(raw: bytes, format: str = "raw-msb-first") -> BitSequence:
    """Decode a byte stream into bits.

    ``raw-msb-first`` expands every byte into 8 bits, most significant first.
    ``ascii01`` reads the characters '0' and '1' in order and skips ASCII
    whitespace; anything else raises :class:`BitParseError` carrying the byte
    offset of the offending character.
    """
    if format == "raw-msb-first":
        return BitSequence(np.unpackbits(np.frombuffer(raw, dtype=np.uint8)))
    if format == "ascii01":
        try:
            text = raw.decode("ascii")
        except UnicodeDecodeError as exc:
            raise BitParseError(exc.start, chr(raw[exc.start])) from None
        return BitSequence(text)
    raise ContractError(f"unknown bit format {format!r}; expected one of {FORMATS}")


def format_bits(x: BitSequence, format: str = "raw-msb-first") -> bytes:
    """Inverse of :func:`parse_bits` (raw output is zero padded to a byte)."""
    x = as_bits(x)
    if format == "raw-msb-first":
        return x.to_bytes()
    if format == "ascii01":
        return str(x).encode("ascii") + b"\n"
    raise ContractError(f"unknown bit format {format!r}; expected one of {FORMATS}")


def count_occurrences(x, w) -> int:
    """Number of (possibly overlapping) occurrences of ``w`` in ``x``."""
    x, w = as_bits(x), as_bits(w)
    if w.n < 1:
        raise ContractError("pattern must be non-empty")
    if w.n > x.n:
        return 0
    windows = np.lib.stride_tricks.sliding_window_view(x.bits, w.n)
    return int(np.count_nonzero((windows == w.bits).all(axis=1)))


def context_indices(bits: np.ndarray, m: int) -> np.ndarray:
    """Integer code of the m-symbol context preceding each position i >= m.

    Works on the last axis, so a 2-D array of equal-length words gives one row
    of context codes per word. The oldest context symbol is the most
    significant bit.
    """
    t = bits.shape[-1]
    if t <= m:
        return np.zeros(bits.shape[:-1] + (0,), dtype=np.int64)
    ctx = np.zeros(bits.shape[:-1] + (t - m,), dtype=np.int64)
    for j in range(m):
        ctx = (ctx << 1) | bits[..., j : t - m + j]
    return ctx


@dataclass
class ContextCounts:
    """Occurrence counts N(u a) of each (context u, next symbol a) pair.

    ``counts[c, a]`` is indexed by the integer code ``c`` of the context
    (oldest symbol most significant). Counts only grow through :meth:`push`.
    """

    order: int
    counts: np.ndarray = field(repr=False)
    total: int = 0
    _tail: list[int] = field(default_factory=list, repr=False)

    @classmethod
    def empty(cls, order: int) -> "ContextCounts":
        if order < 0:
            raise ContractError("order must be non-negative")
        return cls(order, np.zeros((1 << order, 2), dtype=np.int64))

    def push(self, symbol: int) -> None:
        """Append one symbol to the counted sequence."""
        if symbol not in (0, 1):
            raise ContractError("symbol must be 0 or 1")
        m = self.order
        if len(self._tail) == m:
            c = 0
            for b in self._tail:
                c = (c << 1) | b
            self.counts[c, symbol] += 1
            self.total += 1
        if m:
            self._tail.append(symbol)
            if len(self._tail) > m:
                del self._tail[0]

    def __getitem__(self, key) -> int:
        u, a = key
        u = as_bits(u)
        if u.n != self.order:
            raise ContractError(f"context must have length {self.order}")
        c = 0
        for b in u:
            c = (c << 1) | b
        return int(self.counts[c, int(a)])

    def context_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)


def gather_counts(x, m: int) -> ContextCounts:
    """Count (context, next symbol) events over positions m+1..n of ``x``."""
    x = as_bits(x)
    if m < 0:
        raise ContractError("order must be non-negative")
    cc = ContextCounts.empty(m)
    if x.n > m:
        idx = context_indices(x.bits, m) * 2 + x.bits[m:]
        cc.counts = np.bincount(idx, minlength=2 << m).reshape(-1, 2).astype(np.int64)
        cc.total = x.n - m
    cc._tail = x.bits[max(0, x.n - m) :].tolist() if m else []
    return cc


def empirical_entropy(x, k: int) -> float:
    """Plug-in estimate of the order-k conditional entropy, in bits/symbol."""
    x = as_bits(x)
    if k < 0 or x.n <= k:
        raise ContractError("empirical entropy needs 0 <= k < n")
    cc = gather_counts(x, k)
    counts = cc.counts.astype(float)
    ctx = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(counts > 0, counts * np.log2(counts / ctx), 0.0)
    h = -terms.sum() / cc.total
    return float(min(1.0, max(0.0, h)))


def binary_entropy(p: float) -> float:
    """h(p) = -(p log2 p + (1-p) log2 (1-p)) with 0 log 0 = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-(p * np.log2(p) + (1 - p) * np.log2(1 - p)))
