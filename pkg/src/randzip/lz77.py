"""LZ77 over the whole preceding text, with prefix-free coding of the pairs.

A parse is a list of pairs (p, payload). ``p == 0`` marks a literal whose
payload is the symbol itself. ``p >= 1`` copies ``payload`` symbols starting at
1-based position ``p`` of the text produced so far; copies may run into the
symbols they are producing (run-length semantics).

Two pair encodings are provided:

``"truncated"`` (default)
    The pointer value v in {0, ..., i}, where i is the number of symbols
    already decoded, is written with a truncated binary code over i + 1
    values. v = 0 is followed by one raw literal bit; v = p >= 1 by the Elias
    delta code of the match length.
``"delta"``
    Elias delta of p + 1, followed by the raw literal bit (p = 0) or the
    Elias delta code of the length.

Both are decodable given n, so the code is injective on {0,1}^n.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BitSequence, ContractError, as_bits

POINTER_CODES = ("truncated", "delta")
MIN_MATCH = 2


class MalformedParseError(ValueError):
    """A phrase references text that has not been produced yet."""


@dataclass(frozen=True)
class Phrase:
    position: int
    payload: int

    @property
    def is_literal(self) -> bool:
        return self.position == 0

    @property
    def length(self) -> int:
        return 1 if self.position == 0 else self.payload


@dataclass(frozen=True)
class LzParse:
    phrases: tuple[Phrase, ...]
    decoded_length: int

    def __iter__(self):
        return iter(self.phrases)

    def __len__(self) -> int:
        return len(self.phrases)


def _suffix_automaton(bits: list[int]):
    """Suffix automaton of ``bits`` with first-occurrence end positions."""
    length = [0]
    link = [-1]
    nxt = ([-1], [-1])
    first_end = [-1]
    last = 0
    for pos, c in enumerate(bits):
        cur = len(length)
        length.append(length[last] + 1)
        link.append(-1)
        nxt[0].append(-1)
        nxt[1].append(-1)
        first_end.append(pos)
        edge = nxt[c]
        p = last
        while p != -1 and edge[p] == -1:
            edge[p] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = edge[p]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = len(length)
                length.append(length[p] + 1)
                link.append(link[q])
                nxt[0].append(nxt[0][q])
                nxt[1].append(nxt[1][q])
                first_end.append(first_end[q])
                while p != -1 and edge[p] == q:
                    edge[p] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur
    return nxt, first_end


def parse(x) -> LzParse:
    """Greedy LZ77 parse: longest match, smallest position on ties.

    A match for the suffix starting at i may begin at any earlier position and
    run past i. Matches shorter than two symbols become literals.
    """
    bits = as_bits(x).tolist()
    n = len(bits)
    nxt, first_end = _suffix_automaton(bits)
    phrases = []
    i = 0
    while i < n:
        # Walk the automaton along x[i:], keeping the first occurrence of the
        # matched word strictly before i; first-occurrence starts only grow.
        state = 0
        length = 0
        start = -1
        while i + length < n:
            cand = nxt[bits[i + length]][state]
            cand_start = first_end[cand] - length
            if cand_start >= i:
                break
            state, start = cand, cand_start
            length += 1
        if length >= MIN_MATCH:
            phrases.append(Phrase(start + 1, length))
            i += length
        else:
            phrases.append(Phrase(0, bits[i]))
            i += 1
    return LzParse(tuple(phrases), n)


def decode(lz: LzParse | list) -> BitSequence:
    """Expand phrases symbol by symbol (overlapping copies are well defined)."""
    phrases = lz.phrases if isinstance(lz, LzParse) else lz
    out: list[int] = []
    for k, ph in enumerate(phrases):
        p, payload = ph.position, ph.payload
        if p == 0:
            if payload not in (0, 1):
                raise MalformedParseError(f"phrase {k}: literal payload {payload!r} is not a bit")
            out.append(payload)
            continue
        if p < 0 or p > len(out) or payload < 1:
            raise MalformedParseError(
                f"phrase {k}: copy ({p}, {payload}) with only {len(out)} symbols produced"
            )
        src = p - 1
        for j in range(payload):
            out.append(out[src + j])
    if isinstance(lz, LzParse) and len(out) != lz.decoded_length:
        raise MalformedParseError(f"decoded {len(out)} symbols, parse claims {lz.decoded_length}")
    return BitSequence(out)


# -- integer codes ---------------------------------------------------------


def integer_code_length(m: int) -> int:
    """Length of the Elias delta codeword for m >= 1."""
    if m < 1:
        raise ContractError("integer code is defined for m >= 1")
    nbits = m.bit_length() - 1
    return nbits + 2 * ((nbits + 1).bit_length() - 1) + 1


def elias_delta_encode(m: int) -> list[int]:
    if m < 1:
        raise ContractError("integer code is defined for m >= 1")
    nbits = m.bit_length() - 1
    size = nbits + 1
    head = [0] * (size.bit_length() - 1) + _binary(size, size.bit_length())
    return head + _binary(m - (1 << nbits), nbits)


def elias_delta_decode(bits, pos: int = 0) -> tuple[int, int]:
    """Decode one delta codeword at ``pos``; returns (value, next position)."""
    zeros = 0
    while bits[pos + zeros] == 0:
        zeros += 1
    pos += zeros
    size = _read(bits, pos, zeros + 1)
    pos += zeros + 1
    nbits = size - 1
    return (1 << nbits) | _read(bits, pos, nbits), pos + nbits


def truncated_binary_length(v: int, k: int) -> int:
    """Bits used for value v of a truncated binary code over k values."""
    if not 0 <= v < k:
        raise ContractError(f"value {v} outside [0, {k})")
    if k == 1:
        return 0
    b = (k - 1).bit_length()
    return b - 1 if v < (1 << b) - k else b


def truncated_binary_encode(v: int, k: int) -> list[int]:
    n = truncated_binary_length(v, k)
    if k == 1:
        return []
    b = (k - 1).bit_length()
    u = (1 << b) - k
    return _binary(v, n) if v < u else _binary(v + u, n)


def truncated_binary_decode(bits, pos: int, k: int) -> tuple[int, int]:
    if k == 1:
        return 0, pos
    b = (k - 1).bit_length()
    u = (1 << b) - k
    w = _read(bits, pos, b - 1)
    if w < u:
        return w, pos + b - 1
    w = (w << 1) | bits[pos + b - 1]
    return w - u, pos + b


def _binary(v: int, width: int) -> list[int]:
    return [(v >> s) & 1 for s in range(width - 1, -1, -1)]


def _read(bits, pos: int, width: int) -> int:
    v = 0
    for b in bits[pos : pos + width]:
        v = (v << 1) | b
    if pos + width > len(bits):
        raise ValueError("codeword truncated")
    return v


# -- code lengths and bitstreams -------------------------------------------


def _check_pointer(pointer: str) -> None:
    if pointer not in POINTER_CODES:
        raise ContractError(f"pointer code must be one of {POINTER_CODES}")


def phrase_cost(ph: Phrase, produced: int, pointer: str = "truncated") -> int:
    """Bits spent on one phrase when ``produced`` symbols precede it."""
    if pointer == "truncated":
        head = truncated_binary_length(ph.position, produced + 1)
    else:
        head = integer_code_length(ph.position + 1)
    return head + (1 if ph.is_literal else integer_code_length(ph.payload))


def parse_codelength(lz: LzParse, pointer: str = "truncated") -> int:
    _check_pointer(pointer)
    total = 0
    produced = 0
    for ph in lz.phrases:
        total += phrase_cost(ph, produced, pointer)
        produced += ph.length
    return total


def codelength_lz(x, pointer: str = "truncated") -> int:
    """Total LZ77 code length of ``x`` in bits (0 for the empty word)."""
    _check_pointer(pointer)
    return parse_codelength(parse(x), pointer)


def encode(x, pointer: str = "truncated") -> list[int]:
    """Concrete LZ77 bitstream for ``x``; its length equals :func:`codelength_lz`."""
    _check_pointer(pointer)
    out: list[int] = []
    produced = 0
    for ph in parse(x).phrases:
        if pointer == "truncated":
            out += truncated_binary_encode(ph.position, produced + 1)
        else:
            out += elias_delta_encode(ph.position + 1)
        out += [ph.payload] if ph.is_literal else elias_delta_encode(ph.payload)
        produced += ph.length
    return out


def decode_bits(bits, n: int, pointer: str = "truncated") -> BitSequence:
    """Invert :func:`encode` for a word known to have length ``n``."""
    _check_pointer(pointer)
    bits = list(bits)
    phrases = []
    produced = 0
    pos = 0
    while produced < n:
        if pointer == "truncated":
            p, pos = truncated_binary_decode(bits, pos, produced + 1)
        else:
            p, pos = elias_delta_decode(bits, pos)
            p -= 1
        if p == 0:
            phrases.append(Phrase(0, bits[pos]))
            pos += 1
        else:
            length, pos = elias_delta_decode(bits, pos)
            phrases.append(Phrase(p, length))
        produced += phrases[-1].length
    if pos != len(bits):
        raise MalformedParseError(f"{len(bits) - pos} trailing bits after {n} symbols")
    return decode(LzParse(tuple(phrases), n))
