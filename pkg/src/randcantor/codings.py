"""Finite words, the length-lexicographic enumeration, digit streams, pairing.

Binary words are indexed as in the standard enumeration of ``2^<omega``:
the empty word is 0, ``"0"`` is 1, ``"1"`` is 2, ``"00"`` is 3 and so on.
That index doubles as heap numbering (children of ``i`` are ``2i+1`` and
``2i+2``), which the tree walkers exploit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Union

from . import kernels

_SYMBOLS = "0123"


@dataclass(frozen=True)
class CodeWord:
    """A finite word over ``{0, ..., alphabet_size - 1}``."""

    alphabet_size: int
    digits: tuple[int, ...] = ()

    def __post_init__(self):
        if self.alphabet_size not in (2, 3, 4):
            raise ValueError(
                f"alphabet_size must be 2, 3 or 4, got {self.alphabet_size}")
        digits = tuple(int(d) for d in self.digits)
        for d in digits:
            if not 0 <= d < self.alphabet_size:
                raise ValueError(
                    f"digit {d} out of range for alphabet {self.alphabet_size}")
        object.__setattr__(self, "digits", digits)

    @classmethod
    def parse(cls, text: str, alphabet_size: int) -> "CodeWord":
        return cls(alphabet_size, tuple(_SYMBOLS.index(ch) if ch in _SYMBOLS
                                        else _bad_symbol(ch) for ch in text))

    @classmethod
    def binary(cls, text: str) -> "CodeWord":
        return cls.parse(text, 2)

    def __str__(self) -> str:
        return "".join(_SYMBOLS[d] for d in self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return CodeWord(self.alphabet_size, self.digits[item])
        return self.digits[item]

    def __add__(self, other: "CodeWord") -> "CodeWord":
        if not isinstance(other, CodeWord):
            return NotImplemented
        if other.alphabet_size != self.alphabet_size:
            raise ValueError("cannot concatenate words over different alphabets")
        return CodeWord(self.alphabet_size, self.digits + other.digits)

    def is_prefix_of(self, other: "CodeWord") -> bool:
        return (self.alphabet_size == other.alphabet_size
                and other.digits[:len(self.digits)] == self.digits)


def _bad_symbol(ch):
    raise ValueError(f"invalid digit symbol {ch!r}")


BinaryWord = Union[CodeWord, str]


def as_bits(word: BinaryWord) -> str:
    """Normalize a binary word (``CodeWord`` or ``'0'/'1'`` string) to a str."""
    if isinstance(word, CodeWord):
        if word.alphabet_size != 2:
            raise ValueError(
                f"expected a binary word, got alphabet {word.alphabet_size}")
        return str(word)
    if isinstance(word, str):
        if word.strip("01"):
            raise ValueError(f"not a binary word: {word!r}")
        return word
    raise TypeError(f"expected a binary word, got {type(word).__name__}")


def index_of(word: BinaryWord) -> int:
    """Position of ``word`` in the length-lexicographic enumeration."""
    bits = as_bits(word)
    return (1 << len(bits)) - 1 + (int(bits, 2) if bits else 0)


def word_at(i: int) -> CodeWord:
    """Inverse of :func:`index_of`."""
    if i < 0:
        raise ValueError("index must be non-negative")
    length = (i + 1).bit_length() - 1
    value = i + 1 - (1 << length)
    return CodeWord.binary(format(value, f"0{length}b") if length else "")


def words_of_length(n: int) -> list[str]:
    """All binary words of length ``n`` in lexicographic order."""
    if n == 0:
        return [""]
    return [format(v, f"0{n}b") for v in range(1 << n)]


@dataclass(frozen=True)
class DigitStream:
    """Position-addressable i.i.d. uniform digits.

    Digit ``p`` is a pure function of ``(master_seed, stream_id, lane,
    alphabet_size, p)``, computed by Philox4x64-10 in counter mode. Streams
    that differ in any key field are independent.
    """

    master_seed: int
    stream_id: int
    alphabet_size: int
    lane: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 1 << 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if not 0 <= self.stream_id < 1 << 64:
            raise ValueError("stream_id must be a 64-bit unsigned integer")
        if not 0 <= self.lane < 1 << 64:
            raise ValueError("lane must be a 64-bit unsigned integer")
        if self.alphabet_size not in (2, 3, 4):
            raise ValueError("alphabet_size must be 2, 3 or 4")

    def digit(self, position: int) -> int:
        return kernels.digit(self.master_seed, self.stream_id, self.lane,
                             self.alphabet_size, position)

    def digits(self, start: int, count: int) -> list[int]:
        return kernels.digits(self.master_seed, self.stream_id, self.lane,
                              self.alphabet_size, start, count)

    def word(self, length: int, start: int = 0) -> CodeWord:
        return CodeWord(self.alphabet_size, tuple(self.digits(start, length)))

    def with_alphabet(self, alphabet_size: int) -> "DigitStream":
        return replace(self, alphabet_size=alphabet_size)

    def with_lane(self, lane: int) -> "DigitStream":
        return replace(self, lane=lane)


def next_digit(stream: DigitStream, position: int) -> int:
    return stream.digit(position)


# Columns of a real x = (+)_n x_n sit at positions <n, k> = 2^n (2k + 1) - 1,
# i.e. column 0 takes the even positions and the odd positions recursively
# hold the remaining columns.

def pair(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ValueError("pair expects natural numbers")
    return ((2 * k + 1) << n) - 1


def unpair(position: int) -> tuple[int, int]:
    if position < 0:
        raise ValueError("position must be non-negative")
    v = position + 1
    n = (v & -v).bit_length() - 1
    return n, (v >> (n + 1))


def column_of(word: CodeWord, n: int) -> CodeWord:
    """Bits ``word(<n, k>)`` for ``k = 0, 1, ...`` while inside the word."""
    bits = []
    k = 0
    while (p := pair(n, k)) < len(word):
        bits.append(word[p])
        k += 1
    return CodeWord(2, tuple(bits))


def _interleave(even: Sequence[int], odd: Sequence[int]) -> list[int]:
    length = min(2 * len(even), 2 * len(odd) + 1)
    return [even[p // 2] if p % 2 == 0 else odd[p // 2] for p in range(length)]


def join_columns(columns: Iterable[BinaryWord]) -> CodeWord:
    """Interleave columns by the pairing; the last column absorbs the tail.

    With ``m`` columns, columns ``0 .. m-2`` occupy their pairing positions
    and column ``m-1`` fills every position of row ``m-1`` or beyond, in
    order. A single column therefore joins to itself. The result stops at
    the first position for which no bit is available.
    """
    cols = [[int(b) for b in as_bits(c)] for c in columns]
    if not cols:
        return CodeWord(2)
    joined = cols[-1]
    for col in reversed(cols[:-1]):
        joined = _interleave(col, joined)
    return CodeWord(2, tuple(joined))


def split_columns(word: BinaryWord, n_columns: int) -> list[CodeWord]:
    """Inverse of :func:`join_columns` for ``n_columns`` columns."""
    if n_columns < 1:
        raise ValueError("n_columns must be positive")
    rest = [int(b) for b in as_bits(word)]
    out = []
    for _ in range(n_columns - 1):
        out.append(CodeWord(2, tuple(rest[0::2])))
        rest = rest[1::2]
    out.append(CodeWord(2, tuple(rest)))
    return out
