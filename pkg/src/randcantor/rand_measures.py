"""Measures on Cantor space coded by columns of conditional probabilities.

Column ``n`` is a binary expansion of ``mu(sigma_n 0 | sigma_n)`` where
``sigma_n`` is the ``n``-th word in length-lexicographic order. A column
is either a finite prefix of bits, an exact eventually periodic expansion,
or a lazily read digit stream. Conditional probabilities are handled as
dyadic intervals, so every answer is certified or explicitly undetermined.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from .closed_sets import FiniteTree, decode_tree3
from .codings import (BinaryWord, CodeWord, DigitStream, as_bits, column_of,
                      index_of, word_at)
from .dyadic import DyadicInterval, DyadicRational
from .errors import NeedMoreBits, UndeterminedError


# Columns of a random measure read lane COLUMN_LANE_BASE + n of their key.
COLUMN_LANE_BASE = 1 << 32


@dataclass(frozen=True)
class Column:
    """Binary expansion ``0.b1 b2 ...`` of one conditional probability.

    ``bits`` is a known prefix. With ``periodic`` set the expansion is
    exactly ``bits`` followed by ``periodic`` repeated forever. With
    ``source`` set, bits past the prefix are read from the stream.
    """

    bits: str = ""
    periodic: Optional[str] = None
    source: Optional[DigitStream] = None

    def __post_init__(self):
        as_bits(self.bits)
        if self.periodic is not None:
            if not self.periodic:
                raise ValueError("periodic part must be non-empty")
            as_bits(self.periodic)
            if self.source is not None:
                raise ValueError("a column is either periodic or stream-backed")
        if self.source is not None and self.source.alphabet_size != 2:
            raise ValueError("column streams must be binary")

    @property
    def unbounded(self) -> bool:
        return self.periodic is not None or self.source is not None

    def known_bits(self) -> Optional[int]:
        """Number of available bits, or None when unbounded."""
        return None if self.unbounded else len(self.bits)

    def prefix(self, k: int) -> str:
        if k <= len(self.bits):
            return self.bits[:k]
        if self.periodic is not None:
            need = k - len(self.bits)
            reps = -(-need // len(self.periodic))
            return self.bits + (self.periodic * reps)[:need]
        if self.source is not None:
            extra = self.source.digits(len(self.bits), k - len(self.bits))
            return self.bits + "".join(map(str, extra))
        return self.bits

    def extended(self, k: int) -> "Column":
        """Same column with at least ``k`` bits materialized."""
        if k <= len(self.bits) or self.periodic is not None:
            return self
        return Column(self.prefix(k), None, self.source)

    def exact_value(self) -> Optional[Fraction]:
        if self.periodic is None:
            return None
        head = Fraction(int(self.bits, 2), 1 << len(self.bits)) if self.bits else Fraction(0)
        m = len(self.periodic)
        cycle = Fraction(int(self.periodic, 2), (1 << m) - 1)
        return head + cycle / (1 << len(self.bits))

    def interval(self, k: int) -> DyadicInterval:
        """Enclosure of the value from its first ``k`` bits.

        Exact dyadic periodic values give a point; other periodic values
        are enclosed on the ``2**-k`` grid.
        """
        exact = self.exact_value()
        if exact is not None:
            den = exact.denominator
            if den & (den - 1) == 0:
                return DyadicInterval(exact)
            return DyadicInterval.enclose(exact, k)
        bits = self.prefix(k)
        if len(bits) < k:
            raise NeedMoreBits(-1, k, len(bits))
        v = int(bits, 2) if k else 0
        return DyadicInterval(DyadicRational(v, -k), DyadicRational(v + 1, -k))

    def to_json(self, index: int) -> dict:
        """Known bits only; materialize stream-backed columns with ``extended``."""
        return {"index": index, "bits": self.bits, "periodic": self.periodic}


ZERO_COLUMN = Column("", "0")
ONE_COLUMN = Column("", "1")
HALF_COLUMN = Column("1", "0")


@dataclass(frozen=True)
class MeasureCode:
    """Columns by string index; ``factory`` supplies columns not stored."""

    columns: Mapping[int, Column] = field(default_factory=dict)
    factory: Optional[Callable[[int], Column]] = None

    def column(self, n: int) -> Column:
        col = self.columns.get(n)
        if col is None:
            if self.factory is None:
                raise NeedMoreBits(n, 1, 0)
            col = self.factory(n)
        return col

    def conditional(self, n: int, k: int) -> DyadicInterval:
        """Enclosure of ``mu(sigma_n 0 | sigma_n)`` from ``k`` bits."""
        col = self.column(n)
        try:
            return col.interval(k)
        except NeedMoreBits as exc:
            raise NeedMoreBits(n, exc.required, exc.available) from None

    def extended(self, indices, k: int) -> "MeasureCode":
        """Functional refinement: a code with columns materialized to ``k`` bits."""
        cols = dict(self.columns)
        for n in indices:
            cols[n] = self.column(n).extended(k)
        return MeasureCode(cols, self.factory)

    def to_json(self) -> dict:
        return {"columns": [self.columns[n].to_json(n) for n in sorted(self.columns)]}

    @classmethod
    def from_json(cls, obj: Union[dict, str]) -> "MeasureCode":
        if isinstance(obj, str):
            obj = json.loads(obj)
        cols = {}
        for entry in obj["columns"]:
            cols[int(entry["index"])] = Column(entry.get("bits", ""), entry.get("periodic"))
        return cls(cols)

    @classmethod
    def from_interleaved(cls, word: CodeWord, n_columns: int) -> "MeasureCode":
        """Split a joined code ``x = (+)_n x_n`` into its first columns."""
        return cls({n: Column(str(column_of(word, n))) for n in range(n_columns)})


def measure_interval(m: MeasureCode, sigma: BinaryWord, bits_per_column: int,
                     precision: Optional[int] = None) -> DyadicInterval:
    """Certified enclosure of ``mu([sigma])``.

    Products of dyadic intervals are exact; with ``precision`` set, each
    step is rounded outward to the ``2**-precision`` grid.
    """
    bits = as_bits(sigma)
    result = DyadicInterval(1)
    node = ""
    for b in bits:
        cond = m.conditional(index_of(node), bits_per_column)
        if b == "1":
            cond = 1 - cond
        result = result * cond
        if precision is not None:
            result = result.round(precision)
        node += b
    return result


def random_measure_code(stream: DigitStream) -> MeasureCode:
    """Uniform random columns; column ``n`` reads its own lane of ``stream``."""
    return MeasureCode({}, _StreamColumns(stream.master_seed, stream.stream_id,
                                          stream.lane))


@dataclass(frozen=True)
class _StreamColumns:
    seed: int
    stream_id: int
    lane: int

    def __call__(self, n: int) -> Column:
        return Column("", None, DigitStream(self.seed, self.stream_id, 2,
                                            COLUMN_LANE_BASE + self.lane + n))


class Status(enum.Enum):
    IN = "In"
    OUT = "Out"
    UNDETERMINED = "Undetermined"


class SupportTree:
    """Finite-depth support statuses.

    Only nodes that were examined are stored; a word below an Out node is
    Out, and a word below an unexpanded Undetermined node is Undetermined.
    """

    def __init__(self, depth: int, status: Mapping[str, Status]):
        self.depth = depth
        self._status = dict(status)

    def status(self, word: BinaryWord) -> Status:
        w = as_bits(word)
        if len(w) > self.depth:
            raise ValueError(f"word deeper than {self.depth}")
        j = len(w)
        while w[:j] not in self._status:
            j -= 1
        return self._status[w[:j]]

    @property
    def statuses(self) -> dict[str, Status]:
        return dict(self._status)

    def members(self) -> FiniteTree:
        return FiniteTree(self.depth, (w for w, s in self._status.items()
                                       if s is Status.IN))

    def undetermined(self) -> list[str]:
        return sorted((w for w, s in self._status.items()
                       if s is Status.UNDETERMINED), key=index_of)

    def to_json(self) -> dict:
        return {"depth": self.depth,
                "status": {w: s.value for w, s in sorted(
                    self._status.items(), key=lambda kv: index_of(kv[0]))}}


def _step_status(cond: DyadicInterval) -> Status:
    if cond.hi == 0:
        return Status.OUT
    if cond.lo > 0:
        return Status.IN
    return Status.UNDETERMINED


def support_tree(m: MeasureCode, depth: int, bits: int) -> SupportTree:
    """Nodes of positive measure, as far as ``bits`` bits per column can tell."""
    status = {"": Status.IN}
    level = [""]
    for _ in range(depth):
        nxt = []
        for node in level:
            cond = m.conditional(index_of(node), bits)
            here = status[node]
            for b, c in (("0", cond), ("1", 1 - cond)):
                s = _step_status(c)
                if s is Status.IN and here is Status.UNDETERMINED:
                    s = Status.UNDETERMINED
                status[node + b] = s
                if s is not Status.OUT:
                    nxt.append(node + b)
        level = nxt
    return SupportTree(depth, status)


def support_measure_code(x: Union[CodeWord, str]) -> MeasureCode:
    """Measure whose support is the closed set coded by ``x``.

    Digit ``x(i)`` sets the conditional at the ``i``-th extendible node:
    0 gives 1 (left only), 1 gives 0 (right only), 2 gives 1/2. Nodes
    off the tree get the column 0^inf; their measure is 0 anyway.
    """
    if isinstance(x, str):
        x = CodeWord.parse(x, 3)
    if x.alphabet_size != 3:
        raise ValueError("support codes are 3-ary")
    by_digit = (ONE_COLUMN, ZERO_COLUMN, HALF_COLUMN)
    cols = {}
    level = [""]
    i = 0
    digits = x.digits
    pending = []
    while level:
        nxt = []
        for pos, node in enumerate(level):
            if i >= len(digits):
                pending = level[pos:] + nxt
                break
            d = digits[i]
            i += 1
            cols[index_of(node)] = by_digit[d]
            if d in (0, 2):
                nxt.append(node + "0")
            if d in (1, 2):
                nxt.append(node + "1")
        else:
            level = nxt
            continue
        break
    return MeasureCode(cols, _OffTreeColumns(frozenset(pending)))


@dataclass(frozen=True)
class _OffTreeColumns:
    """0^inf for nodes off the tree; live nodes without a digit are missing."""

    pending: frozenset

    def __call__(self, n: int) -> Column:
        w = str(word_at(n))
        for j in range(len(w) + 1):
            if w[:j] in self.pending:
                raise NeedMoreBits(n, 1, 0)
        return ZERO_COLUMN


def classify_third(col: Column, max_bits: int) -> tuple[Optional[int], int]:
    """Decide which third of [0, 1] the column value lies in.

    Returns ``(digit, bits_used)``: digit 1 when the value is in [0, 1/3)
    (only the right child has conditional above 1/3), 0 for (2/3, 1], 2 for
    (1/3, 2/3), and None if ``max_bits`` bits do not decide it. Bits are
    read one at a time, exact periodic columns included, so a value of
    exactly 1/3 or 2/3 stays undecided at every precision.
    """
    bits = col.prefix(max_bits)
    v = 0
    for k in range(1, len(bits) + 1):
        v = 2 * v + (bits[k - 1] == "1")
        scale = 1 << k
        # value in [v / scale, (v + 1) / scale]
        if 3 * (v + 1) < scale:
            return 1, k
        if 3 * v > 2 * scale:
            return 0, k
        if 3 * v > scale and 3 * (v + 1) < 2 * scale:
            return 2, k
    return None, len(bits)


def _children_of_digit(d):
    return (("0", Status.OUT), ("1", Status.IN)) if d == 1 else \
           (("0", Status.IN), ("1", Status.OUT)) if d == 0 else \
           (("0", Status.IN), ("1", Status.IN))


def third_support_tree(m: MeasureCode, depth: int, max_bits: int) -> SupportTree:
    """Nodes all of whose conditionals exceed 1/3, refined bit by bit."""
    status = {"": Status.IN}
    level = [""]
    for _ in range(depth):
        nxt = []
        for node in level:
            d, _ = classify_third(m.column(index_of(node)), max_bits)
            if d is None:
                status[node + "0"] = status[node + "1"] = Status.UNDETERMINED
                continue
            for b, s in _children_of_digit(d):
                status[node + b] = s
                if s is Status.IN:
                    nxt.append(node + b)
        level = nxt
    return SupportTree(depth, status)


def third_support_digits(m: MeasureCode, depth: int, max_bits: int) -> CodeWord:
    """3-ary code of the 1/3-support tree, one digit per extendible node."""
    out = []
    level = [""]
    for _ in range(depth):
        nxt = []
        for node in level:
            d, _ = classify_third(m.column(index_of(node)), max_bits)
            if d is None:
                raise UndeterminedError(node)
            out.append(d)
            if d in (0, 2):
                nxt.append(node + "0")
            if d in (1, 2):
                nxt.append(node + "1")
        level = nxt
    return CodeWord(3, tuple(out))


def support_matches_tree(x: Union[CodeWord, str], depth: int) -> tuple[bool, int]:
    """Compare the support of ``support_measure_code(x)`` with ``decode_tree3``.

    Returns ``(equal, undetermined_count)``.
    """
    tree = support_tree(support_measure_code(x), depth, 2)
    undetermined = len(tree.undetermined())
    return tree.members() == decode_tree3(x, depth).tree, undetermined
