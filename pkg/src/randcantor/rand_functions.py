"""Random continuous functions coded by {0,1,2}-labelings of the binary tree.

A code ``x`` labels node ``sigma_i`` (``i >= 1``) with ``x[i - 1]``; the
image of an input ``y`` is the sequence of labels along ``y`` with the 2's
deleted. Two representations share one interface:

* :class:`FunctionCode` holds an explicit code prefix for every node of
  length at most ``depth``;
* :class:`StreamFunction` reads labels lazily from a :class:`DigitStream`
  and is what the Monte Carlo harness samples, since depth-60 codes cannot
  be materialized.

Finite-depth detectors come in lower/upper pairs: ``hit_witnessed`` only
grows with depth, ``hit_possible`` only shrinks, and the true hitting event
lies between them.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import kernels
from .closed_sets import FiniteTree
from .codings import BinaryWord, CodeWord, DigitStream, as_bits, index_of, word_at
from .errors import OutOfRange


def code_length(depth: int) -> int:
    """Number of non-root nodes of length at most ``depth``."""
    return (1 << (depth + 1)) - 2


@dataclass(frozen=True)
class FunctionCode:
    code: CodeWord
    depth: int

    def __post_init__(self):
        if isinstance(self.code, str):
            object.__setattr__(self, "code", CodeWord.parse(self.code, 3))
        if self.code.alphabet_size != 3:
            raise ValueError("function codes are 3-ary")
        if len(self.code) < code_length(self.depth):
            raise ValueError(
                f"depth {self.depth} needs {code_length(self.depth)} labels, "
                f"code has {len(self.code)}")

    def label(self, i: int) -> int:
        """Label of the node with enumeration index ``i >= 1``."""
        return self.code.digits[i - 1]

    def children(self, i: int) -> tuple[int, int]:
        d = self.code.digits
        return d[2 * i], d[2 * i + 1]

    def to_json(self) -> dict:
        return {"depth": self.depth, "code": str(self.code)}

    @classmethod
    def from_json(cls, obj: Union[dict, str]) -> "FunctionCode":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(CodeWord.parse(obj["code"], 3), int(obj["depth"]))


@dataclass(frozen=True)
class StreamFunction:
    """A function whose labels are the digits of a ternary stream."""

    stream: DigitStream
    depth: int = kernels.MAX_DEPTH

    def __post_init__(self):
        if self.stream.alphabet_size != 3:
            raise ValueError("function streams are 3-ary")
        if not 0 <= self.depth <= kernels.MAX_DEPTH:
            raise ValueError(f"depth must be at most {kernels.MAX_DEPTH}")

    def label(self, i: int) -> int:
        return self.stream.digit(i - 1)

    def children(self, i: int) -> tuple[int, int]:
        a, b = self.stream.digits(2 * i, 2)
        return a, b

    def materialize(self, depth: int) -> FunctionCode:
        return FunctionCode(self.stream.word(code_length(depth)), depth)


AnyFunction = Union[FunctionCode, StreamFunction]


class EvalStatus(enum.Enum):
    DECIDED = "Decided"
    EXHAUSTED = "Exhausted"


@dataclass(frozen=True)
class EvalResult:
    output: CodeWord
    status: EvalStatus
    k: int

    @property
    def decided(self) -> bool:
        return self.status is EvalStatus.DECIDED


def label_of(f: AnyFunction, node: BinaryWord) -> int:
    bits = as_bits(node)
    if not 1 <= len(bits) <= f.depth:
        raise OutOfRange(
            f"labels exist for nodes of length 1..{f.depth}, got {bits!r}")
    return f.label(index_of(bits))


def evaluate(f: AnyFunction, y: BinaryWord, k: int | None = None) -> EvalResult:
    """Apply ``f`` to the finite input ``y``, keeping at most ``k`` bits.

    ``k`` defaults to ``len(y)``. The status is Decided when at least ``k``
    non-2 labels occur along ``y``.
    """
    bits = as_bits(y)
    if len(bits) > f.depth:
        raise OutOfRange(f"input longer than function depth {f.depth}")
    if k is None:
        k = len(bits)
    out = []
    i = 0
    for b in bits:
        if len(out) >= k:
            break
        i = 2 * i + 1 + (b == "1")
        lab = f.label(i)
        if lab != 2:
            out.append(lab)
    status = EvalStatus.DECIDED if len(out) >= k else EvalStatus.EXHAUSTED
    return EvalResult(CodeWord(2, tuple(out)), status, k)


def zeros_tree(f: AnyFunction, depth: int) -> FiniteTree:
    """Nodes all of whose path labels lie in {0, 2}."""
    if depth > f.depth:
        raise OutOfRange(f"depth {depth} exceeds function depth {f.depth}")
    members = [""]
    level = [(0, "")]
    for _ in range(depth):
        nxt = []
        for i, w in level:
            a, b = f.children(i)
            if a != 1:
                nxt.append((2 * i + 1, w + "0"))
            if b != 1:
                nxt.append((2 * i + 2, w + "1"))
        members.extend(w for _, w in nxt)
        level = nxt
        if not level:
            break
    return FiniteTree(depth, members)


def gw_digit(left_label: int, right_label: int) -> int:
    """4-ary tree digit induced by the labels of a node's two children."""
    left = left_label != 1
    right = right_label != 1
    if left and right:
        return 2
    if left:
        return 0
    if right:
        return 1
    return 3


def induced_gw_code(f: AnyFunction, depth: int) -> CodeWord:
    """The 4-ary code of ``zeros_tree(f, depth)``, emitted breadth-first."""
    if depth > f.depth:
        raise OutOfRange(f"depth {depth} exceeds function depth {f.depth}")
    out = []
    level = [0]
    for _ in range(depth):
        nxt = []
        for i in level:
            a, b = f.children(i)
            out.append(gw_digit(a, b))
            if a != 1:
                nxt.append(2 * i + 1)
            if b != 1:
                nxt.append(2 * i + 2)
        level = nxt
        if not level:
            break
    return CodeWord(4, tuple(out))


def sample_function_with_zeros(tree: FiniteTree, aux: DigitStream,
                               depth: int) -> FunctionCode:
    """Sample a function code whose zeros tree is ``tree`` up to ``depth``.

    Children of a tree member get label 1 when they are outside the tree
    and a uniform label in {0, 2} when inside; every other node gets a
    uniform label in {0, 1, 2}. These are the exact conditionals of uniform
    labels given the tree. Coins come from ``aux`` over alphabet 2 and the
    free labels from alphabet 3, both indexed by code position.
    """
    if tree.depth < depth:
        raise ValueError(f"tree depth {tree.depth} is below {depth}")
    members = tree.members
    n = code_length(depth)
    coins = aux.with_alphabet(2).digits(0, n)
    free = aux.with_alphabet(3).digits(0, n)
    labels = [0] * n
    for pos in range(n):
        node = str(word_at(pos + 1))
        parent = node[:-1]
        if parent in members:
            labels[pos] = (2 if coins[pos] else 0) if node in members else 1
        else:
            labels[pos] = free[pos]
    return FunctionCode(CodeWord(3, tuple(labels)), depth)


def _target_bytes(target: BinaryWord) -> bytes:
    return bytes(int(b) for b in as_bits(target))


def _check_detector_depth(f, d):
    if d > f.depth:
        raise OutOfRange(f"detector depth {d} exceeds function depth {f.depth}")
    if d > kernels.MAX_DEPTH:
        raise OutOfRange(f"detector depth is limited to {kernels.MAX_DEPTH}")


def _hit_pair(f: AnyFunction, target: BinaryWord, d: int) -> tuple[bool, bool]:
    _check_detector_depth(f, d)
    t = _target_bytes(target)
    if isinstance(f, StreamFunction):
        s = f.stream
        return kernels.hit_search(s.master_seed, s.stream_id, s.lane, t, d)
    return kernels.hit_search_labels(f.children, t, d)


def hit_witnessed(f: AnyFunction, target: BinaryWord, d: int) -> bool:
    """Some depth-``d`` node already outputs ``target`` (lower detector)."""
    return _hit_pair(f, target, d)[0]


def hit_possible(f: AnyFunction, target: BinaryWord, d: int) -> bool:
    """Some depth-``d`` node is still consistent with ``target`` (upper detector)."""
    return _hit_pair(f, target, d)[1]


def hit_bracket(f: AnyFunction, target: BinaryWord, d: int) -> tuple[bool, bool]:
    """``(hit_witnessed, hit_possible)`` from a single walk."""
    return _hit_pair(f, target, d)


def level_hits(f: AnyFunction, n: int, d: int) -> tuple[bytes, bytes]:
    """Witnessed and possible flags for all ``2**n`` words of length ``n``.

    Entry ``j`` refers to the word ``format(j, f"0{n}b")``.
    """
    _check_detector_depth(f, d)
    if isinstance(f, StreamFunction):
        s = f.stream
        return kernels.level_hits(s.master_seed, s.stream_id, s.lane, n, d)
    w, p = kernels.level_hits_labels(f.children, n, d)
    return bytes(w), bytes(p)


def onto_up_to_level(f: AnyFunction, n: int, d: int) -> bool:
    """Every word of length ``n`` is witnessed as hit by depth ``d``."""
    witnessed, _ = level_hits(f, n, d)
    return all(witnessed)


def preimage_mass(f: AnyFunction, target: BinaryWord, d: int) -> tuple[Fraction, Fraction]:
    """Bracket on the Lebesgue measure of inputs mapped into ``[target]``."""
    _check_detector_depth(f, d)
    t = _target_bytes(target)
    if isinstance(f, StreamFunction):
        s = f.stream
        lo, hi = kernels.preimage_mass(s.master_seed, s.stream_id, s.lane, t, d)
    else:
        lo, hi = kernels.preimage_mass_labels(f.children, t, d)
    scale = 1 << d
    return Fraction(lo, scale), Fraction(hi, scale)


def gw_code(stream: DigitStream, length: int, start: int = 0) -> CodeWord:
    """i.i.d. 4-ary digits with the zeros-tree law (2/9, 2/9, 4/9, 1/9).

    Digit ``j`` is ``gw_digit`` of ternary digits ``2j`` and ``2j + 1`` of
    ``stream``, i.e. the digit induced by a uniformly labeled pair of
    children.
    """
    if stream.alphabet_size != 3:
        raise ValueError("gw_code reads a ternary stream")
    t = stream.digits(2 * start, 2 * length)
    return CodeWord(4, tuple(gw_digit(t[2 * j], t[2 * j + 1]) for j in range(length)))
