"""Trees coded by 3-ary and 4-ary reals, path selection, cover measures.

Codes are read breadth-first: the nodes that receive digits are the live
members of length below the requested depth, in length-lexicographic order.
Digit 0 keeps only the left child, 1 only the right child, 2 both, and (for
4-ary codes) 3 neither.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .codings import BinaryWord, CodeWord, DigitStream, as_bits
from .errors import DeadEnd, NeedMoreCode


class FiniteTree:
    """A prefix-closed set of binary words of length at most ``depth``."""

    __slots__ = ("depth", "_members", "_levels")

    def __init__(self, depth: int, members: Iterable[str]):
        members = frozenset(members)
        if "" not in members:
            raise ValueError("the empty word must be a member")
        for w in members:
            if len(w) > depth:
                raise ValueError(f"member {w!r} is deeper than {depth}")
            if w and w[:-1] not in members:
                raise ValueError(f"not prefix-closed: {w!r} lacks its parent")
        self.depth = depth
        self._members = members
        levels = [[] for _ in range(depth + 1)]
        for w in members:
            levels[len(w)].append(w)
        for lev in levels:
            lev.sort()
        self._levels = tuple(tuple(lev) for lev in levels)

    @property
    def members(self) -> frozenset[str]:
        return self._members

    def __contains__(self, word) -> bool:
        return as_bits(word) in self._members

    def __len__(self) -> int:
        return len(self._members)

    def __eq__(self, other):
        if not isinstance(other, FiniteTree):
            return NotImplemented
        return self.depth == other.depth and self._members == other._members

    def __hash__(self):
        return hash((self.depth, self._members))

    def __repr__(self):
        return f"FiniteTree(depth={self.depth}, size={len(self)})"

    def level(self, n: int) -> tuple[str, ...]:
        return self._levels[n]

    def restrict(self, depth: int) -> "FiniteTree":
        if depth > self.depth:
            raise ValueError("cannot restrict a tree to a larger depth")
        return FiniteTree(depth, (w for w in self._members if len(w) <= depth))

    def dead_ends(self) -> list[str]:
        """Members above the bottom level with no member child."""
        return [w for w in self._members if len(w) < self.depth
                and w + "0" not in self._members
                and w + "1" not in self._members]

    def to_json(self) -> dict:
        return {"depth": self.depth, "levels": [list(lev) for lev in self._levels]}

    @classmethod
    def from_json(cls, obj: Union[dict, str]) -> "FiniteTree":
        if isinstance(obj, str):
            obj = json.loads(obj)
        levels = obj["levels"]
        depth = int(obj["depth"])
        if len(levels) != depth + 1:
            raise ValueError("levels must have depth + 1 entries")
        members = [w for lev in levels for w in lev]
        for n, lev in enumerate(levels):
            for w in lev:
                if len(w) != n:
                    raise ValueError(f"word {w!r} listed at level {n}")
        return cls(depth, members)


@dataclass(frozen=True)
class DecodeReceipt:
    tree: FiniteTree
    digits_consumed: int
    extendible_order: tuple[str, ...]


def _digit_source(code, alphabet):
    """Return ``(getter, available)``; ``available`` is None for streams."""
    if isinstance(code, DigitStream):
        if code.alphabet_size != alphabet:
            raise ValueError(
                f"expected a {alphabet}-ary stream, got {code.alphabet_size}")
        cache = {}
        chunk = 256

        def get(i):
            base = i - i % chunk
            block = cache.get(base)
            if block is None:
                block = cache[base] = code.digits(base, chunk)
            return block[i - base]

        return get, None
    if isinstance(code, str):
        code = CodeWord.parse(code, alphabet)
    if not isinstance(code, CodeWord):
        raise TypeError(f"expected a CodeWord or DigitStream, got {type(code).__name__}")
    if code.alphabet_size != alphabet:
        raise ValueError(
            f"expected a {alphabet}-ary code, got alphabet {code.alphabet_size}")
    return code.digits.__getitem__, len(code)


def _decode(code, depth, alphabet):
    get, available = _digit_source(code, alphabet)
    members = [""]
    order = []
    level = [""]
    consumed = 0
    for _ in range(depth):
        nxt = []
        for pos, node in enumerate(level):
            if available is not None and consumed >= available:
                raise NeedMoreCode(consumed + len(level) - pos, available)
            d = get(consumed)
            consumed += 1
            order.append(node)
            if d == 0 or d == 2:
                nxt.append(node + "0")
            if d == 1 or d == 2:
                nxt.append(node + "1")
        members.extend(nxt)
        level = nxt
        if not level:
            break
    return DecodeReceipt(FiniteTree(depth, members), consumed, tuple(order))


def decode_tree3(code: Union[CodeWord, DigitStream, str], depth: int) -> DecodeReceipt:
    """Decode a 3-ary code into a tree with no dead ends above ``depth``."""
    return _decode(code, depth, 3)


def decode_tree4(code: Union[CodeWord, DigitStream, str], depth: int) -> DecodeReceipt:
    """Decode a 4-ary code; digit 3 makes the node a leaf."""
    return _decode(code, depth, 4)


def select_path(tree: FiniteTree, selector_bits: BinaryWord, n: int) -> CodeWord:
    """Follow the tree for ``n`` steps, consulting ``selector_bits[k]`` at
    step ``k`` whenever both children are members."""
    bits = as_bits(selector_bits)
    if n > tree.depth:
        raise ValueError(f"tree has depth {tree.depth} < {n}")
    if len(bits) < n:
        raise ValueError(f"need {n} selector bits, got {len(bits)}")
    sigma = ""
    for k in range(n):
        left = sigma + "0" in tree.members
        right = sigma + "1" in tree.members
        if left and right:
            sigma += bits[k]
        elif left:
            sigma += "0"
        elif right:
            sigma += "1"
        else:
            raise DeadEnd(sigma)
    return CodeWord.binary(sigma)


def cover_measure(tree: FiniteTree, n: int) -> Fraction:
    """Lebesgue measure of the union of cylinders over level ``n``."""
    if n > tree.depth:
        raise ValueError(f"level {n} exceeds tree depth {tree.depth}")
    return Fraction(len(tree.level(n)), 1 << n)


def tree_code_containing(y: BinaryWord, aux: DigitStream, depth: int) -> CodeWord:
    """A 3-ary code whose tree contains ``y`` restricted to ``depth``.

    Digits are drawn from the law of a uniform code conditioned on the tree
    containing ``y``: off the path they are uniform on ``{0, 1, 2}``, and on
    the path they are 2 or the direction of ``y`` with probability 1/2
    each. The ternary draws use ``aux`` over alphabet 3 and the coins use
    the same key over alphabet 2, both indexed by consumption position.
    """
    y = as_bits(y)
    if len(y) < depth:
        raise ValueError(f"|y| = {len(y)} is shorter than depth {depth}")
    ternary = aux.with_alphabet(3)
    coins = aux.with_alphabet(2)
    out = []
    level = [""]
    for _ in range(depth):
        nxt = []
        for node in level:
            i = len(out)
            if y.startswith(node):
                direction = int(y[len(node)])
                d = 2 if coins.digit(i) else direction
            else:
                d = ternary.digit(i)
            out.append(d)
            if d == 0 or d == 2:
                nxt.append(node + "0")
            if d == 1 or d == 2:
                nxt.append(node + "1")
        level = nxt
    return CodeWord(3, tuple(out))
