"""Pure-Python kernels.

Reference implementation of everything in :mod:`randcantor.kernels`. The
compiled module ``_ccore`` mirrors these functions one for one and must
produce identical results; ``tests/test_kernels.py`` checks that.

Random digits come from Philox4x64-10 used in counter mode. A stream is
keyed by ``(seed, stream_id)``; the 256-bit counter is
``(block, lane, alphabet, 0)``. Each block yields four 64-bit words, which
are sliced into digits:

* alphabet 2: 256 bits per block, bit ``p % 64`` of word ``(p // 64) % 4``;
* alphabet 4: 128 digits per block, two bits each;
* alphabet 3: 4 digits per block, ``(w * 3) >> 64`` of one word each
  (bias below 2**-62 per digit).

Trees are walked in heap numbering: node ``i`` has children ``2i+1`` and
``2i+2``, which coincides with the length-lexicographic index of binary
words. The label of node ``i >= 1`` in a function code is digit ``i - 1``.
"""

BACKEND = "python"

MASK64 = (1 << 64) - 1
MAX_DEPTH = 62

_M0 = 0xD2E7470EE14C6C93
_M1 = 0xCA5A826395121157
_W0 = 0x9E3779B97F4A7C15
_W1 = 0xBB67AE8584CAA73B


def philox4x64(c0, c1, c2, c3, k0, k1):
    """Philox4x64 with 10 rounds; returns a 4-tuple of 64-bit words."""
    for r in range(10):
        if r:
            k0 = (k0 + _W0) & MASK64
            k1 = (k1 + _W1) & MASK64
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = ((p1 >> 64) ^ c1 ^ k0, p1 & MASK64,
                          (p0 >> 64) ^ c3 ^ k1, p0 & MASK64)
    return c0, c1, c2, c3


def _check_key(seed, stream_id, lane, alphabet):
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    if not 0 <= stream_id <= MASK64:
        raise ValueError(f"stream_id must fit in 64 bits, got {stream_id}")
    if not 0 <= lane <= MASK64:
        raise ValueError(f"lane must fit in 64 bits, got {lane}")
    if alphabet not in (2, 3, 4):
        raise ValueError(f"alphabet must be 2, 3 or 4, got {alphabet}")


def _split(position, alphabet):
    if alphabet == 2:
        return position >> 8, (position >> 6) & 3, position & 63
    if alphabet == 4:
        return position >> 7, (position >> 5) & 3, 2 * (position & 31)
    return position >> 2, position & 3, 0


def _slice(word, alphabet, shift):
    if alphabet == 2:
        return (word >> shift) & 1
    if alphabet == 4:
        return (word >> shift) & 3
    return (word * 3) >> 64


def digit(seed, stream_id, lane, alphabet, position):
    _check_key(seed, stream_id, lane, alphabet)
    if position < 0:
        raise ValueError("position must be non-negative")
    block, word, shift = _split(position, alphabet)
    if block > MASK64:
        raise ValueError(f"position {position} is beyond the stream period")
    out = philox4x64(block, lane, alphabet, 0, seed, stream_id)
    return _slice(out[word], alphabet, shift)


def digits(seed, stream_id, lane, alphabet, start, count):
    """Digits at positions ``start .. start+count-1`` as a list."""
    _check_key(seed, stream_id, lane, alphabet)
    if start < 0 or count < 0:
        raise ValueError("start and count must be non-negative")
    out = []
    cached_block = -1
    words = None
    for p in range(start, start + count):
        block, word, shift = _split(p, alphabet)
        if block != cached_block:
            if block > MASK64:
                raise ValueError(f"position {p} is beyond the stream period")
            words = philox4x64(block, lane, alphabet, 0, seed, stream_id)
            cached_block = block
        out.append(_slice(words[word], alphabet, shift))
    return out


def stream_labeler(seed, stream_id, lane):
    """Return ``children(i) -> (label(2i+1), label(2i+2))`` for a stream."""
    _check_key(seed, stream_id, lane, 3)

    def children(i):
        # positions 2i and 2i+1 always share a Philox block
        p = 2 * i
        out = philox4x64(p >> 2, lane, 3, 0, seed, stream_id)
        w = p & 3
        return (out[w] * 3) >> 64, (out[w + 1] * 3) >> 64

    return children


def _check_depth(depth):
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in [0, {MAX_DEPTH}], got {depth}")


# Generic walkers over a ``children`` label callback. They back both the
# stream kernels below and evaluation of materialized function codes.

def hit_search_labels(children, target, depth):
    """(witnessed, possible) for the event "range meets [target]".

    ``witnessed``: some node at depth ``depth`` carries at least
    ``len(target)`` non-2 labels starting with ``target``.
    ``possible``: some node at that depth has non-2 labels consistent with
    ``target``.
    """
    m = len(target)
    if m == 0:
        return True, True
    stack = [(0, 0, 0)]
    possible = False
    while stack:
        i, d, k = stack.pop()
        if d == depth:
            possible = True
            continue
        labels = children(i)
        for c in (0, 1):
            lab = labels[c]
            if lab == 2:
                stack.append((2 * i + 1 + c, d + 1, k))
            elif lab == target[k]:
                if k + 1 == m:
                    return True, True
                stack.append((2 * i + 1 + c, d + 1, k + 1))
    return False, possible


def level_hits_labels(children, n, depth):
    """Witnessed and possible hit flags for every word of length ``n``.

    Returns two ``bytearray`` of length ``2**n`` indexed by the word read as
    a big-endian binary number.
    """
    size = 1 << n
    witnessed = bytearray(size)
    possible = bytearray(size)
    if n == 0:
        witnessed[0] = possible[0] = 1
        return witnessed, possible
    remaining = size
    stack = [(0, 0, 0, 0)]
    while stack:
        i, d, k, prefix = stack.pop()
        if k == n:
            if not witnessed[prefix]:
                witnessed[prefix] = 1
                remaining -= 1
            possible[prefix] = 1
            if remaining == 0:
                # every word witnessed, hence every word possible
                for j in range(size):
                    possible[j] = 1
                break
            continue
        if d == depth:
            lo = prefix << (n - k)
            for j in range(lo, lo + (1 << (n - k))):
                possible[j] = 1
            continue
        labels = children(i)
        for c in (0, 1):
            lab = labels[c]
            if lab == 2:
                stack.append((2 * i + 1 + c, d + 1, k, prefix))
            else:
                stack.append((2 * i + 1 + c, d + 1, k + 1, 2 * prefix + lab))
    return witnessed, possible


def preimage_mass_labels(children, target, depth):
    """Lebesgue mass of inputs whose output extends ``target``, bracketed.

    Returns integers ``(lower, upper)`` scaled by ``2**depth``: ``lower``
    counts inputs whose first ``depth`` bits already force the output into
    ``[target]``; ``upper`` adds inputs still consistent with it.
    """
    m = len(target)
    full = 1 << depth
    if m == 0:
        return full, full
    lower = 0
    upper = 0
    stack = [(0, 0, 0)]
    while stack:
        i, d, k = stack.pop()
        if k == m:
            w = 1 << (depth - d)
            lower += w
            upper += w
            continue
        if d == depth:
            upper += 1
            continue
        labels = children(i)
        for c in (0, 1):
            lab = labels[c]
            if lab == 2:
                stack.append((2 * i + 1 + c, d + 1, k))
            elif lab == target[k]:
                stack.append((2 * i + 1 + c, d + 1, k + 1))
    return lower, upper


def hit_search(seed, stream_id, lane, target, depth):
    _check_depth(depth)
    return hit_search_labels(stream_labeler(seed, stream_id, lane),
                             bytes(target), depth)


def level_hits(seed, stream_id, lane, n, depth):
    _check_depth(depth)
    if not 0 <= n <= 20:
        raise ValueError("level must be in [0, 20]")
    w, p = level_hits_labels(stream_labeler(seed, stream_id, lane), n, depth)
    return bytes(w), bytes(p)


def preimage_mass(seed, stream_id, lane, target, depth):
    _check_depth(depth)
    return preimage_mass_labels(stream_labeler(seed, stream_id, lane),
                                bytes(target), depth)
