# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pycore`` for the semantics of every function."""

from libc.stdint cimport uint64_t, uint8_t

cdef extern from *:
    """
    #include <stdint.h>
    typedef unsigned __int128 rc_u128;

    static inline void rc_philox4x64(uint64_t c[4], uint64_t k0, uint64_t k1,
                                     uint64_t out[4]) {
        uint64_t c0 = c[0], c1 = c[1], c2 = c[2], c3 = c[3];
        for (int r = 0; r < 10; ++r) {
            if (r) {
                k0 += 0x9E3779B97F4A7C15ULL;
                k1 += 0xBB67AE8584CAA73BULL;
            }
            rc_u128 p0 = (rc_u128)0xD2E7470EE14C6C93ULL * c0;
            rc_u128 p1 = (rc_u128)0xCA5A826395121157ULL * c2;
            uint64_t n0 = (uint64_t)(p1 >> 64) ^ c1 ^ k0;
            uint64_t n1 = (uint64_t)p1;
            uint64_t n2 = (uint64_t)(p0 >> 64) ^ c3 ^ k1;
            uint64_t n3 = (uint64_t)p0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        }
        out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
    }

    static inline unsigned rc_ternary(uint64_t w) {
        return (unsigned)(((rc_u128)w * 3u) >> 64);
    }
    """
    void rc_philox4x64(uint64_t c[4], uint64_t k0, uint64_t k1, uint64_t out[4]) nogil
    unsigned rc_ternary(uint64_t w) nogil

BACKEND = "compiled"
DEF MAX_DEPTH = 62
DEF STACK = 2 * MAX_DEPTH + 8
cdef object MASK64 = (1 << 64) - 1


def _check_key(seed, stream_id, lane, alphabet):
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    if not 0 <= stream_id <= MASK64:
        raise ValueError(f"stream_id must fit in 64 bits, got {stream_id}")
    if not 0 <= lane <= MASK64:
        raise ValueError(f"lane must fit in 64 bits, got {lane}")
    if alphabet not in (2, 3, 4):
        raise ValueError(f"alphabet must be 2, 3 or 4, got {alphabet}")


def _check_depth(depth):
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in [0, {MAX_DEPTH}], got {depth}")


def philox4x64(c0, c1, c2, c3, k0, k1):
    cdef uint64_t c[4]
    cdef uint64_t out[4]
    c[0] = c0; c[1] = c1; c[2] = c2; c[3] = c3
    rc_philox4x64(c, k0, k1, out)
    return out[0], out[1], out[2], out[3]


cdef inline unsigned _slice(uint64_t word, int alphabet, int shift) nogil:
    if alphabet == 2:
        return (word >> shift) & 1
    if alphabet == 4:
        return (word >> shift) & 3
    return rc_ternary(word)


cdef inline void _split(uint64_t p, int alphabet, uint64_t* block,
                        int* word, int* shift) nogil:
    if alphabet == 2:
        block[0] = p >> 8; word[0] = (p >> 6) & 3; shift[0] = p & 63
    elif alphabet == 4:
        block[0] = p >> 7; word[0] = (p >> 5) & 3; shift[0] = 2 * (p & 31)
    else:
        block[0] = p >> 2; word[0] = p & 3; shift[0] = 0


def digit(seed, stream_id, lane, int alphabet, position):
    _check_key(seed, stream_id, lane, alphabet)
    if position < 0:
        raise ValueError("position must be non-negative")
    if position > MASK64:
        raise ValueError(f"position {position} is beyond the stream period")
    cdef uint64_t c[4]
    cdef uint64_t out[4]
    cdef uint64_t block
    cdef int word, shift
    _split(position, alphabet, &block, &word, &shift)
    c[0] = block; c[1] = lane; c[2] = alphabet; c[3] = 0
    rc_philox4x64(c, seed, stream_id, out)
    return _slice(out[word], alphabet, shift)


def digits(seed, stream_id, lane, int alphabet, start, count):
    _check_key(seed, stream_id, lane, alphabet)
    if start < 0 or count < 0:
        raise ValueError("start and count must be non-negative")
    if count and start + count - 1 > MASK64:
        raise ValueError("positions beyond the stream period")
    cdef uint64_t c[4]
    cdef uint64_t out[4]
    cdef uint64_t k0 = seed, k1 = stream_id
    cdef uint64_t p = start, end = start + count if count else start
    cdef uint64_t block, cached = 0
    cdef bint have = False
    cdef int word, shift
    cdef bytearray buf = bytearray(count)
    cdef unsigned char* b = buf
    cdef Py_ssize_t j = 0
    c[1] = lane; c[2] = alphabet; c[3] = 0
    while j < count:
        _split(p, alphabet, &block, &word, &shift)
        if not have or block != cached:
            c[0] = block
            rc_philox4x64(c, k0, k1, out)
            cached = block
            have = True
        b[j] = _slice(out[word], alphabet, shift)
        j += 1
        p += 1
    return list(buf)


cdef inline void _children(uint64_t i, uint64_t lane, uint64_t k0,
                           uint64_t k1, unsigned* a, unsigned* bb) nogil:
    cdef uint64_t c[4]
    cdef uint64_t out[4]
    cdef uint64_t p = 2 * i
    cdef int w = p & 3
    c[0] = p >> 2; c[1] = lane; c[2] = 3; c[3] = 0
    rc_philox4x64(c, k0, k1, out)
    a[0] = rc_ternary(out[w])
    bb[0] = rc_ternary(out[w + 1])


def hit_search(seed, stream_id, lane, target, int depth):
    _check_key(seed, stream_id, lane, 3)
    _check_depth(depth)
    cdef bytes t = bytes(target)
    cdef int m = len(t)
    if m == 0:
        return True, True
    cdef const unsigned char* tg = t
    cdef uint64_t k0 = seed, k1 = stream_id, ln = lane
    cdef uint64_t si[STACK]
    cdef int sd[STACK]
    cdef int sk[STACK]
    cdef int top = 0
    cdef uint64_t i
    cdef int d, k, c
    cdef unsigned lab[2]
    cdef bint possible = False
    cdef bint found = False
    si[0] = 0; sd[0] = 0; sk[0] = 0; top = 1
    with nogil:
        while top > 0 and not found:
            top -= 1
            i = si[top]; d = sd[top]; k = sk[top]
            if d == depth:
                possible = True
                continue
            _children(i, ln, k0, k1, &lab[0], &lab[1])
            for c in range(2):
                if lab[c] == 2:
                    si[top] = 2 * i + 1 + c; sd[top] = d + 1; sk[top] = k
                    top += 1
                elif lab[c] == tg[k]:
                    if k + 1 == m:
                        found = True
                        break
                    si[top] = 2 * i + 1 + c; sd[top] = d + 1; sk[top] = k + 1
                    top += 1
    if found:
        return True, True
    return False, bool(possible)


def level_hits(seed, stream_id, lane, int n, int depth):
    _check_key(seed, stream_id, lane, 3)
    _check_depth(depth)
    if not 0 <= n <= 20:
        raise ValueError("level must be in [0, 20]")
    cdef Py_ssize_t size = 1 << n
    cdef bytearray wbuf = bytearray(size)
    cdef bytearray pbuf = bytearray(size)
    cdef unsigned char* wit = wbuf
    cdef unsigned char* pos = pbuf
    if n == 0:
        wit[0] = 1; pos[0] = 1
        return bytes(wbuf), bytes(pbuf)
    cdef uint64_t k0 = seed, k1 = stream_id, ln = lane
    cdef uint64_t si[STACK]
    cdef int sd[STACK]
    cdef int sk[STACK]
    cdef uint64_t sp[STACK]
    cdef int top = 1
    cdef uint64_t i, prefix, lo, j
    cdef int d, k, c
    cdef unsigned lab[2]
    cdef Py_ssize_t remaining = size
    si[0] = 0; sd[0] = 0; sk[0] = 0; sp[0] = 0
    with nogil:
        while top > 0:
            top -= 1
            i = si[top]; d = sd[top]; k = sk[top]; prefix = sp[top]
            if k == n:
                if not wit[prefix]:
                    wit[prefix] = 1
                    remaining -= 1
                pos[prefix] = 1
                if remaining == 0:
                    for j in range(<uint64_t>size):
                        pos[j] = 1
                    break
                continue
            if d == depth:
                lo = prefix << (n - k)
                for j in range(lo, lo + (<uint64_t>1 << (n - k))):
                    pos[j] = 1
                continue
            _children(i, ln, k0, k1, &lab[0], &lab[1])
            for c in range(2):
                si[top] = 2 * i + 1 + c; sd[top] = d + 1
                if lab[c] == 2:
                    sk[top] = k; sp[top] = prefix
                else:
                    sk[top] = k + 1; sp[top] = 2 * prefix + lab[c]
                top += 1
    return bytes(wbuf), bytes(pbuf)


def preimage_mass(seed, stream_id, lane, target, int depth):
    _check_key(seed, stream_id, lane, 3)
    _check_depth(depth)
    cdef bytes t = bytes(target)
    cdef int m = len(t)
    if m == 0:
        return 1 << depth, 1 << depth
    cdef const unsigned char* tg = t
    cdef uint64_t k0 = seed, k1 = stream_id, ln = lane
    cdef uint64_t si[STACK]
    cdef int sd[STACK]
    cdef int sk[STACK]
    cdef int top = 1
    cdef uint64_t i, w
    cdef uint64_t lower = 0, upper = 0
    cdef int d, k, c
    cdef unsigned lab[2]
    si[0] = 0; sd[0] = 0; sk[0] = 0
    with nogil:
        while top > 0:
            top -= 1
            i = si[top]; d = sd[top]; k = sk[top]
            if k == m:
                w = (<uint64_t>1) << (depth - d)
                lower += w
                upper += w
                continue
            if d == depth:
                upper += 1
                continue
            _children(i, ln, k0, k1, &lab[0], &lab[1])
            for c in range(2):
                if lab[c] == 2:
                    si[top] = 2 * i + 1 + c; sd[top] = d + 1; sk[top] = k
                    top += 1
                elif lab[c] == tg[k]:
                    si[top] = 2 * i + 1 + c; sd[top] = d + 1; sk[top] = k + 1
                    top += 1
    return int(lower), int(upper)
