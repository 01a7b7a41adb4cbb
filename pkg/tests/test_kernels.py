import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randcantor import kernels
from randcantor.kernels import _pycore

from conftest import _ccore

u64 = st.integers(0, 2**64 - 1)


def numpy_philox_block(counter, key):
    """Philox4x64-10 through numpy; numpy bumps the counter before each block."""
    c = (counter[0] | counter[1] << 64 | counter[2] << 128 | counter[3] << 192) - 1
    c %= 1 << 256
    words = np.array([(c >> (64 * j)) & (2**64 - 1) for j in range(4)], dtype=np.uint64)
    bg = np.random.Philox(counter=words, key=np.array(key, dtype=np.uint64))
    return tuple(int(v) for v in bg.random_raw(4))


def test_known_answer_zero_counter_zero_key(backend):
    # Random123 known-answer vector for philox4x64-10
    out = backend.philox4x64(0, 0, 0, 0, 0, 0)
    assert out == (0x16554D9ECA36314C, 0xDB20FE9D672D0FDC,
                   0xD7E772CEE186176B, 0x7E68B68AEC7BA23B)


@settings(max_examples=200, deadline=None)
@given(st.tuples(u64, u64, u64, u64), st.tuples(u64, u64))
def test_philox_matches_numpy(counter, key):
    assert _pycore.philox4x64(*counter, *key) == numpy_philox_block(counter, key)


@pytest.mark.skipif(_ccore is None, reason="compiled kernels not built")
@settings(max_examples=200, deadline=None)
@given(st.tuples(u64, u64, u64, u64), st.tuples(u64, u64))
def test_compiled_philox_matches_python(counter, key):
    assert _ccore.philox4x64(*counter, *key) == _pycore.philox4x64(*counter, *key)


@pytest.mark.parametrize("alphabet", [2, 3, 4])
def test_digits_match_single_digit(backend, alphabet):
    ds = backend.digits(11, 3, 1, alphabet, 250, 300)
    assert ds == [backend.digit(11, 3, 1, alphabet, p) for p in range(250, 550)]
    assert set(ds) <= set(range(alphabet))


@pytest.mark.parametrize("alphabet", [2, 3, 4])
def test_digit_frequencies_are_uniform(alphabet):
    n = 60_000
    ds = kernels.digits(5, 9, 0, alphabet, 0, n)
    expected = n / alphabet
    chi2 = sum((ds.count(a) - expected) ** 2 / expected for a in range(alphabet))
    # 99.9% quantiles of chi-square with 1, 2, 3 degrees of freedom
    assert chi2 < {2: 10.83, 3: 13.82, 4: 16.27}[alphabet]


def test_alphabets_and_lanes_are_distinct_streams():
    a = kernels.digits(1, 1, 0, 2, 0, 256)
    b = kernels.digits(1, 1, 1, 2, 0, 256)
    c = kernels.digits(1, 2, 0, 2, 0, 256)
    assert a != b and a != c


@pytest.mark.skipif(_ccore is None, reason="compiled kernels not built")
@settings(max_examples=60, deadline=None)
@given(u64, st.integers(0, 10**6), st.integers(0, 3),
       st.lists(st.integers(0, 1), max_size=5), st.integers(0, 14))
def test_walkers_agree_across_backends(seed, sid, lane, target, depth):
    t = bytes(target)
    assert _ccore.hit_search(seed, sid, lane, t, depth) == \
        _pycore.hit_search(seed, sid, lane, t, depth)
    assert _ccore.preimage_mass(seed, sid, lane, t, depth) == \
        _pycore.preimage_mass(seed, sid, lane, t, depth)
    n = min(len(target), 4)
    assert _ccore.level_hits(seed, sid, lane, n, depth) == \
        _pycore.level_hits(seed, sid, lane, n, depth)


def test_walkers_reject_excessive_depth(backend):
    with pytest.raises(ValueError):
        backend.hit_search(0, 0, 0, b"\x00", kernels.MAX_DEPTH + 1)
    with pytest.raises(ValueError):
        backend.level_hits(0, 0, 0, 21, 10)


def test_label_walkers_match_stream_walkers():
    def children(i):
        a, b = _pycore.digits(4, 8, 0, 3, 2 * i, 2)
        return a, b

    t = bytes([0, 1, 1])
    assert _pycore.hit_search_labels(children, t, 12) == _pycore.hit_search(4, 8, 0, t, 12)
    assert _pycore.preimage_mass_labels(children, t, 12) == \
        _pycore.preimage_mass(4, 8, 0, t, 12)


def test_pure_python_fallback_selected_by_environment():
    env = dict(os.environ, RANDCANTOR_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c",
                          "from randcantor import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
