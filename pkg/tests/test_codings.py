import pytest
from hypothesis import given, strategies as st

from randcantor.codings import (CodeWord, DigitStream, column_of, index_of, join_columns,
                                next_digit, pair, split_columns, unpair, word_at,
                                words_of_length)

bits = st.text(alphabet="01", max_size=40)


@pytest.mark.parametrize("word,index", [("", 0), ("0", 1), ("1", 2), ("00", 3),
                                        ("01", 4), ("10", 5), ("11", 6), ("000", 7)])
def test_enumeration_small_cases(word, index):
    assert index_of(word) == index
    assert str(word_at(index)) == word


@given(bits)
def test_enumeration_round_trip(w):
    assert str(word_at(index_of(w))) == w


@given(bits)
def test_enumeration_is_heap_order(w):
    i = index_of(w)
    assert index_of(w + "0") == 2 * i + 1
    assert index_of(w + "1") == 2 * i + 2


def test_enumeration_is_length_lex():
    words = [w for n in range(6) for w in words_of_length(n)]
    assert [index_of(w) for w in words] == list(range(len(words)))


@given(st.integers(0, 30), st.integers(0, 10**6))
def test_pairing_round_trip(n, k):
    assert unpair(pair(n, k)) == (n, k)


def test_pairing_is_a_bijection_on_an_initial_segment():
    seen = sorted(pair(n, k) for n in range(13) for k in range(2048) if pair(n, k) < 4096)
    assert seen == list(range(4096))


def test_join_single_column_is_identity():
    assert str(join_columns(["0110"])) == "0110"


@given(st.lists(bits, min_size=1, max_size=5))
def test_split_inverts_join(cols):
    word = join_columns(cols)
    again = join_columns(split_columns(word, len(cols)))
    assert again == word


@given(st.text(alphabet="01", min_size=1, max_size=64), st.integers(0, 4))
def test_column_of_reads_pairing_positions(w, n):
    col = column_of(CodeWord.binary(w), n)
    assert [str(d) for d in col] == [w[pair(n, k)] for k in range(len(col))]


def test_join_columns_places_first_column_on_even_positions():
    word = str(join_columns(["000", "111"]))
    assert word == "010101"[:len(word)]
    assert str(column_of(CodeWord.binary(word), 0)) == "000"


def test_codeword_validation():
    with pytest.raises(ValueError):
        CodeWord.parse("013", 3)
    with pytest.raises(ValueError):
        CodeWord(5, (0,))
    w = CodeWord.parse("0120", 3)
    assert str(w) == "0120" and len(w) == 4 and w[1] == 1
    assert str(w[1:3]) == "12"
    assert CodeWord.parse("01", 3).is_prefix_of(w)


def test_digit_stream_is_positional():
    s = DigitStream(3, 17, 3)
    assert s.digits(10, 5) == [s.digit(p) for p in range(10, 15)]
    assert next_digit(s, 12) == s.digit(12)
    assert s.word(6) == DigitStream(3, 17, 3).word(6)
    assert s.with_alphabet(2).alphabet_size == 2


def test_digit_stream_rejects_bad_keys():
    with pytest.raises(ValueError):
        DigitStream(-1, 0, 2)
    with pytest.raises(ValueError):
        DigitStream(0, 2**64, 2)
    with pytest.raises(ValueError):
        DigitStream(0, 0, 5)
