import pytest
from hypothesis import given, settings, strategies as st

from fanshift.errors import ResourceCapExceeded
from fanshift.itinerary import (
    Letter,
    Word,
    address_value,
    cantor_address,
    cantor_certificate,
    count_words_recurrence,
    encoding_positions,
    enumerate_words,
    extensions,
    is_admissible,
    letters_with_domain,
    letters_with_range,
)

from _util import random_letter_chain, rng


def literal_successors(lt: Letter) -> set[Letter]:
    """The successor table spelled out case by case, used as the oracle
    for the chaining rule (stay/up/down per interval, with the shared
    letter on interval 1)."""
    ell, j = lt.ell, lt.j
    if ell == 1:
        if j == 2:
            return {Letter(1, 2), Letter(1, 3)}
        return {Letter(2, 1), Letter(2, 2), Letter(2, 3)}
    if j == 1:
        if ell == 2:
            return {Letter(1, 2), Letter(1, 3)}
        return {Letter(ell - 1, 1), Letter(ell - 1, 2), Letter(ell - 1, 3)}
    if j == 2:
        return {Letter(ell, 1), Letter(ell, 2), Letter(ell, 3)}
    return {Letter(ell + 1, 1), Letter(ell + 1, 2), Letter(ell + 1, 3)}


def test_letter_normalization_and_ranges():
    assert Letter(1, 1) == Letter(1, 2)
    assert Letter(1, 2).range_index == 1
    assert Letter(1, 3).range_index == 2
    assert Letter(2, 1).range_index == 1
    assert Letter(5, 2).range_index == 5
    with pytest.raises(ValueError):
        Letter(0, 2)
    with pytest.raises(ValueError):
        Letter(3, 4)


def test_letter_sets():
    assert letters_with_domain(1) == (Letter(1, 2), Letter(1, 3))
    assert letters_with_domain(4) == (Letter(4, 1), Letter(4, 2), Letter(4, 3))
    assert letters_with_range(1) == (Letter(1, 2), Letter(2, 1))
    assert letters_with_range(2) == (Letter(1, 3), Letter(2, 2), Letter(3, 1))
    assert letters_with_range(5) == (Letter(4, 3), Letter(5, 2), Letter(6, 1))


def test_admissibility_examples():
    assert is_admissible((Letter(1, 2), Letter(1, 3), Letter(2, 2)))
    assert not is_admissible((Letter(1, 3), Letter(1, 2)))
    assert is_admissible((Letter(3, 1), Letter(2, 1), Letter(1, 2)))


def test_admissibility_matches_literal_case_table():
    r = rng(0)
    for _ in range(100_000):
        a = Letter(r.randint(1, 6), r.randint(1, 3))
        b = Letter(r.randint(1, 7), r.randint(1, 3))
        assert is_admissible((a, b)) == (b in literal_successors(a))


@given(st.data())
@settings(max_examples=300)
def test_chains_built_from_literal_table_are_admissible(data):
    r = rng(data.draw(st.integers(0, 10_000)))
    chain = [Letter(r.randint(1, 5), r.randint(1, 3))]
    for _ in range(data.draw(st.integers(1, 8))):
        chain.append(r.choice(sorted(literal_successors(chain[-1]))))
    assert is_admissible(tuple(chain))


def test_index_drift_at_most_one_per_step():
    r = rng(1)
    for _ in range(2000):
        chain = random_letter_chain(r, 10)
        for a, b in zip(chain, chain[1:]):
            assert abs(b.domain_index - a.domain_index) <= 1


def test_word_validation():
    with pytest.raises(ValueError):
        Word(())
    with pytest.raises(ValueError):
        Word((Letter(1, 3), Letter(1, 2)))
    w = Word((Letter(1, 2), Letter(1, 3)), start=-1)
    assert w.domain_at(-1) == 1
    assert w.domain_at(0) == 1
    assert w.domain_at(1) == 2  # range of the final letter
    with pytest.raises(IndexError):
        w.letter(1)


def test_extensions_examples():
    assert extensions(Word((Letter(1, 2),)), "right") == (Letter(1, 2), Letter(1, 3))
    assert extensions(Word((Letter(1, 3),)), "right") == (
        Letter(2, 1),
        Letter(2, 2),
        Letter(2, 3),
    )
    assert extensions(Word((Letter(1, 2),)), "left") == (Letter(1, 2), Letter(2, 1))


def test_extension_set_sizes():
    r = rng(2)
    for _ in range(500):
        w = Word(tuple(random_letter_chain(r, 6)))
        right = extensions(w, "right")
        left = extensions(w, "left")
        assert len(right) == (2 if w.letters[-1].range_index == 1 else 3)
        assert len(left) == (2 if w.letters[0].domain_index == 1 else 3)
        assert len(right) >= 2 and len(left) >= 2


def test_enumerate_word_counts():
    assert len(enumerate_words(1, 1)) == 2
    assert len(enumerate_words(3, 1)) == 3
    assert len(enumerate_words(1, 2)) == 5


def test_enumeration_matches_recurrence_exhaustively():
    for k in range(1, 7):
        expected = count_words_recurrence(k, 10)
        for n in range(1, 11):
            assert len(enumerate_words(k, n)) == expected[n - 1]


def test_enumeration_cap():
    with pytest.raises(ResourceCapExceeded):
        enumerate_words(5, 10, cap=100)


def test_two_sided_enumeration():
    words = enumerate_words(1, 4, start=-2)
    assert len(words) == 25
    for w in words:
        assert w.start == -2
        assert w.domain_at(0) == 1


def test_certificate_small():
    cert = cantor_certificate(1, 8)
    assert cert.passed
    assert cert.min_right_branching == 2
    assert cert.min_left_branching == 2
    assert cert.counts_by_length == cert.recurrence_counts
    cert5 = cantor_certificate(5, 8)
    assert cert5.passed
    assert cert5.min_left_branching == 3


def test_encoding_positions_order():
    assert encoding_positions(0, 3) == [0, 1, 2, 3]
    assert encoding_positions(-2, 1) == [0, -1, 1, -2]
    # symmetric growth appends, keeping earlier digits fixed
    assert encoding_positions(-3, 2) == encoding_positions(-2, 1) + [2, -3]


def test_address_digits_alphabet():
    for w in enumerate_words(2, 4):
        assert set(cantor_address(w)) <= {"0", "2"}


def test_addresses_injective_on_equal_length():
    for k in (1, 3):
        words = enumerate_words(k, 6)
        addrs = [cantor_address(w) for w in words]
        assert len(set(addrs)) == len(addrs)


def test_address_extension_preserves_prefix():
    r = rng(3)
    for _ in range(300):
        w = Word(tuple(random_letter_chain(r, 5)))
        addr = cantor_address(w)
        ext = r.choice(extensions(w, "right"))
        w2 = Word(w.letters + (ext,), w.start)
        assert cantor_address(w2).startswith(addr)


def test_address_symmetric_extension_preserves_prefix():
    r = rng(4)
    for _ in range(300):
        chain = random_letter_chain(r, 4)
        w = Word(tuple(chain), start=-2)
        addr = cantor_address(w)
        right = r.choice(letters_with_domain(w.domain_at(w.stop)))
        left = r.choice(letters_with_range(w.domain_at(w.start)))
        w2 = Word((left,) + w.letters + (right,), w.start - 1)
        assert cantor_address(w2).startswith(addr)


def test_addresses_separated_in_chunk_metric():
    # computed with the chosen block encoding: length-4 words through
    # interval 3 sit at least 3^-12 apart once embedded in their chunk
    words = enumerate_words(3, 4)
    values = sorted(3.0**-3 * address_value(cantor_address(w)) for w in words)
    gaps = [b - a for a, b in zip(values, values[1:])]
    assert min(gaps) >= 3.0**-12


def test_address_value_examples():
    assert address_value("") == 0.0
    assert address_value("2") == 2 / 3
    assert address_value("02") == 2 / 9
    with pytest.raises(ValueError):
        address_value("1")
