import pytest

from stripcut.braids import BraidParseError, BraidWord, Letter, parse_braid


def test_parse_tokens_and_exponents():
    w = parse_braid("s1 S2 d1.3 D2.4^2 s3^3", 4)
    assert [l.to_text() for l in w] == ["s1", "S2", "d1.3", "D2.4^2", "s3^3"]
    assert w.letters[3] == Letter.band(2, 4, -2)


def test_strand_count_from_text_and_default():
    assert parse_braid("-n 5 s1").n == 5
    assert parse_braid("s4").n == 5
    assert parse_braid("").n == 3
    assert parse_braid("-n 5 s1", 6).n == 6


@pytest.mark.parametrize("text,token", [
    ("s1 x2", 2),
    ("s1 s0", 2),
    ("d3.2", 1),
    ("d1", 1),
    ("s1.2", 1),
    ("s1^0", 1),
    ("-n", 1),
])
def test_parse_errors_cite_token(text, token):
    with pytest.raises(BraidParseError) as info:
        parse_braid(text, 4)
    assert info.value.token == token


def test_out_of_range_generator():
    with pytest.raises(BraidParseError) as info:
        parse_braid("s1 s3", 3)
    assert info.value.token == 2 and info.value.offset == 3


def test_too_few_strands():
    with pytest.raises(BraidParseError):
        parse_braid("s1", 2)
    with pytest.raises(ValueError):
        BraidWord(2)


def test_band_expansion_matches_half_twist_word():
    # Delta_{1,3} = s2 s1 s2 (written order), and its inverse reverses it
    assert Letter.band(1, 3).artin() == [(1, 1), (2, 1), (1, 1)]
    assert Letter.band(1, 3, -1).artin() == [(1, -1), (2, -1), (1, -1)]
    assert Letter.band(2, 3).artin() == [(2, 1)]


def test_inverse_and_merge():
    w = parse_braid("s1 s2 S2 s1", 3)
    assert w.merged().to_text() == "s1^2"
    assert (w * w.inverse()).merged().to_text() == ""
    assert w.inverse().to_text() == "S1 s2 S2 S1"


def test_rotations_cover_all_shifts():
    w = parse_braid("s1 s2 S1", 3)
    assert [r.to_text() for r in w.rotations()] == ["s1 s2 S1", "s2 S1 s1", "S1 s1 s2"]
    assert BraidWord(3).rotations() == [BraidWord(3)]
