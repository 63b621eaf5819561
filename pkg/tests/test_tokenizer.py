import pytest

from geo4.tokenizer import IntegerToken, NameToken, PunctuationToken, TokenizeError, tokenize


def test_tokenize():
    tokens = list(tokenize("fsum(f, f; H(k=2), E(n=10))"))
    assert [t.value for t in tokens] == [
        "fsum", "(", "f", ",", "f", ";", "H", "(", "k", "=", "2", ")", ",",
        "E", "(", "n", "=", "10", ")", ")",
    ]
    assert isinstance(tokens[0], NameToken)
    assert isinstance(tokens[1], PunctuationToken)
    assert isinstance(tokens[10], IntegerToken)


def test_positions():
    tokens = list(tokenize("E( n = 2 )"))
    assert [t.position for t in tokens] == [0, 1, 3, 5, 7, 9]


def test_non_ascii_names():
    assert list(tokenize("Σ_g")) == [NameToken("Σ_g", 0)]
    assert list(tokenize("T'")) == [NameToken("T'", 0)]


def test_negative_integer():
    assert list(tokenize("-3")) == [IntegerToken("-3", 0)]


def test_empty():
    assert list(tokenize("")) == []
    assert list(tokenize("   ")) == []


def test_tokenize_error():
    with pytest.raises(TokenizeError) as e:
        list(tokenize("E(n=2) # E(n=4)"))
    assert e.value.position == 7
