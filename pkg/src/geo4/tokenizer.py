import re
from dataclasses import dataclass
from typing import Iterator, Type


@dataclass
class Token:
    value: str
    position: int = 0

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}("{self.value}")'


class NameToken(Token):
    pass


class IntegerToken(Token):
    pass


class PunctuationToken(Token):
    pass


class TokenizeError(Exception):
    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


_TOKEN = re.compile(r"(?P<name>[^\W\d][\w']*)|(?P<integer>-?\d+)|(?P<punctuation>[(),;=])")
_TOKEN_CLASSES = {
    "name": NameToken,
    "integer": IntegerToken,
    "punctuation": PunctuationToken,
}


def tokenize(s: str) -> Iterator[Token]:
    """
    Split a construction expression into names, integers and punctuation.
    Names may contain non-ASCII letters and primes (Σ_g, T').

    >>> list(tokenize("(k=2)"))
    [PunctuationToken("("), NameToken("k"), PunctuationToken("="), IntegerToken("2"), PunctuationToken(")")]
    >>> list(tokenize("fsum(Σ_g,Σ; "))[:4]
    [NameToken("fsum"), PunctuationToken("("), NameToken("Σ_g"), PunctuationToken(",")]
    """
    position = 0
    while position < len(s):
        if s[position].isspace():
            position += 1
            continue
        m = _TOKEN.match(s, position)
        if not m:
            raise TokenizeError(f"Unexpected character {s[position]!r} at position {position}", position)
        assert m.lastgroup is not None
        token_class: Type[Token] = _TOKEN_CLASSES[m.lastgroup]
        yield token_class(m.group(), position)
        position = m.end()
