"""
Parse construction expressions

    expr  := "fsum(" slot "," slot ";" expr "," expr ")"
           | "surgery(" slot ",(" int "," int ");" expr ")"
           | FAMILY "(" name "=" int { "," name "=" int } ")"

and their JSON form.
"""
from typing import Any, Dict, List, Mapping, Optional

from .catalog import Catalog
from .construct import Construction, ConstructionError, FiberSum, KnotSurgery, Leaf, MissingSlot, slot_table
from .swring import TorusKnot
from .tokenizer import IntegerToken, NameToken, PunctuationToken, Token, TokenizeError, tokenize

# ASCII spellings accepted for slot ids
SLOT_ALIASES = {
    "Sigma": "Σ",
    "Sigma_g": "Σ_g",
}


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSlot(ConstructionError):
    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


def _check_slot(expr: Construction, slot_id: str, token: Token) -> None:
    try:
        slots = slot_table(expr)
    except MissingSlot as e:
        raise UnknownSlot(str(e)) from None
    if all(slot.id != slot_id for slot in slots):
        available = ", ".join(slot.id for slot in slots) or "none"
        raise UnknownSlot(f"unknown slot '{slot_id}'; available: {available}", token.position)


class ExpressionParser:
    """
    Recursive-descent parser; blocks are resolved through the catalog while
    parsing, and slot ids are checked against the slots the sub-expression
    offers.
    """

    def __init__(self, catalog: Optional[Catalog] = None):
        self.catalog = catalog if catalog is not None else Catalog.default()
        self._tokens: List[Token] = []
        self._index = 0
        self._length = 0

    def parse(self, text: str) -> Construction:
        try:
            self._tokens = list(tokenize(text))
        except TokenizeError as e:
            raise ExpressionSyntaxError(str(e), e.position) from None
        self._index = 0
        self._length = len(text)
        if not self._tokens:
            raise ExpressionSyntaxError("empty expression", 0)
        expr = self._expression()
        if self._index < len(self._tokens):
            token = self._tokens[self._index]
            raise ExpressionSyntaxError(f"unexpected '{token.value}' after the expression", token.position)
        return expr

    def _peek(self) -> Optional[Token]:
        if self._index < len(self._tokens):
            return self._tokens[self._index]
        return None

    def _next(self, what: str) -> Token:
        token = self._peek()
        if token is None:
            raise ExpressionSyntaxError(f"expected {what} but the expression ended", self._length)
        self._index += 1
        return token

    def _expect(self, value: str) -> Token:
        token = self._next(f"'{value}'")
        if not isinstance(token, PunctuationToken) or token.value != value:
            raise ExpressionSyntaxError(f"expected '{value}', found '{token.value}'", token.position)
        return token

    def _name(self, what: str) -> NameToken:
        token = self._next(what)
        if not isinstance(token, NameToken):
            raise ExpressionSyntaxError(f"expected {what}, found '{token.value}'", token.position)
        return token

    def _integer(self) -> int:
        token = self._next("an integer")
        if not isinstance(token, IntegerToken):
            raise ExpressionSyntaxError(f"expected an integer, found '{token.value}'", token.position)
        return int(token.value)

    def _slot(self) -> NameToken:
        token = self._name("a slot id")
        token.value = SLOT_ALIASES.get(token.value, token.value)
        return token

    def _expression(self) -> Construction:
        token = self._name("a block or an operation")
        following = self._peek()
        if following is None or following.value != "(":
            raise ExpressionSyntaxError(f"expected '(' after '{token.value}'", token.position)
        if token.value == "fsum":
            return self._fiber_sum()
        if token.value == "surgery":
            return self._surgery()
        return self._block(token)

    def _fiber_sum(self) -> Construction:
        self._expect("(")
        left_slot = self._slot()
        self._expect(",")
        right_slot = self._slot()
        self._expect(";")
        left = self._expression()
        self._expect(",")
        right = self._expression()
        self._expect(")")
        _check_slot(left, left_slot.value, left_slot)
        _check_slot(right, right_slot.value, right_slot)
        return FiberSum(left, right, left_slot.value, right_slot.value)

    def _surgery(self) -> Construction:
        self._expect("(")
        slot = self._slot()
        self._expect(",")
        self._expect("(")
        p = self._integer()
        self._expect(",")
        q = self._integer()
        self._expect(")")
        self._expect(";")
        base = self._expression()
        self._expect(")")
        _check_slot(base, slot.value, slot)
        return KnotSurgery(base, slot.value, TorusKnot(p, q))

    def _block(self, family: NameToken) -> Construction:
        self._expect("(")
        params: Dict[str, int] = {}
        while True:
            name = self._name("a parameter name")
            if name.value in params:
                raise ExpressionSyntaxError(f"parameter '{name.value}' given twice", name.position)
            self._expect("=")
            params[name.value] = self._integer()
            token = self._next("',' or ')'")
            if token.value == ")":
                break
            if token.value != ",":
                raise ExpressionSyntaxError(f"expected ',' or ')', found '{token.value}'", token.position)
        return Leaf(self.catalog.resolve(family.value, params))


def parse_construction(text: str, catalog: Optional[Catalog] = None) -> Construction:
    return ExpressionParser(catalog).parse(text)


def expr_from_json(data: Mapping[str, Any], catalog: Optional[Catalog] = None) -> Construction:
    """Inverse of construct.expr_to_json"""
    catalog = catalog if catalog is not None else Catalog.default()
    op = data.get("op")
    if op == "block":
        return Leaf(catalog.resolve(data["family"], dict(data["params"])))
    if op == "fsum":
        left_slot, right_slot = data["slots"]
        return FiberSum(
            expr_from_json(data["left"], catalog), expr_from_json(data["right"], catalog),
            left_slot, right_slot)
    if op == "surgery":
        p, q = data["knot"]
        return KnotSurgery(expr_from_json(data["base"], catalog), data["slot"], TorusKnot(p, q))
    raise ValueError(f"unknown operation {op!r} in construction document")
