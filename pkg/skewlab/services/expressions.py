"""Recursive-descent parser and evaluator for ring expressions.

Grammar:

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | NAME | "inv" "(" expr ")" | "(" expr ")"

Names are the generators of the target algebra. A trailing precision tag
"+ O(j^N)" is accepted and ignored, so rendered elements parse back.
"""

import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, List

from skewlab.exceptions import ExpressionError, NotInvertibleError

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")
_PRECISION_TAG = re.compile(r"\+\s*O\(\s*j\s*\^\s*\d+\s*\)\s*$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            offset = len(text[position:]) - len(text[position:].lstrip())
            raise ExpressionError(f"unexpected character {text[position + offset]!r}", position + offset)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def strip_precision_tag(text: str) -> str:
    return _PRECISION_TAG.sub("", text).rstrip()


class _Parser:
    def __init__(self, algebra: Any, text: str):
        self.algebra = algebra
        self.names: Dict[str, Any] = algebra.generators()
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text: str) -> None:
        if self.current.text != text:
            found = self.current.text or "end of input"
            raise ExpressionError(f"expected {text!r}, found {found!r}", self.current.position)
        self.advance()

    def parse(self) -> Any:
        value = self.expr()
        if self.current.kind != "end":
            raise ExpressionError(f"unexpected {self.current.text!r}", self.current.position)
        return value

    def expr(self) -> Any:
        algebra = self.algebra
        value = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = algebra.add(value, rhs) if op == "+" else algebra.sub(value, rhs)
        return value

    def term(self) -> Any:
        value = self.unary()
        while self.current.text == "*":
            self.advance()
            value = self.algebra.mul(value, self.unary())
        return value

    def unary(self) -> Any:
        if self.current.text == "-":
            self.advance()
            return self.algebra.neg(self.unary())
        return self.power()

    def power(self) -> Any:
        base = self.atom()
        if self.current.text != "^":
            return base
        self.advance()
        sign = 1
        if self.current.text == "-":
            self.advance()
            sign = -1
        token = self.advance()
        if token.kind != "int":
            raise ExpressionError("exponent must be an integer", token.position)
        return self._invert(lambda: self.algebra.pow(base, sign * int(token.text)), token.position)

    def atom(self) -> Any:
        token = self.advance()
        if token.kind == "int":
            return self.algebra.from_int(int(token.text))
        if token.text == "(":
            value = self.expr()
            self.expect(")")
            return value
        if token.kind == "name":
            if token.text == "inv" and self.current.text == "(":
                self.advance()
                value = self.expr()
                self.expect(")")
                return self._invert(lambda: self.algebra.inverse(value), token.position)
            if token.text not in self.names:
                raise ExpressionError(f"unknown generator {token.text!r}", token.position)
            return self.names[token.text]
        found = token.text or "end of input"
        raise ExpressionError(f"unexpected {found!r}", token.position)

    @staticmethod
    def _invert(compute, position: int) -> Any:
        try:
            return compute()
        except NotInvertibleError as exc:
            raise ExpressionError(f"not invertible: {exc}", position) from exc


def evaluate(algebra: Any, text: str) -> Any:
    """Evaluate text in algebra; products follow the algebra's left normal form."""
    text = strip_precision_tag(text)
    if not text.strip():
        raise ExpressionError("empty expression", 0)
    value = _Parser(algebra, text).parse()
    logger.debug("evaluated %r in %s", text, getattr(algebra, "name", algebra))
    return value


def render_result(algebra: Any, value: Any) -> str:
    """Canonical rendering, with the precision tag for truncated series."""
    render_truncated = getattr(algebra, "render_truncated", None)
    return render_truncated(value) if render_truncated else algebra.render(value)
