"""Recursive-descent parser for the evolution-equation mini-language.

Grammar (whitespace-insensitive)::

    equation := [sign] term (("+"|"-") term)* "=" "0"
    term     := [number "*"] [identifier "*"] factor ("*" factor)*
    factor   := trans | pow
    trans    := ("sin"|"cos") "(" "u" ")"
    pow      := base ["^" integer]
    base     := "u" ["_" subscript] | "(" pow ("*" pow)* ")" ["_" subscript]
    subscript:= ("x"|"t")+

Numbers may be written ``12``, ``0.5`` or ``3/2``. Identifiers in coefficient
position must be declared parameters. Every error carries the byte offset of the
offending token.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Collection
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from compactlab.config import get_settings
from compactlab.dsl.ast import Atom, EquationAST, Term

logger = logging.getLogger(__name__)

ErrorKind = Literal["syntax", "undeclared", "unsupported"]


class EquationParseError(ValueError):
    """Raised for malformed or unsupported equation text."""

    def __init__(self, message: str, offset: int, kind: ErrorKind = "syntax") -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.kind = kind


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+|\.\d+)?)|(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*^()=_]))"
)

_RESERVED = frozenset({"u", "sin", "cos"})


def _number(token: _Token) -> Fraction:
    try:
        return Fraction(token.text)
    except (ValueError, ZeroDivisionError) as e:
        raise EquationParseError(f"invalid number {token.text!r}", token.offset) from e


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | end
    text: str
    offset: int  # byte offset


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    position = 0
    # byte offsets differ from character offsets only for non-ASCII input
    byte_at = [len(text[:i].encode("utf-8")) for i in range(len(text) + 1)]
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN_RE.match(text, position)
        if match is None or match.end() == position:
            start = position + (len(text[position:]) - len(text[position:].lstrip()))
            raise EquationParseError(f"unexpected character {text[start]!r}", byte_at[start])
        kind = match.lastgroup or "op"
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), byte_at[start]))
        position = match.end()
    tokens.append(_Token("end", "", byte_at[len(text)]))
    return tokens


# --- intermediate parse tree -------------------------------------------------


@dataclass
class _AtomBase:
    x_order: int
    t_order: int
    offset: int


@dataclass
class _Group:
    items: list[_Pow]
    x_order: int
    t_order: int
    offset: int


@dataclass
class _Pow:
    base: _AtomBase | _Group
    exponent: int
    offset: int


@dataclass
class _Trans:
    kind: Literal["sin", "cos"]
    offset: int


class Parser:
    """Parse one equation string into an :class:`EquationAST`."""

    def __init__(
        self,
        text: str,
        parameters: Collection[str] = (),
        max_order: int | None = None,
    ) -> None:
        self.text = text
        self.parameters = frozenset(parameters)
        if max_order is None:
            max_order = get_settings().max_derivative_order
        self.max_order = max_order
        self.tokens = _tokenize(text)
        self.index = 0
        self.term_offsets: list[int] = []

    # --- token helpers ---

    @property
    def _current(self) -> _Token:
        return self.tokens[self.index]

    def _peek(self, ahead: int = 1) -> _Token:
        return self.tokens[min(self.index + ahead, len(self.tokens) - 1)]

    def _accept(self, text: str) -> bool:
        if self._current.kind == "op" and self._current.text == text:
            self.index += 1
            return True
        return False

    def _expect(self, text: str) -> _Token:
        token = self._current
        if token.kind == "op" and token.text == text:
            self.index += 1
            return token
        raise EquationParseError(f"expected {text!r}, found {self._describe(token)}", token.offset)

    @staticmethod
    def _describe(token: _Token) -> str:
        return "end of input" if token.kind == "end" else repr(token.text)

    # --- grammar ---

    def parse(self) -> EquationAST:
        terms: list[Term] = []
        sign = 1
        if self._accept("-"):
            sign = -1
        else:
            self._accept("+")
        while True:
            terms.append(self._term(sign))
            if self._accept("+"):
                sign = 1
            elif self._accept("-"):
                sign = -1
            else:
                break
        self._expect("=")
        zero = self._current
        if zero.kind != "number" or _number(zero) != 0:
            raise EquationParseError("right-hand side must be 0", zero.offset)
        self.index += 1
        if self._current.kind != "end":
            raise EquationParseError(
                f"unexpected {self._describe(self._current)}", self._current.offset
            )
        ast = EquationAST(terms=tuple(terms), parameters=self.parameters, source_text=self.text)
        self._check_time_term(ast)
        return ast

    def _term(self, sign: int) -> Term:
        start = self._current.offset
        self.term_offsets.append(start)
        coefficient = Fraction(sign)
        symbol: str | None = None

        if self._current.kind == "number":
            number = self._current
            coefficient *= _number(number)
            self.index += 1
            if coefficient == 0:
                raise EquationParseError("zero coefficient", number.offset, "unsupported")
            if not self._accept("*"):
                raise EquationParseError(
                    "a term needs a factor of u", self._current.offset, "unsupported"
                )

        if self._current.kind == "ident" and self._current.text not in _RESERVED:
            symbol = self._coefficient_symbol()

        factors = [self._factor()]
        while self._accept("*"):
            factors.append(self._factor())
        return self._assemble(factors, coefficient, symbol, start)

    def _coefficient_symbol(self) -> str:
        token = self._current
        follower = self._peek()
        if not (follower.kind == "op" and follower.text == "*"):
            raise EquationParseError(
                f"second dependent variable {token.text!r}", token.offset, "unsupported"
            )
        if token.text not in self.parameters:
            raise EquationParseError(
                f"undeclared parameter {token.text!r}", token.offset, "undeclared"
            )
        self.index += 2
        return token.text

    def _factor(self) -> _Pow | _Trans:
        token = self._current
        if token.kind == "ident" and token.text in ("sin", "cos"):
            self.index += 1
            self._expect("(")
            argument = self._current
            if argument.kind != "ident" or argument.text != "u":
                raise EquationParseError(
                    f"{token.text}() applies to u only", argument.offset, "unsupported"
                )
            self.index += 1
            self._expect(")")
            return _Trans(token.text, token.offset)  # type: ignore[arg-type]
        return self._pow()

    def _pow(self) -> _Pow:
        start = self._current.offset
        base = self._base()
        exponent = 1
        if self._accept("^"):
            token = self._current
            if token.kind != "number" or not token.text.isdigit() or int(token.text) < 1:
                raise EquationParseError("exponent must be a positive integer", token.offset)
            exponent = int(token.text)
            self.index += 1
        return _Pow(base, exponent, start)

    def _base(self) -> _AtomBase | _Group:
        token = self._current
        if token.kind == "ident":
            if token.text == "u":
                self.index += 1
                x_order, t_order = self._subscript()
                if x_order + t_order > self.max_order:
                    raise EquationParseError(
                        f"derivative order {x_order + t_order} exceeds maximum {self.max_order}",
                        token.offset,
                        "unsupported",
                    )
                return _AtomBase(x_order, t_order, token.offset)
            if token.text in self.parameters:
                raise EquationParseError(
                    f"parameter {token.text!r} must lead its term", token.offset, "unsupported"
                )
            raise EquationParseError(
                f"second dependent variable {token.text!r}", token.offset, "unsupported"
            )
        if token.kind == "op" and token.text == "(":
            self.index += 1
            items = [self._pow()]
            while self._accept("*"):
                items.append(self._pow())
            self._expect(")")
            x_order, t_order = self._subscript()
            return _Group(items, x_order, t_order, token.offset)
        raise EquationParseError(f"unexpected {self._describe(token)}", token.offset)

    def _subscript(self) -> tuple[int, int]:
        if not self._accept("_"):
            return 0, 0
        token = self._current
        if token.kind != "ident" or set(token.text) - {"x", "t"}:
            raise EquationParseError("subscript must be made of x and t", token.offset)
        self.index += 1
        return token.text.count("x"), token.text.count("t")

    # --- normalization into Terms ---

    def _flatten(self, item: _Pow) -> tuple[list[Atom], int]:
        """Reduce a pow node to (atoms, outer x-order)."""
        base = item.base
        if isinstance(base, _AtomBase):
            return [Atom(t_order=base.t_order, x_order=base.x_order, power=item.exponent)], 0

        if base.t_order:
            raise EquationParseError(
                "time derivative of a grouped product", base.offset, "unsupported"
            )
        inner = [self._flatten(child) for child in base.items]
        differentiated = [entry for entry in inner if entry[1]]
        if differentiated and len(inner) > 1:
            raise EquationParseError(
                "a differentiated group must be the only factor", base.offset, "unsupported"
            )
        atoms = [atom for entry in inner for atom in entry[0]]
        outer = base.x_order + sum(entry[1] for entry in inner)
        if outer and item.exponent != 1:
            raise EquationParseError(
                "power of a differentiated group", item.offset, "unsupported"
            )
        if item.exponent != 1:
            atoms = [Atom(a.t_order, a.x_order, a.power * item.exponent) for a in atoms]
        highest = outer + max(atom.order for atom in atoms)
        if highest > self.max_order:
            raise EquationParseError(
                f"derivative order {highest} exceeds maximum {self.max_order}",
                base.offset,
                "unsupported",
            )
        return atoms, outer

    def _assemble(
        self,
        factors: list[_Pow | _Trans],
        coefficient: Fraction,
        symbol: str | None,
        start: int,
    ) -> Term:
        transcendental = [f for f in factors if isinstance(f, _Trans)]
        if transcendental:
            if len(factors) > 1:
                raise EquationParseError(
                    "sin/cos must be the only factor of its term",
                    transcendental[0].offset,
                    "unsupported",
                )
            return Term(
                coefficient=coefficient,
                atoms=(Atom(),),
                symbol=symbol,
                transcendental=transcendental[0].kind,
            )

        flattened = [self._flatten(f) for f in factors]  # type: ignore[arg-type]
        if any(outer for _, outer in flattened) and len(flattened) > 1:
            raise EquationParseError(
                "a differentiated group must be the only factor", start, "unsupported"
            )
        merged: dict[tuple[int, int], int] = {}
        for atoms, _ in flattened:
            for atom in atoms:
                key = (atom.t_order, atom.x_order)
                merged[key] = merged.get(key, 0) + atom.power
        canonical = tuple(sorted(Atom(t, x, p) for (t, x), p in merged.items()))
        outer = sum(outer for _, outer in flattened)
        return Term(coefficient=coefficient, atoms=canonical, outer_x_order=outer, symbol=symbol)

    def _check_time_term(self, ast: EquationAST) -> None:
        offsets = self.term_offsets
        time_terms = [i for i, term in enumerate(ast.terms) if term.is_time_term]
        if not time_terms:
            raise EquationParseError("equation needs a time-derivative term", 0, "unsupported")
        if len(time_terms) > 1:
            raise EquationParseError(
                "only one time-derivative term is supported",
                offsets[time_terms[1]],
                "unsupported",
            )
        term = ast.terms[time_terms[0]]
        atom = term.atoms[0]
        if (
            len(term.atoms) != 1
            or atom.power != 1
            or atom.t_order != 1
            or term.outer_x_order + atom.x_order > 1
        ):
            raise EquationParseError(
                "time term must be u_t or u_xt", offsets[time_terms[0]], "unsupported"
            )


def parse_equation(
    text: str,
    parameters: Collection[str] = (),
    max_order: int | None = None,
) -> EquationAST:
    """Parse ``text`` into a validated :class:`EquationAST`.

    ``parameters`` declares the symbol names allowed in coefficient position.
    """
    ast = Parser(text, parameters=parameters, max_order=max_order).parse()
    logger.debug("Parsed %r into %s terms", text, len(ast.terms))
    return ast
