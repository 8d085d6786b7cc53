"""Human-readable relation and width-law text.

Without a branch every sign slot prints as ``±`` and coefficient signs are absorbed
into it; with a branch the concrete signs are printed. Monomials print coefficient
first, then ``V``, ``A``, ``L`` and any ``sin(A)``/``cos(A)`` factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import sympy as sp

from compactlab.similarity.relation import Branch, SimilarityRelation, check_branch


@dataclass(frozen=True)
class _Piece:
    sign: int
    magnitude: sp.Expr
    v: int
    a: int
    l_exp: int
    trans: str | None = None

    def times(self, other: _Piece, factor: int = 1) -> _Piece:
        if self.trans and other.trans:
            raise ValueError("cannot multiply two transcendental factors")
        return _Piece(
            self.sign * other.sign,
            self.magnitude * other.magnitude * factor,
            self.v + other.v,
            self.a + other.a,
            self.l_exp + other.l_exp,
            self.trans or other.trans,
        )


def _split(coefficient: sp.Expr) -> tuple[int, sp.Expr]:
    number, rest = sp.sympify(coefficient).as_coeff_Mul()
    return (-1 if number < 0 else 1), abs(number) * rest


def _power(name: str, exponent: int) -> str:
    return name if exponent == 1 else f"{name}^{exponent}"


def _coefficient_text(magnitude: sp.Expr) -> str:
    number, rest = magnitude.as_coeff_Mul()
    parts = []
    if number != 1:
        parts.append(str(number))
    if rest != 1:
        text = sp.sstr(rest)
        parts.append(text if rest.is_Symbol or rest.is_Pow else f"({text})")
    return "*".join(parts)


def _piece_text(piece: _Piece) -> str:
    parts = [_coefficient_text(piece.magnitude)]
    if piece.v:
        parts.append(_power("V", piece.v))
    if piece.a:
        parts.append(_power("A", piece.a))
    if piece.l_exp > 0:
        parts.append(_power("L", piece.l_exp))
    if piece.trans:
        parts.append(f"{piece.trans}(A)")
    text = "*".join(part for part in parts if part)
    if piece.l_exp < 0:
        return (text or "1") + "/" + _power("L", -piece.l_exp)
    return text or "1"


def _sum_text(pieces: list[_Piece], plus_minus: bool) -> str:
    out = []
    for index, piece in enumerate(pieces):
        text = _piece_text(piece)
        if plus_minus:
            out.append(("±" if index == 0 else " ± ") + text)
        elif index == 0:
            out.append(("-" if piece.sign < 0 else "") + text)
        else:
            out.append((" - " if piece.sign < 0 else " + ") + text)
    return "".join(out)


def _pieces(rel: SimilarityRelation, branch: Branch | None, raw: bool = False) -> list[_Piece]:
    if branch is not None:
        check_branch(rel, branch)
    pieces = []
    for index, monomial in enumerate(rel.monomials):
        sign, magnitude = _split(monomial.coefficient)
        if branch is not None:
            sign *= branch[index]
        if raw:
            a, l_exp = monomial.a_power, -monomial.invL_power
        else:
            a, l_exp = rel.a_exponent(monomial), rel.l_exponent(monomial)
        pieces.append(_Piece(sign, magnitude, monomial.v_power, a, l_exp, monomial.trans))
    return pieces


def _flip(pieces: list[_Piece]) -> list[_Piece]:
    return [_Piece(-p.sign, p.magnitude, p.v, p.a, p.l_exp, p.trans) for p in pieces]


def _without_l(pieces: list[_Piece], exponent: int) -> list[_Piece]:
    return [_Piece(p.sign, p.magnitude, p.v, p.a, p.l_exp - exponent, p.trans) for p in pieces]


def relation_text(rel: SimilarityRelation, branch: Branch | None = None) -> str:
    """``±V*L^2 ± 6*A*L^2 ± 1 = 0`` for KdV."""
    return _sum_text(_pieces(rel, branch), branch is None) + " = 0"


def _root_prefix(g: int) -> str:
    return "L" if g == 1 else _power("L", g)


def _linear_text(numerator: list[_Piece], denominator: list[_Piece], g: int, pm: bool) -> str:
    if pm:
        if len(numerator) == 1:
            top = _piece_text(numerator[0])
        else:
            top = f"|{_sum_text(numerator, True)}|"
        bottom = f"|{_sum_text(denominator, True)}|"
    else:
        # s_N * N + s_D * D * y = 0  ->  y = (-N) / D
        top_pieces, bottom_pieces = _flip(numerator), denominator
        if len(top_pieces) == 1 and top_pieces[0].sign < 0:
            top_pieces, bottom_pieces = _flip(top_pieces), _flip(bottom_pieces)
        top = _sum_text(top_pieces, False)
        if len(top_pieces) > 1:
            top = f"({top})"
        bottom = f"({_sum_text(bottom_pieces, False)})"
    if g == 1:
        return f"L = {top}/{bottom}"
    if g == 2:
        if top == "1":
            return f"L = 1/sqrt({bottom.strip('()') if not pm else bottom})"
        return f"L = sqrt({top}/{bottom})"
    return f"L = ({top}/{bottom})^(1/{g})"


def _quadratic_text(
    a: list[_Piece], b: list[_Piece], c: list[_Piece], g: int, pm: bool
) -> str:
    prefix = _root_prefix(g)
    if pm and len(a) == len(b) == len(c) == 1:
        b_text = _piece_text(b[0])
        b_squared = _piece_text(b[0].times(b[0]))
        four_ac = _piece_text(a[0].times(c[0], 4))
        two_a = _piece_text(_Piece(1, 2 * a[0].magnitude, a[0].v, a[0].a, 0))
        return f"{prefix} = (±{b_text} ± sqrt(|{b_squared} - {four_ac}|))/({two_a})"

    def group(pieces: list[_Piece]) -> str:
        return _sum_text(pieces, pm) if pieces else "0"

    return (
        f"{prefix} = (-b ± sqrt(b^2 - 4*a*c))/(2*a) "
        f"with a = {group(a)}, b = {group(b)}, c = {group(c)}"
    )


@lru_cache(maxsize=1024)
def width_text(rel: SimilarityRelation, branch: Branch | None = None) -> str:
    """The width law ``L = ...`` implied by the relation, or its implicit form."""

    pm = branch is None
    if rel.is_degenerate:
        pieces = _pieces(rel, branch, raw=True)
        if pm and len(pieces) == 1:
            return f"{_piece_text(pieces[0])} = 0 (any L)"
        return f"{_sum_text(pieces, pm)} = 0 (any L)"

    pieces = _pieces(rel, branch)
    if rel.is_transcendental:
        trans = [p for p in pieces if p.trans]
        others = [p for p in pieces if not p.trans]
        if len(trans) != 1 or not others:
            return relation_text(rel, branch)
        (moved,) = trans
        lhs = _sum_text(_without_l(others, moved.l_exp), pm)
        rhs = _piece_text(_Piece(1, moved.magnitude, moved.v, moved.a, 0, moved.trans))
        if not pm and moved.sign > 0:
            rhs = "-" + rhs
        return f"{lhs} = {rhs}"

    exponents = rel.l_exponents
    g = reduce(math.gcd, [e for e in exponents if e])
    degree = max(exponents) // g
    grouped = {e: _without_l([p for p in pieces if p.l_exp == e], e) for e in exponents}
    if g in (1, 2) and degree == 1:
        return _linear_text(grouped[0], grouped[g], g, pm)
    if g in (1, 2) and degree == 2:
        return _quadratic_text(
            grouped.get(2 * g, []), grouped.get(g, []), grouped.get(0, []), g, pm
        )
    return relation_text(rel, branch) + " (solved numerically)"
