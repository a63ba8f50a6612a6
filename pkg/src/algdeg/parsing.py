"""Input languages: polynomial and rational-function literals, matrices, algebras.

Expressions use ``+ - * / ^`` and parentheses over rational numbers and
named variables; whitespace is insignificant and a number directly
followed by a variable or parenthesis multiplies (``2t``).  Algebras are
written as ``Q[t]/(P)``, ``C^n`` (or ``Q^n``), ``Mat(n)``, products
``A x B`` (or ``A × B``) of those, or a JSON structure-constant document
``{"dim": d, "names": [...], "constants": [[i, j, k, value], ...]}`` with
0-based indices.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Sequence

from .algebra import Algebra, matrix_algebra, product_algebra, split_algebra, truncated_poly_algebra
from .errors import DomainError, ParseError
from .exactnum import Matrix, UniPoly, format_scalar, rat
from .induced import UniRationalFunction
from .multipoly import MultiPoly, RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("id", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _ExprParser:
    """Recursive descent over the token list producing :class:`RatFunc` values."""

    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.names = list(names)
        self.nvars = len(self.names)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.text, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}", tok)

    def parse(self) -> RatFunc:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self) -> RatFunc:
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.factor()
        while True:
            kind, tok, _ = self.peek()
            if kind == "op" and tok in "*/":
                self.take()
                rhs = self.factor()
                if tok == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        self.fail("division by zero")
                    value = value / rhs
            elif kind in ("num", "id") or (kind == "op" and tok == "("):
                value = value * self.factor()
            else:
                return value

    def factor(self) -> RatFunc:
        kind, tok, _ = self.peek()
        if kind == "op" and tok in "+-":
            self.take()
            inner = self.factor()
            return -inner if tok == "-" else inner
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] in (("op", "-"), ("op", "+")):
                sign = -1 if self.take()[1] == "-" else 1
            tok = self.take()
            if tok[0] != "num":
                self.fail("exponent must be an integer literal", tok)
            e = sign * int(tok[1])
            if e < 0 and base.is_zero():
                self.fail("negative power of zero", tok)
            return base ** e
        return base

    def atom(self) -> RatFunc:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return RatFunc.const(self.nvars, int(val))
        if kind == "id":
            if val not in self.names:
                self.fail(f"unknown variable {val!r}", tok)
            return RatFunc.var(self.nvars, self.names.index(val))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail("expected a number, variable or '('", tok)


def _identifiers(text: str) -> list[str]:
    seen = []
    for kind, val, _ in _tokenize(text):
        if kind == "id" and val not in seen:
            seen.append(val)
    return seen


def _single_var(text: str, var: str | None) -> str:
    ids = _identifiers(text)
    if var is not None:
        return var
    if len(ids) > 1:
        raise ParseError(f"expected one variable, found {', '.join(ids)}", text)
    return ids[0] if ids else "t"


def _to_unipoly(p: MultiPoly) -> UniPoly:
    coeffs = [0] * (p.total_degree + 1) if not p.is_zero() else []
    for e, c in p.items():
        coeffs[e[0]] = c
    return UniPoly(coeffs)


def parse_ratfunc(text: str, var: str | None = None) -> UniRationalFunction:
    """Univariate rational function; the variable is inferred when not given."""
    v = _single_var(text, var)
    f = _ExprParser(text, [v]).parse()
    return UniRationalFunction(_to_unipoly(f.num), _to_unipoly(f.den))


def parse_polynomial(text: str, var: str | None = None) -> UniPoly:
    f = parse_ratfunc(text, var)
    if not f.is_polynomial():
        raise ParseError("expected a polynomial", text)
    return f.num


def parse_multipoly(text: str, names: Sequence[str]) -> MultiPoly:
    f = _ExprParser(text, names).parse()
    if not f.is_polynomial():
        raise ParseError("expected a polynomial", text)
    return f.num * (1 / Fraction(f.den.constant_value()))


def format_ratfunc(f: UniRationalFunction, var: str = "t") -> str:
    return f.format(var)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

_MTOKEN = re.compile(r"\s*(?:(-?\d+(?:/\d+)?)|([\[\],]))")


def parse_matrix(text: str) -> Matrix:
    """Nested bracket list such as ``[[2,1],[1,1]]``; entries are integers or ``a/b``."""
    pos, toks = 0, []
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _MTOKEN.match(stripped, pos)
        if not m:
            raise ParseError("unexpected character in matrix", text, pos)
        toks.append((m.group(1) or m.group(2), m.start(m.lastindex)))
        pos = m.end()
    toks.append(("", len(stripped)))
    i = 0

    def expect(sym):
        nonlocal i
        if toks[i][0] != sym:
            raise ParseError(f"expected {sym!r}", text, toks[i][1])
        i += 1

    rows = []
    expect("[")
    while True:
        expect("[")
        row = []
        while True:
            tok, at = toks[i]
            if tok in ("", "[", "]", ","):
                raise ParseError("expected a number", text, at)
            if "/" in tok and int(tok.split("/")[1]) == 0:
                raise ParseError("zero denominator", text, at)
            row.append(rat(Fraction(tok)))
            i += 1
            if toks[i][0] == ",":
                i += 1
                continue
            expect("]")
            break
        rows.append(row)
        if toks[i][0] == ",":
            i += 1
            continue
        expect("]")
        break
    if toks[i][0] != "":
        raise ParseError("trailing input after matrix", text, toks[i][1])
    if len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows have different lengths", text)
    return Matrix(rows)


def format_matrix(m: Matrix) -> str:
    return str(m)


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------

_PRESENTATION = re.compile(r"^\s*[QC]\s*\[\s*([A-Za-z])\s*\]\s*/\s*\((.*)\)\s*$", re.S)
_POWER = re.compile(r"^\s*[QC]\s*(?:\^\s*(\d+))?\s*$")
_MAT = re.compile(r"^\s*Mat\s*\(\s*(\d+)\s*\)\s*$")


def _split_product(text: str) -> list[tuple[str, int]]:
    """Split on standalone ``x``/``×`` outside brackets; returns (piece, offset)."""
    pieces, depth, start = [], 0, 0
    for idx, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and (ch == "×" or (ch == "x" and (idx == 0 or text[idx - 1].isspace())
                                            and (idx + 1 == len(text) or text[idx + 1].isspace()))):
            pieces.append((text[start:idx], start))
            start = idx + 1
    pieces.append((text[start:], start))
    return pieces


def _parse_factor(piece: str, offset: int, full: str) -> Algebra:
    m = _PRESENTATION.match(piece)
    if m:
        var, body = m.group(1), m.group(2)
        try:
            f = _ExprParser(body, [var]).parse()
        except ParseError as exc:
            pos = None if exc.position is None else offset + piece.index("(") + 1 + exc.position
            raise ParseError(str(exc).split(" at position")[0], full, pos) from None
        if not f.is_polynomial():
            raise ParseError("the relation must be a polynomial", full, offset)
        p = _to_unipoly(f.num)
        if p.degree < 1:
            raise ParseError("the modulus must have degree at least 1", full, offset)
        return truncated_poly_algebra(p, var)
    m = _POWER.match(piece)
    if m:
        n = int(m.group(1) or 1)
        if n < 1:
            raise ParseError("dimension must be positive", full, offset)
        return split_algebra(n)
    m = _MAT.match(piece)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ParseError("matrix size must be positive", full, offset)
        return matrix_algebra(n)
    lead = len(piece) - len(piece.lstrip())
    if re.match(r"\s*[QC]\s*\[", piece):
        raise ParseError("malformed presentation, expected Q[t]/(P)", full, offset + lead)
    raise ParseError("unrecognised algebra presentation", full, offset + lead)


def algebra_from_doc(doc: dict) -> Algebra:
    try:
        dim = int(doc["dim"])
        triples = [(int(i), int(j), int(k), rat(Fraction(str(v)))) for i, j, k, v in doc["constants"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed structure-constant document: {exc}") from None
    if dim < 1:
        raise ParseError("dim must be positive")
    try:
        return Algebra.from_triples(dim, triples, doc.get("names") or ())
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def algebra_to_doc(V: Algebra) -> dict:
    return {
        "dim": V.dim,
        "names": list(V.names),
        "constants": [[i, j, k, format_scalar(v)] for i, j, k, v in V.triples()],
    }


def parse_algebra(text: str) -> Algebra:
    """Algebra from a presentation string or a JSON structure-constant document."""
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from None
        return algebra_from_doc(doc)
    if not text.strip():
        raise ParseError("empty algebra description", text, 0)
    factors = [_parse_factor(piece, off, text) for piece, off in _split_product(text)]
    return product_algebra(*factors)
