"""Parsing of polynomial strings such as ``"x^2"`` or ``"2*x*y - y^2"``.

A polynomial is held as a dict mapping exponent tuples to nonzero
coefficients reduced mod p.
"""
from __future__ import annotations

import re

Poly = dict[tuple[int, ...], int]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-]))")


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1} of {text!r}")
        self.text = text
        self.pos = pos


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[stripped]!r}", text, stripped)
        start = m.start(m.lastindex)
        kind = ("num", "var", "^", "*", "sign")[m.lastindex - 1]
        out.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_polynomial(text: str, variables: list[str], p: int) -> Poly:
    """Parse ``text`` into a polynomial in ``variables`` with F_p coefficients."""
    index = {v: i for i, v in enumerate(variables)}
    toks = _tokens(text)
    k = 0
    poly: Poly = {}

    def peek():
        return toks[k]

    def take(kind):
        nonlocal k
        tok = toks[k]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolynomialSyntaxError(f"expected {kind}, found {what}", text, tok[2])
        k += 1
        return tok

    def factor(coef, expo):
        tok = peek()
        if tok[0] == "num":
            take("num")
            return coef * int(tok[1]), expo
        if tok[0] == "var":
            take("var")
            if tok[1] not in index:
                raise PolynomialSyntaxError(f"unknown variable {tok[1]!r}", text, tok[2])
            e = 1
            if peek()[0] == "^":
                take("^")
                e = int(take("num")[1])
            expo = list(expo)
            expo[index[tok[1]]] += e
            return coef, tuple(expo)
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise PolynomialSyntaxError(f"expected a number or variable, found {what}", text, tok[2])

    sign = 1
    if peek()[0] == "sign":
        sign = -1 if take("sign")[1] == "-" else 1
    while True:
        coef, expo = factor(1, (0,) * len(variables))
        while peek()[0] == "*":
            take("*")
            coef, expo = factor(coef, expo)
        poly[expo] = (poly.get(expo, 0) + sign * coef) % p
        tok = peek()
        if tok[0] == "end":
            break
        if tok[0] != "sign":
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", text, tok[2])
        sign = -1 if take("sign")[1] == "-" else 1
    return {e: c for e, c in poly.items() if c}


def format_monomial(expo: tuple[int, ...], variables: list[str]) -> str:
    parts = []
    for v, e in zip(variables, expo):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) or "1"
