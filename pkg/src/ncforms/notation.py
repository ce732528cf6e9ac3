"""Human-readable form literals: ``coeff * a0 d(a1) d(a2) ...``.

Examples accepted by :func:`parse_form`::

    d(eps)
    (1/2)*eps d(eps) - 3 * d(eps) d(eps)
    p d(p) + -1 * d(p)
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import Algebra
from .linalg import ONE, ZERO


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        elif column is not None:
            where = f"column {column}: "
        super().__init__(where + message)


def format_scalar(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def format_term(A: Algebra, idx: tuple, c: Fraction) -> str:
    parts = []
    if idx[0] != 0 or len(idx) == 1:
        parts.append(A.basis_labels[idx[0]])
    parts.extend(f"d({A.basis_labels[i]})" for i in idx[1:])
    body = " ".join(parts)
    if c == 1:
        return body
    return f"{format_scalar(c)} * {body}"


def format_terms(A: Algebra, terms: dict) -> str:
    if not terms:
        return "0"
    return " + ".join(format_term(A, idx, terms[idx]) for idx in sorted(terms))


def format_element(A: Algebra, coords) -> str:
    return format_terms(A, {(i,): c for i, c in enumerate(coords) if c})


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<frac>\(\s*-?\d+\s*(?:/\s*\d+\s*)?\))
  | (?P<num>\d+(?:/\d+)?(?![A-Za-z_^]))
  | (?P<d>d\()
  | (?P<label>[A-Za-z_0-9][A-Za-z0-9_^]*)
  | (?P<op>[+\-*()])
""", re.VERBOSE)


def _tokenize(text: str, line=None, offset=0):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), offset + pos + 1))
        pos = m.end()
    return out


def _frac(tok: str) -> Fraction:
    return Fraction(tok.strip("() ").replace(" ", ""))


def parse_terms(A: Algebra, text: str, line: int | None = None, offset: int = 0) -> dict:
    """Parse a form literal into sparse terms {index tuple: Fraction} (may mix degrees).

    A term is ``[coeff [*]] [label [*]] d(label) ...``; labels may also be the
    caller's original basis labels that normalization replaced by the unit.
    """
    from .forms import add_into, mul_terms

    toks = _tokenize(text, line, offset)
    if not toks:
        raise ParseError("empty form literal", line, offset + 1)
    labels = A.label_coords()
    out: dict = {}
    i = 0
    sign = ONE
    while i < len(toks):
        kind, val, col = toks[i]
        if kind == "op" and val in "+-":
            if val == "-":
                sign = -sign
            i += 1
            continue
        coef = sign
        sign = ONE
        if kind in ("frac", "num") and not (kind == "num" and val in labels and not _followed_by_star(toks, i)):
            coef *= _frac(val)
            i += 1
            if i < len(toks) and toks[i][1] == "*":
                i += 1
            if i >= len(toks) or (toks[i][0] == "op" and toks[i][1] in "+-"):
                _acc(out, (0,), coef)  # bare scalar: multiple of the unit
                continue
            kind, val, col = toks[i]
        a0 = A.unit.coords
        if kind == "label" or (kind == "num" and val in labels):
            if val not in labels:
                raise ParseError(f"unknown basis label {val!r}", line, col)
            a0 = labels[val]
            i += 1
            if i < len(toks) and toks[i][1] == "*":
                i += 1
        elif kind != "d":
            raise ParseError(f"unexpected token {val!r}", line, col)
        term = {(m,): c for m, c in enumerate(a0) if c}
        while i < len(toks) and toks[i][0] == "d":
            if i + 2 >= len(toks) or toks[i + 2][1] != ")":
                raise ParseError("malformed d(...)", line, toks[i][2])
            _, lv, lc = toks[i + 1]
            if lv not in labels:
                raise ParseError(f"unknown basis label {lv!r}", line, lc)
            dx = {(0, m): c for m, c in enumerate(labels[lv]) if c and m}
            term = mul_terms(A, term, dx) if dx else {}
            i += 3
        add_into(out, term, coef)
        if i < len(toks) and not (toks[i][0] == "op" and toks[i][1] in "+-"):
            raise ParseError(f"unexpected token {toks[i][1]!r}", line, toks[i][2])
    return out


def _followed_by_star(toks, i):
    return i + 1 < len(toks) and toks[i + 1][1] == "*"


def _acc(out, key, c):
    v = out.get(key, ZERO) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def parse_form(A: Algebra, text: str, degree: int | None = None, line: int | None = None):
    """Parse a homogeneous form literal into a :class:`~ncforms.forms.Form`."""
    from .forms import Form

    terms = parse_terms(A, text, line)
    degs = {len(k) - 1 for k in terms}
    if degree is None:
        if len(degs) > 1:
            raise ParseError(f"form literal mixes degrees {sorted(degs)}", line)
        degree = degs.pop() if degs else 0
    elif degs and degs != {degree}:
        raise ParseError(f"expected a {degree}-form, got degree(s) {sorted(degs)}", line)
    return Form.from_terms(A, degree, terms)


def parse_element(A: Algebra, text: str, line: int | None = None):
    f = parse_form(A, text, 0, line)
    return A.element(f.coords)
