"""Expressions for the ``compute`` command.

Grammar (whitespace is free)::

    expr := name | call | form-literal
    call := d(expr) | mul(expr, expr) | j(hom)(expr) | lie(hom)(expr)
          | abracket(hom, hom) | fnbracket(hom, hom) | insert(hom, hom)
          | curvature(hom) | cocurvature(hom)

Names are those declared in the problem file.  Anything that is not a name
or a call is read as a form literal such as ``(1/2)*eps d(eps)``.
"""

from __future__ import annotations

from .derivations import (
    FormHom,
    algebraic_bracket,
    evaluate_derivation,
    fn_bracket,
    insert_hom,
    insertion,
    lie_derivative,
)
from .forms import Form, differential
from .geometry import curvature, is_projection
from .notation import ParseError, parse_terms
from .problem import Problem

UNARY = {"d", "curvature", "cocurvature"}
BINARY = {"mul", "abracket", "fnbracket", "insert"}
CURRIED = {"j", "lie"}


class ExprError(ValueError):
    """Unknown name, wrong operand type or degree mismatch."""


def _match_paren(s: str, start: int) -> int:
    depth = 0
    for i in range(start, len(s)):
        if s[i] == "(":
            depth += 1
        elif s[i] == ")":
            depth -= 1
            if depth == 0:
                return i
    raise ExprError(f"unbalanced parentheses in {s!r}")


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    out.append("".join(cur))
    return [a.strip() for a in out]


def _call(s: str):
    """(fname, args, curried_arg) when s is a single call, else None."""
    head = s.split("(", 1)[0].strip()
    if head not in UNARY | BINARY | CURRIED or "(" not in s:
        return None
    open_at = s.index("(")
    close = _match_paren(s, open_at)
    args = _split_args(s[open_at + 1:close])
    rest = s[close + 1:].strip()
    if head in CURRIED:
        if not rest.startswith("("):
            raise ExprError(f"{head}(K) must be applied to a form: {head}(K)(x)")
        close2 = _match_paren(rest, 0)
        if rest[close2 + 1:].strip():
            return None
        return head, args, rest[1:close2].strip()
    if rest:
        return None  # e.g. the literal "d(a) d(b)"
    return head, args, None


def evaluate(prob: Problem, text: str):
    A = prob.algebra
    s = text.strip()
    if not s:
        raise ExprError("empty expression")
    if s in prob.forms:
        return prob.forms[s]
    if s in prob.homs:
        return prob.homs[s]
    if s in prob.distributions or s in prob.subalgebras:
        raise ExprError(f"{s!r} is not a form or hom")
    call = _call(s)
    if call is None:
        try:
            terms = parse_terms(A, s)
        except ParseError as exc:
            raise ExprError(f"cannot read {s!r}: {exc}") from None
        degs = {len(k) - 1 for k in terms}
        if len(degs) > 1:
            raise ExprError(f"literal {s!r} mixes degrees {sorted(degs)}")
        return Form.from_terms(A, degs.pop() if degs else 0, terms)
    head, args, applied = call
    want = 1 if head in UNARY | CURRIED else 2
    if len(args) != want:
        raise ExprError(f"{head} takes {want} argument(s), got {len(args)}")
    vals = [evaluate(prob, a) for a in args]
    if head == "d":
        return differential(_form(vals[0], head))
    if head == "mul":
        return _form(vals[0], head) * _form(vals[1], head)
    if head in CURRIED:
        K = _hom(vals[0], head)
        w = _form(evaluate(prob, applied), head)
        D = insertion(K) if head == "j" else lie_derivative(K)
        out = evaluate_derivation(D, w)
        if out is None:
            raise ExprError(f"degree mismatch: {head}(K) lowers degree {w.degree} below 0")
        return out
    if head in ("curvature", "cocurvature"):
        P = _hom(vals[0], head)
        if P.degree != 1 or not is_projection(P):
            raise ExprError(f"{head} needs a projection in Hom(Omega_1, Omega_1)")
        data = curvature(P)
        return data.curvature if head == "curvature" else data.cocurvature
    K, L = _hom(vals[0], head), _hom(vals[1], head)
    if head == "fnbracket":
        return fn_bracket(K, L)
    if K.degree + L.degree - 1 < 0:
        raise ExprError(f"degree mismatch: {head} of degrees {K.degree} and {L.degree} is negative")
    return algebraic_bracket(K, L) if head == "abracket" else insert_hom(K, L)


def _form(v, head) -> Form:
    if not isinstance(v, Form):
        raise ExprError(f"{head} expects a form, got a hom")
    return v


def _hom(v, head) -> FormHom:
    if not isinstance(v, FormHom):
        raise ExprError(f"{head} expects a hom, got a form")
    from .derivations import equivariance_defect

    if equivariance_defect(v) is not None:
        raise ExprError("hom is not a bimodule homomorphism")
    return v
