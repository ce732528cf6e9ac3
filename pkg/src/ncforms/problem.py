"""Problem files: a line-oriented, sectioned text format.

::

    # dual numbers, written out in full
    [algebra]
    name = dual_numbers
    basis = 1 eps
    unit = 1 0
    1 1 = 1 0
    1 eps = 0 1
    eps 1 = 0 1
    eps eps = 0 0

    [forms]
    w = eps d(eps)

    [homs]
    K = eps d(eps)              # images of d(e_1), ..., d(e_{n-1}), separated by ';'
    P = d(eps) -> eps d(eps)    # or explicit 'd(label) -> image' items

    [distributions]
    D = eps d(eps)              # spanning 1-forms, separated by ';'

    [subalgebras]
    B = 1                       # spanning elements, separated by ';'

    [projections]
    P                           # names of declared homs

Instead of a table the algebra section may say ``builtin = matrix 2``.
Scalars are exact rationals written ``p/q``.  The full multiplication table
is required: every ordered pair of basis labels exactly once.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Algebra, builtin, validate_algebra
from .derivations import FormHom
from .forms import Form, form_dim
from .geometry import Distribution, make_distribution
from .linalg import Subspace, solve_sparse
from .notation import ParseError, parse_form, parse_terms

SECTIONS = ("algebra", "forms", "homs", "distributions", "subalgebras", "projections")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_SCALAR = re.compile(r"-?\d+(/\d+)?$")


@dataclass
class Problem:
    algebra: Algebra
    digest: str
    forms: dict = field(default_factory=dict)  # name -> Form
    homs: dict = field(default_factory=dict)  # name -> FormHom (unchecked)
    distributions: dict = field(default_factory=dict)  # name -> (Distribution, declared span)
    subalgebras: dict = field(default_factory=dict)  # name -> Subspace (unchecked)
    projections: list = field(default_factory=list)  # hom names

    def names(self) -> set:
        return set(self.forms) | set(self.homs) | set(self.distributions) | set(self.subalgebras)


@dataclass
class _Line:
    number: int
    text: str  # comment stripped
    raw: str

    def col(self, fragment: str, start: int = 0) -> int:
        i = self.raw.find(fragment, start)
        return (i if i >= 0 else 0) + 1


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _scalar(tok: str, line: _Line) -> Fraction:
    if not _SCALAR.match(tok):
        raise ParseError(f"expected an exact rational p/q, got {tok!r}", line.number, line.col(tok))
    return Fraction(tok)


def _split_sections(text: str) -> dict:
    sections: dict = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        stripped = body.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", number, len(body) + 1)
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise ParseError(f"unknown section [{name}]; expected one of {', '.join(SECTIONS)}",
                                 number, raw.find("[") + 2)
            if name in sections:
                raise ParseError(f"section [{name}] appears twice", number, raw.find("[") + 1)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ParseError("content before the first section header", number, raw.find(stripped) + 1)
        sections[current].append(_Line(number, body, raw))
    return sections


def _parse_algebra(lines: list, total_lines: int) -> Algebra:
    keys: dict = {}
    table_lines = []
    for ln in lines:
        if "=" not in ln.text:
            raise ParseError("expected 'key = value' or 'label label = coefficients'", ln.number, 1)
        left, right = ln.text.split("=", 1)
        lhs = left.split()
        if len(lhs) == 1:
            key = lhs[0]
            if key not in ("name", "dim", "basis", "unit", "builtin"):
                raise ParseError(f"unknown algebra key {key!r}", ln.number, ln.col(key))
            if key in keys:
                raise ParseError(f"duplicate key {key!r}", ln.number, ln.col(key))
            keys[key] = (right.strip(), ln)
        elif len(lhs) == 2:
            table_lines.append((lhs, right.split(), ln))
        else:
            raise ParseError("left side must be a key or a pair of basis labels", ln.number, 1)

    if "builtin" in keys:
        raw, ln = keys["builtin"]
        if len(keys) > 1 or table_lines:
            raise ParseError("a builtin algebra takes no other keys or table", ln.number, 1)
        parts = re.split(r"[\s(),]+", raw.strip())
        parts = [p for p in parts if p]
        if not parts:
            raise ParseError("builtin needs a name", ln.number, ln.col("="))
        try:
            return builtin(parts[0], *[int(p) for p in parts[1:]])
        except (KeyError, ValueError) as exc:
            raise ParseError(str(exc).strip("\"'"), ln.number, ln.col(parts[0])) from None

    for required in ("basis", "unit"):
        if required not in keys:
            raise ParseError(f"[algebra] needs '{required} = ...'", lines[0].number if lines else total_lines)
    labels_text, bl = keys["basis"]
    labels = labels_text.split()
    for lab in labels:
        if not re.match(r"[A-Za-z0-9_^]+$", lab) or lab == "d":
            raise ParseError(f"invalid basis label {lab!r}", bl.number, bl.col(lab, bl.raw.find("=")))
    if len(set(labels)) != len(labels):
        raise ParseError("basis labels must be distinct", bl.number, bl.col("="))
    n = len(labels)
    if n == 0:
        raise ParseError("empty basis", bl.number, bl.col("="))
    if "dim" in keys:
        dtext, dl = keys["dim"]
        if not dtext.isdigit() or int(dtext) != n:
            raise ParseError(f"dim = {dtext} does not match the {n} basis labels", dl.number, dl.col(dtext))
    index = {lab: i for i, lab in enumerate(labels)}
    utext, ul = keys["unit"]
    utoks = utext.split()
    if len(utoks) != n:
        raise ParseError(f"unit needs {n} coordinates, got {len(utoks)}", ul.number, ul.col("=") + 1)
    unit = [_scalar(t, ul) for t in utoks]

    table = [[None] * n for _ in range(n)]
    for (a, b), coeffs, ln in table_lines:
        for lab in (a, b):
            if lab not in index:
                raise ParseError(f"unknown basis label {lab!r}", ln.number, ln.col(lab))
        if len(coeffs) != n:
            raise ParseError(f"product {a} {b} needs {n} coordinates, got {len(coeffs)}",
                             ln.number, ln.col("=") + 1)
        i, j = index[a], index[b]
        if table[i][j] is not None:
            raise ParseError(f"product {a} {b} given twice", ln.number, 1)
        table[i][j] = [_scalar(t, ln) for t in coeffs]
    last = lines[-1].number if lines else total_lines
    for i in range(n):
        for j in range(n):
            if table[i][j] is None:
                raise ParseError(f"multiplication table is missing the product {labels[i]} {labels[j]}", last)
    name = keys["name"][0] if "name" in keys else "algebra"
    return validate_algebra(table, unit, labels, name)


def _named(ln: _Line, seen: set) -> tuple:
    if "=" not in ln.text:
        raise ParseError("expected 'name = value'", ln.number, 1)
    name, value = ln.text.split("=", 1)
    name = name.strip()
    if not _NAME.match(name):
        raise ParseError(f"invalid name {name!r}", ln.number, ln.col(name) if name else 1)
    if name in seen:
        raise ParseError(f"name {name!r} declared twice", ln.number, ln.col(name))
    seen.add(name)
    return name, value, ln.raw.find("=", ln.raw.find(name) + len(name)) + 1


def _items(value: str, offset: int):
    """Split on ';' keeping the column offset of each item."""
    pos = 0
    for part in value.split(";"):
        lead = len(part) - len(part.lstrip())
        yield part.strip(), offset + pos + lead
        pos += len(part) + 1


def _parse_hom(A: Algebra, value: str, offset: int, ln: _Line) -> FormHom:
    items = list(_items(value, offset))
    if any("->" in text for text, _ in items):
        return _parse_hom_explicit(A, items, ln)
    if len(items) != A.n - 1:
        raise ParseError(f"a hom needs {A.n - 1} images (one per d({'), d('.join(A.basis_labels[1:])})), "
                         f"got {len(items)}", ln.number, offset + 1)
    degree = None
    images = []
    for text, col in items:
        terms = parse_terms(A, text, ln.number, col)
        degs = {len(k) - 1 for k in terms}
        if len(degs) > 1:
            raise ParseError("image mixes degrees", ln.number, col + 1)
        if degs:
            d = degs.pop()
            if degree is not None and d != degree:
                raise ParseError(f"images have different degrees ({degree} and {d})", ln.number, col + 1)
            degree = d
        images.append(terms)
    if degree is None:
        degree = 1
    return FormHom.from_terms(A, degree, images, check=False)


def _parse_hom_explicit(A: Algebra, items, ln: _Line) -> FormHom:
    labels = A.label_coords()
    sources, images = [], []
    degree = None
    for text, col in items:
        if "->" not in text:
            raise ParseError("mix of plain images and 'd(label) -> image' items", ln.number, col + 1)
        src, img = text.split("->", 1)
        m = re.fullmatch(r"\s*d\(\s*([^)\s]+)\s*\)\s*", src)
        if not m:
            raise ParseError("left side of '->' must be d(label)", ln.number, col + 1)
        if m.group(1) not in labels:
            raise ParseError(f"unknown basis label {m.group(1)!r}", ln.number, col + 1 + src.find(m.group(1)))
        coords = labels[m.group(1)]
        sources.append({j - 1: c for j, c in enumerate(coords) if j and c})
        icol = col + text.find("->") + 2
        terms = parse_terms(A, img, ln.number, icol)
        degs = {len(k) - 1 for k in terms}
        if len(degs) > 1:
            raise ParseError("image mixes degrees", ln.number, icol + 1)
        if degs:
            d = degs.pop()
            if degree is not None and d != degree:
                raise ParseError(f"images have different degrees ({degree} and {d})", ln.number, icol + 1)
            degree = d
        images.append(terms)
    degree = 1 if degree is None else degree
    m = A.n - 1
    if len(sources) != m:
        raise ParseError(f"expected {m} 'd(label) -> image' items, got {len(sources)}", ln.number, 1)
    # K(d e_j) = sum_t X[j][t] image_t where (sources) X = Id, i.e. solve per target coordinate
    out = []
    for j in range(m):
        rows = [{t: s[jj] for t, s in enumerate(sources) if jj in s} for jj in range(m)]
        rhs = [Fraction(int(jj == j)) for jj in range(m)]
        sol = solve_sparse(rows, rhs, len(sources))
        if not sol or sol.kernel_basis.dim:
            raise ParseError("the d(label) items must determine the map on every d(e_j)", ln.number, 1)
        img: dict = {}
        for t, x in enumerate(sol.particular):
            if x:
                for idx, v in images[t].items():
                    img[idx] = img.get(idx, 0) + x * v
        out.append({k: v for k, v in img.items() if v})
    return FormHom.from_terms(A, degree, out, check=False)


def parse_problem(text: str) -> Problem:
    """Parse a problem file.  Raises ParseError (with line/column) or AlgebraError."""
    if not text.strip():
        raise ParseError("empty problem file", 1, 1)
    sections = _split_sections(text)
    if "algebra" not in sections:
        raise ParseError("missing [algebra] section", 1, 1)
    total = len(text.splitlines())
    A = _parse_algebra(sections["algebra"], total)
    prob = Problem(A, digest(text))
    seen: set = set()
    for ln in sections.get("forms", []):
        name, value, off = _named(ln, seen)
        prob.forms[name] = Form.from_terms(A, *_homogeneous(A, value, off, ln))
    for ln in sections.get("homs", []):
        name, value, off = _named(ln, seen)
        prob.homs[name] = _parse_hom(A, value, off, ln)
    dim1 = form_dim(A, 1)
    for ln in sections.get("distributions", []):
        name, value, off = _named(ln, seen)
        vecs = []
        for item, col in _items(value, off):
            f = parse_form(A, item, None, ln.number) if item else Form.zero(A, 1)
            if f.degree != 1:
                raise ParseError("distributions are spanned by 1-forms", ln.number, col + 1)
            vecs.append(f.coords)
        prob.distributions[name] = (make_distribution(A, vecs), Subspace.span(vecs, dim1))
    for ln in sections.get("subalgebras", []):
        name, value, off = _named(ln, seen)
        vecs = []
        for item, col in _items(value, off):
            f = parse_form(A, item, None, ln.number)
            if f.degree != 0:
                raise ParseError("subalgebras are spanned by algebra elements", ln.number, col + 1)
            vecs.append(f.coords)
        prob.subalgebras[name] = Subspace.span(vecs, A.n)
    for ln in sections.get("projections", []):
        for name in ln.text.replace(",", " ").split():
            if name not in prob.homs:
                raise ParseError(f"projection {name!r} is not a declared hom", ln.number, ln.col(name))
            if name in prob.projections:
                raise ParseError(f"projection {name!r} listed twice", ln.number, ln.col(name))
            prob.projections.append(name)
    return prob


def _homogeneous(A: Algebra, value: str, offset: int, ln: _Line) -> tuple:
    terms = parse_terms(A, value, ln.number, offset)
    degs = {len(k) - 1 for k in terms}
    if len(degs) > 1:
        raise ParseError(f"form literal mixes degrees {sorted(degs)}", ln.number, offset + 1)
    return (degs.pop() if degs else 0), terms


def read_problem(path: str) -> tuple[Problem, str]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem(text), text
