"""Writer and reader for the subset of the CPLEX LP format that the builders use.

Sections are ``Minimize``, ``Subject To``, ``Bounds``, ``Binaries``, ``End``.
The objective constant does not fit the format and is carried in a
``\\ offset: <value>`` comment, which the reader picks up again.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ._numbers import format_number
from .exceptions import ModelFormatError
from .models import BINARY, CONTINUOUS, Constraint, LinearModel, Variable

TERMS_PER_LINE = 8

_TOKEN = re.compile(
    r"\s*(?:(?P<sense><=|>=|=<|=>|=|<|>)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<sign>[+-])"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_.\[\]]*))"
)
_SENSES = {"<=": "<=", "=<": "<=", "<": "<=", ">=": ">=", "=>": ">=", ">": ">=", "=": "="}
_SECTIONS = {
    "minimize": "obj", "minimise": "obj", "minimum": "obj", "min": "obj",
    "subject to": "rows", "such that": "rows", "st": "rows", "s.t.": "rows",
    "bounds": "bounds", "bound": "bounds",
    "binaries": "bin", "binary": "bin", "bin": "bin",
    "end": "end",
}


def _expr(coeffs):
    return [f"{'-' if c < 0 else '+'}{format_number(abs(c))} {v}" for v, c in coeffs.items()]


def _wrap(items, lead):
    lines = []
    for start in range(0, len(items), TERMS_PER_LINE):
        prefix = lead if start == 0 else " " * len(lead)
        lines.append((prefix + " ".join(items[start : start + TERMS_PER_LINE])).rstrip())
    return lines or [lead.rstrip()]


def _bound_line(v: Variable):
    lo, hi = v.lower, v.upper
    if lo is None and hi is None:
        return f" {v.name} free"
    lo_text = "-inf" if lo is None else format_number(lo)
    hi_text = "+inf" if hi is None else format_number(hi)
    return f" {lo_text} <= {v.name} <= {hi_text}"


def emit_lp(model: LinearModel) -> str:
    lines = [
        f"\\ model: {model.name}",
        f"\\ offset: {format_number(model.offset)}",
        "Minimize",
    ]
    lines += _wrap(_expr(model.objective), " obj: ")
    lines.append("Subject To")
    for row in model.constraints:
        lhs = " ".join(_expr(row.coeffs))
        lines.append(f" {row.name}: {lhs} {row.sense} {format_number(row.rhs)}")
    lines.append("Bounds")
    lines += [_bound_line(v) for v in model.variables if v.kind == CONTINUOUS]
    lines.append("Binaries")
    binaries = [v.name for v in model.variables if v.kind == BINARY]
    if binaries:
        lines += _wrap(binaries, " ")
    lines.append("End")
    return "\n".join(lines) + "\n"


def _tokens(text, lineno):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ModelFormatError(f"unexpected text {text[pos:]!r}", lineno)
        out.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    return out


def _parse_expr(tokens, lineno):
    """Linear expression tokens -> (coeff dict, leftover tokens)."""
    coeffs = {}
    i = 0
    while i < len(tokens) and tokens[i][0] in ("sign", "num", "name"):
        sign = Fraction(1)
        while i < len(tokens) and tokens[i][0] == "sign":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coeff = Fraction(1)
        if i < len(tokens) and tokens[i][0] == "num":
            coeff = Fraction(tokens[i][1])
            i += 1
        if i >= len(tokens) or tokens[i][0] != "name":
            raise ModelFormatError("expected a variable name", lineno)
        name = tokens[i][1]
        coeffs[name] = coeffs.get(name, Fraction(0)) + sign * coeff
        i += 1
    return coeffs, tokens[i:]


def _signed_number(tokens, lineno):
    sign = 1
    i = 0
    while i < len(tokens) and tokens[i][0] == "sign":
        sign = -sign if tokens[i][1] == "-" else sign
        i += 1
    if i != len(tokens) - 1:
        raise ModelFormatError("expected a single number", lineno)
    kind, text = tokens[i]
    if kind == "name" and text.lower() in ("inf", "infinity"):
        return None
    if kind != "num":
        raise ModelFormatError(f"expected a number, got {text!r}", lineno)
    return sign * Fraction(text)


def _lines(text):
    """Yield (lineno, kind, content) with kind in comment/section/None."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith("\\"):
            yield lineno, "comment", raw[1:].strip()
            continue
        stripped = raw.strip()
        if not stripped:
            continue
        key = stripped.lower()
        if key in _SECTIONS:
            yield lineno, "section", _SECTIONS[key]
        else:
            yield lineno, None, stripped


def parse_lp(text: str) -> LinearModel:
    name = "model"
    offset = Fraction(0)
    section = None
    objective = {}
    rows = []
    bounds = {}
    binaries = []
    order = []
    ended = False

    def note(var):
        if var not in bounds and var not in binaries and var not in order:
            order.append(var)

    for lineno, kind, content in _lines(text):
        if kind == "comment":
            if content.startswith("model:"):
                name = content.split(":", 1)[1].strip()
            elif content.startswith("offset:"):
                offset = Fraction(content.split(":", 1)[1].strip())
            continue
        if kind == "section":
            section = content
            if section == "end":
                ended = True
            continue
        if ended:
            raise ModelFormatError("content after End", lineno)
        if section is None:
            raise ModelFormatError("content before the objective section", lineno)
        if section in ("obj", "rows"):
            label = None
            body = content
            m = re.match(r"\s*([A-Za-z_][\w.\[\]]*)\s*:(.*)$", content)
            if m:
                label, body = m.group(1), m.group(2)
            tokens = _tokens(body, lineno)
            coeffs, rest = _parse_expr(tokens, lineno)
            if section == "obj":
                if rest:
                    raise ModelFormatError("objective may not contain a sense", lineno)
                objective.update({v: c for v, c in coeffs.items() if c != 0})
                continue
            if not rest or rest[0][0] != "sense":
                raise ModelFormatError("constraint without a sense", lineno)
            rhs = _signed_number(rest[1:], lineno)
            if rhs is None:
                raise ModelFormatError("infinite right-hand side", lineno)
            rows.append(Constraint(label or f"R{len(rows) + 1}", coeffs, _SENSES[rest[0][1]], rhs))
        elif section == "bounds":
            var, lo, hi = _parse_bound(content, lineno)
            if var not in bounds:
                bounds[var] = [Fraction(0), None]
            if lo is not False:
                bounds[var][0] = lo
            if hi is not False:
                bounds[var][1] = hi
        elif section == "bin":
            binaries.extend(content.split())

    if not ended:
        raise ModelFormatError("missing End")
    for v in objective:
        note(v)
    for row in rows:
        for v in row.coeffs:
            note(v)
    variables = [Variable(v, CONTINUOUS, lo, hi) for v, (lo, hi) in bounds.items() if v not in binaries]
    variables += [Variable(v, BINARY) for v in binaries]
    variables += [Variable(v, CONTINUOUS, Fraction(0), None) for v in order if v not in binaries]
    return LinearModel(name, variables, objective, rows, offset)


def _parse_bound(content, lineno):
    """Return (name, lower, upper); False means 'not given'."""
    parts = content.split()
    if len(parts) == 2 and parts[1].lower() == "free":
        return parts[0], None, None
    tokens = _tokens(content, lineno)
    # split into chunks around senses
    chunks, senses, cur = [], [], []
    for tok in tokens:
        if tok[0] == "sense":
            chunks.append(cur)
            senses.append(_SENSES[tok[1]])
            cur = []
        else:
            cur.append(tok)
    chunks.append(cur)

    def is_var(chunk):
        return len(chunk) == 1 and chunk[0][0] == "name" and chunk[0][1].lower() not in ("inf", "infinity")

    if len(chunks) == 3 and is_var(chunks[1]) and senses == ["<=", "<="]:
        return chunks[1][0][1], _signed_number(chunks[0], lineno), _signed_number(chunks[2], lineno)
    if len(chunks) == 2 and is_var(chunks[0]):
        value = _signed_number(chunks[1], lineno)
        if senses[0] == "<=":
            return chunks[0][0][1], False, value
        if senses[0] == ">=":
            return chunks[0][0][1], value, False
        return chunks[0][0][1], value, value
    if len(chunks) == 2 and is_var(chunks[1]):
        value = _signed_number(chunks[0], lineno)
        if senses[0] == "<=":
            return chunks[1][0][1], value, False
        if senses[0] == ">=":
            return chunks[1][0][1], False, value
        return chunks[1][0][1], value, value
    raise ModelFormatError(f"unrecognised bound {content!r}", lineno)
