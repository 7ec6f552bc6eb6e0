"""Implicit enumeration of the 0/1 points of a :class:`LinearModel`.

Variables are fixed in declaration order.  For each row the smallest and
largest activity still reachable is tracked, and a branch is cut as soon as
some row can no longer be satisfied.  Every feasible point is reached, so
this is exhaustive over the constraint system, just without walking the
infeasible subtrees.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .models import BINARY, LinearModel


def _prepare(model: LinearModel):
    if any(v.kind != BINARY for v in model.variables):
        raise ValueError("enumeration needs an all-binary model")
    names = model.variable_names
    index = {name: i for i, name in enumerate(names)}
    rows = []
    occurs = [[] for _ in names]
    for r, row in enumerate(model.constraints):
        coeffs = [(index[v], c) for v, c in row.coeffs.items() if c != 0]
        lo = sum((c for _, c in coeffs if c < 0), Fraction(0))
        hi = sum((c for _, c in coeffs if c > 0), Fraction(0))
        rows.append([row.sense, row.rhs, lo, hi])
        for i, c in coeffs:
            occurs[i].append((r, c))
    return names, rows, occurs


def _ok(row):
    sense, rhs, lo, hi = row
    if sense == "<=":
        return lo <= rhs
    if sense == ">=":
        return hi >= rhs
    return lo <= rhs <= hi


def enumerate_binary_points(model: LinearModel) -> Iterator[dict[str, int]]:
    """Yield every feasible 0/1 assignment as ``{name: bit}``."""
    names, rows, occurs = _prepare(model)
    if not all(_ok(r) for r in rows):
        return
    n = len(names)
    values = [0] * n

    def assign(i, bit):
        # returns False if some touched row became unsatisfiable
        ok = True
        for r, c in occurs[i]:
            row = rows[r]
            if c > 0:
                if bit:
                    row[2] += c
                else:
                    row[3] -= c
            else:
                if bit:
                    row[3] += c
                else:
                    row[2] -= c
            if ok and not _ok(row):
                ok = False
        return ok

    def undo(i, bit):
        for r, c in occurs[i]:
            row = rows[r]
            if c > 0:
                if bit:
                    row[2] -= c
                else:
                    row[3] += c
            else:
                if bit:
                    row[3] -= c
                else:
                    row[2] += c

    def walk(i):
        if i == n:
            yield dict(zip(names, values))
            return
        for bit in (0, 1):
            values[i] = bit
            if assign(i, bit):
                yield from walk(i + 1)
            undo(i, bit)
        values[i] = 0

    yield from walk(0)


def solve_by_enumeration(model: LinearModel):
    """Minimum objective (offset included) over all feasible 0/1 points.

    Returns ``(value, point)``; ties keep the first point in enumeration
    order.  Returns ``(None, None)`` when the system is infeasible.
    """
    best_value, best_point = None, None
    for point in enumerate_binary_points(model):
        value = model.evaluate(point)
        if best_value is None or value < best_value:
            best_value, best_point = value, point
    return best_value, best_point
