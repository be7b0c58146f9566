"""Dense univariate polynomials over a Field; coefficient lists, lowest degree first."""
from __future__ import annotations

from .fields import Field


def trim(field: Field, f: list) -> list:
    f = list(f)
    while f and field.is_zero(f[-1]):
        f.pop()
    return f


def degree(field: Field, f) -> int:
    """Degree, with ``-1`` for the zero polynomial."""
    return len(trim(field, f)) - 1


def evaluate(field: Field, f, t):
    acc = field.zero
    for c in reversed(f):
        acc = field.add(field.mul(acc, t), c)
    return acc


def mul(field: Field, f, g) -> list:
    if not f or not g:
        return []
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if field.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = field.add(out[i + j], field.mul(a, b))
    return trim(field, out)


def power(field: Field, f, e: int) -> list:
    out = [field.one]
    for _ in range(e):
        out = mul(field, out, f)
    return out


def divmod_poly(field: Field, f, g) -> tuple[list, list]:
    F = field
    f, g = trim(F, f), trim(F, g)
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(f)
    q = [F.zero] * max(0, len(f) - len(g) + 1)
    inv = F.inv(g[-1])
    while len(r) >= len(g) and r:
        c = F.mul(r[-1], inv)
        s = len(r) - len(g)
        q[s] = c
        for i, b in enumerate(g):
            r[s + i] = F.sub(r[s + i], F.mul(c, b))
        r = trim(F, r[:-1]) if F.is_zero(r[-1]) else trim(F, r)
    return trim(F, q), trim(F, r)


def interpolate(field: Field, xs, ys) -> list:
    """Coefficients of the unique polynomial of degree < len(xs) through the points."""
    F = field
    n = len(xs)
    coeffs = [F.zero] * n
    for i in range(n):
        basis = [F.one]
        denom = F.one
        for j in range(n):
            if j != i:
                basis = mul(F, basis, [F.neg(xs[j]), F.one])
                denom = F.mul(denom, F.sub(xs[i], xs[j]))
        s = F.div(ys[i], denom)
        for k, c in enumerate(basis):
            coeffs[k] = F.add(coeffs[k], F.mul(s, c))
    return trim(F, coeffs)


def roots(field: Field, f) -> list:
    """Roots in a finite field by exhaustive evaluation, in the field's sort order."""
    return sorted((t for t in field.elements() if field.is_zero(evaluate(field, f, t))), key=field.sort_key)


def multiplicity(field: Field, f, r) -> int:
    f = trim(field, f)
    if not f:
        raise ValueError("the zero polynomial has infinite multiplicity at every point")
    m = 0
    lin = [field.neg(r), field.one]
    while True:
        q, rem = divmod_poly(field, f, lin)
        if rem:
            return m
        f, m = q, m + 1


def monic(field: Field, f) -> list:
    f = trim(field, f)
    if not f:
        return f
    s = field.inv(f[-1])
    return [field.mul(s, c) for c in f]


def format_poly(field: Field, f) -> list[str]:
    return [field.format(c) for c in trim(field, f)]
