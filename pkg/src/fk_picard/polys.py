"""Dense univariate polynomials over a Field.

Internal plumbing for division polynomials, squarefreeness checks and
root extraction. Polynomials are tuples of FieldElement, ascending
powers, with no trailing zeros; the zero polynomial is ().
"""

from __future__ import annotations

from typing import List, Tuple

from .field import Field, FieldElement, sqrt

Poly = Tuple[FieldElement, ...]


def poly(field: Field, coeffs) -> Poly:
    out = [field.element(c) if not isinstance(c, FieldElement) else c
           for c in coeffs]
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def deg(f: Poly) -> int:
    return len(f) - 1


def padd(f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = out[i] + c
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def pneg(f: Poly) -> Poly:
    return tuple(-c for c in f)


def psub(f: Poly, g: Poly) -> Poly:
    return padd(f, pneg(g))


def pmul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    field = f[0].field
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def pscale(f: Poly, c: FieldElement) -> Poly:
    if c.is_zero():
        return ()
    return tuple(a * c for a in f)


def pdivmod(f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if deg(f) < deg(g):
        return (), f
    field = g[-1].field
    inv_lead = g[-1].inverse()
    rem = list(f)
    quot = [field.zero] * (deg(f) - deg(g) + 1)
    for i in range(deg(f) - deg(g), -1, -1):
        c = rem[i + deg(g)] * inv_lead
        quot[i] = c
        if not c.is_zero():
            for j, b in enumerate(g):
                rem[i + j] = rem[i + j] - c * b
    while rem and rem[-1].is_zero():
        rem.pop()
    while quot and quot[-1].is_zero():
        quot.pop()
    return tuple(quot), tuple(rem)


def pmod(f: Poly, g: Poly) -> Poly:
    return pdivmod(f, g)[1]


def pgcd(f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, pmod(f, g)
    if not f:
        return ()
    return pscale(f, f[-1].inverse())  # monic


def pderiv(f: Poly) -> Poly:
    if deg(f) < 1:
        return ()
    out = [c * i for i, c in enumerate(f)][1:]
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def peval(f: Poly, x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for c in reversed(f):
        acc = acc * x + c
    return acc


def ppowmod(base: Poly, e: int, m: Poly) -> Poly:
    field = m[-1].field
    result = poly(field, [1])
    base = pmod(base, m)
    while e:
        if e & 1:
            result = pmod(pmul(result, base), m)
        base = pmod(pmul(base, base), m)
        e >>= 1
    return result


def is_squarefree(f: Poly) -> bool:
    return deg(pgcd(f, pderiv(f))) <= 0


def roots(f: Poly, field: Field) -> List[FieldElement]:
    """Distinct roots of f in the given field, sorted canonically.

    Isolates the F_q-rational part via gcd(f, x^q - x), then splits it
    with the deterministic quadratic-character sieve gcd(g, (x+c)^((q-1)/2) - 1)
    for c = 0, 1, 2, ... in field enumeration order.
    """
    f = tuple(field.element(c) if c.field is not field else c for c in f)
    if not f:
        raise ValueError("zero polynomial has every root")
    if deg(f) == 0:
        return []
    x = poly(field, [0, 1])
    xq = ppowmod(x, field.q, f)
    g = pgcd(psub(xq, x), f)
    found: List[FieldElement] = []
    _split_linear(g, field, found)
    found.sort(key=lambda e: e.coeffs)
    return found


def _split_linear(g: Poly, field: Field, out: List[FieldElement]) -> None:
    d = deg(g)
    if d <= 0:
        return
    if d == 1:
        out.append(-g[0] / g[1])
        return
    if peval(g, field.zero).is_zero():
        out.append(field.zero)
        g = pdivmod(g, poly(field, [0, 1]))[0]
        _split_linear(g, field, out)
        return
    if d == 2:
        # quadratic formula
        a, b, c = g[2], g[1], g[0]
        disc = b * b - 4 * a * c
        s = sqrt(disc)
        if s is None:
            return
        inv2a = (a + a).inverse()
        out.append((-b + s) * inv2a)
        out.append((-b - s) * inv2a)
        return
    half = (field.q - 1) // 2
    for c in field.elements():
        shifted = poly(field, [c, 1])
        w = psub(ppowmod(shifted, half, g), poly(field, [1]))
        h = pgcd(w, g)
        if 0 < deg(h) < deg(g):
            _split_linear(h, field, out)
            _split_linear(pdivmod(g, h)[0], field, out)
            return
    raise AssertionError("splitting sieve exhausted the field")  # unreachable
