"""Weil pairing on n-torsion and anti-isometries as matrices.

The pairing is computed with Miller's algorithm in the ratio convention

    e_n(P, Q) = [f_P(Q + S) / f_P(S)] / [f_Q(P + S') / f_Q(S')]

with deterministic offset points S, S' (first curve points, in canonical
enumeration order, for which every intermediate line is defined and
nonzero). The suite pins e_2((e1,0), (e2,0)) = -1, so a convention flip
cannot pass unnoticed.

Anti-isometries are stored as 2x2 matrices mod n relative to bases
normalized to report the same primitive root of unity; with a common
zeta, reversing the pairing is exactly det = -1 mod n. Levels are
restricted to n in {2, 3, 5, 7}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

from .curves import (CurveModel, INFINITY, Point, _add, _span,
                     full_torsion_points, negate, on_curve, rhs, scalar_mul,
                     torsion_basis)
from .errors import FieldMismatchError, InputError
from .field import FieldElement, sqrt

ALLOWED_LEVELS = (2, 3, 5, 7)

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]


def _check_level(n: int) -> None:
    if n not in ALLOWED_LEVELS:
        raise InputError(f"level {n} not supported; use a prime in {ALLOWED_LEVELS}")


# ------------------------------------------------------------------
# Miller's algorithm
# ------------------------------------------------------------------

class _MillerDegeneracy(ArithmeticError):
    """Offset point hit a zero or pole; retry with the next offset."""


def _slope(E: CurveModel, P: Point, Q: Point):
    """Slope of the line through P and Q (tangent when P = Q), or None
    when the line is vertical."""
    if P.x == Q.x:
        if (P.y + Q.y).is_zero():
            return None
        c3, c2, c1, _ = E.cubic_coefficients()
        return ((3 * c3 * P.x + 2 * c2) * P.x + c1) / (P.y + P.y)
    return (Q.y - P.y) / (Q.x - P.x)


def _line_value(E: CurveModel, P: Point, Q: Point, X: Point) -> FieldElement:
    """The line function through P and Q evaluated at the affine point X."""
    if P.is_infinity and Q.is_infinity:
        return X.x.field.one
    if P.is_infinity:
        return X.x - Q.x
    if Q.is_infinity:
        return X.x - P.x
    lam = _slope(E, P, Q)
    if lam is None:
        return X.x - P.x
    return (X.y - P.y) - lam * (X.x - P.x)


def _miller(E: CurveModel, P: Point, n: int, X: Point) -> FieldElement:
    """f_{n,P}(X) for [n]P = O, by the standard double-and-add loop."""
    if X.is_infinity:
        raise _MillerDegeneracy("evaluation at infinity")
    field = X.x.field
    f = field.one
    T = P
    for bit in bin(n)[3:]:
        num = _line_value(E, T, T, X)
        T = _add(T, T, E)
        den = _line_value(E, T, negate(T), X) if not T.is_infinity else field.one
        if num.is_zero() or den.is_zero():
            raise _MillerDegeneracy("line vanished at evaluation point")
        f = f * f * num / den
        if bit == "1":
            num = _line_value(E, T, P, X)
            T = _add(T, P, E)
            den = (_line_value(E, T, negate(T), X)
                   if not T.is_infinity else field.one)
            if num.is_zero() or den.is_zero():
                raise _MillerDegeneracy("line vanished at evaluation point")
            f = f * num / den
    return f


def _curve_points(E: CurveModel) -> Iterator[Point]:
    """Affine points of E in canonical order (x ascending, smaller y first)."""
    for x in E.field.elements():
        y = sqrt(rhs(E, x))
        if y is None:
            continue
        yield Point(x, y)
        if not y.is_zero():
            yield Point(x, -y)


def weil_pairing(E: CurveModel, n: int, P: Point, Q: Point) -> FieldElement:
    """e_n(P, Q): bilinear, alternating, Galois-equivariant.

    Requires [n]P = [n]Q = O and n | q - 1 for the working field.
    Computed as [f_P(Q+S)/f_P(S)] / [f_Q(P+S')/f_Q(S')] with S' = -S:
    the second ratio then evaluates f_Q on the translate of (P) - (O)
    by -S, which is what makes the value independent of the offset.
    """
    _check_level(n)
    field = E.field
    if (field.q - 1) % n != 0:
        raise InputError(f"field has no {n}-th roots of unity")
    for R in (P, Q):
        if not on_curve(E, R):
            raise InputError("pairing arguments must lie on the curve")
        if not scalar_mul(n, R, E).is_infinity:
            raise InputError(f"pairing argument is not {n}-torsion")
    if P.is_infinity or Q.is_infinity or P == Q or P == negate(Q):
        return field.one
    # offsets S outside {O, P, -Q, P-Q} keep all four evaluation points
    # away from the zeros and poles of f_P and the translated f_Q
    bad = {INFINITY, P, negate(Q), _add(P, negate(Q), E)}
    for S in _curve_points(E):
        if S in bad:
            continue
        QS = _add(Q, S, E)
        PS = _add(P, negate(S), E)
        negS = negate(S)
        try:
            num = _miller(E, P, n, QS) / _miller(E, P, n, S)
            den = _miller(E, Q, n, PS) / _miller(E, Q, n, negS)
        except (_MillerDegeneracy, ZeroDivisionError):
            continue
        e = num / den
        if (e ** n) != field.one:
            raise ArithmeticError("pairing value is not an n-th root of unity")
        return e
    # Too few rational points to host an offset (e.g. E(F_p) = E[2]).
    # The pairing is Galois-stable, so compute over a quadratic
    # extension and read the root of unity back off the prime field.
    return _pairing_via_extension(E, n, P, Q)


def _pairing_via_extension(E: CurveModel, n: int, P: Point, Q: Point) -> FieldElement:
    from .curves import base_change
    from .field import Field
    field = E.field
    if field.k != 1:
        raise InputError("no usable Miller offset point found")
    ext = Field.extension(field.p, 2)
    E2 = base_change(E, ext)
    lift = lambda R: Point(ext.embed(R.x), ext.embed(R.y))
    e = weil_pairing(E2, n, lift(P), lift(Q))
    if not e.in_prime_subfield():
        raise ArithmeticError("pairing value escaped the prime field")
    return field.element(e.coeffs[0])


def _is_primitive_root(zeta: FieldElement, n: int) -> bool:
    if zeta.is_zero():
        return False
    acc = zeta
    for _ in range(n - 1):
        if acc == zeta.field.one:
            return False
        acc = acc * zeta
    return acc == zeta.field.one


# ------------------------------------------------------------------
# Torsion bases
# ------------------------------------------------------------------

@dataclass(frozen=True)
class TorsionBasis:
    """A basis (P, Q) of E[n] with its pairing value zeta = e_n(P, Q)."""

    curve: CurveModel
    n: int
    P: Point
    Q: Point
    zeta: FieldElement

    def __post_init__(self):
        _check_level(self.n)
        for R in (self.P, self.Q):
            if not scalar_mul(self.n, R, self.curve).is_infinity:
                raise InputError("basis point is not n-torsion")
            if R.is_infinity:
                raise InputError("basis point has order 1")
        if not _is_primitive_root(self.zeta, self.n):
            raise InputError("pairing of basis is not a primitive root: "
                             "points do not generate E[n]")

    @property
    def field(self):
        return self.curve.field


def make_torsion_basis(E: CurveModel, n: int) -> TorsionBasis:
    """Canonical basis of E[n] over the minimal torsion field,
    with nondegeneracy certified by the Weil pairing."""
    _k, E_ext, P, Q = torsion_basis(E, n)
    zeta = weil_pairing(E_ext, n, P, Q)
    return TorsionBasis(E_ext, n, P, Q, zeta)


def basis_over(E_ext: CurveModel, n: int) -> TorsionBasis:
    """Canonical basis of E[n] over the field E_ext already lives on."""
    _check_level(n)
    pts = full_torsion_points(E_ext, n)
    if len(pts) != n * n:
        raise InputError(f"E[{n}] is not rational over {E_ext.field}")
    nonzero = [R for R in pts if not R.is_infinity]
    P = nonzero[0]
    span = _span(P, E_ext, n)
    Q = next(R for R in nonzero if R not in span)
    zeta = weil_pairing(E_ext, n, P, Q)
    return TorsionBasis(E_ext, n, P, Q, zeta)


_DLOG_CACHE: Dict[TorsionBasis, Dict[Point, Tuple[int, int]]] = {}


def _grid(basis: TorsionBasis) -> Dict[Point, Tuple[int, int]]:
    table = _DLOG_CACHE.get(basis)
    if table is None:
        table = {}
        E, n = basis.curve, basis.n
        row = INFINITY
        for a in range(n):
            cell = row
            for b in range(n):
                table[cell] = (a, b)
                cell = _add(cell, basis.Q, E)
            row = _add(row, basis.P, E)
        _DLOG_CACHE[basis] = table
    return table


def coords_in_basis(basis: TorsionBasis, R: Point) -> Tuple[int, int]:
    """(a, b) with R = [a]P + [b]Q, by exhaustive n^2 search."""
    coords = _grid(basis).get(R)
    if coords is None:
        raise InputError("point not in the span of the basis "
                         "(basis corruption or wrong torsion level)")
    return coords


def point_from_coords(basis: TorsionBasis, a: int, b: int) -> Point:
    n, E = basis.n, basis.curve
    return _add(scalar_mul(a % n, basis.P, E),
                scalar_mul(b % n, basis.Q, E), E)


def normalize_bases(B: TorsionBasis, B2: TorsionBasis) -> TorsionBasis:
    """Adjust B2 (replace Q2 by [u]Q2) so it reports the same zeta as B."""
    if B.n != B2.n:
        raise InputError("bases have different levels")
    if B.field is not B2.field:
        raise FieldMismatchError(
            "root-of-unity groups incompatible: bases live in different fields")
    if B2.zeta == B.zeta:
        return B2
    n = B.n
    acc = B2.field.one
    for u in range(1, n):
        acc = acc * B2.zeta
        if acc == B.zeta:
            return TorsionBasis(B2.curve, n, B2.P,
                                scalar_mul(u, B2.Q, B2.curve), B.zeta)
    raise InputError("no power of zeta' matches zeta; bases incompatible")


# ------------------------------------------------------------------
# Anti-isometries
# ------------------------------------------------------------------

def is_anti_isometry(M: Matrix, n: int) -> bool:
    """det(M) = -1 mod n; with a shared zeta this is exactly the
    pairing-reversal condition. For n = 2, -1 = 1 and anti-isometries
    coincide with isometries."""
    (a, b), (c, d) = M
    return (a * d - b * c) % n == (-1) % n


@dataclass(frozen=True)
class AntiIsometry:
    """Pairing-reversing isomorphism E[n] -> E'[n] in matrix form.

    The matrix sends coordinates in the source basis to coordinates in
    the target basis (columns are the images of the basis vectors).
    Construct through make_anti_isometry, which normalizes the target.
    """

    source: TorsionBasis
    target: TorsionBasis
    matrix: Matrix

    def __post_init__(self):
        n = self.source.n
        if self.target.n != n:
            raise InputError("source and target levels differ")
        if self.target.zeta != self.source.zeta:
            raise InputError("bases not normalized to a common zeta")
        reduced = tuple(tuple(v % n for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", reduced)
        if not is_anti_isometry(reduced, n):
            raise InputError(f"matrix determinant is not -1 mod {n}")

    @property
    def n(self) -> int:
        return self.source.n


def make_anti_isometry(source: TorsionBasis, target: TorsionBasis,
                       matrix: Matrix) -> AntiIsometry:
    return AntiIsometry(source, normalize_bases(source, target), matrix)


def apply_anti_isometry(phi: AntiIsometry, R: Point) -> Point:
    """Image of R in E'[n]: decompose over the source basis, multiply
    by the matrix, reassemble over the target basis."""
    a, b = coords_in_basis(phi.source, R)
    (m00, m01), (m10, m11) = phi.matrix
    return point_from_coords(phi.target, m00 * a + m01 * b, m10 * a + m11 * b)
