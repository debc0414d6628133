"""Elliptic curve models over finite fields.

Four models: short Weierstrass, factored cubic, Legendre, and a smooth
genus-1 quartic (counting and j only). Cubic models share one generic
chord-tangent group law for y^2 = c3 x^3 + c2 x^2 + c1 x + c0. Point
counting is naive enumeration, capped at q <= 10^6; torsion fields are
located with division polynomials and verified constructively.

All values are immutable and all operations pure.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import polys
from .errors import (BudgetExceededError, FieldMismatchError, InputError,
                     PointNotOnCurveError, SingularCurveError)
from .field import Field, FieldElement, sqrt

COUNT_BUDGET = 10 ** 6
MAX_TORSION_DEGREE = 6
SUBGROUP_ORDER_CAP = 12


@dataclass(frozen=True)
class Point:
    """Affine point or the point at infinity (x = y = None)."""

    x: Optional[FieldElement]
    y: Optional[FieldElement]

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def key(self):
        """Canonical sort key; infinity sorts first."""
        if self.is_infinity:
            return (0,)
        return (1, self.x.coeffs, self.y.coeffs)

    def __repr__(self):
        if self.is_infinity:
            return "Point(inf)"
        return f"Point({self.x!r}, {self.y!r})"


INFINITY = Point(None, None)


def _common_field(*elements: FieldElement) -> Field:
    field = elements[0].field
    for e in elements[1:]:
        if e.field is not field:
            raise FieldMismatchError("curve coefficients span several fields")
    return field


class CurveModel:
    """Base for the four concrete models."""

    @property
    def field(self) -> Field:
        raise NotImplementedError

    def is_cubic(self) -> bool:
        return not isinstance(self, QuarticGenus1)


@dataclass(frozen=True)
class ShortW(CurveModel):
    """y^2 = x^3 + A x + B."""

    A: FieldElement
    B: FieldElement

    def __post_init__(self):
        _common_field(self.A, self.B)
        disc = 4 * self.A ** 3 + 27 * self.B ** 2
        if disc.is_zero():
            raise SingularCurveError("4A^3 + 27B^2 = 0")

    @property
    def field(self) -> Field:
        return self.A.field

    def cubic_coefficients(self):
        f = self.field
        return (f.one, f.zero, self.A, self.B)


@dataclass(frozen=True)
class FactoredCubic(CurveModel):
    """y^2 = c (x - e1)(x - e2)(x - e3)."""

    c: FieldElement
    e1: FieldElement
    e2: FieldElement
    e3: FieldElement

    def __post_init__(self):
        _common_field(self.c, self.e1, self.e2, self.e3)
        if self.c.is_zero():
            raise SingularCurveError("leading coefficient is zero")
        if self.e1 == self.e2 or self.e1 == self.e3 or self.e2 == self.e3:
            raise SingularCurveError("repeated root in factored cubic")

    @property
    def field(self) -> Field:
        return self.c.field

    def cubic_coefficients(self):
        s1 = self.e1 + self.e2 + self.e3
        s2 = self.e1 * self.e2 + self.e1 * self.e3 + self.e2 * self.e3
        s3 = self.e1 * self.e2 * self.e3
        return (self.c, -self.c * s1, self.c * s2, -self.c * s3)


@dataclass(frozen=True)
class Legendre(CurveModel):
    """y^2 = x(x - 1)(x - lambda)."""

    lam: FieldElement

    def __post_init__(self):
        if self.lam.is_zero() or self.lam == self.lam.field.one:
            raise SingularCurveError("Legendre parameter in {0, 1}")

    @property
    def field(self) -> Field:
        return self.lam.field

    def cubic_coefficients(self):
        f = self.field
        return (f.one, -(f.one + self.lam), self.lam, f.zero)


@dataclass(frozen=True)
class QuarticGenus1(CurveModel):
    """w^2 = a4 y^4 + a3 y^3 + a2 y^2 + a1 y + a0, smooth as a binary form.

    Supports counting and j only. The common biquadratic shape has
    a3 = a1 = 0; a4 = 0 with a3 != 0 degenerates to a cubic and is
    counted as one (single point at infinity).
    """

    a4: FieldElement
    a3: FieldElement
    a2: FieldElement
    a1: FieldElement
    a0: FieldElement

    def __post_init__(self):
        field = _common_field(self.a4, self.a3, self.a2, self.a1, self.a0)
        if self.a4.is_zero() and self.a3.is_zero():
            raise SingularCurveError("binary form degenerates below degree 3")
        f = polys.poly(field, [self.a0, self.a1, self.a2, self.a3, self.a4])
        if not polys.is_squarefree(f):
            raise SingularCurveError("quartic has a repeated root")

    @classmethod
    def biquadratic(cls, a4: FieldElement, a2: FieldElement, a0: FieldElement):
        zero = a4.field.zero
        return cls(a4, zero, a2, zero, a0)

    @property
    def field(self) -> Field:
        return self.a4.field

    def rhs_poly(self):
        return polys.poly(self.field,
                          [self.a0, self.a1, self.a2, self.a3, self.a4])


# ------------------------------------------------------------------
# Group law (cubic models)
# ------------------------------------------------------------------

def rhs(E: CurveModel, x: FieldElement) -> FieldElement:
    if isinstance(E, QuarticGenus1):
        return polys.peval(E.rhs_poly(), x)
    c3, c2, c1, c0 = E.cubic_coefficients()
    return ((c3 * x + c2) * x + c1) * x + c0


def on_curve(E: CurveModel, P: Point) -> bool:
    if P.is_infinity:
        return True
    if P.x.field is not E.field:
        return False
    return (P.y * P.y) == rhs(E, P.x)


def _require_on_curve(E: CurveModel, P: Point) -> None:
    if not on_curve(E, P):
        raise PointNotOnCurveError(f"{P} not on {E}")


def _add(P: Point, Q: Point, E: CurveModel) -> Point:
    """Chord-tangent addition; callers guarantee P, Q lie on E."""
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    c3, c2, c1, _c0 = E.cubic_coefficients()
    if P.x == Q.x:
        if (P.y + Q.y).is_zero():
            return INFINITY
        x = P.x
        lam = ((3 * c3 * x + 2 * c2) * x + c1) / (P.y + P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = (lam * lam - c2) / c3 - P.x - Q.x
    y3 = -(P.y + lam * (x3 - P.x))
    return Point(x3, y3)


def group_law(P: Point, Q: Point, E: CurveModel) -> Point:
    """Chord-tangent addition on any cubic model."""
    if isinstance(E, QuarticGenus1):
        raise InputError("quartic model supports only counting and j")
    _require_on_curve(E, P)
    _require_on_curve(E, Q)
    return _add(P, Q, E)


def negate(P: Point) -> Point:
    if P.is_infinity:
        return P
    return Point(P.x, -P.y)


def scalar_mul(m: int, P: Point, E: CurveModel) -> Point:
    if isinstance(E, QuarticGenus1):
        raise InputError("quartic model supports only counting and j")
    _require_on_curve(E, P)
    if m < 0:
        m, P = -m, negate(P)
    R = INFINITY
    Q = P
    while m:
        if m & 1:
            R = _add(R, Q, E)
        Q = _add(Q, Q, E)
        m >>= 1
    return R


def point_order(P: Point, E: CurveModel, bound: int = 200) -> int:
    _require_on_curve(E, P)
    R = P
    for m in range(1, bound + 1):
        if R.is_infinity:
            return m
        R = _add(R, P, E)
    raise BudgetExceededError(f"point order exceeds {bound}")


# ------------------------------------------------------------------
# j-invariant and model conversion
# ------------------------------------------------------------------

def to_short_weierstrass(E: CurveModel):
    """(ShortW model, map to it, map back), all over E's field."""
    if isinstance(E, QuarticGenus1):
        raise InputError("quartic model has no Weierstrass conversion here")
    if isinstance(E, ShortW):
        ident = lambda P: P
        return E, ident, ident
    c3, c2, c1, c0 = E.cubic_coefficients()
    field = E.field
    three = field.element(3)
    shift = c2 / three
    A = c1 * c3 - c2 * c2 / three
    B = (c0 * c3 * c3 - c1 * c2 * c3 / three
         + 2 * c2 ** 3 / field.element(27))
    sw = ShortW(A, B)

    def fwd(P: Point) -> Point:
        if P.is_infinity:
            return P
        return Point(c3 * P.x + shift, c3 * P.y)

    def back(P: Point) -> Point:
        if P.is_infinity:
            return P
        return Point((P.x - shift) / c3, P.y / c3)

    return sw, fwd, back


def j_invariant(E: CurveModel) -> FieldElement:
    if isinstance(E, Legendre):
        lam = E.lam
        num = 256 * (lam * lam - lam + 1) ** 3
        den = (lam * (lam - 1)) ** 2
        return num / den
    if isinstance(E, QuarticGenus1):
        return j_invariant(_quartic_jacobian(E))
    sw, _, _ = to_short_weierstrass(E)
    four_a3 = 4 * sw.A ** 3
    return 1728 * four_a3 / (four_a3 + 27 * sw.B ** 2)


def _quartic_jacobian(E: QuarticGenus1) -> ShortW:
    """Jacobian of the genus-1 quartic via classical binary-quartic
    invariants I and J: y^2 = x^3 - 27I x - 27J."""
    a4, a3, a2, a1, a0 = E.a4, E.a3, E.a2, E.a1, E.a0
    I = 12 * a4 * a0 - 3 * a3 * a1 + a2 * a2
    J = (72 * a4 * a2 * a0 + 9 * a3 * a2 * a1 - 27 * a4 * a1 * a1
         - 27 * a0 * a3 * a3 - 2 * a2 ** 3)
    return ShortW(-27 * I, -27 * J)


def base_change(E: CurveModel, field: Field) -> CurveModel:
    emb = field.embed
    if isinstance(E, ShortW):
        return ShortW(emb(E.A), emb(E.B))
    if isinstance(E, FactoredCubic):
        return FactoredCubic(emb(E.c), emb(E.e1), emb(E.e2), emb(E.e3))
    if isinstance(E, Legendre):
        return Legendre(emb(E.lam))
    return QuarticGenus1(emb(E.a4), emb(E.a3), emb(E.a2), emb(E.a1), emb(E.a0))


# ------------------------------------------------------------------
# Point counting
# ------------------------------------------------------------------

def count_points(E: CurveModel) -> Tuple[int, int]:
    """(#E(F_q), trace q + 1 - #E) by exhaustive enumeration, q <= 10^6.

    Cubic models get one point at infinity. The smooth quartic model
    gets 2 iff the leading coefficient is a nonzero square, 0 if it is
    a non-square, and 1 (cubic fallback) when a4 = 0.
    """
    field = E.field
    q = field.q
    if q > COUNT_BUDGET:
        raise BudgetExceededError(f"field size {q} exceeds counting budget")
    if field.k == 1:
        count = _count_prime_field(E)
    else:
        count = _count_generic(E)
    trace = q + 1 - count
    genus_bound = 4 * q
    if trace * trace > genus_bound:
        raise ArithmeticError(f"Hasse bound violated: trace {trace}, q {q}")
    return count, trace


def _chi_table(p: int) -> bytearray:
    """table[v] = number of y with y^2 = v, for v in [0, p)."""
    table = bytearray(p)
    table[0] = 1
    for y in range(1, (p + 1) // 2):
        table[(y * y) % p] = 2
    return table


def _count_prime_field(E: CurveModel) -> int:
    p = E.field.p
    table = _chi_table(p)
    if isinstance(E, QuarticGenus1):
        a4, a3, a2, a1, a0 = (c.lift() for c in
                              (E.a4, E.a3, E.a2, E.a1, E.a0))
        count = 0
        for y in range(p):
            v = ((((a4 * y + a3) * y + a2) * y + a1) * y + a0) % p
            count += table[v]
        if a4 == 0:
            count += 1
        elif table[a4] == 2:
            count += 2
        return count
    c3, c2, c1, c0 = (c.lift() for c in E.cubic_coefficients())
    count = 1
    for x in range(p):
        v = (((c3 * x + c2) * x + c1) * x + c0) % p
        count += table[v]
    return count


def _count_generic(E: CurveModel) -> int:
    field = E.field
    squares = {field.zero.coeffs: 1}
    for e in field.elements():
        if e.is_zero():
            continue
        squares[(e * e).coeffs] = 2
    if isinstance(E, QuarticGenus1):
        f = E.rhs_poly()
        count = sum(squares.get(polys.peval(f, y).coeffs, 0)
                    for y in field.elements())
        if E.a4.is_zero():
            count += 1
        elif squares.get(E.a4.coeffs, 0) == 2:
            count += 2
        return count
    count = 1
    for x in field.elements():
        count += squares.get(rhs(E, x).coeffs, 0)
    return count


def frobenius_trace_power(a1: int, q: int, k: int) -> int:
    """Trace of Frobenius^k from the trace over F_q: a_k with
    a_0 = 2, a_1 = a1, a_k = a1 a_{k-1} - q a_{k-2}."""
    prev, cur = 2, a1
    for _ in range(k - 1):
        prev, cur = cur, a1 * cur - q * prev
    return cur if k >= 1 else prev


# ------------------------------------------------------------------
# Division polynomials and torsion
# ------------------------------------------------------------------

def _psi_sequence(E: ShortW, mmax: int):
    """Division polynomials psi_0..psi_mmax for y^2 = x^3 + Ax + B,
    each as (x-polynomial, y-flag) with y^2 folded into f(x)."""
    field = E.field
    A, B = E.A, E.B
    f = polys.poly(field, [B, A, field.zero, field.one])

    def mul(u, v):
        gu, bu = u
        gv, bv = v
        g = polys.pmul(gu, gv)
        if bu and bv:
            return polys.pmul(g, f), 0
        return g, bu ^ bv

    def sub(u, v):
        if u[1] != v[1]:
            raise AssertionError("parity mismatch in psi recurrence")
        return polys.psub(u[0], v[0]), u[1]

    one = polys.poly(field, [1])
    psi = [((), 0), (one, 0), (polys.poly(field, [2]), 1)]
    A2 = A * A
    psi.append((polys.poly(field, [-A2, 12 * B, 6 * A, field.zero, 3]), 0))
    psi.append((polys.poly(field, [
        -8 * B * B - A2 * A, -4 * A * B, -5 * A2, 20 * B, 5 * A,
        field.zero, field.one]), 1))
    psi[4] = (polys.pscale(psi[4][0], field.element(4)), 1)
    for m in range(5, mmax + 1):
        r = m // 2
        if m % 2 == 1:
            term1 = mul(psi[r + 2], mul(psi[r], mul(psi[r], psi[r])))
            term2 = mul(psi[r - 1], mul(psi[r + 1], mul(psi[r + 1], psi[r + 1])))
            psi.append(sub(term1, term2))
        else:
            bracket = sub(mul(psi[r + 2], mul(psi[r - 1], psi[r - 1])),
                          mul(psi[r - 2], mul(psi[r + 1], psi[r + 1])))
            num = mul(psi[r], bracket)
            if num[1] != 0:
                raise AssertionError("even psi numerator should be y-free")
            # psi_2r = num / (2y); as an element that is (num / 2f) * y
            den = polys.pscale(f, field.element(2))
            quot, rem = polys.pdivmod(num[0], den)
            if rem:
                raise AssertionError("division polynomial recurrence not exact")
            psi.append((quot, 1))
    return psi


def torsion_x_candidates(E: ShortW, m: int):
    """Polynomials over E's field whose roots are exactly the
    x-coordinates of the nonzero points killed by [m]."""
    field = E.field
    if m == 1:
        return []
    f = polys.poly(field, [E.B, E.A, field.zero, field.one])
    if m == 2:
        return [f]
    psi = _psi_sequence(E, m)
    if m % 2 == 1:
        return [psi[m][0]]
    return [f, psi[m][0]]


_torsion_points_cache: Dict[tuple, tuple] = {}


def full_torsion_points(E: CurveModel, m: int,
                        group_order: Optional[int] = None) -> Tuple[Point, ...]:
    """All rational points of order dividing m on E over its own field.

    When group_order (= #E over this field) is supplied, a sampling
    shortcut first tries to exhibit all m^2 points by pushing sampled
    points into the relevant Sylow subgroups; its positive answer is
    self-certifying (every emitted point is checked to be m-torsion and
    the closure reaches m^2). Otherwise, or when the shortcut cannot
    certify fullness, the division-polynomial enumeration decides
    exactly.
    """
    field = E.field
    if m % field.p == 0:
        raise InputError("torsion level divisible by the characteristic")
    key = (E, m)
    if key in _torsion_points_cache:
        return _torsion_points_cache[key]
    if m == 1:
        result = (INFINITY,)
        _torsion_points_cache[key] = result
        return result
    result = None
    if group_order is not None:
        result = _torsion_by_sampling(E, m, group_order)
    if result is None:
        result = _torsion_by_division_polys(E, m)
    _torsion_points_cache[key] = result
    return result


def _torsion_by_division_polys(E: CurveModel, m: int) -> Tuple[Point, ...]:
    field = E.field
    sw, _fwd, back = to_short_weierstrass(E)
    pts = [INFINITY]
    seen = set()
    for g in torsion_x_candidates(sw, m):
        for x0 in polys.roots(g, field):
            if x0.coeffs in seen:
                continue
            seen.add(x0.coeffs)
            y0 = sqrt(rhs(sw, x0))
            if y0 is None:
                continue
            pts.append(back(Point(x0, y0)))
            if not y0.is_zero():
                pts.append(back(Point(x0, -y0)))
    return tuple(sorted(pts, key=Point.key))


_SAMPLING_BUDGET = 96


def _torsion_by_sampling(E: CurveModel, m: int,
                         group_order: int) -> Optional[Tuple[Point, ...]]:
    """E[m] when fully rational, else None (never a wrong answer:
    every candidate is verified m-torsion before the closure count)."""
    if group_order % (m * m) != 0:
        return None
    prime_parts = []
    rest = m
    for ell in (2, 3, 5, 7, 11):
        if rest % ell == 0:
            e = 0
            while rest % ell == 0:
                rest //= ell
                e += 1
            prime_parts.append((ell, e))
    if rest != 1:
        return None
    field = E.field
    p, k = field.p, field.k
    # deterministic seeded sample sequence; structured scans (subfield
    # slices, affine progressions) can hide in proper subgroups
    rng = random.Random(f"torsion-sample:{p}:{k}")
    xs = (field.element(tuple(rng.randrange(p) for _ in range(k)))
          for _ in range(_SAMPLING_BUDGET))
    samples = [Point(x, y) for x in xs
               for y in (sqrt(rhs(E, x)),) if y is not None]
    part_points: List[set] = []
    for ell, e in prime_parts:
        target = ell ** (2 * e)
        s = 0
        n_ell = group_order
        while n_ell % ell == 0:
            n_ell //= ell
            s += 1
        found = {INFINITY}
        gens: List[Point] = []
        for sample in samples:
            if len(found) >= target:
                break
            T = scalar_mul(n_ell, sample, E)
            for _ in range(s + 1):
                if scalar_mul(ell ** e, T, E).is_infinity:
                    break
                T = scalar_mul(ell, T, E)
            else:
                continue
            if T in found:
                continue
            gens.append(T)
            found = _closure(gens, E, target)
        if len(found) != target:
            return None
        part_points.append(found)
    total = part_points[0]
    for other in part_points[1:]:
        total = {_add(P, Q, E) for P in total for Q in other}
    if len(total) != m * m:
        return None
    return tuple(sorted(total, key=Point.key))


_torsion_cache: Dict[tuple, tuple] = {}


def minimal_torsion_field(E: CurveModel, m: int):
    """Smallest k <= 6 with E[m] rational over F_{p^k}.

    Returns (k, E over the extension, all m-torsion points). Quick
    necessary filters (m | q - 1, m^2 | #E(F_q) via the trace
    recurrence) precede the constructive division-polynomial check.
    """
    key = (E, m)
    if key in _torsion_cache:
        return _torsion_cache[key]
    field = E.field
    if field.k != 1:
        raise InputError("torsion search starts from a prime-field model")
    p = field.p
    if m % p == 0:
        raise InputError(f"characteristic {p} divides torsion level {m}")
    _, a1 = count_points(E)
    for k in range(1, MAX_TORSION_DEGREE + 1):
        q = p ** k
        if q > COUNT_BUDGET:
            raise BudgetExceededError(
                f"E[{m}] not rational within field budget (p={p}, k<{k})")
        if (q - 1) % m != 0:
            continue
        n_k = q + 1 - frobenius_trace_power(a1, p, k)
        if n_k % (m * m) != 0:
            continue
        ext = field if k == 1 else Field.extension(p, k)
        E_ext = E if k == 1 else base_change(E, ext)
        pts = full_torsion_points(E_ext, m, group_order=n_k)
        if len(pts) == m * m:
            result = (k, E_ext, tuple(pts))
            _torsion_cache[key] = result
            return result
    raise BudgetExceededError(
        f"E[{m}] not rational over any extension of degree <= {MAX_TORSION_DEGREE}")


def _span(P: Point, E: CurveModel, m: int):
    pts = set()
    R = INFINITY
    for _ in range(m):
        pts.add(R)
        R = group_law(R, P, E)
    return pts


def _closure(gens: List[Point], E: CurveModel, cap: int) -> set:
    pts = {INFINITY}
    frontier = list(gens)
    while frontier:
        R = frontier.pop()
        if R in pts:
            continue
        pts.add(R)
        for Q in list(pts):
            S = group_law(R, Q, E)
            if S not in pts:
                frontier.append(S)
        if len(pts) > cap:
            break
    return pts


def torsion_basis(E: CurveModel, n: int):
    """Deterministic basis of E[n] for n in {2, 3, 5, 7}.

    Returns (k, E over F_{p^k}, P, Q): P is the lexicographically
    smallest point of exact order n, Q the smallest point independent
    of P. The Weil pairing primitivity of (P, Q) is re-verified by the
    pairing layer when a TorsionBasis is assembled from this data.
    """
    if n not in (2, 3, 5, 7):
        raise InputError(f"torsion level {n} not in {{2, 3, 5, 7}}")
    k, E_ext, pts = minimal_torsion_field(E, n)
    nonzero = [P for P in pts if not P.is_infinity]
    P = nonzero[0]
    span = _span(P, E_ext, n)
    Q = next(R for R in nonzero if R not in span)
    return k, E_ext, P, Q


def torsion_basis_any(E: CurveModel, d: int):
    """Basis of E[d] for possibly composite d <= 12 (internal)."""
    if d < 2 or d > SUBGROUP_ORDER_CAP:
        raise InputError(f"torsion level {d} outside 2..{SUBGROUP_ORDER_CAP}")
    k, E_ext, pts = minimal_torsion_field(E, d)
    nonzero = [P for P in pts if not P.is_infinity]
    P = next(R for R in nonzero if point_order(R, E_ext, d) == d)
    for Q in nonzero:
        if len(_closure([P, Q], E_ext, d * d + 1)) == d * d:
            return k, E_ext, P, Q
    raise AssertionError("full torsion without a basis")  # unreachable


# ------------------------------------------------------------------
# Finite subgroups and Velu isogenies
# ------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteSubgroup:
    """Explicit point list closed under the group law."""

    curve: CurveModel
    points: Tuple[Point, ...]

    def __post_init__(self):
        pts = set(self.points)
        if INFINITY not in pts:
            raise InputError("subgroup must contain the identity")
        for P in self.points:
            if negate(P) not in pts:
                raise InputError("subgroup not closed under negation")
        for P, Q in itertools.combinations(self.points, 2):
            if group_law(P, Q, self.curve) not in pts:
                raise InputError("subgroup not closed under addition")

    @property
    def order(self) -> int:
        return len(self.points)


_abstract_subgroup_cache: Dict[int, tuple] = {}


def _abstract_subgroups_of_order(d: int):
    """All subgroups of (Z/d)^2 of order exactly d, as frozensets."""
    if d in _abstract_subgroup_cache:
        return _abstract_subgroup_cache[d]
    found = set()
    vectors = list(itertools.product(range(d), repeat=2))
    for v, w in itertools.combinations_with_replacement(vectors, 2):
        sub = {((a * v[0] + b * w[0]) % d, (a * v[1] + b * w[1]) % d)
               for a in range(d) for b in range(d)}
        if len(sub) == d:
            found.add(frozenset(sub))
    result = tuple(sorted(found, key=sorted))
    _abstract_subgroup_cache[d] = result
    return result


def subgroups_of_order(E: CurveModel, d: int) -> List[FiniteSubgroup]:
    """All order-d subgroups of E[d], each as an explicit point list,
    in deterministic (lexicographic point) order."""
    if d > SUBGROUP_ORDER_CAP:
        raise InputError(f"subgroup order {d} exceeds cap {SUBGROUP_ORDER_CAP}")
    if d == 1:
        return [FiniteSubgroup(E, (INFINITY,))]
    _, E_ext, P, Q = torsion_basis_any(E, d)
    grid = {}
    row = INFINITY
    for a in range(d):
        cell = row
        for b in range(d):
            grid[(a, b)] = cell
            cell = group_law(cell, Q, E_ext)
        row = group_law(row, P, E_ext)
    subs = []
    for abstract in _abstract_subgroups_of_order(d):
        points = tuple(sorted((grid[ab] for ab in abstract), key=Point.key))
        subs.append(FiniteSubgroup(E_ext, points))
    subs.sort(key=lambda s: [P.key() for P in s.points])
    return subs


def velu_isogeny(E: ShortW, K: FiniteSubgroup):
    """Velu's formulas: (codomain ShortW, evaluation map) with kernel K."""
    if not isinstance(E, ShortW):
        raise InputError("velu_isogeny needs a short Weierstrass domain")
    for P in K.points:
        _require_on_curve(E, P)
    field = E.field
    kernel = set(K.points)
    finite = [P for P in K.points if not P.is_infinity]
    if not finite:
        return E, (lambda P: P)
    two_torsion = [P for P in finite if P.y.is_zero()]
    reps = list(two_torsion)
    seen = set(two_torsion)
    for P in finite:
        if P in seen:
            continue
        seen.add(P)
        seen.add(negate(P))
        reps.append(P)
    data = []
    v = field.zero
    w = field.zero
    for Qp in reps:
        gx = 3 * Qp.x * Qp.x + E.A
        gy = -2 * Qp.y
        vq = gx if Qp.y.is_zero() else 2 * gx
        uq = gy * gy
        v = v + vq
        w = w + uq + Qp.x * vq
        data.append((Qp.x, Qp.y, gx, gy, vq, uq))
    codomain = ShortW(E.A - 5 * v, E.B - 7 * w)

    def evaluate(P: Point) -> Point:
        if P.is_infinity or P in kernel:
            return INFINITY
        _require_on_curve(E, P)
        X, Y = P.x, P.y
        for (xq, yq, gx, gy, vq, uq) in data:
            inv = (P.x - xq).inverse()
            inv2 = inv * inv
            X = X + vq * inv + uq * inv2
            Y = Y - (2 * uq * P.y * inv2 * inv
                     + vq * (P.y - yq) * inv2
                     - gx * gy * inv2)
        return Point(X, Y)

    return codomain, evaluate


# ------------------------------------------------------------------
# Isomorphisms and twists
# ------------------------------------------------------------------

@dataclass(frozen=True)
class Isomorphism:
    """(x, y) -> (u^2 x, u^3 y) between short Weierstrass forms,
    conjugated by the model conversions of source and target.
    r is the x-translation, identically zero in characteristic > 3."""

    source: CurveModel
    target: CurveModel
    u: FieldElement
    r: FieldElement

    def apply(self, P: Point) -> Point:
        _require_on_curve(self.source, P)
        if P.is_infinity:
            return P
        _, fwd, _ = to_short_weierstrass(self.source)
        _, _, back = to_short_weierstrass(self.target)
        S = fwd(P)
        u2 = self.u * self.u
        return back(Point(u2 * S.x, u2 * self.u * S.y))


def _power_roots(c: FieldElement, m: int) -> List[FieldElement]:
    """All u in the field with u^m = c, via root extraction of x^m - c."""
    field = c.field
    coeffs = [-c] + [field.zero] * (m - 1) + [field.one]
    return polys.roots(polys.poly(field, coeffs), field)


def isomorphisms(E: CurveModel, E2: CurveModel) -> List[Isomorphism]:
    """All base-field isomorphisms E -> E2, as u-rescaling data on the
    short Weierstrass forms. Empty when only a nontrivial twist (or
    nothing) relates the curves. For E = E2 this is Aut(E)."""
    if E.field is not E2.field:
        raise FieldMismatchError("isomorphism search needs a common field")
    field = E.field
    sw1, _, _ = to_short_weierstrass(E)
    sw2, _, _ = to_short_weierstrass(E2)
    A1, B1, A2, B2 = sw1.A, sw1.B, sw2.A, sw2.B
    # u exists only with matching vanishing pattern (j = 0 iff A = 0,
    # j = 1728 iff B = 0 in characteristic > 3)
    if A1.is_zero() != A2.is_zero() or B1.is_zero() != B2.is_zero():
        return []
    if B1.is_zero():
        candidates = _power_roots(A2 / A1, 4)
    elif A1.is_zero():
        candidates = _power_roots(B2 / B1, 6)
    else:
        s = (B2 / B1) / (A2 / A1)
        r = sqrt(s)
        candidates = [] if r is None else sorted({r, -r}, key=lambda e: e.coeffs)
    out = []
    for u in candidates:
        u4 = (u * u) ** 2
        if A2 == u4 * A1 and B2 == u4 * u * u * B1:
            out.append(Isomorphism(E, E2, u, field.zero))
    return out


def automorphism_count(E: CurveModel) -> int:
    return len(isomorphisms(E, E))


def quadratic_twist(E: CurveModel, d: FieldElement) -> CurveModel:
    """Twist by d: y^2 = d f(x) rescaled back to the model's shape.
    trace(E^d) = chi(d) trace(E); j is unchanged."""
    if d.is_zero():
        raise InputError("twist parameter must be nonzero")
    if isinstance(E, ShortW):
        d2 = d * d
        return ShortW(d2 * E.A, d2 * d * E.B)
    if isinstance(E, FactoredCubic):
        return FactoredCubic(d * E.c, E.e1, E.e2, E.e3)
    if isinstance(E, Legendre):
        return FactoredCubic(d, E.field.zero, E.field.one, E.lam)
    return QuarticGenus1(d * E.a4, d * E.a3, d * E.a2, d * E.a1, d * E.a0)
