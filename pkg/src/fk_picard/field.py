"""Exact arithmetic in F_p and explicit small extensions F_{p^k}.

Fields are concrete: an extension is always F_p[x]/(m(x)) for a stored
monic irreducible m, so elements of different extensions never mix
silently. Everything is immutable and pure; canonical choices (smallest
modulus polynomial, lexicographically smaller square root) make every
downstream report bit-reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .errors import FieldMismatchError, InputError

MAX_EXTENSION_DEGREE = 6


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test; all moduli are desk scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A prime p > 3; characteristics 2 and 3 are excluded globally."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")
        if self.p <= 3:
            raise InputError("characteristic must exceed 3")


class FieldElement:
    """An element of F_{p^k}, stored as k residues (ascending powers)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "Field", coeffs: tuple):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    # -- coercion -------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatchError(
                    f"elements of {other.field} and {self.field} cannot mix")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    # -- arithmetic -----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple(
            (a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple(
            (a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field,
                            self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.field, self.field._inv(self.coeffs))

    # -- structure ------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def lift(self) -> int:
        """Integer representative; only meaningful in the prime field."""
        if self.field.k != 1:
            raise InputError("lift() requires a prime-field element")
        return self.coeffs[0]

    def in_prime_subfield(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.element(other)
        return (isinstance(other, FieldElement)
                and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __lt__(self, other):
        other = self._coerce(other)
        return self.coeffs < other.coeffs

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.coeffs[0]} (mod {self.field.p})"
        return f"{list(self.coeffs)} in {self.field}"


class Field:
    """F_{p^k} presented as F_p[x]/(m(x)); k = 1 means the prime field.

    Instances are interned by (p, modulus polynomial), so identity
    comparison is field equality.
    """

    _cache: dict = {}

    def __new__(cls, modulus: PrimeModulus, ext_modulus: tuple):
        key = (modulus.p, ext_modulus)
        cached = cls._cache.get(key)
        if cached is not None:
            return cached
        self = super().__new__(cls)
        self.modulus = modulus
        self.p = modulus.p
        self.ext_modulus = ext_modulus
        self.k = len(ext_modulus) - 1
        self.q = modulus.p ** self.k
        self.zero = FieldElement(self, (0,) * self.k)
        self.one = FieldElement(self, (1,) + (0,) * (self.k - 1))
        cls._cache[key] = self
        return self

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(PrimeModulus(p), (0, 1))

    @classmethod
    def extension(cls, p: int, k: int) -> "Field":
        modulus = PrimeModulus(p)
        return cls(modulus, build_extension(modulus, k))

    # -- element construction -------------------------------------

    def element(self, value: Union[int, Sequence[int], FieldElement]) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            raise FieldMismatchError("element belongs to a different field")
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.k - 1)
            return FieldElement(self, coeffs)
        seq = tuple(int(c) % self.p for c in value)
        if len(seq) != self.k:
            raise InputError(f"expected {self.k} coefficients, got {len(seq)}")
        return FieldElement(self, seq)

    def embed(self, el: FieldElement) -> FieldElement:
        """Embed a prime-field element into this field over the same p."""
        if el.field is self:
            return el
        if el.field.k != 1 or el.field.p != self.p:
            raise FieldMismatchError("can only embed from the prime subfield")
        return self.element(el.coeffs[0])

    def elements(self) -> Iterator[FieldElement]:
        """All elements in canonical (lexicographic coefficient) order."""
        for t in itertools.product(range(self.p), repeat=self.k):
            yield FieldElement(self, t)

    # -- raw coefficient arithmetic --------------------------------

    def _mul(self, a: tuple, b: tuple) -> tuple:
        p, k = self.p, self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        # reduce modulo the monic ext_modulus
        m = self.ext_modulus
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * m[j]
            prod[i] = 0
        return tuple(c % p for c in prod[:k])

    def _inv(self, a: tuple) -> tuple:
        p, k = self.p, self.k
        if k == 1:
            return (pow(a[0], -1, p),)
        # extended Euclid in F_p[x] against the modulus polynomial
        r0 = list(self.ext_modulus)
        r1 = [c % p for c in a]
        t0, t1 = [0], [1]

        def deg(f):
            d = len(f) - 1
            while d >= 0 and f[d] % p == 0:
                d -= 1
            return d

        while deg(r1) > 0:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1, t0, t1 = r1, r0, t1, t0
                continue
            lead = (r0[deg(r0)] * pow(r1[deg(r1)], -1, p)) % p
            shift = deg(r0) - deg(r1)
            for i in range(deg(r1) + 1):
                r0[i + shift] = (r0[i + shift] - lead * r1[i]) % p
            t0 = t0 + [0] * (len(t1) + shift - len(t0))
            for i in range(len(t1)):
                t0[i + shift] = (t0[i + shift] - lead * t1[i]) % p
            if deg(r0) < deg(r1):
                r0, r1, t0, t1 = r1, r0, t1, t0
        if deg(r1) < 0:
            raise ZeroDivisionError("element not invertible")
        c = pow(r1[0], -1, p)
        out = [(c * t) % p for t in t1]
        out += [0] * (k - len(out))
        return tuple(out[:k])

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.k} (mod poly {list(self.ext_modulus)})"


# ------------------------------------------------------------------
# Extension construction
# ------------------------------------------------------------------

def _poly_is_irreducible(coeffs: tuple, p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p.

    f of degree k is irreducible iff x^(p^k) == x mod f and
    gcd(x^(p^(k/l)) - x, f) = 1 for every prime l | k.
    """
    k = len(coeffs) - 1
    if k == 1:
        return True

    def polymulmod(a, b):
        prod = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i]
            if c:
                for j in range(k):
                    prod[i - k + j] = (prod[i - k + j] - c * coeffs[j]) % p
            prod[i] = 0
        out = prod[:k]
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def frob_power(e):
        # x^(p^e) mod f by repeated exponentiation to the p
        r = [0, 1]
        for _ in range(e):
            q = p
            acc = [1]
            base = r
            while q:
                if q & 1:
                    acc = polymulmod(acc, base)
                base = polymulmod(base, base)
                q >>= 1
            r = acc
        return r

    def polygcd(a, b):
        a, b = list(a), list(b)
        while any(c % p for c in b):
            while len(b) > 1 and b[-1] % p == 0:
                b.pop()
            if len(a) < len(b):
                a, b = b, a
                continue
            inv = pow(b[-1], -1, p)
            while len(a) >= len(b) and any(c % p for c in a):
                while len(a) > 1 and a[-1] % p == 0:
                    a.pop()
                if len(a) < len(b):
                    break
                lead = (a[-1] * inv) % p
                shift = len(a) - len(b)
                for i in range(len(b)):
                    a[i + shift] = (a[i + shift] - lead * b[i]) % p
            a, b = b, a
        while len(a) > 1 and a[-1] % p == 0:
            a.pop()
        return a

    xq = frob_power(k)
    # x^(p^k) - x must be 0 mod f
    diff = list(xq) + [0] * (2 - len(xq))
    diff[1] = (diff[1] - 1) % p
    if any(c % p for c in diff):
        return False
    for l in {d for d in (2, 3, 5) if k % d == 0}:
        xe = frob_power(k // l)
        diff = list(xe) + [0] * (2 - len(xe))
        diff[1] = (diff[1] - 1) % p
        g = polygcd(coeffs, diff)
        if len(g) - 1 > 0:
            return False
    return True


def build_extension(p: Union[int, PrimeModulus], k: int) -> tuple:
    """Smallest monic irreducible polynomial of degree k over F_p.

    Polynomials x^k + c_{k-1} x^{k-1} + ... + c_0 are scanned in
    lexicographic order of (c_{k-1}, ..., c_0); coefficients are
    returned ascending, so x^2 + 1 over F_7 is (1, 0, 1).
    """
    modulus = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
    if not 1 <= k <= MAX_EXTENSION_DEGREE:
        raise InputError(f"extension degree {k} outside 1..{MAX_EXTENSION_DEGREE}")
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(modulus.p), repeat=k):
        # tail is (c_{k-1}, ..., c_0)
        coeffs = tuple(reversed(tail)) + (1,)
        if _poly_is_irreducible(coeffs, modulus.p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ------------------------------------------------------------------
# Squares and square roots
# ------------------------------------------------------------------

def is_square(a: FieldElement) -> bool:
    """Quadratic-residue test; zero counts as a square by convention."""
    if a.is_zero():
        return True
    return (a ** ((a.field.q - 1) // 2)) == a.field.one


def sqrt(a: FieldElement) -> Optional[FieldElement]:
    """A square root of a, or None.

    The canonical choice between b and -b is the lexicographically
    smaller coefficient sequence. Tonelli-Shanks runs verbatim in the
    cyclic group of order q - 1, so extensions need no special casing.
    """
    field = a.field
    if a.is_zero():
        return field.zero
    if not is_square(a):
        return None
    q = field.q
    if q % 4 == 3:
        b = a ** ((q + 1) // 4)
    else:
        b = _tonelli_shanks(a)
    return min(b, -b, key=lambda e: e.coeffs)


def _nonresidue(field: Field) -> FieldElement:
    z = getattr(field, "_cached_nonresidue", None)
    if z is None:
        # seeded draw: structured scans can walk long runs of squares
        # (whole subfield or axis slices share one quadratic class)
        rng = random.Random(f"nonresidue:{field.p}:{field.k}")
        while True:
            e = FieldElement(field, tuple(rng.randrange(field.p)
                                          for _ in range(field.k)))
            if not e.is_zero() and not is_square(e):
                break
        z = e
        field._cached_nonresidue = z
    return z


def _tonelli_shanks(a: FieldElement) -> FieldElement:
    field = a.field
    q = field.q
    s, m = q - 1, 0
    while s % 2 == 0:
        s //= 2
        m += 1
    z = _nonresidue(field)
    c = z ** s
    t = a ** s
    r = a ** ((s + 1) // 2)
    while t != field.one:
        t2 = t * t
        i = 1
        while t2 != field.one:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (m - i - 1))
        r = r * b
        c = b * b
        t = t * c
        m = i
    return r


def legendre_symbol(a: FieldElement) -> int:
    """Quadratic character: 1 for nonzero squares, -1 for non-squares, 0 at 0."""
    if a.is_zero():
        return 0
    return 1 if is_square(a) else -1
