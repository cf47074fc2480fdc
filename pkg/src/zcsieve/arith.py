"""Exact modular arithmetic: prime fields, small extension fields, quadratic
symbols, modular square roots, and the coset lattices consumed by the sieve.

Everything here is integer-exact; no floating point is used anywhere.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    CompositeModulus,
    FactorizationError,
    FieldMismatch,
    NonResidue,
    ShapeMismatch,
)

REAL_PLACE = "real"

# Deterministic Miller-Rabin witness set, valid for n < 3.317e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981

TRIAL_DIVISION_BOUND = 10**6


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed witnesses)."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        raise FactorizationError("primality test limit exceeded", n=n)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict:
    """Prime factorization of |n| by trial division up to 10^6.

    A composite cofactor surviving trial division raises FactorizationError;
    desk-scale inputs never hit this.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    for q in itertools.chain((2,), range(3, TRIAL_DIVISION_BOUND + 1, 2)):
        if q * q > n:
            break
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    if n > 1:
        if not is_prime(n):
            raise FactorizationError(
                "composite cofactor beyond trial-division bound", cofactor=n
            )
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list:
    return sorted(factorize(n))


def _require_odd_prime(p):
    if not isinstance(p, int) or p < 3 or p % 2 == 0 or not is_prime(p):
        raise CompositeModulus("modulus must be an odd prime", p=p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) in {-1, 0, +1} for an odd prime p."""
    _require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int:
    """Square root of a mod p (odd prime), canonical = smaller of the two roots.

    Tonelli-Shanks in the general case; raises NonResidue when (a|p) = -1.
    """
    sym = legendre(a, p)
    if sym == -1:
        raise NonResidue("not a square modulo p", a=a % p, p=p)
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # p = 1 mod 4: write p-1 = q 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t = s, pow(z, q, p), pow(a, q, p)
    r = pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def _square_class(x) -> int:
    """Integer representative of the square class of a nonzero rational."""
    f = Fraction(x)
    if f == 0:
        raise ValueError("square class of 0 is undefined")
    return f.numerator * f.denominator


def _strip(n: int, p: int):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a, b, v) -> int:
    """Hilbert symbol (a, b)_v in {-1, +1}: +1 iff z^2 = a x^2 + b y^2 has a
    nontrivial solution over R (v = "real") or over Q_p (v = p prime).

    a, b may be ints or Fractions; only their square classes matter.
    """
    A, B = _square_class(a), _square_class(b)
    if v == REAL_PLACE:
        return -1 if A < 0 and B < 0 else 1
    p = v
    if not isinstance(p, int) or not is_prime(p):
        raise CompositeModulus("place must be 'real' or a prime", v=v)
    alpha, u = _strip(A, p)
    beta, w = _strip(B, p)
    if p != 2:
        sign = 1
        if alpha * beta % 2 == 1 and (p - 1) // 2 % 2 == 1:
            sign = -sign
        if beta % 2 == 1 and legendre(u % p, p) == -1:
            sign = -sign
        if alpha % 2 == 1 and legendre(w % p, p) == -1:
            sign = -sign
        return sign
    # p = 2: epsilon(u) = (u-1)/2, omega(u) = (u^2-1)/8 mod 2
    eps_u, eps_w = (u - 1) // 2 % 2, (w - 1) // 2 % 2
    om_u, om_w = (u * u - 1) // 8 % 2, (w * w - 1) // 8 % 2
    e = eps_u * eps_w + alpha * om_w + beta * om_u
    return -1 if e % 2 == 1 else 1


# ---------------------------------------------------------------------------
# Integer-coefficient polynomial helpers modulo p (dense, ascending degree).
# Used internally by ExtField; the generic field-element layer lives in polys.


def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(p, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(p, a, m):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _ptrim(a)


def _pxgcd(p, a, b):
    # returns (g, s, t) with s*a + t*b = g, g normalized monic (or [])
    r0, r1 = _ptrim([c % p for c in a]), _ptrim([c % p for c in b])
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        # divide r0 by r1
        q = []
        r = list(r0)
        inv_lead = pow(r1[-1], p - 2, p)
        while len(r) >= len(r1) and r:
            c = r[-1] * inv_lead % p
            d = len(r) - len(r1)
            qq = [0] * (d + 1)
            qq[d] = c
            q = _padd(p, q, qq)
            for i, ci in enumerate(r1):
                r[d + i] = (r[d + i] - c * ci) % p
            _ptrim(r)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(p, s0, _pmul(p, q, s1))
        t0, t1 = t1, _psub(p, t0, _pmul(p, q, t1))
    if r0:
        inv = pow(r0[-1], p - 2, p)
        r0 = [c * inv % p for c in r0]
        s0 = [c * inv % p for c in s0]
        t0 = [c * inv % p for c in t0]
    return r0, s0, t0


def _padd(p, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, ai in enumerate(a):
        out[i] = ai
    for i, bi in enumerate(b):
        out[i] = (out[i] + bi) % p
    return _ptrim(out)


def _psub(p, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, ai in enumerate(a):
        out[i] = ai
    for i, bi in enumerate(b):
        out[i] = (out[i] - bi) % p
    return _ptrim(out)


def _ppowmod(p, base, e, m):
    result = [1]
    base = _pmod(p, base, m)
    while e:
        if e & 1:
            result = _pmod(p, _pmul(p, result, base), m)
        base = _pmod(p, _pmul(p, base, base), m)
        e >>= 1
    return result


def _has_root(p, poly):
    return any(_peval(p, poly, x) == 0 for x in range(p))


def _peval(p, poly, x):
    acc = 0
    for c in reversed(poly):
        acc = (acc * x + c) % p
    return acc


def _is_irreducible(p, mod):
    """Irreducibility over F_p for monic mod of degree 1..4.

    Degree <= 3: no roots suffices. Degree 4: additionally no roots in F_{p^2},
    detected via gcd(mod, x^(p^2) - x).
    """
    k = len(mod) - 1
    if k == 1:
        return True
    if _has_root(p, mod):
        return False
    if k <= 3:
        return True
    xq = _ppowmod(p, [0, 1], p * p, mod)
    g, _, _ = _pxgcd(p, _psub(p, xq, [0, 1]), mod)
    return len(g) == 1


@lru_cache(maxsize=None)
def find_irreducible(p: int, k: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree k over F_p."""
    if k == 1:
        return (0, 1)
    if k == 2:
        n = 2
        while legendre(n, p) != -1:
            n += 1
        return ((-n) % p, 0, 1)
    for tail in itertools.product(range(p), repeat=k):
        mod = tuple(tail) + (1,)
        if _is_irreducible(p, list(mod)):
            return mod
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# Fields and elements


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for an odd prime p (p = 2 is never a PrimeField)."""

    p: int

    def __post_init__(self):
        _require_odd_prime(self.p)

    @property
    def degree(self):
        return 1

    @property
    def order(self):
        return self.p

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, (int(value) % self.p,))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def elements(self):
        for v in range(self.p):
            yield self(v)

    def __repr__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class ExtField:
    """F_{p^k} presented as F_p[t]/(modulus), monic irreducible, 1 <= k <= 4.

    modulus is a coefficient tuple in ascending degree, length k + 1.
    """

    p: int
    modulus: tuple

    def __post_init__(self):
        _require_odd_prime(self.p)
        mod = tuple(c % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        k = len(mod) - 1
        if not 1 <= k <= 4:
            raise ValueError(f"extension degree {k} outside 1..4")
        if mod[-1] != 1:
            raise ValueError("modulus must be monic")
        if not _is_irreducible(self.p, list(mod)):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")

    @classmethod
    def generate(cls, p: int, k: int) -> "ExtField":
        return cls(p, find_irreducible(p, k))

    @property
    def degree(self):
        return len(self.modulus) - 1

    @property
    def order(self):
        return self.p ** self.degree

    def __call__(self, value) -> "FieldElement":
        k = self.degree
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (k - 1)
        else:
            c = [int(v) % self.p for v in value]
            if len(c) > k:
                c = _pmod(self.p, c, list(self.modulus))
            c += [0] * (k - len(c))
            coeffs = tuple(c)
        return FieldElement(self, coeffs)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        return self([0, 1])

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.degree):
            yield FieldElement(self, coeffs)

    def __repr__(self):
        return f"F_{{{self.p}^{self.degree}}}"


@dataclass(frozen=True)
class FieldElement:
    """Element of F_p or F_{p^k}: canonical coefficient tuple, ascending degree."""

    field: object
    coeffs: tuple

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldMismatch(
                "operands lie in different fields",
                left=repr(self.field),
                right=repr(getattr(other, "field", type(other).__name__)),
            )

    @property
    def p(self):
        return self.field.p

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other):
        self._check(other)
        p = self.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        self._check(other)
        p = self.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        p = self.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        p = self.p
        a, b = self.coeffs, other.coeffs
        if len(a) == 1:
            return FieldElement(self.field, (a[0] * b[0] % p,))
        prod = _pmul(p, list(a), list(b))
        red = _pmod(p, prod, list(self.field.modulus))
        red += [0] * (len(a) - len(red))
        return FieldElement(self.field, tuple(red))

    def inverse(self):
        p = self.p
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if len(self.coeffs) == 1:
            return FieldElement(self.field, (pow(self.coeffs[0], p - 2, p),))
        g, s, _ = _pxgcd(p, list(self.coeffs), list(self.field.modulus))
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible")
        s = _pmod(p, s, list(self.field.modulus))
        s += [0] * (len(self.coeffs) - len(s))
        return FieldElement(self.field, tuple(s))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self):
        return f"{self.field!r}({list(self.coeffs)})"


def ext_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def ext_pow(x: FieldElement, e: int) -> FieldElement:
    return x**e


def frobenius(x: FieldElement) -> FieldElement:
    """The p-power Frobenius; the identity on F_p, order k on F_{p^k}."""
    return x ** x.p


def is_square(x: FieldElement) -> bool:
    if x.is_zero():
        return True
    q = x.field.order
    return (x ** ((q - 1) // 2)).coeffs[0] == 1


@lru_cache(maxsize=None)
def sqrt_table(field):
    """Map value-coeffs -> sorted roots, by enumerating all squares of field."""
    table = {}
    for y in field.elements():
        table.setdefault((y * y).coeffs, []).append(y)
    for roots in table.values():
        roots.sort(key=lambda e: e.coeffs)
    return table


def field_sqrts(x: FieldElement) -> list:
    """All square roots of x in its field (possibly empty), ascending."""
    return list(sqrt_table(x.field).get(x.coeffs, []))


# ---------------------------------------------------------------------------
# Coset lattices: the finite quotient (Z/B)^r x prod Z/t_i with an admissible
# subset, the data the sieve intersects across primes.


@dataclass(frozen=True)
class CosetLattice:
    rank: int
    modulus: int
    torsion: tuple
    admissible: tuple

    def __post_init__(self):
        if self.rank < 0 or self.modulus < 1:
            raise ShapeMismatch(
                "rank must be >= 0 and modulus >= 1",
                rank=self.rank,
                modulus=self.modulus,
            )
        tors = tuple(int(t) for t in self.torsion)
        if any(t < 1 for t in tors):
            raise ShapeMismatch("torsion shape entries must be >= 1", torsion=tors)
        object.__setattr__(self, "torsion", tors)
        width = self.rank + len(tors)
        seen = set()
        for tup in self.admissible:
            tup = tuple(int(v) for v in tup)
            if len(tup) != width:
                raise ShapeMismatch(
                    "tuple width does not match lattice shape",
                    tuple=tup,
                    width=width,
                )
            for i, v in enumerate(tup):
                bound = self.modulus if i < self.rank else tors[i - self.rank]
                if not 0 <= v < bound:
                    raise ShapeMismatch(
                        "tuple component out of range", tuple=tup, index=i
                    )
            seen.add(tup)
        object.__setattr__(self, "admissible", tuple(sorted(seen)))

    @classmethod
    def full(cls, rank: int, modulus: int, torsion=()) -> "CosetLattice":
        ranges = [range(modulus)] * rank + [range(t) for t in torsion]
        return cls(rank, modulus, tuple(torsion), tuple(itertools.product(*ranges)))

    @property
    def shape(self):
        return (self.rank, self.modulus, self.torsion)

    def is_empty(self):
        return not self.admissible

    def __len__(self):
        return len(self.admissible)

    def __contains__(self, tup):
        return tuple(tup) in self.admissible

    def restrict(self, admissible) -> "CosetLattice":
        return CosetLattice(self.rank, self.modulus, self.torsion, tuple(admissible))


def intersect_cosets(lattices) -> CosetLattice:
    """Set intersection of admissible tuples; all lattices must share a shape."""
    lattices = list(lattices)
    if not lattices:
        raise ValueError("intersect_cosets needs at least one lattice")
    first = lattices[0]
    acc = set(first.admissible)
    for lat in lattices[1:]:
        if lat.shape != first.shape:
            raise ShapeMismatch(
                "coset lattices have different shapes",
                left=first.shape,
                right=lat.shape,
            )
        acc &= set(lat.admissible)
    return first.restrict(acc)
