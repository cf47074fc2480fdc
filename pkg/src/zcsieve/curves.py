"""Curve models over Q: conics, short-Weierstrass elliptic curves, genus-2
hyperelliptic curves, and plane cubics (the latter for local analysis and
index bounds only).

All discriminants are computed with exact integer arithmetic (Sylvester
resultants reduced by fraction-free elimination).
"""

import math
from dataclasses import dataclass, field as dc_field

from .arith import factorize, field_sqrts, legendre, prime_divisors, sqrt_table
from .errors import BadReduction, ParseError, SingularModel, UnsupportedModel

INFINITY = ("inf",)


# ---------------------------------------------------------------------------
# Exact integer linear algebra and resultants


def bareiss_det(rows) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(f, g) -> int:
    """Resultant of two integer polynomials (coefficients ascending)."""
    f = list(f)
    g = list(g)
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    if not f or not g:
        return 0
    df, dg = len(f) - 1, len(g) - 1
    if df == 0:
        return f[0] ** dg
    if dg == 0:
        return g[0] ** df
    n = df + dg
    rows = []
    fd = f[::-1]  # descending
    gd = g[::-1]
    for i in range(dg):
        rows.append([0] * i + fd + [0] * (n - df - 1 - i))
    for i in range(df):
        rows.append([0] * i + gd + [0] * (n - dg - 1 - i))
    return bareiss_det(rows)


def poly_discriminant(f) -> int:
    """Discriminant of an integer polynomial, exact."""
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    d = len(f) - 1
    if d < 1:
        return 0
    fprime = [i * c for i, c in enumerate(f)][1:]
    res = resultant(f, fprime)
    lead = f[-1]
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, r = divmod(sign * res, lead)
    assert r == 0, "resultant not divisible by leading coefficient"
    return q


def _squarefree_split(n: int):
    """n = s^2 * m with m squarefree; returns (s, m) preserving sign on m."""
    sign = -1 if n < 0 else 1
    s, m = 1, 1
    for p, e in factorize(n).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, sign * m


# ---------------------------------------------------------------------------
# Models


@dataclass(frozen=True)
class Conic:
    """a X^2 + b Y^2 = c Z^2 with nonzero integer coefficients.

    Coefficients are normalized at construction (common factors removed,
    squarefree, pairwise coprime); the raw input and the variable
    substitutions are recorded so witnesses can be mapped back.
    """

    a: int
    b: int
    c: int
    raw: tuple = dc_field(default=None, compare=False)
    steps: tuple = dc_field(default=(), compare=False)

    def __post_init__(self):
        if self.a * self.b * self.c == 0:
            raise SingularModel("conic coefficients must be nonzero",
                                coeffs=[self.a, self.b, self.c])
        if self.raw is None:
            object.__setattr__(self, "raw", (self.a, self.b, self.c))
        a, b, c, steps = _normalize_conic(self.a, self.b, self.c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "steps", tuple(steps))

    @property
    def genus(self):
        return 0

    @property
    def coeffs(self):
        return (self.a, self.b, self.c)

    def discriminant(self):
        return self.a * self.b * self.c

    def map_witness_to_raw(self, point):
        """Send a projective witness on the normalized conic back to raw
        coordinates, returned primitive."""
        x, y, z = point
        for step in reversed(self.steps):
            kind, idx, s = step
            if kind == "scale_others":
                pt = [x, y, z]
                pt = [v * s if j != idx else v for j, v in enumerate(pt)]
                x, y, z = pt
            elif kind == "mul_var":
                pt = [x, y, z]
                pt[idx] *= s
                x, y, z = pt
        g = math.gcd(math.gcd(abs(x), abs(y)), abs(z))
        if g:
            x, y, z = x // g, y // g, z // g
        return (x, y, z)


def _normalize_conic(a, b, c):
    steps = []
    g = math.gcd(math.gcd(abs(a), abs(b)), abs(c))
    a, b, c = a // g, b // g, c // g
    changed = True
    while changed:
        changed = False
        coeffs = [a, b, c]
        for i in range(3):
            s, m = _squarefree_split(coeffs[i])
            if s != 1:
                coeffs[i] = m
                steps.append(("scale_others", i, s))
                changed = True
        a, b, c = coeffs
        for i in range(3):
            for j in range(i + 1, 3):
                q = math.gcd(abs(coeffs[i]), abs(coeffs[j]))
                if q != 1:
                    k = 3 - i - j
                    if coeffs[k] % q == 0:
                        coeffs = [v // q for v in coeffs]
                    else:
                        # q divides two coefficients only: the third variable
                        # must be divisible by q in any solution
                        coeffs[i] //= q
                        coeffs[j] //= q
                        coeffs[k] *= q
                        steps.append(("mul_var", k, q))
                    a, b, c = coeffs
                    changed = True
    return a, b, c, steps


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 = x^3 + a x + b over Q."""

    a: int
    b: int

    def __post_init__(self):
        if self.discriminant() == 0:
            raise SingularModel("elliptic discriminant vanishes",
                                a=self.a, b=self.b)

    @property
    def genus(self):
        return 1

    def discriminant(self):
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def f_coeffs(self):
        return (self.b, self.a, 0, 1)

    def rhs(self, x):
        return x**3 + self.a * x + self.b


@dataclass(frozen=True)
class HyperellipticCurve:
    """y^2 = f(x) with deg f in {5, 6}, genus 2; f given ascending."""

    f: tuple

    def __post_init__(self):
        f = tuple(int(c) for c in self.f)
        while len(f) > 1 and f[-1] == 0:
            f = f[:-1]
        object.__setattr__(self, "f", f)
        d = len(f) - 1
        if d not in (5, 6):
            raise SingularModel("hyperelliptic model must have degree 5 or 6",
                                degree=d)
        if poly_discriminant(f) == 0:
            raise SingularModel("hyperelliptic discriminant vanishes", f=list(f))

    @property
    def genus(self):
        return 2

    @property
    def degree(self):
        return len(self.f) - 1

    @property
    def leading(self):
        return self.f[-1]

    def discriminant(self):
        return poly_discriminant(self.f)

    def rhs(self, x):
        acc = 0
        for c in reversed(self.f):
            acc = acc * x + c
        return acc


# Degree-3 monomials in X, Y, Z, lexicographic with X > Y > Z.
CUBIC_MONOMIALS = (
    (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
    (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
)


@dataclass(frozen=True)
class PlaneCubic:
    """Projective cubic F(X, Y, Z) = 0, ten integer coefficients in the
    lexicographic monomial order of CUBIC_MONOMIALS.

    Supported for local analysis and index bounds; a genus-1 model without a
    chosen rational point, so it is never sieved directly.
    """

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        if len(c) != 10:
            raise ParseError("plane cubic needs exactly 10 coefficients",
                             got=len(c))
        object.__setattr__(self, "coeffs", c)
        if all(v == 0 for v in c):
            raise SingularModel("zero cubic")
        object.__setattr__(self, "_cert", _cubic_certificate(c))

    @property
    def genus(self):
        return 1

    def is_diagonal(self):
        return all(v == 0 for i, v in enumerate(self.coeffs) if i not in (0, 6, 9))

    @property
    def diagonal(self):
        return (self.coeffs[0], self.coeffs[6], self.coeffs[9])

    def discriminant(self):
        return self._cert

    def monomial_dict(self):
        return {m: c for m, c in zip(CUBIC_MONOMIALS, self.coeffs) if c != 0}

    def evaluate(self, x, y, z):
        total = 0
        for (i, j, k), c in zip(CUBIC_MONOMIALS, self.coeffs):
            if c:
                total += c * x**i * y**j * z**k
        return total

    def partials(self):
        """The three partial derivatives as monomial dicts {(i,j,k): coeff}."""
        return _cubic_partials(self.coeffs)


def _cubic_partials(coeffs):
    out = []
    for var in range(3):
        d = {}
        for m, c in zip(CUBIC_MONOMIALS, coeffs):
            if c and m[var] > 0:
                e = list(m)
                e[var] -= 1
                d[tuple(e)] = d.get(tuple(e), 0) + c * m[var]
        out.append(d)
    return out


def _deg_monomials(d):
    return sorted(
        ((i, j, d - i - j) for i in range(d + 1) for j in range(d + 1 - i)),
        reverse=True,
    )


def _permute_cubic(coeffs, perm):
    out = [0] * 10
    for m, c in zip(CUBIC_MONOMIALS, coeffs):
        pm = tuple(m[perm[t]] for t in range(3))
        out[CUBIC_MONOMIALS.index(pm)] = c
    return tuple(out)


def _macaulay_resultant_quadrics(quadrics):
    """Resultant of three ternary quadrics via Macaulay's construction:
    det(M)/det(M') on degree-4 monomials, or None when the minor degenerates.
    """
    mon4 = _deg_monomials(4)
    col = {m: i for i, m in enumerate(mon4)}
    rows = []
    reduced = []
    for m in mon4:
        for var in range(3):
            if m[var] >= 2:
                break
        mult = list(m)
        mult[var] -= 2
        row = [0] * len(mon4)
        for e, c in quadrics[var].items():
            tgt = (mult[0] + e[0], mult[1] + e[1], mult[2] + e[2])
            row[col[tgt]] += c
        rows.append(row)
        n_big = sum(1 for t in range(3) if m[t] >= 2)
        reduced.append(n_big == 1)
    det_m = bareiss_det(rows)
    idx = [i for i, r in enumerate(reduced) if not r]
    minor = [[rows[i][j] for j in idx] for i in idx]
    det_minor = bareiss_det(minor)
    if det_minor == 0:
        return None
    q, r = divmod(det_m, det_minor)
    if r != 0:
        return None
    return q


def _cubic_certificate(coeffs) -> int:
    """A nonzero integer divisible by every prime of singular reduction.

    Diagonal cubics get the exact 3abc; general cubics go through the
    Macaulay resultant of the partial derivatives, trying all coordinate
    permutations. Vanishing resultant means a genuinely singular cubic.
    """
    diag = all(v == 0 for i, v in enumerate(coeffs) if i not in (0, 6, 9))
    if diag:
        a, b, c = coeffs[0], coeffs[6], coeffs[9]
        if a * b * c == 0:
            raise SingularModel("diagonal cubic with a zero coefficient",
                                coeffs=list(coeffs))
        return 3 * a * b * c
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    for perm in perms:
        pc = _permute_cubic(coeffs, perm)
        parts = _cubic_partials(pc)
        if any(not d for d in parts):
            raise SingularModel("a partial derivative vanishes identically",
                                coeffs=list(coeffs))
        res = _macaulay_resultant_quadrics(parts)
        if res is not None:
            if res == 0:
                raise SingularModel("cubic has a singular point", coeffs=list(coeffs))
            return res
    pt = _small_singular_point(coeffs)
    if pt is not None:
        raise SingularModel("cubic has a singular point", coeffs=list(coeffs),
                            singular_point=list(pt))
    raise UnsupportedModel(
        "cannot certify nonsingularity of this cubic", coeffs=list(coeffs)
    )


def _small_singular_point(coeffs, box=10):
    parts = _cubic_partials(coeffs)

    def ev(d, x, y, z):
        return sum(c * x**i * y**j * z**k for (i, j, k), c in d.items())

    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            for z in range(box + 1):
                if (x, y, z) == (0, 0, 0):
                    continue
                if all(ev(d, x, y, z) == 0 for d in parts):
                    return (x, y, z)
    return None


# ---------------------------------------------------------------------------
# Reduction data


@dataclass(frozen=True)
class ReductionInfo:
    prime: int
    status: str  # "good" | "bad"

    @property
    def good(self):
        return self.status == "good"


def discriminant(curve) -> int:
    """Model discriminant; construction already rejects singular models."""
    return curve.discriminant()


def reduction_type(curve, p: int) -> ReductionInfo:
    """Good iff p does not divide 2 * disc (and the leading coefficient for
    hyperelliptic models). p = 2 is always bad by policy, as is p = 3 for
    short-Weierstrass and plane-cubic models (their group/smoothness theory
    is routed through the Hensel machinery instead)."""
    if p == 2:
        return ReductionInfo(p, "bad")
    if isinstance(curve, (EllipticCurve, PlaneCubic)) and p == 3:
        return ReductionInfo(p, "bad")
    d = curve.discriminant()
    if isinstance(curve, HyperellipticCurve):
        d *= curve.leading
    status = "bad" if d % p == 0 else "good"
    return ReductionInfo(p, status)


def bad_primes(curve) -> list:
    """All primes of bad reduction (policy primes included)."""
    d = curve.discriminant()
    if isinstance(curve, HyperellipticCurve):
        d *= curve.leading
    out = set(prime_divisors(d)) | {2}
    if isinstance(curve, (EllipticCurve, PlaneCubic)):
        out.add(3)
    return sorted(out)


# ---------------------------------------------------------------------------
# Point counting and enumeration over F_{p^k}


def _require_good(curve, field):
    info = reduction_type(curve, field.p)
    if not info.good:
        raise BadReduction("curve has bad reduction", p=field.p)


def _ysq_counts(curve, field):
    """For y^2 = rhs(x) models: yields (x, rhs(x)) over the field."""
    if isinstance(curve, EllipticCurve):
        coeffs = [field(c) for c in curve.f_coeffs()]
    else:
        coeffs = [field(c) for c in curve.f]
    for x in field.elements():
        acc = field.zero()
        for c in reversed(coeffs):
            acc = acc * x + c
        yield x, acc


def _points_at_infinity(curve, field):
    if isinstance(curve, EllipticCurve):
        return [INFINITY]
    if curve.degree == 5:
        return [INFINITY]
    roots = field_sqrts(field(curve.leading))
    return [("inf", r) for r in roots]


def count_points(curve, field) -> int:
    """Number of projective points of the smooth model over the field."""
    _require_good(curve, field)
    if isinstance(curve, (EllipticCurve, HyperellipticCurve)):
        n = len(_points_at_infinity(curve, field))
        q = field.order
        if field.degree == 1:
            # fast path by Legendre character
            p = field.p
            if isinstance(curve, EllipticCurve):
                f = curve.f_coeffs()
            else:
                f = curve.f
            for x in range(p):
                acc = 0
                for c in reversed(f):
                    acc = (acc * x + c) % p
                if acc == 0:
                    n += 1
                else:
                    n += 1 + legendre(acc, p)
            return n
        half = (q - 1) // 2
        one = field.one()
        for _x, v in _ysq_counts(curve, field):
            if v.is_zero():
                n += 1
            elif v**half == one:
                n += 2
        return n
    if isinstance(curve, Conic):
        return _count_conic(curve, field)
    if isinstance(curve, PlaneCubic):
        return sum(1 for _ in _iter_plane_points(curve, field))
    raise TypeError(f"unsupported curve {curve!r}")


def _count_conic(curve, field):
    table = sqrt_table(field)
    a, b, c = (field(v) for v in curve.coeffs)
    n = 0
    binv = b.inverse()
    for x in field.elements():
        rhs = (c - a * x * x) * binv  # y^2 = (c - a x^2)/b at z = 1
        n += len(table.get(rhs.coeffs, []))
    # z = 0, y = 1: a x^2 + b = 0
    rhs0 = -b * a.inverse()
    n += len(table.get(rhs0.coeffs, []))
    # z = 0, y = 0, x = 1 needs a = 0, excluded at good reduction
    return n


def _iter_plane_points(curve, field):
    """Projective points of a plane curve, normalized so the first nonzero
    coordinate is 1; deterministic order."""
    zero, one = field.zero(), field.one()
    mons = curve.monomial_dict()

    def ev(x, y, z):
        total = zero
        for (i, j, k), c in mons.items():
            total = total + field(c) * x**i * y**j * z**k
        return total

    # x = 1
    for y in field.elements():
        for z in field.elements():
            if ev(one, y, z).is_zero():
                yield (one, y, z)
    # x = 0, y = 1
    for z in field.elements():
        if ev(zero, one, z).is_zero():
            yield (zero, one, z)
    if ev(zero, zero, one).is_zero():
        yield (zero, zero, one)


def enumerate_points(curve, field, allow_bad=False) -> list:
    """Exact point list in a deterministic order; length equals count_points.

    allow_bad skips the reduction check for exploratory enumeration of a
    (possibly singular) reduction; no smoothness promises then.
    """
    if not allow_bad:
        _require_good(curve, field)
    if isinstance(curve, (EllipticCurve, HyperellipticCurve)):
        table = sqrt_table(field)
        pts = list(_points_at_infinity(curve, field))
        affine = []
        for x, v in _ysq_counts(curve, field):
            for y in table.get(v.coeffs, []):
                affine.append((x, y))
        affine.sort(key=lambda pt: (pt[0].coeffs, pt[1].coeffs))
        return pts + affine
    if isinstance(curve, Conic):
        pts = []
        a, b, c = (field(v) for v in curve.coeffs)
        zero, one = field.zero(), field.one()
        # x = 1 patch, then (0, 1, z), then (0, 0, 1)
        for y in field.elements():
            for z in field.elements():
                if (a + b * y * y - c * z * z).is_zero():
                    pts.append((one, y, z))
        for z in field.elements():
            if (b - c * z * z).is_zero():
                pts.append((zero, one, z))
        if c.is_zero():
            pts.append((zero, zero, one))
        pts.sort(key=lambda t: tuple(v.coeffs for v in t))
        return pts
    if isinstance(curve, PlaneCubic):
        pts = list(_iter_plane_points(curve, field))
        pts.sort(key=lambda t: tuple(v.coeffs for v in t))
        return pts
    raise TypeError(f"unsupported curve {curve!r}")


# ---------------------------------------------------------------------------
# JSON schema


def curve_from_dict(doc) -> object:
    if not isinstance(doc, dict):
        raise ParseError("curve document must be an object", got=type(doc).__name__)
    unknown = set(doc) - {"type", "coeffs"}
    if unknown:
        raise ParseError("unknown keys in curve document", keys=sorted(unknown))
    ctype = doc.get("type")
    coeffs = doc.get("coeffs")
    if not isinstance(coeffs, list) or not all(isinstance(v, int) for v in coeffs):
        raise ParseError("coeffs must be a list of integers", field="coeffs")
    if ctype == "conic":
        if len(coeffs) != 3:
            raise ParseError("conic needs [a, b, c]", got=len(coeffs))
        return Conic(*coeffs)
    if ctype == "elliptic":
        if len(coeffs) != 2:
            raise ParseError("elliptic needs [a, b]", got=len(coeffs))
        return EllipticCurve(*coeffs)
    if ctype == "hyperelliptic":
        if len(coeffs) not in (6, 7):
            raise ParseError(
                "hyperelliptic needs 6 or 7 ascending coefficients",
                got=len(coeffs),
            )
        return HyperellipticCurve(tuple(coeffs))
    if ctype == "plane_cubic":
        if len(coeffs) != 10:
            raise ParseError("plane cubic needs 10 coefficients", got=len(coeffs))
        return PlaneCubic(tuple(coeffs))
    raise ParseError("unknown curve type", type=ctype)


def curve_to_dict(curve) -> dict:
    if isinstance(curve, Conic):
        return {"type": "conic", "coeffs": list(curve.raw)}
    if isinstance(curve, EllipticCurve):
        return {"type": "elliptic", "coeffs": [curve.a, curve.b]}
    if isinstance(curve, HyperellipticCurve):
        return {"type": "hyperelliptic", "coeffs": list(curve.f)}
    if isinstance(curve, PlaneCubic):
        return {"type": "plane_cubic", "coeffs": list(curve.coeffs)}
    raise TypeError(f"unsupported curve {curve!r}")
