"""Jacobian arithmetic: elliptic points under the chord-tangent law and
genus-2 Mumford divisors under Cantor composition/reduction, over F_p and
over Q (exact rationals).

J(F_p) is materialized by exhaustive enumeration at desk scale, and
quotients J(F_p)/B J(F_p) are computed set-theoretically; no discrete
logarithms anywhere.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import polys
from .arith import ExtField, PrimeField, frobenius
from .curves import (
    EllipticCurve,
    HyperellipticCurve,
    count_points,
    enumerate_points,
    reduction_type,
)
from .errors import (
    BadReduction,
    InvalidDivisor,
    NonIntegralAtP,
    ParseError,
    PointNotOnCurve,
    UnsupportedModel,
)
from .polys import QQ

GENUS1_PRIME_CAP = 199
GENUS2_PRIME_CAP = 61


# ---------------------------------------------------------------------------
# Elements


@dataclass(frozen=True)
class ECPoint:
    x: object = None
    y: object = None
    infinity: bool = False

    @classmethod
    def identity(cls):
        return cls(infinity=True)

    def is_identity(self):
        return self.infinity


@dataclass(frozen=True)
class MumfordDivisor:
    u: tuple  # monic, coefficients ascending
    v: tuple  # deg v < deg u

    @classmethod
    def identity(cls, field):
        return cls((field.one(),), ())

    def is_identity(self):
        return len(self.u) == 1

    @property
    def weight(self):
        return len(self.u) - 1


def _on_curve(P, curve, field):
    if P.infinity:
        return True
    a, b = field(curve.a), field(curve.b)
    return P.y * P.y == P.x * P.x * P.x + a * P.x + b


def _require_on_curve(P, curve, field):
    if not _on_curve(P, curve, field):
        raise PointNotOnCurve("point fails the curve equation", x=str(P.x), y=str(P.y))


def ec_add(P, Q, curve, field):
    """Chord-tangent addition on y^2 = x^3 + a x + b."""
    _require_on_curve(P, curve, field)
    _require_on_curve(Q, curve, field)
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    if P.x == Q.x:
        if P.y + Q.y == field.zero():
            return ECPoint.identity()
        lam = (field(3) * P.x * P.x + field(curve.a)) / (field(2) * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return ECPoint(x3, y3)


def ec_neg(P):
    if P.infinity:
        return P
    return ECPoint(P.x, -P.y)


def _f_poly(curve, field):
    return polys.from_ints(field, curve.f)


def is_valid_divisor(D, curve, field) -> bool:
    u, v = D.u, D.v
    if not u or u[-1] != field.one() or len(u) - 1 > 2:
        return False
    if len(v) >= len(u):
        return False
    f = _f_poly(curve, field)
    rem = polys.mod(polys.sub(polys.mul(v, v, field), f, field), u, field)
    return polys.is_zero(rem)


def _require_divisor(D, curve, field):
    if not is_valid_divisor(D, curve, field):
        raise InvalidDivisor(
            "pair is not a Mumford divisor on this curve",
            u=[str(c) for c in D.u],
            v=[str(c) for c in D.v],
        )


def cantor_add(D1, D2, curve, field):
    """Cantor composition and reduction for genus-2 models of odd degree."""
    if curve.degree != 5:
        raise UnsupportedModel(
            "divisor arithmetic implemented for degree-5 models only",
            degree=curve.degree,
        )
    _require_divisor(D1, curve, field)
    _require_divisor(D2, curve, field)
    f = _f_poly(curve, field)
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    d1, e1, e2 = polys.xgcd(u1, u2, field)
    d, c1, c2 = polys.xgcd(d1, polys.add(v1, v2, field), field)
    s1 = polys.mul(c1, e1, field)
    s2 = polys.mul(c1, e2, field)
    s3 = c2
    num_u, rem = polys.divmod_poly(
        polys.mul(u1, u2, field), polys.mul(d, d, field), field
    )
    assert polys.is_zero(rem)
    t = polys.add(
        polys.add(
            polys.mul(polys.mul(s1, u1, field), v2, field),
            polys.mul(polys.mul(s2, u2, field), v1, field),
            field,
        ),
        polys.mul(s3, polys.add(polys.mul(v1, v2, field), f, field), field),
        field,
    )
    num_v, rem = polys.divmod_poly(t, d, field)
    assert polys.is_zero(rem)
    u = polys.monic(num_u, field)
    v = polys.mod(num_v, u, field)
    while polys.degree(u) > 2:
        nu, rem = polys.divmod_poly(
            polys.sub(f, polys.mul(v, v, field), field), u, field
        )
        assert polys.is_zero(rem)
        nu = polys.monic(nu, field)
        v = polys.mod(polys.neg(v, field), nu, field)
        u = nu
    return MumfordDivisor(u, v)


def mumford_neg(D, curve, field):
    v = polys.mod(polys.neg(D.v, field), D.u, field)
    return MumfordDivisor(D.u, v)


def group_identity(curve, field):
    if isinstance(curve, EllipticCurve):
        return ECPoint.identity()
    return MumfordDivisor.identity(field)


def group_add(a, b, curve, field):
    if isinstance(curve, EllipticCurve):
        return ec_add(a, b, curve, field)
    return cantor_add(a, b, curve, field)


def group_neg(a, curve, field):
    if isinstance(curve, EllipticCurve):
        return ec_neg(a)
    return mumford_neg(a, curve, field)


def scalar_mul(k, a, curve, field):
    if k < 0:
        return scalar_mul(-k, group_neg(a, curve, field), curve, field)
    result = group_identity(curve, field)
    base = a
    while k:
        if k & 1:
            result = group_add(result, base, curve, field)
        base = group_add(base, base, curve, field)
        k >>= 1
    return result


def point_to_divisor(pt, curve, field):
    """Class of [P - infinity] in Mumford form, for degree-5 models."""
    if pt == ("inf",) or pt[0] == "inf":
        return MumfordDivisor.identity(field)
    x, y = pt
    u = polys.trim((-x, field.one()), field)
    v = polys.trim((y,), field)
    return MumfordDivisor(u, v)


def element_key(elem):
    """Canonical integer sort key for F_p elements; identical to the key of
    the internal integer representation."""
    if isinstance(elem, ECPoint):
        if elem.infinity:
            return (0, 0, 0)
        return (1, elem.x.coeffs[0], elem.y.coeffs[0])
    u = tuple(c.coeffs[0] for c in elem.u)
    v = tuple(c.coeffs[0] for c in elem.v)
    up = list(u) + [0] * (3 - len(u))
    vp = list(v) + [0] * (2 - len(v))
    return (len(u) - 1, up[0], up[1], vp[0], vp[1])


# ---------------------------------------------------------------------------
# Fast integer arithmetic for materialized F_p groups.
#
# Internal element representation: None for the identity; (x, y) integer
# pairs for elliptic points; (u, v) trimmed integer coefficient tuples
# (u monic) for Mumford divisors. The generic FieldElement layer above is
# the reference implementation; tests check the two paths agree.

from .arith import _padd, _pmod, _pmul, _psub, _pxgcd  # noqa: E402


def _iec_add(P, Q, a, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def _pdivmod_exact(p, a, b):
    # exact division by trimmed monic b, remainder must vanish
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    if not a:
        return []
    db = len(b) - 1
    assert len(a) >= len(b), "inexact polynomial division"
    q = [0] * (len(a) - db)
    for d in range(len(a) - len(b), -1, -1):
        c = a[d + db]
        if c:
            q[d] = c
            for i in range(len(b)):
                a[d + i] = (a[d + i] - c * b[i]) % p
    assert all(v == 0 for v in a), "inexact polynomial division"
    return q


def _pmonic(p, a):
    a = list(a)
    if not a or a[-1] == 1:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _ig2_add(D1, D2, f, p):
    u1, v1 = D1
    u2, v2 = D2
    d1, e1, e2 = _pxgcd(p, u1, u2)
    d, c1, c2 = _pxgcd(p, d1, _padd(p, v1, v2))
    s1 = _pmul(p, c1, e1)
    s2 = _pmul(p, c1, e2)
    s3 = c2
    # u stays monic: both numerator and divisor are monic
    u = _pdivmod_exact(p, _pmul(p, u1, u2), _pmul(p, d, d))
    t = _padd(
        p,
        _padd(
            p,
            _pmul(p, _pmul(p, s1, u1), v2),
            _pmul(p, _pmul(p, s2, u2), v1),
        ),
        _pmul(p, s3, _padd(p, _pmul(p, v1, v2), f)),
    )
    v = _pmod(p, _pdivmod_exact(p, t, d), u)
    while len(u) - 1 > 2:
        nu = _pmonic(p, _pdivmod_exact(p, _psub(p, f, _pmul(p, v, v)), u))
        v = _pmod(p, [(-c) % p for c in v], nu)
        u = nu
    if not u:
        u = [1]
    return (tuple(u), tuple(v))


def _ig2_neg(D, p):
    u, v = D
    return (u, tuple(_pmod(p, [(-c) % p for c in v], list(u))))


# ---------------------------------------------------------------------------
# Materialized groups


@dataclass(frozen=True, eq=False)
class JacobianGroup:
    """J(F_p) as an explicit element table with fast internal arithmetic."""

    curve: object
    p: int
    field: object
    elements: tuple  # internal representations, sorted by key

    def identity(self):
        if isinstance(self.curve, EllipticCurve):
            return None
        return ((1,), ())

    def add(self, a, b):
        if isinstance(self.curve, EllipticCurve):
            return _iec_add(a, b, self.curve.a % self.p, self.p)
        return _ig2_add(a, b, self._f_int(), self.p)

    def neg(self, a):
        if isinstance(self.curve, EllipticCurve):
            return None if a is None else (a[0], (-a[1]) % self.p)
        return _ig2_neg(a, self.p)

    def mul(self, k, a):
        if k < 0:
            k, a = -k, self.neg(a)
        result = self.identity()
        base = a
        while k:
            if k & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            k >>= 1
        return result

    def _f_int(self):
        return [c % self.p for c in self.curve.f]

    def key(self, a):
        return internal_key(a, self.curve)

    def to_element(self, a):
        if isinstance(self.curve, EllipticCurve):
            if a is None:
                return ECPoint.identity()
            return ECPoint(self.field(a[0]), self.field(a[1]))
        u, v = a
        return MumfordDivisor(
            polys.trim([self.field(c) for c in u], self.field),
            polys.trim([self.field(c) for c in v], self.field),
        )

    def from_element(self, elem):
        if isinstance(elem, ECPoint):
            if elem.infinity:
                return None
            return (elem.x.coeffs[0], elem.y.coeffs[0])
        return (
            tuple(c.coeffs[0] for c in elem.u),
            tuple(c.coeffs[0] for c in elem.v),
        )

    def __len__(self):
        return len(self.elements)


def internal_key(a, curve):
    if isinstance(curve, EllipticCurve):
        if a is None:
            return (0, 0, 0)
        return (1, a[0], a[1])
    u, v = a
    up = list(u) + [0] * (3 - len(u))
    vp = list(v) + [0] * (2 - len(v))
    return (len(u) - 1, up[0], up[1], vp[0], vp[1])


def _enumerate_ec_group(curve, field):
    out = []
    for pt in enumerate_points(curve, field):
        if pt == ("inf",):
            out.append(None)
        else:
            out.append((pt[0].coeffs[0], pt[1].coeffs[0]))
    return out


def _trim_ints(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _enumerate_g2_group(curve, field):
    """All reduced divisors of a degree-5 genus-2 model over F_p, built from
    curve points over F_p and conjugate pairs over F_{p^2}; internal
    integer-tuple representations."""
    p = field.p
    f = [c % p for c in curve.f]
    fprime = [i * c % p for i, c in enumerate(f)][1:]

    def evf(poly, x):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        return acc

    affine = [
        (pt[0].coeffs[0], pt[1].coeffs[0])
        for pt in enumerate_points(curve, field)
        if pt != ("inf",)
    ]
    seen = {}

    def put(u, v):
        D = (_trim_ints(u), _trim_ints(v))
        seen.setdefault(internal_key(D, curve), D)

    put((1,), ())
    for x, y in affine:
        put(((-x) % p, 1), (y,))
    # split pairs: distinct x-coordinates
    for i in range(len(affine)):
        x1, y1 = affine[i]
        for j in range(i + 1, len(affine)):
            x2, y2 = affine[j]
            if x1 == x2:
                continue
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
            c0 = (y1 - lam * x1) % p
            put((x1 * x2 % p, (-(x1 + x2)) % p, 1), (c0, lam))
    # doubled non-Weierstrass points
    for x1, y1 in affine:
        if y1 == 0:
            continue
        c1 = evf(fprime, x1) * pow(2 * y1, -1, p) % p
        c0 = (y1 - c1 * x1) % p
        put((x1 * x1 % p, (-2 * x1) % p, 1), (c0, c1))
    # conjugate pairs over F_{p^2}
    ext = ExtField.generate(p, 2)
    fe = polys.from_ints(ext, curve.f)
    from .arith import sqrt_table

    table = sqrt_table(ext)
    for xi in ext.elements():
        if xi.coeffs[1] == 0:
            continue  # lies in F_p
        val = polys.evaluate(fe, xi, ext)
        for eta in table.get(val.coeffs, []):
            xi_c = frobenius(xi)
            tr = (xi + xi_c).coeffs
            nm = (xi * xi_c).coeffs
            assert tr[1] == 0 and nm[1] == 0
            s0, s1 = xi.coeffs
            b1 = eta.coeffs[1] * pow(s1, -1, p) % p
            b0 = (eta.coeffs[0] - b1 * s0) % p
            put((nm[0], (-tr[0]) % p, 1), (b0, b1))
    return list(seen.values())


@lru_cache(maxsize=None)
def jacobian_group(curve, p: int) -> JacobianGroup:
    """Materialize J(F_p) by enumeration (primes capped at desk scale)."""
    info = reduction_type(curve, p)
    if not info.good:
        raise BadReduction("jacobian group needs good reduction", p=p)
    field = PrimeField(p)
    if isinstance(curve, EllipticCurve):
        if p > GENUS1_PRIME_CAP:
            raise UnsupportedModel("prime exceeds genus-1 enumeration cap", p=p)
        elements = _enumerate_ec_group(curve, field)
    elif isinstance(curve, HyperellipticCurve):
        if curve.degree != 5:
            raise UnsupportedModel(
                "group enumeration implemented for degree-5 models only",
                degree=curve.degree,
            )
        if p > GENUS2_PRIME_CAP:
            raise UnsupportedModel("prime exceeds genus-2 enumeration cap", p=p)
        elements = _enumerate_g2_group(curve, field)
    else:
        raise UnsupportedModel("no jacobian arithmetic for this model",
                               model=type(curve).__name__)
    elements.sort(key=lambda a: internal_key(a, curve))
    return JacobianGroup(curve, p, field, tuple(elements))


def jacobian_order(curve, p: int) -> int:
    """#J(F_p): the point count for genus 1; for genus 2 computed from
    N_1 = #C(F_p) and N_2 = #C(F_{p^2}) through the numerator of the zeta
    function evaluated at 1."""
    info = reduction_type(curve, p)
    if not info.good:
        raise BadReduction("jacobian order needs good reduction", p=p)
    if isinstance(curve, EllipticCurve):
        return count_points(curve, PrimeField(p))
    if not isinstance(curve, HyperellipticCurve):
        raise UnsupportedModel("no jacobian order for this model",
                               model=type(curve).__name__)
    n1 = count_points(curve, PrimeField(p))
    n2 = count_points(curve, ExtField.generate(p, 2))
    c1 = n1 - p - 1
    num = n2 - p * p - 1 + c1 * c1
    assert num % 2 == 0, "zeta numerator fails integrality"
    c2 = num // 2
    order = 1 + c1 + c2 + c1 * p + p * p
    assert order >= 1
    return order


# ---------------------------------------------------------------------------
# Reduction of rational data


def _fraction_mod_p(q: Fraction, p: int, field):
    num, den = q.numerator, q.denominator
    if den % p == 0:
        raise NonIntegralAtP("denominator divisible by p", p=p)
    return field(num * pow(den, -1, p))


def reduce_point(elem, curve, p: int):
    """Reduce a rational Jacobian element mod a good prime; requires all
    coordinates p-integral (NonIntegralAtP signals the prime must be
    skipped for this basis)."""
    info = reduction_type(curve, p)
    if not info.good:
        raise BadReduction("reduction map needs good reduction", p=p)
    field = PrimeField(p)
    if isinstance(elem, ECPoint):
        if elem.infinity:
            return ECPoint.identity()
        x = _fraction_mod_p(Fraction(elem.x), p, field)
        y = _fraction_mod_p(Fraction(elem.y), p, field)
        P = ECPoint(x, y)
        _require_on_curve(P, curve, field)
        return P
    if isinstance(elem, MumfordDivisor):
        u = polys.trim(
            tuple(_fraction_mod_p(Fraction(c), p, field) for c in elem.u), field
        )
        v = polys.trim(
            tuple(_fraction_mod_p(Fraction(c), p, field) for c in elem.v), field
        )
        D = MumfordDivisor(u, v)
        _require_divisor(D, curve, field)
        return D
    raise TypeError(f"cannot reduce {elem!r}")


# ---------------------------------------------------------------------------
# Quotients J(F_p) / B J(F_p)


@dataclass(frozen=True, eq=False)
class QuotientMap:
    curve: object
    p: int
    modulus: int
    labels: dict  # internal element key -> label (smallest coset member key)
    n_labels: int
    subgroup_size: int

    def label(self, elem):
        """Label of a public ECPoint/MumfordDivisor over F_p."""
        return self.labels[element_key(elem)]

    def label_of_key(self, key):
        return self.labels[key]


@lru_cache(maxsize=None)
def quotient_map(curve, p: int, B: int) -> QuotientMap:
    """Coset labels of J(F_p)/B J(F_p); labels are the smallest enumerated
    representative of each coset."""
    group = jacobian_group(curve, p)
    key = group.key
    bj = {}
    for x in group.elements:
        y = group.mul(B, x)
        bj.setdefault(key(y), y)
    bj_elems = [bj[k] for k in sorted(bj)]
    labels = {}
    for x in group.elements:
        kx = key(x)
        if kx in labels:
            continue
        for h in bj_elems:
            labels[key(group.add(x, h))] = kx
    n = len(group.elements)
    assert len(labels) == n
    n_labels = n // len(bj_elems)
    assert n_labels * len(bj_elems) == n
    return QuotientMap(curve, p, B, labels, n_labels, len(bj_elems))


# ---------------------------------------------------------------------------
# Mordell-Weil input data


@dataclass(frozen=True)
class MordellWeilBasis:
    """User-supplied generators of J(Q): torsion generators with their orders
    plus independent infinite-order generators. Membership and the declared
    torsion orders are checked; independence and completeness are trusted
    (and recorded as an assumption on every certificate)."""

    curve: object
    torsion: tuple  # ((element, order), ...)
    free: tuple
    provenance: str = "user-supplied"

    def __post_init__(self):
        for elem, order in self.torsion:
            _check_membership(elem, self.curve)
            if order < 1:
                raise ParseError("torsion order must be positive", order=order)
            if not _is_rational_identity(
                scalar_mul(order, elem, self.curve, QQ), self.curve
            ):
                raise ParseError(
                    "declared torsion order fails n*g = identity",
                    order=order,
                )
        for elem in self.free:
            _check_membership(elem, self.curve)

    @property
    def rank(self):
        return len(self.free)

    @property
    def torsion_orders(self):
        return tuple(order for _, order in self.torsion)

    def generators(self):
        return tuple(self.free) + tuple(e for e, _ in self.torsion)


def _is_rational_identity(elem, curve):
    if isinstance(elem, ECPoint):
        return elem.infinity
    return elem.is_identity()


def _check_membership(elem, curve):
    if isinstance(curve, EllipticCurve):
        if not isinstance(elem, ECPoint):
            raise ParseError("elliptic basis entries must be points")
        if not _on_curve(elem, curve, QQ):
            raise PointNotOnCurve(
                "basis point fails the curve equation",
                x=str(elem.x),
                y=str(elem.y),
            )
        return
    if isinstance(curve, HyperellipticCurve):
        if not isinstance(elem, MumfordDivisor):
            raise ParseError("genus-2 basis entries must be Mumford divisors")
        if not is_valid_divisor(elem, curve, QQ):
            raise InvalidDivisor(
                "basis divisor fails u | v^2 - f",
                u=[str(c) for c in elem.u],
            )
        return
    raise UnsupportedModel("no Mordell-Weil data for this model",
                           model=type(curve).__name__)


# JSON encoding: rationals as [num, den] pairs, Mumford as ascending
# coefficient lists.


def _frac_from_json(v):
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, int) for t in v):
        if v[1] == 0:
            raise ParseError("zero denominator", value=v)
        return Fraction(v[0], v[1])
    raise ParseError("rational must be a [num, den] pair", value=v)


def _frac_to_json(q):
    q = Fraction(q)
    return [q.numerator, q.denominator]


def element_from_json(doc, curve):
    if doc == "identity":
        if isinstance(curve, EllipticCurve):
            return ECPoint.identity()
        return MumfordDivisor.identity(QQ)
    if isinstance(curve, EllipticCurve):
        if not (isinstance(doc, list) and len(doc) == 2):
            raise ParseError("elliptic point must be [[xn,xd],[yn,yd]]", got=doc)
        return ECPoint(_frac_from_json(doc[0]), _frac_from_json(doc[1]))
    if isinstance(curve, HyperellipticCurve):
        if not (isinstance(doc, dict) and set(doc) == {"u", "v"}):
            raise ParseError("mumford element must carry exactly u and v keys")
        u = polys.trim([_frac_from_json(c) for c in doc["u"]], QQ)
        v = polys.trim([_frac_from_json(c) for c in doc["v"]], QQ)
        return MumfordDivisor(u, v)
    raise UnsupportedModel("no element encoding for this model")


def element_to_json(elem):
    if isinstance(elem, ECPoint):
        if elem.infinity:
            return "identity"
        return [_frac_to_json(elem.x), _frac_to_json(elem.y)]
    if elem.is_identity():
        return "identity"
    return {
        "u": [_frac_to_json(c) for c in elem.u],
        "v": [_frac_to_json(c) for c in elem.v],
    }


def basis_from_json(doc, curve) -> MordellWeilBasis:
    if not isinstance(doc, dict):
        raise ParseError("basis document must be an object")
    unknown = set(doc) - {"torsion", "free", "provenance"}
    if unknown:
        raise ParseError("unknown keys in basis document", keys=sorted(unknown))
    torsion = []
    for entry in doc.get("torsion", []):
        if set(entry) != {"point", "order"}:
            raise ParseError("torsion entries carry exactly point and order")
        torsion.append(
            (element_from_json(entry["point"], curve), int(entry["order"]))
        )
    free = [
        element_from_json(entry["point"], curve) for entry in doc.get("free", [])
    ]
    return MordellWeilBasis(
        curve,
        tuple(torsion),
        tuple(free),
        doc.get("provenance", "user-supplied"),
    )


def basis_to_json(basis: MordellWeilBasis) -> dict:
    return {
        "torsion": [
            {"point": element_to_json(e), "order": n} for e, n in basis.torsion
        ],
        "free": [{"point": element_to_json(e)} for e in basis.free],
        "provenance": basis.provenance,
    }
