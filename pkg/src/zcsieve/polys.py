"""Dense univariate polynomials over any exact field.

Coefficients ascending by degree, canonical form has no trailing zeros and the
zero polynomial is the empty tuple. The field argument is any object with
zero()/one() returning elements that support +, -, *, / and ==; both
arith.PrimeField/ExtField and the rationals adapter below qualify.
"""

from fractions import Fraction


class RationalField:
    """Adapter presenting Fraction arithmetic through the field protocol."""

    p = None

    def __call__(self, value):
        return Fraction(value)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")


QQ = RationalField()


def trim(coeffs, field):
    zero = field.zero()
    c = list(coeffs)
    while c and c[-1] == zero:
        c.pop()
    return tuple(c)


def const(field, value):
    return trim((field(value),), field)


def degree(a):
    return len(a) - 1  # zero polynomial gets degree -1


def is_zero(a):
    return len(a) == 0


def add(a, b, field):
    n = max(len(a), len(b))
    zero = field.zero()
    out = [zero] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return trim(out, field)


def neg(a, field):
    return tuple(-c for c in a)


def sub(a, b, field):
    return add(a, neg(b, field), field)


def mul(a, b, field):
    if not a or not b:
        return ()
    zero = field.zero()
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return trim(out, field)


def scale(a, c, field):
    return trim([ai * c for ai in a], field)


def divmod_poly(a, b, field):
    b = trim(b, field)
    if is_zero(b):
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a, field)
    if len(a) < len(b):
        return (), a
    zero = field.zero()
    q = [zero] * (len(a) - len(b) + 1)
    r = list(a)
    inv_lead = field.one() / b[-1]
    for d in range(len(a) - len(b), -1, -1):
        c = r[d + len(b) - 1] * inv_lead
        if c != zero:
            q[d] = c
            for i, bi in enumerate(b):
                r[d + i] = r[d + i] - c * bi
    return trim(q, field), trim(r, field)


def mod(a, b, field):
    return divmod_poly(a, b, field)[1]


def monic(a, field):
    if is_zero(a):
        return a
    inv = field.one() / a[-1]
    return scale(a, inv, field)


def xgcd(a, b, field):
    """Extended gcd; returns (g, s, t) with s*a + t*b = g, g monic or zero."""
    zero, one = (), (field.one(),)
    r0, r1 = trim(a, field), trim(b, field)
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not is_zero(r1):
        q, r = divmod_poly(r0, r1, field)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, field), field)
        t0, t1 = t1, sub(t0, mul(q, t1, field), field)
    if not is_zero(r0):
        inv = field.one() / r0[-1]
        r0, s0, t0 = scale(r0, inv, field), scale(s0, inv, field), scale(t0, inv, field)
    return r0, s0, t0


def evaluate(a, x, field):
    acc = field.zero()
    for c in reversed(a):
        acc = acc * x + c
    return acc


def derivative(a, field):
    out = [c * field(i) for i, c in enumerate(a) if i > 0]
    return trim(out, field)


def from_ints(field, ints):
    return trim([field(v) for v in ints], field)
