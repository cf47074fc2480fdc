"""Independent brute-force oracle for the Mordell-Weil sieve.

Written directly from the definitions with plain integers and lists; shares
no code with the library. Everything is naive on purpose: groups are
enumerated by scanning, subgroups by multiplying every element, cosets by
set partition.
"""

import itertools
from fractions import Fraction
from math import gcd

# ---------------------------------------------------------------------------
# Elliptic curves: points are None (infinity) or (x, y) integer pairs.


def ec_points(a, b, p):
    pts = [None]
    for x in range(p):
        rhs = (x * x * x + a * x + b) % p
        for y in range(p):
            if y * y % p == rhs:
                pts.append((x, y))
    return pts


def ec_plus(P, Q, a, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        m = (3 * x1 * x1 + a) * pow(2 * y1, p - 2, p) % p
    else:
        m = (y2 - y1) * pow(x2 - x1, p - 2, p) % p
    x3 = (m * m - x1 - x2) % p
    y3 = (m * (x1 - x3) - y1) % p
    return (x3, y3)


# ---------------------------------------------------------------------------
# Genus 2, degree-5 models: divisors are (u, v) with u, v integer coefficient
# lists ascending, u monic of degree <= 2, deg v < deg u.


def norm(poly, p):
    out = [c % p for c in poly]
    while out and out[-1] == 0:
        out.pop()
    return out


def plus(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return norm(out, p)


def minus(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return norm(out, p)


def times(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return norm(out, p)


def longdiv(a, b, p):
    a = norm(a, p)
    b = norm(b, p)
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a = norm(a, p)
    return norm(q, p), a


def polygcd_ext(a, b, p):
    r0, s0, t0 = norm(a, p), [1], []
    r1, s1, t1 = norm(b, p), [], [1]
    while r1:
        q, r = longdiv(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, minus(s0, times(q, s1, p), p)
        t0, t1 = t1, minus(t0, times(q, t1, p), p)
    if r0:
        inv = pow(r0[-1], p - 2, p)
        r0 = [c * inv % p for c in r0]
        s0 = [c * inv % p for c in s0]
        t0 = [c * inv % p for c in t0]
    return r0, s0, t0


def divides(u, poly, p):
    return not longdiv(poly, u, p)[1]


def g2_elements(f, p):
    """All Mumford pairs by exhaustive scan of coefficients."""
    els = [((1,), ())]
    for u0 in range(p):
        for v0 in range(p):
            u = [u0, 1]
            v = [v0]
            if divides(u, minus(times(v, v, p), f, p), p):
                els.append((tuple(u), tuple(norm(v, p))))
    for u1 in range(p):
        for u0 in range(p):
            u = [u0, u1, 1]
            for v1 in range(p):
                for v0 in range(p):
                    v = [v0, v1]
                    if divides(u, minus(times(v, v, p), f, p), p):
                        els.append((tuple(u), tuple(norm(v, p))))
    return els


def g2_plus(D1, D2, f, p):
    u1, v1 = list(D1[0]), list(D1[1])
    u2, v2 = list(D2[0]), list(D2[1])
    d1, e1, e2 = polygcd_ext(u1, u2, p)
    d, c1, c2 = polygcd_ext(d1, plus(v1, v2, p), p)
    u, rem = longdiv(times(u1, u2, p), times(d, d, p), p)
    assert not rem
    s1, s2 = times(c1, e1, p), times(c1, e2, p)
    top = plus(
        plus(times(times(s1, u1, p), v2, p), times(times(s2, u2, p), v1, p), p),
        times(c2, plus(times(v1, v2, p), f, p), p),
        p,
    )
    vq, rem = longdiv(top, d, p)
    assert not rem
    v = longdiv(vq, u, p)[1]
    while len(u) - 1 > 2:
        nu, rem = longdiv(minus(f, times(v, v, p), p), u, p)
        assert not rem
        inv = pow(nu[-1], p - 2, p)
        nu = [c * inv % p for c in nu]
        v = longdiv([(-c) % p for c in v], nu, p)[1]
        u = nu
    if not u:
        u = [1]
    inv = pow(u[-1], p - 2, p)
    u = [c * inv % p for c in u]
    return (tuple(u), tuple(v))


# ---------------------------------------------------------------------------
# Generic pieces on top of either group


class OracleGroup:
    def __init__(self, kind, data, p):
        self.kind = kind
        self.p = p
        if kind == "elliptic":
            self.a, self.b = data
            self.elements = ec_points(self.a % p, self.b % p, p)
        else:
            self.f = [c % p for c in data]
            self.elements = g2_elements(self.f, p)

    def add(self, x, y):
        if self.kind == "elliptic":
            return ec_plus(x, y, self.a % self.p, self.p)
        return g2_plus(x, y, self.f, self.p)

    def zero(self):
        return None if self.kind == "elliptic" else ((1,), ())

    def mul(self, k, x):
        acc = self.zero()
        if k < 0:
            k = -k
            if self.kind == "elliptic":
                x = None if x is None else (x[0], (-x[1]) % self.p)
            else:
                u, v = x
                nv = longdiv([(-c) % self.p for c in v], list(u), self.p)[1]
                x = (u, tuple(nv))
        for _ in range(k):
            acc = self.add(acc, x)
        return acc


def reduce_frac(q, p):
    q = Fraction(q)
    assert q.denominator % p != 0
    return q.numerator * pow(q.denominator, p - 2, p) % p


def reduce_generator(gen, kind, p):
    if kind == "elliptic":
        if gen == "identity":
            return None
        (xn, xd), (yn, yd) = gen
        return (
            reduce_frac(Fraction(xn, xd), p),
            reduce_frac(Fraction(yn, yd), p),
        )
    if gen == "identity":
        return ((1,), ())
    u = tuple(reduce_frac(Fraction(n, d), p) for n, d in gen["u"])
    v = tuple(reduce_frac(Fraction(n, d), p) for n, d in gen["v"])
    while u and u[-1] == 0:
        u = u[:-1]
    while v and v[-1] == 0:
        v = v[:-1]
    return (u, v)


def curve_image(group, base, p):
    """Classes [P - base] for P on the curve over F_p."""
    if group.kind == "elliptic":
        return set(group.elements)  # translation permutes the whole group
    pts = [group.zero()]
    for x in range(p):
        rhs = 0
        for c in reversed(group.f):
            rhs = (rhs * x + c) % p
        for y in range(p):
            if y * y % p == rhs:
                pts.append((((-x) % p, 1), (y,) if y else ()))
    neg_base = group.mul(-1, base)
    return {group.add(cls, neg_base) for cls in pts}


def oracle_admissible(group, p, B, gens, bounds, base, shift, mode):
    """Admissible tuples: candidates whose reduction lands in image + B*J."""
    bj = {group.mul(B, x) for x in group.elements}
    cosets = {}
    for x in group.elements:
        if x in cosets:
            continue
        members = {group.add(x, h) for h in bj}
        label = min(members, key=_keyify)
        for m in members:
            cosets[m] = label
    if mode == "zero_cycles":
        image_labels = {cosets[e] for e in group.elements}
    else:
        image_labels = {cosets[e] for e in curve_image(group, base, p)}
    red = [reduce_generator(g, group.kind, p) for g in gens]
    shift_elem = group.zero()
    for e, g in zip(shift or [], red):
        shift_elem = group.add(shift_elem, group.mul(e, g))
    admissible = []
    for tup in itertools.product(*(range(b) for b in bounds)):
        elem = shift_elem
        for k, g in zip(tup, red):
            elem = group.add(elem, group.mul(k, g))
        if cosets[elem] in image_labels:
            admissible.append(tup)
    return sorted(admissible)


def _keyify(e):
    if e is None:
        return (0,)
    if isinstance(e, tuple) and len(e) == 2 and isinstance(e[0], tuple):
        u, v = e
        up = list(u) + [0] * (3 - len(u))
        vp = list(v) + [0] * (2 - len(v))
        return (1, len(u), *up, *vp)
    return (1, 1) + e


def oracle_sieve(config_doc):
    """Full sieve re-run from a config document; returns per-prime admissible
    sets and the surviving intersection."""
    curve_doc = config_doc["curve"]
    kind = "elliptic" if curve_doc["type"] == "elliptic" else "g2"
    data = (
        tuple(curve_doc["coeffs"])
        if kind == "elliptic"
        else list(curve_doc["coeffs"])
    )
    B = config_doc["modulus"]
    basis = config_doc["basis"]
    gens = [e["point"] for e in basis.get("free", [])] + [
        e["point"] for e in basis.get("torsion", [])
    ]
    bounds = [B] * len(basis.get("free", [])) + [
        gcd(e["order"], B) for e in basis.get("torsion", [])
    ]
    base_doc = config_doc.get("base", "identity")
    shift = ()
    if isinstance(base_doc, dict):
        shift = base_doc.get("shift", ())
        base_doc = base_doc["point"]
    mode = config_doc.get("mode", "points")
    per_prime = {}
    survivors = None
    for p in config_doc["primes"]:
        group = OracleGroup(
            "elliptic" if kind == "elliptic" else "g2", data, p
        )
        if base_doc in ("identity", "infinity"):
            base = group.zero()
        else:
            base = reduce_generator(
                base_doc if kind == "elliptic" else _affine_to_mumford(base_doc),
                group.kind,
                p,
            )
        adm = oracle_admissible(group, p, B, gens, bounds, base, shift, mode)
        per_prime[p] = adm
        survivors = set(adm) if survivors is None else survivors & set(adm)
    return per_prime, sorted(survivors)


def _affine_to_mumford(pt_doc):
    (xn, xd), (yn, yd) = pt_doc
    return {"u": [[-xn, xd], [1, 1]], "v": [[yn, yd]]}
