"""Local solubility over R and Q_p with two-sided certificates.

A "soluble" verdict always carries a witness: a point modulo p^k whose
partial-derivative valuations satisfy the Newton criterion k >= 2t + 1
(t the minimal partial valuation), so the point lifts to Q_p. An
"insoluble" verdict means the full set of primitive candidates modulo p^k
became empty at some level k <= precision; since any Q_p-point reduces to a
candidate at every level, this is a proof.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import REAL_PLACE, ExtField, PrimeField
from .curves import (
    Conic,
    EllipticCurve,
    HyperellipticCurve,
    PlaneCubic,
    bad_primes,
    count_points,
    enumerate_points,
    reduction_type,
)
from .errors import PrecisionExhausted

_CANDIDATE_CAP = 200_000


# ---------------------------------------------------------------------------
# Charts: affine systems covering the curve's local points


@dataclass(frozen=True)
class Chart:
    name: str
    poly: dict  # {exponent tuple: int coefficient}
    nvars: int
    forced: tuple  # variable indices that must be 0 at level 1 (p-divisible)

    def partials(self):
        out = []
        for var in range(self.nvars):
            d = {}
            for exps, c in self.poly.items():
                if exps[var] > 0:
                    e = list(exps)
                    e[var] -= 1
                    key = tuple(e)
                    d[key] = d.get(key, 0) + c * exps[var]
            out.append(d)
        return out


def _subst_var_one(poly, var):
    out = {}
    for exps, c in poly.items():
        rest = tuple(e for i, e in enumerate(exps) if i != var)
        out[rest] = out.get(rest, 0) + c
    return {e: c for e, c in out.items() if c != 0}


def _projective_charts(poly3, var_names):
    charts = []
    for i in range(3):
        sub = _subst_var_one(poly3, i)
        forced = tuple(range(i))  # earlier variables are p-divisible
        charts.append(Chart(f"{var_names[i]}=1", sub, 2, forced))
    return charts


def charts_for(curve):
    """Affine chart systems whose Z_p-solutions cover exactly the Q_p-points
    of the smooth model."""
    if isinstance(curve, Conic):
        a, b, c = curve.coeffs
        poly = {(2, 0, 0): a, (0, 2, 0): b, (0, 0, 2): -c}
        return _projective_charts(poly, "XYZ")
    if isinstance(curve, PlaneCubic):
        return _projective_charts(curve.monomial_dict(), "XYZ")
    if isinstance(curve, EllipticCurve):
        poly = {
            (0, 2, 1): 1,
            (3, 0, 0): -1,
            (1, 0, 2): -curve.a,
            (0, 0, 3): -curve.b,
        }
        poly = {e: c for e, c in poly.items() if c != 0}
        return _projective_charts(poly, "XYZ")
    if isinstance(curve, HyperellipticCurve):
        f = curve.f
        finite = {(0, 2): 1}
        for i, c in enumerate(f):
            if c:
                finite[(i, 0)] = finite.get((i, 0), 0) - c
        # reversed model w^2 = t^6 f(1/t); t = 1/x p-divisible covers |x| > 1
        rev = {(0, 2): 1}
        for i, c in enumerate(f):
            if c:
                rev[(6 - i, 0)] = rev.get((6 - i, 0), 0) - c
        return [
            Chart("finite", {e: c for e, c in finite.items() if c != 0}, 2, ()),
            Chart("infinite", {e: c for e, c in rev.items() if c != 0}, 2, (0,)),
        ]
    raise TypeError(f"unsupported curve {curve!r}")


def _eval_poly(poly, coords):
    total = 0
    for exps, c in poly.items():
        term = c
        for e, x in zip(exps, coords):
            if e:
                term *= x**e
        total += term
    return total


def _vp(n, p):
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Reports


@dataclass
class LocalReport:
    place: object
    soluble: bool
    witness: dict = None
    precision: int = 0
    insoluble_level: int = None
    note: str = ""

    def to_json(self):
        return {
            "place": self.place,
            "soluble": self.soluble,
            "witness": self.witness,
            "precision": self.precision,
            "insoluble_level": self.insoluble_level,
            "note": self.note,
        }


@dataclass
class SolubilityReport:
    soluble: bool
    reports: list
    weil_bound: int
    checked_up_to: int
    first_obstruction: object = None

    def to_json(self):
        return {
            "soluble": self.soluble,
            "places": [r.to_json() for r in self.reports],
            "weil_bound": self.weil_bound,
            "checked_up_to": self.checked_up_to,
            "first_obstruction": self.first_obstruction,
            "note": (
                "good primes above weil_bound are soluble by the Weil point "
                "count plus smooth lifting"
            ),
        }


@dataclass
class LocalIndexReport:
    place: object
    index: int
    degrees: list
    witnesses: list
    exact: bool
    flags: tuple = ()

    def to_json(self):
        return {
            "place": self.place,
            "index": self.index,
            "degrees": self.degrees,
            "witnesses": self.witnesses,
            "exact": self.exact,
            "flags": list(self.flags),
            "degree_search_cap_note": (
                "closed-point degree search is capped at 2g+2; irrelevant to "
                "the gcd for these models, asserted not proven here"
            ),
        }


# ---------------------------------------------------------------------------
# Real place


def _sturm_count(f):
    """Number of distinct real roots of an integer polynomial, exact."""
    f = [Fraction(c) for c in f]
    while f and f[-1] == 0:
        f.pop()
    if len(f) <= 1:
        return 0
    chain = [f, [i * c for i, c in enumerate(f)][1:]]
    while True:
        a, b = chain[-2], chain[-1]
        if not b:
            chain.pop()
            break
        r = _frac_polymod(a, b)
        if not r:
            break
        chain.append([-c for c in r])

    def variations(at_plus):
        signs = []
        for poly in chain:
            lead = poly[-1]
            d = len(poly) - 1
            s = 1 if lead > 0 else -1
            if not at_plus and d % 2 == 1:
                s = -s
            signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return variations(False) - variations(True)


def _frac_polymod(a, b):
    a = list(a)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        d = len(a) - len(b)
        for i, bi in enumerate(b):
            a[d + i] -= c * bi
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def real_soluble(curve) -> bool:
    """True iff the curve has a real point (sign/signature analysis)."""
    if isinstance(curve, Conic):
        a, b, c = curve.coeffs
        definite = (a > 0 and b > 0 and c < 0) or (a < 0 and b < 0 and c > 0)
        return not definite
    if isinstance(curve, EllipticCurve):
        return True  # odd-degree cubic always takes a nonnegative value
    if isinstance(curve, PlaneCubic):
        return True  # a line section has odd degree, hence a real zero
    if isinstance(curve, HyperellipticCurve):
        if curve.degree % 2 == 1 or curve.leading > 0:
            return True
        return _sturm_count(list(curve.f)) > 0
    raise TypeError(f"unsupported curve {curve!r}")


def real_report(curve) -> LocalReport:
    ok = real_soluble(curve)
    witness = None
    if ok:
        if isinstance(curve, Conic):
            witness = {"kind": "signature", "form": list(curve.coeffs)}
        else:
            witness = {"kind": "sign_analysis"}
    return LocalReport(REAL_PLACE, ok, witness, note="archimedean")


# ---------------------------------------------------------------------------
# p-adic search


def default_precision(curve, p: int) -> int:
    d = curve.discriminant()
    if isinstance(curve, HyperellipticCurve):
        d *= curve.leading
    v = _vp(2 * d, p) or 0
    return 2 * v + 3


def qp_soluble(curve, p: int, precision: int = None) -> LocalReport:
    """Decide solubility over Q_p with a sound certificate either way.

    Works at every prime including 2 and 3; this is the only entry point for
    those places.
    """
    if precision is None:
        precision = default_precision(curve, p)
    if precision < 1:
        raise ValueError("precision must be >= 1")
    charts = charts_for(curve)
    partials = [ch.partials() for ch in charts]

    def certify(ci, coords, k):
        vals = []
        for g in partials[ci]:
            v = _vp(_eval_poly(g, coords), p)
            vals.append(v if (v is not None and v < k) else None)
        known = [v for v in vals if v is not None]
        if not known:
            return None
        t = min(known)
        if k >= 2 * t + 1:
            return {
                "chart": charts[ci].name,
                "coords": list(coords),
                "level": k,
                "partial_valuations": vals,
                "min_partial_valuation": t,
            }
        return None

    survivors = []
    for ci, ch in enumerate(charts):
        ranges = [(0,) if i in ch.forced else range(p) for i in range(ch.nvars)]
        for coords in itertools.product(*ranges):
            if _eval_poly(ch.poly, coords) % p != 0:
                continue
            w = certify(ci, coords, 1)
            if w is not None:
                return LocalReport(p, True, w, precision)
            survivors.append((ci, coords))
    k = 1
    while True:
        if not survivors:
            return LocalReport(p, False, None, precision, insoluble_level=k)
        if k >= precision:
            raise PrecisionExhausted(
                "no certificate at requested precision",
                place=p,
                precision=precision,
                pending=len(survivors),
            )
        step = p**k
        mod_next = p ** (k + 1)
        new = []
        for ci, coords in survivors:
            n = charts[ci].nvars
            for delta in itertools.product(range(p), repeat=n):
                nc = tuple(c + step * d for c, d in zip(coords, delta))
                if _eval_poly(charts[ci].poly, nc) % mod_next != 0:
                    continue
                w = certify(ci, nc, k + 1)
                if w is not None:
                    return LocalReport(p, True, w, precision)
                new.append((ci, nc))
            if len(new) > _CANDIDATE_CAP:
                raise PrecisionExhausted(
                    "candidate set exceeded cap", place=p, level=k + 1
                )
        survivors = new
        k += 1


def verify_witness(curve, p: int, witness: dict) -> bool:
    """Independent re-check of a solubility witness: congruence plus the
    Newton lifting criterion, recomputed from scratch."""
    charts = charts_for(curve)
    by_name = {ch.name: ch for ch in charts}
    ch = by_name.get(witness.get("chart"))
    if ch is None:
        return False
    coords = tuple(witness["coords"])
    k = witness["level"]
    if len(coords) != ch.nvars or k < 1:
        return False
    for i in ch.forced:
        if coords[i] % p != 0:
            return False
    if _eval_poly(ch.poly, coords) % p**k != 0:
        return False
    vals = []
    for g in ch.partials():
        v = _vp(_eval_poly(g, coords), p)
        vals.append(v if (v is not None and v < k) else None)
    known = [v for v in vals if v is not None]
    if not known:
        return False
    return k >= 2 * min(known) + 1


def everywhere_locally_soluble(
    curve, precision: int = None, check_up_to: int = None
) -> SolubilityReport:
    """Check the real place, all bad primes, and all good primes up to the
    Weil bound 4g^2 + 5 (and up to check_up_to when given); good primes above
    that are soluble by the Weil lower bound on point counts plus smooth
    lifting."""
    g = curve.genus
    weil = 4 * g * g + 5
    explicit = weil if check_up_to is None else max(weil, check_up_to)
    reports = [real_report(curve)]
    primes = sorted(set(bad_primes(curve)) | set(_primes_up_to(explicit)))
    for p in primes:
        try:
            reports.append(qp_soluble(curve, p, precision))
        except PrecisionExhausted as exc:
            exc.details.setdefault("place", p)
            raise
    soluble = all(r.soluble for r in reports)
    first = None
    for r in reports:
        if not r.soluble:
            first = r.place
            break
    return SolubilityReport(soluble, reports, weil, explicit, first)


def _primes_up_to(n):
    from .arith import is_prime

    return [p for p in range(2, n + 1) if is_prime(p)]


# ---------------------------------------------------------------------------
# Local index


def local_index(curve, p) -> LocalIndexReport:
    """gcd of closed-point degrees over the completion at p (or "real").

    Good p: degrees are witnessed by points over unramified extensions found
    by counting over F_{p^d} (smooth, so every such point lifts). Bad p: a
    Q_p-point gives 1; otherwise conics get the exact answer 2 (any quadratic
    extension splits the obstruction) while other models only get the
    structural upper bound, flagged unramified_only.
    """
    if p == REAL_PLACE:
        if real_soluble(curve):
            return LocalIndexReport(p, 1, [1], [{"kind": "real_point"}], True)
        return LocalIndexReport(
            p, 2, [2], [{"kind": "conjugate_point_pair"}], True
        )
    if isinstance(curve, EllipticCurve):
        return LocalIndexReport(
            p, 1, [1], [{"kind": "rational_point_at_infinity"}], True
        )
    if reduction_type(curve, p).good:
        return _good_prime_index(curve, p)
    rep = qp_soluble(curve, p)
    if rep.soluble:
        return LocalIndexReport(p, 1, [1], [rep.witness], True)
    if isinstance(curve, Conic):
        return LocalIndexReport(
            p,
            2,
            [2],
            [{"kind": "unramified_quadratic_splits_conic"}],
            True,
            ("no_qp_point",),
        )
    if isinstance(curve, HyperellipticCurve):
        return LocalIndexReport(
            p,
            2,
            [2],
            [{"kind": "fiber_of_degree_2_map"}],
            False,
            ("unramified_only", "upper_bound"),
        )
    return LocalIndexReport(
        p,
        3,
        [3],
        [{"kind": "line_section_degree_3"}],
        False,
        ("unramified_only", "upper_bound"),
    )


def _good_prime_index(curve, p):
    degrees = []
    witnesses = []
    cap = 2 * curve.genus + 2
    for d in range(1, cap + 1):
        field = PrimeField(p) if d == 1 else ExtField.generate(p, d)
        if field.order > 25_000:
            break
        n = count_points(curve, field)
        if n > 0:
            degrees.append(d)
            pt = enumerate_points(curve, field)[0]
            witnesses.append(_point_witness(pt, d))
            if _gcd_list(degrees) == 1:
                break
    idx = _gcd_list(degrees)
    return LocalIndexReport(p, idx, degrees, witnesses, True)


def _gcd_list(xs):
    import math

    g = 0
    for x in xs:
        g = math.gcd(g, x)
    return g


def _point_witness(pt, d):
    if pt[0] == "inf" or pt == ("inf",):
        if len(pt) == 1:
            return {"kind": "point_at_infinity", "degree": d}
        return {"kind": "point_at_infinity", "degree": d,
                "branch": list(pt[1].coeffs)}
    return {
        "kind": "smooth_point",
        "degree": d,
        "coords": [list(c.coeffs) for c in pt],
    }
