"""Index upper bounds from closed-point searches, period/index relation
reports, the conditional zero-cycle conclusion under Sha-vanishing flags, and
the Hasse decision procedure for conics.

The index is only ever asserted exactly when it is 1 (a point or degree-1
cycle in hand); otherwise reports carry an upper bound plus the structural
divisors that bound it.
"""

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .arith import REAL_PLACE, hilbert_symbol, prime_divisors
from .curves import Conic, EllipticCurve, HyperellipticCurve, PlaneCubic
from .errors import HypothesisUnmet
from .local import SolubilityReport, everywhere_locally_soluble

DEFAULT_HEIGHT = 1000
GENERAL_CUBIC_HEIGHT_CAP = 40


# ---------------------------------------------------------------------------
# Reports


@dataclass
class IndexReport:
    curve_type: str
    genus: int
    degrees: list  # (degree, witness) pairs, gcd-relevant cycles found
    upper_bound: int
    structural_divisors: list
    search_height: int
    rational_point: object = None  # witness when a degree-1 point was found
    notes: tuple = ()

    def to_json(self):
        return {
            "curve_type": self.curve_type,
            "genus": self.genus,
            "degrees": [
                {"degree": d, "witness": w} for d, w in self.degrees
            ],
            "upper_bound": self.upper_bound,
            "structural_divisors": self.structural_divisors,
            "search_height": self.search_height,
            "rational_point": self.rational_point,
            "notes": list(self.notes),
        }


@dataclass
class Claim:
    statement: str
    status: str  # proven-at-desk-scale | conditional | informational
    rule: str

    def to_json(self):
        return {"statement": self.statement, "status": self.status,
                "rule": self.rule}


@dataclass
class PeriodIndexRelation:
    genus: int
    claims: list
    period_value: object = None  # int when determined
    index_upper: object = None

    def to_json(self):
        return {
            "genus": self.genus,
            "claims": [c.to_json() for c in self.claims],
            "period_value": self.period_value,
            "index_upper_bound": self.index_upper,
        }


# ---------------------------------------------------------------------------
# Point searches


def _conic_witness_search(conic: Conic, height):
    """Primitive solution of the normalized conic, escalating to height.
    Minimal solutions obey the Legendre/Holzer coefficient bounds, so the
    initial window already suffices for honest inputs."""
    a, b, c = conic.coeffs
    hx = max(2, math.isqrt(abs(b * c))) + 1
    hy = max(2, math.isqrt(abs(a * c))) + 1
    while hx <= max(height, hx):
        for x in range(hx + 1):
            ax2 = a * x * x
            for y in range(-hy, hy + 1):
                t = ax2 + b * y * y
                if t % c != 0:
                    continue
                zz = t // c
                if zz < 0:
                    continue
                z = math.isqrt(zz)
                if z * z == zz and (x or y or z):
                    return conic.map_witness_to_raw((x, y, z))
        if hx > height:
            break
        hx, hy = hx * 2, hy * 2
    return None


def conic_has_rational_point(a, b, c, height=DEFAULT_HEIGHT):
    """Hasse decision for a X^2 + b Y^2 = c Z^2: Hilbert symbols at the real
    place and the primes dividing 2abc decide; a witness (in the original
    coordinates) is produced by bounded search when soluble."""
    conic = Conic(a, b, c)
    na, nb, nc = conic.coeffs
    obstructions = []
    if hilbert_symbol(na * nc, nb * nc, REAL_PLACE) == -1:
        obstructions.append(REAL_PLACE)
    for p in prime_divisors(2 * na * nb * nc):
        if hilbert_symbol(na * nc, nb * nc, p) == -1:
            obstructions.append(p)
    if obstructions:
        return {"has_point": False, "witness": None,
                "obstructions": obstructions}
    witness = _conic_witness_search(conic, height)
    return {"has_point": True, "witness": list(witness) if witness else None,
            "obstructions": []}


def _perfect_square(n):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def _hyperelliptic_point_search(curve, height):
    """Rational points (x, y) with x = n/d, d <= sqrt(height)."""
    dmax = max(1, math.isqrt(height))
    deg = 6  # homogenize to degree 6 regardless of deg f
    for d in range(1, dmax + 1):
        for n in range(-height, height + 1):
            if math.gcd(n, d) != 1:
                continue
            val = sum(c * n**i * d ** (deg - i) for i, c in enumerate(curve.f))
            r = _perfect_square(val)
            if r is not None:
                return {"x": [n, d], "y_squared_numerator": val}
    return None


def _diagonal_cubic_search(a, b, c, height):
    """Primitive zero of a x^3 + b y^3 + c z^3 up to the given height, or
    None. Vectorized; candidate cube roots from floats are verified exactly
    in integers."""
    import numpy as np

    ys = np.arange(-height, height + 1, dtype=np.int64)
    y3 = ys**3
    for z in range(height + 1):
        t = -(b * y3 + c * z**3)
        mask = t % a == 0
        if not mask.any():
            continue
        s = t[mask] // a
        approx = np.cbrt(s.astype(np.float64))
        for shift in (-1, 0, 1):
            cand = (np.rint(approx) + shift).astype(np.int64)
            ok = cand**3 == s
            if ok.any():
                idx = int(np.argmax(ok))
                x = int(cand[ok][0])
                y = int(ys[mask][ok][0])
                if (x, y, z) != (0, 0, 0):
                    return (x, y, z)
    return None


def _general_cubic_search(curve, height):
    h = min(height, GENERAL_CUBIC_HEIGHT_CAP)
    for z in range(h + 1):
        for y in range(-h, h + 1):
            for x in range(-h, h + 1):
                if (x, y, z) == (0, 0, 0):
                    continue
                if curve.evaluate(x, y, z) == 0:
                    return (x, y, z)
    return None


def _cubic_point_search(curve, height):
    if curve.is_diagonal():
        a, b, c = curve.diagonal
        return _diagonal_cubic_search(a, b, c, height), height
    h = min(height, GENERAL_CUBIC_HEIGHT_CAP)
    return _general_cubic_search(curve, height), h


# ---------------------------------------------------------------------------
# Index bounds


def canonical_index_bound(genus: int):
    """2g - 2 for genus >= 2 (the canonical divisor); degenerate below."""
    if genus >= 2:
        return 2 * genus - 2
    return None


def index_upper_bound(curve, height=DEFAULT_HEIGHT) -> IndexReport:
    """gcd of the degrees of rational cycles found: searched points plus the
    structural cycles every model of this shape carries."""
    degrees = []
    structural = []
    notes = []
    rational_point = None
    searched = height
    if isinstance(curve, EllipticCurve):
        rational_point = "identity"
        degrees.append((1, {"kind": "point_at_infinity"}))
        structural.append(1)
    elif isinstance(curve, Conic):
        structural.append(2)  # a rational line cuts a degree-2 cycle
        result = conic_has_rational_point(*curve.raw, height=height)
        if result["has_point"] and result["witness"]:
            rational_point = result["witness"]
            degrees.append((1, {"kind": "rational_point",
                                "coords": result["witness"]}))
        elif not result["has_point"]:
            notes.append("no rational point: local obstruction at "
                         + ",".join(str(v) for v in result["obstructions"]))
    elif isinstance(curve, HyperellipticCurve):
        structural.append(2)  # fibers of the degree-2 map to the line
        bound = canonical_index_bound(curve.genus)
        if bound:
            structural.append(bound)
        if curve.degree == 5:
            rational_point = "infinity"
            degrees.append((1, {"kind": "rational_point_at_infinity"}))
        else:
            found = _hyperelliptic_point_search(curve, min(height, 400))
            searched = min(height, 400)
            if found:
                rational_point = found
                degrees.append((1, {"kind": "rational_point", **found}))
    elif isinstance(curve, PlaneCubic):
        structural.append(3)  # a rational line cuts a degree-3 cycle
        found, searched = _cubic_point_search(curve, height)
        if found:
            rational_point = list(found)
            degrees.append((1, {"kind": "rational_point", "coords": list(found)}))
        else:
            notes.append(f"no rational point up to height {searched}")
    else:
        raise TypeError(f"unsupported curve {curve!r}")
    g = 0
    for d, _ in degrees:
        g = math.gcd(g, d)
    for d in structural:
        g = math.gcd(g, d)
    return IndexReport(
        type(curve).__name__,
        curve.genus,
        degrees,
        g,
        sorted(set(structural)),
        searched,
        rational_point,
        tuple(notes),
    )


# ---------------------------------------------------------------------------
# Period/index relation


def period_report(
    curve, local_evidence: SolubilityReport = None, index_report: IndexReport = None
) -> PeriodIndexRelation:
    """Assemble the period/index claims this artifact can certify for the
    model, from local evidence and the index search."""
    if local_evidence is None:
        local_evidence = everywhere_locally_soluble(curve)
    if index_report is None:
        index_report = index_upper_bound(curve)
    g = curve.genus
    claims = []
    period_value = None
    index_upper = index_report.upper_bound
    pointed = index_report.rational_point is not None and any(
        d == 1 for d, _ in index_report.degrees
    )
    if isinstance(curve, Conic):
        claims.append(
            Claim(
                "period = index, each 1 or 2; equal to 1 exactly when a "
                "rational point exists",
                "proven-at-desk-scale",
                "conic-dichotomy",
            )
        )
        claims.append(
            Claim(
                "removing a conjugate pair of points leaves a torus torsor "
                "whose period equals the index, so the generic period equals "
                "the index for conics",
                "informational",
                "generic-period-conic",
            )
        )
        period_value = 1 if pointed else 2
        index_upper = period_value
    if g >= 1:
        claims.append(
            Claim(
                f"P | I | P^{2 * g} (torsor under an abelian variety of "
                f"dimension {g})",
                "informational",
                "period-divides-index-divides-power",
            )
        )
    if pointed:
        claims.append(
            Claim(
                "a rational degree-1 cycle exists, so P = I = 1",
                "proven-at-desk-scale",
                "pointed-curve-trivial-invariants",
            )
        )
        period_value = 1
        index_upper = 1
    elif local_evidence.soluble and g >= 1:
        claims.append(
            Claim(
                "degree-1 cycles exist at every place, so the index equals "
                "the period: I = P",
                "proven-at-desk-scale",
                "everywhere-local-forces-index-equals-period",
            )
        )
        if isinstance(curve, PlaneCubic):
            claims.append(
                Claim(
                    "P = I and both divide 3 (line sections give degree-3 "
                    "cycles)",
                    "proven-at-desk-scale",
                    "genus-one-cubic-degree-bound",
                )
            )
            if index_report.rational_point is None:
                claims.append(
                    Claim(
                        "no rational point up to the search bound: "
                        "consistent with I = P = 3 (not asserted)",
                        "conditional",
                        "consistent-with-maximal-index",
                    )
                )
    elif not local_evidence.soluble:
        claims.append(
            Claim(
                f"not everywhere locally soluble (first obstruction at "
                f"{local_evidence.first_obstruction}); no degree-1 cycle "
                "exists even adelically",
                "proven-at-desk-scale",
                "local-obstruction",
            )
        )
    return PeriodIndexRelation(g, claims, period_value, index_upper)


def sha_corollary_report(curve, local_evidence=None, sha_zero_primes=()) -> dict:
    """Conditional zero-cycle conclusion: a genus g >= 2 curve with points
    everywhere locally has index dividing 2g - 2; if the user asserts
    Sha[p] = 0 for every prime p dividing 2g - 2, the index is 1 and a
    rational zero-cycle of degree 1 exists. The assertion is recorded, never
    checked."""
    g = curve.genus
    if g < 2:
        raise HypothesisUnmet("report needs genus >= 2", genus=g)
    if local_evidence is None:
        local_evidence = everywhere_locally_soluble(curve)
    if not local_evidence.soluble:
        raise HypothesisUnmet(
            "curve is not everywhere locally soluble",
            first_obstruction=local_evidence.first_obstruction,
        )
    bound = 2 * g - 2
    needed = prime_divisors(bound)
    flags = sorted(set(int(p) for p in sha_zero_primes))
    missing = [p for p in needed if p not in flags]
    conclusion = None
    if not missing:
        conclusion = (
            "a rational zero-cycle of degree 1 exists (I = 1), conditional "
            "on the asserted Sha-vanishing and on finiteness of Sha"
        )
    return {
        "genus": g,
        "canonical_bound": bound,
        "primes_required": needed,
        "sha_zero_asserted": flags,
        "missing_flags": missing,
        "conclusion": conclusion,
        "status": "conditional" if conclusion else "inconclusive",
        "assumptions": [
            "Sha[p] = 0 flags are user assertions, not verified",
            "finiteness of Sha is assumed throughout",
        ],
    }
