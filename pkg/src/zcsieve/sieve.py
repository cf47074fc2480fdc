"""The Mordell-Weil sieve: intersect the image of J(Q)/B J(Q) (as asserted by
a supplied basis) with the reductions of curve points inside J(F_p)/B J(F_p)
across many good primes.

An "empty" verdict certifies, conditional on the supplied basis generating
the Mordell-Weil group and on finiteness of the Tate-Shafarevich group, that
no rational point (points mode) or degree-1 zero-cycle class at this finite
level (zero_cycles mode) survives; "survivors" lists the remaining cosets and
is inconclusive. Every certificate carries the full input echo and can be
re-verified from scratch.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .arith import CosetLattice, intersect_cosets, is_prime
from .canonical import canonical_dumps, first_difference, input_hash
from .curves import (
    EllipticCurve,
    HyperellipticCurve,
    curve_from_dict,
    curve_to_dict,
    reduction_type,
)
from .errors import (
    EmbeddingUnavailable,
    NoAdmissiblePrimes,
    NonIntegralAtP,
    ParseError,
    PointNotOnCurve,
    UnsupportedModel,
)
from .jacobian import (
    ECPoint,
    GENUS1_PRIME_CAP,
    GENUS2_PRIME_CAP,
    MordellWeilBasis,
    MumfordDivisor,
    basis_from_json,
    basis_to_json,
    jacobian_group,
    jacobian_order,
    quotient_map,
    reduce_point,
    _on_curve,
)
from .polys import QQ

ASSUMPTIONS = {
    "basis": "supplied generators are asserted to generate the Mordell-Weil "
             "group; independence and completeness are not verified",
    "sha_finiteness": "finiteness of the Tate-Shafarevich group of the "
                      "Jacobian is assumed, not verified",
    "archimedean": "real connected-component data is not used by the sieve; "
                   "real solubility is reported separately",
    "neron_severi": "surjectivity of rational divisor classes onto the "
                    "Neron-Severi invariants holds automatically for curves",
}

DEFAULT_MODULUS = 12
DEFAULT_PRIME_COUNT = 8


@dataclass(frozen=True)
class EmbeddingBase:
    """Rational degree-1 base class for the Albanese embedding: a rational
    point on the curve (the identity / point at infinity included), plus an
    optional shift expressed in basis coordinates."""

    kind: str  # "identity" | "infinity" | "affine"
    x: Fraction = None
    y: Fraction = None
    shift: tuple = ()

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def infinity(cls):
        return cls("infinity")

    @classmethod
    def affine(cls, x, y, shift=()):
        return cls("affine", Fraction(x), Fraction(y), tuple(shift))


@dataclass(frozen=True)
class SieveConfig:
    curve: object
    basis: MordellWeilBasis
    base: EmbeddingBase
    modulus: int = DEFAULT_MODULUS
    primes: tuple = None  # explicit list; None selects prime_count admissible
    prime_count: int = DEFAULT_PRIME_COUNT
    mode: str = "points"

    def __post_init__(self):
        if self.mode not in ("points", "zero_cycles"):
            raise ParseError("mode must be points or zero_cycles", mode=self.mode)
        if self.modulus < 1:
            raise ParseError("modulus must be >= 1", modulus=self.modulus)

    def lattice_shape(self):
        r = self.basis.rank
        tors = tuple(math.gcd(n, self.modulus) for n in self.basis.torsion_orders)
        return r, self.modulus, tors


# ---------------------------------------------------------------------------
# Embedding and admissibility


def _check_base(curve, base, basis):
    if isinstance(curve, EllipticCurve):
        if base.kind == "infinity":
            raise ParseError("elliptic base point at infinity is 'identity'")
        if base.kind == "affine":
            P = ECPoint(base.x, base.y)
            if not _on_curve(P, curve, QQ):
                raise PointNotOnCurve("base point fails the curve equation")
    elif isinstance(curve, HyperellipticCurve):
        if curve.degree != 5:
            raise EmbeddingUnavailable(
                "no rational degree-1 class available for even-degree models",
                degree=curve.degree,
            )
        if base.kind == "identity":
            raise ParseError("genus-2 base at infinity is 'infinity'")
        if base.kind == "affine":
            fx = Fraction(curve.rhs(Fraction(base.x)))
            if Fraction(base.y) ** 2 != fx:
                raise PointNotOnCurve("base point fails the curve equation")
    else:
        raise EmbeddingUnavailable(
            "points-mode sieving needs an elliptic or degree-5 genus-2 model "
            "with a rational point; torsors without a rational degree-1 "
            "class cannot be embedded",
            model=type(curve).__name__,
        )
    width = basis.rank + len(basis.torsion)
    if base.shift and len(base.shift) != width:
        raise ParseError(
            "base shift width must match the basis",
            got=len(base.shift),
            expected=width,
        )


def _base_rational_elements(curve, base):
    """The base divisor as (curve point data) used per prime."""
    if isinstance(curve, EllipticCurve):
        if base.kind == "identity":
            return ECPoint.identity()
        return ECPoint(base.x, base.y)
    if base.kind == "infinity":
        return MumfordDivisor.identity(QQ)
    u = ((-Fraction(base.x)), Fraction(1))
    v = (Fraction(base.y),) if base.y != 0 else ()
    return MumfordDivisor(u, v)


def prime_cap(curve) -> int:
    return GENUS1_PRIME_CAP if isinstance(curve, EllipticCurve) else GENUS2_PRIME_CAP


def is_admissible_prime(curve, p, config) -> bool:
    """Good reduction, p >= 5, p coprime to B and the declared torsion
    orders, within the enumeration cap, and all basis/base data p-integral."""
    if p < 5 or not is_prime(p):
        return False
    if p > prime_cap(curve):
        return False
    if not reduction_type(curve, p).good:
        return False
    if config.modulus % p == 0:
        return False
    for n in config.basis.torsion_orders:
        if n % p == 0:
            return False
    try:
        for gen in config.basis.generators():
            reduce_point(gen, curve, p)
        reduce_point(_base_rational_elements(curve, config.base), curve, p)
    except NonIntegralAtP:
        return False
    return True


def select_primes(config) -> tuple:
    curve = config.curve
    if config.primes is not None:
        primes = tuple(int(p) for p in config.primes)
        for p in primes:
            if not is_admissible_prime(curve, p, config):
                raise NoAdmissiblePrimes(
                    "explicitly requested prime fails the admissibility filter",
                    p=p,
                )
        if not primes:
            raise NoAdmissiblePrimes("empty prime list")
        return primes
    out = []
    for p in range(5, prime_cap(curve) + 1):
        if is_admissible_prime(curve, p, config):
            out.append(p)
            if len(out) == config.prime_count:
                break
    if not out:
        raise NoAdmissiblePrimes(
            "no admissible primes under the enumeration cap",
            cap=prime_cap(curve),
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# Per-prime data


def image_set(curve, p, base, mode="points"):
    """Internal-representation image of the curve inside J(F_p): the classes
    [P - base] for P in C(F_p). In zero_cycles mode every class of J(F_p) is
    a degree-1 cycle class at a good prime, so the image is the full group."""
    group = jacobian_group(curve, p)
    if mode == "zero_cycles":
        return set(group.elements), group
    base_red = reduce_point(_base_rational_elements(curve, base), curve, p)
    base_int = group.from_element(base_red)
    neg_base = group.neg(base_int)
    out = set()
    if isinstance(curve, EllipticCurve):
        for elem in group.elements:
            out.add(group.add(elem, neg_base))
        return out, group
    from .curves import enumerate_points

    for pt in enumerate_points(curve, group.field):
        if pt == ("inf",):
            cls = group.identity()
        else:
            x, y = pt[0].coeffs[0], pt[1].coeffs[0]
            cls = (((-x) % p, 1), (y,) if y else ())
        out.add(group.add(cls, neg_base))
    return out, group


def _generator_tables(group, config, p):
    """Reductions of the basis generators and the per-coordinate multiple
    tables used to walk all candidate tuples."""
    curve = config.curve
    r, B, tors = config.lattice_shape()
    gens = []
    for gen in config.basis.generators():
        gens.append(group.from_element(reduce_point(gen, curve, p)))
    bounds = [B] * r + list(tors)
    tables = []
    for g, bound in zip(gens, bounds):
        row = [group.identity()]
        for _ in range(1, bound):
            row.append(group.add(row[-1], g))
        tables.append(row)
    return gens, bounds, tables


def _shift_element(group, config, gens):
    shift = config.base.shift
    if not shift:
        return group.identity()
    acc = group.identity()
    for e, g in zip(shift, gens):
        acc = group.add(acc, group.mul(e, g))
    return acc


def admissible_cosets(curve, p, B, basis, base, mode="points") -> CosetLattice:
    """W_p: the cosets of the asserted J(Q)/B whose reductions land in the
    image of the curve plus B J(F_p)."""
    config = SieveConfig(curve, basis, base, modulus=B, mode=mode)
    img, group = image_set(curve, p, base, mode)
    qmap = quotient_map(curve, p, B)
    image_labels = {qmap.label_of_key(group.key(e)) for e in img}
    gens, bounds, tables = _generator_tables(group, config, p)
    shift_elem = _shift_element(group, config, gens)
    r, _, tors = config.lattice_shape()
    admissible = []
    for tup in itertools.product(*(range(b) for b in bounds)):
        elem = shift_elem
        for k, table in zip(tup, tables):
            if k:
                elem = group.add(elem, table[k])
        if qmap.label_of_key(group.key(elem)) in image_labels:
            admissible.append(tup)
    return CosetLattice(r, B, tors, tuple(admissible))


# ---------------------------------------------------------------------------
# The sieve proper


def sieve_run(config: SieveConfig, threads: int = 1) -> dict:
    """Run the sieve and emit a self-contained certificate dictionary."""
    if config.mode == "points":
        _check_base(config.curve, config.base, config.basis)
    elif not isinstance(config.curve, (EllipticCurve, HyperellipticCurve)):
        raise EmbeddingUnavailable(
            "zero-cycle sieving needs jacobian arithmetic",
            model=type(config.curve).__name__,
        )
    primes = select_primes(config)
    executed = SieveConfig(
        config.curve,
        config.basis,
        config.base,
        config.modulus,
        primes,
        len(primes),
        config.mode,
    )

    def work(p):
        return admissible_cosets(
            config.curve, p, config.modulus, config.basis, config.base, config.mode
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            lattices = dict(zip(primes, pool.map(work, primes)))
    else:
        lattices = {p: work(p) for p in primes}
    return _assemble_certificate(executed, lattices)


def _assemble_certificate(config, lattices) -> dict:
    r, B, tors = config.lattice_shape()
    per_prime = []
    running = []
    acc = CosetLattice.full(r, B, tors)
    for p in config.primes:
        lat = lattices[p]
        per_prime.append(
            {
                "p": p,
                "jacobian_order": jacobian_order(config.curve, p),
                "admissible": [list(t) for t in lat.admissible],
            }
        )
        acc = intersect_cosets([acc, lat])
        running.append([list(t) for t in acc.admissible])
    verdict = "empty" if acc.is_empty() else "survivors"
    cfg_json = config_to_json(config)
    return {
        "format": "zcsieve-certificate/1",
        "tool": {"name": "zcsieve", "version": __version__},
        "assumptions": dict(ASSUMPTIONS),
        "config": cfg_json,
        "input_hash": input_hash(cfg_json),
        "lattice": {"rank": r, "modulus": B, "torsion": list(tors)},
        "per_prime": per_prime,
        "running_intersection": running,
        "verdict": verdict,
        "survivors": [list(t) for t in acc.admissible],
    }


def verify_certificate(cert) -> bool:
    ok, _ = verify_certificate_detailed(cert)
    return ok


def verify_certificate_detailed(cert):
    """Recompute every W_p from scratch, replay the intersections, and compare
    the full canonical document; returns (ok, first mismatch location)."""
    try:
        cfg_json = cert["config"]
        config = config_from_json(cfg_json)
        if input_hash(cfg_json) != cert.get("input_hash"):
            return False, "$.input_hash"
        lattices = {
            p: admissible_cosets(
                config.curve, p, config.modulus, config.basis, config.base,
                config.mode,
            )
            for p in config.primes
        }
        recomputed = _assemble_certificate(config, lattices)
    except Exception as exc:  # malformed certificates are simply invalid
        return False, f"$ (recompute failed: {type(exc).__name__})"
    if canonical_dumps(recomputed) == canonical_dumps(cert):
        return True, None
    return False, first_difference(cert, recomputed)


# ---------------------------------------------------------------------------
# Config JSON


def base_from_json(doc):
    if doc == "identity":
        return EmbeddingBase.identity()
    if doc == "infinity":
        return EmbeddingBase.infinity()
    if isinstance(doc, dict):
        unknown = set(doc) - {"point", "shift"}
        if unknown:
            raise ParseError("unknown keys in base", keys=sorted(unknown))
        pt = doc.get("point")
        if pt in ("identity", "infinity"):
            base = (
                EmbeddingBase.identity() if pt == "identity"
                else EmbeddingBase.infinity()
            )
            return EmbeddingBase(base.kind, shift=tuple(doc.get("shift", ())))
        if not (isinstance(pt, list) and len(pt) == 2):
            raise ParseError("base point must be [[xn,xd],[yn,yd]]", got=pt)
        x = Fraction(pt[0][0], pt[0][1])
        y = Fraction(pt[1][0], pt[1][1])
        return EmbeddingBase.affine(x, y, tuple(doc.get("shift", ())))
    raise ParseError("unrecognized base document", got=doc)


def base_to_json(base: EmbeddingBase):
    if base.kind in ("identity", "infinity") and not base.shift:
        return base.kind
    doc = {}
    if base.kind == "affine":
        doc["point"] = [
            [base.x.numerator, base.x.denominator],
            [base.y.numerator, base.y.denominator],
        ]
    else:
        doc["point"] = base.kind
    if base.shift:
        doc["shift"] = list(base.shift)
    return doc


def config_from_json(doc) -> SieveConfig:
    if not isinstance(doc, dict):
        raise ParseError("sieve config must be an object")
    known = {"curve", "basis", "base", "modulus", "primes", "prime_count", "mode"}
    unknown = set(doc) - known
    if unknown:
        raise ParseError("unknown keys in sieve config", keys=sorted(unknown))
    if "curve" not in doc or "basis" not in doc:
        raise ParseError("sieve config needs curve and basis")
    curve = curve_from_dict(doc["curve"])
    basis = basis_from_json(doc["basis"], curve)
    base = base_from_json(doc.get("base", _default_base_doc(curve)))
    primes = doc.get("primes")
    if primes is not None:
        if not isinstance(primes, list) or not all(
            isinstance(p, int) for p in primes
        ):
            raise ParseError("primes must be a list of integers")
        primes = tuple(primes)
    return SieveConfig(
        curve,
        basis,
        base,
        int(doc.get("modulus", DEFAULT_MODULUS)),
        primes,
        int(doc.get("prime_count", DEFAULT_PRIME_COUNT)),
        doc.get("mode", "points"),
    )


def _default_base_doc(curve):
    return "identity" if isinstance(curve, EllipticCurve) else "infinity"


def config_to_json(config: SieveConfig) -> dict:
    doc = {
        "curve": curve_to_dict(config.curve),
        "basis": basis_to_json(config.basis),
        "base": base_to_json(config.base),
        "modulus": config.modulus,
        "mode": config.mode,
    }
    if config.primes is not None:
        doc["primes"] = [int(p) for p in config.primes]
    else:
        doc["prime_count"] = config.prime_count
    return doc
