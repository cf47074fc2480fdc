import random
from fractions import Fraction

import pytest

from zcsieve import polys
from zcsieve.arith import PrimeField
from zcsieve.curves import EllipticCurve, HyperellipticCurve
from zcsieve.errors import (
    BadReduction,
    InvalidDivisor,
    NonIntegralAtP,
    ParseError,
    PointNotOnCurve,
    UnsupportedModel,
)
from zcsieve.jacobian import (
    ECPoint,
    MordellWeilBasis,
    MumfordDivisor,
    basis_from_json,
    basis_to_json,
    cantor_add,
    ec_add,
    ec_neg,
    element_from_json,
    element_key,
    element_to_json,
    jacobian_group,
    jacobian_order,
    quotient_map,
    reduce_point,
    scalar_mul,
)
from zcsieve.polys import QQ

E_X3P1 = EllipticCurve(0, 1)
E_X3M2 = EllipticCurve(0, -2)
G2_X5P1 = HyperellipticCurve((1, 0, 0, 0, 0, 1))
G2_X5MXP1 = HyperellipticCurve((1, -1, 0, 0, 0, 1))


def fp_point(F, x, y):
    return ECPoint(F(x), F(y))


class TestECAdd:
    def test_identity(self):
        F = PrimeField(5)
        P = fp_point(F, 0, 1)
        assert ec_add(P, ECPoint.identity(), E_X3P1, F) == P

    def test_inverse_pair(self):
        F = PrimeField(5)
        s = ec_add(fp_point(F, 0, 1), fp_point(F, 0, 4), E_X3P1, F)
        assert s.is_identity()

    def test_doubling(self):
        F = PrimeField(5)
        P = fp_point(F, 0, 1)
        D = ec_add(P, P, E_X3P1, F)
        assert D == fp_point(F, 0, 4)
        # cross-check: 3P is the identity in the enumerated group
        assert scalar_mul(3, P, E_X3P1, F).is_identity()

    def test_point_not_on_curve(self):
        F = PrimeField(5)
        with pytest.raises(PointNotOnCurve):
            ec_add(fp_point(F, 1, 1), fp_point(F, 0, 1), E_X3P1, F)

    def test_rational_arithmetic(self):
        P = ECPoint(Fraction(3), Fraction(5))
        D = ec_add(P, P, E_X3M2, QQ)
        assert D == ECPoint(Fraction(129, 100), Fraction(-383, 1000))


class TestCantor:
    def test_identity(self):
        F = PrimeField(3)
        D = MumfordDivisor(polys.from_ints(F, [0, 1]), polys.from_ints(F, [1]))
        ident = MumfordDivisor.identity(F)
        assert cantor_add(D, ident, G2_X5P1, F) == D

    def test_inverse_points(self):
        F = PrimeField(3)
        D1 = MumfordDivisor(polys.from_ints(F, [0, 1]), polys.from_ints(F, [1]))
        D2 = MumfordDivisor(polys.from_ints(F, [0, 1]), polys.from_ints(F, [2]))
        assert cantor_add(D1, D2, G2_X5P1, F).is_identity()

    def test_order_annihilates_random_elements(self):
        rng = random.Random(11)
        for p in [7, 11, 13]:
            grp = jacobian_group(G2_X5P1, p)
            n = jacobian_order(G2_X5P1, p)
            for _ in range(100):
                a = rng.choice(grp.elements)
                assert grp.mul(n, a) == grp.identity()

    def test_invalid_divisor(self):
        F = PrimeField(7)
        with pytest.raises(InvalidDivisor):
            cantor_add(
                MumfordDivisor(polys.from_ints(F, [1, 1]), polys.from_ints(F, [3])),
                MumfordDivisor.identity(F),
                G2_X5P1,
                F,
            )

    def test_degree_six_unsupported(self):
        curve = HyperellipticCurve((1, 1, 1, 0, 0, 0, 1))
        F = PrimeField(7)
        with pytest.raises(UnsupportedModel):
            cantor_add(
                MumfordDivisor.identity(F), MumfordDivisor.identity(F), curve, F
            )

    def test_rational_torsion_orders(self):
        # [(0,1) - inf] has order 5 and [(-1,0) - inf] has order 2 on x^5+1
        D = MumfordDivisor(
            polys.trim((Fraction(0), Fraction(1)), QQ), polys.trim((Fraction(1),), QQ)
        )
        T = MumfordDivisor((Fraction(1), Fraction(1)), ())
        assert scalar_mul(5, D, G2_X5P1, QQ).is_identity()
        assert not scalar_mul(1, D, G2_X5P1, QQ).is_identity()
        assert scalar_mul(2, T, G2_X5P1, QQ).is_identity()


class TestGroupAxioms:
    def test_fast_matches_generic(self):
        rng = random.Random(42)
        for curve, primes in [(G2_X5MXP1, [7, 13]), (E_X3M2, [7, 11])]:
            for p in primes:
                grp = jacobian_group(curve, p)
                for _ in range(60):
                    a, b = rng.choice(grp.elements), rng.choice(grp.elements)
                    fast = grp.add(a, b)
                    if isinstance(curve, EllipticCurve):
                        slow = ec_add(
                            grp.to_element(a), grp.to_element(b), curve, grp.field
                        )
                    else:
                        slow = cantor_add(
                            grp.to_element(a), grp.to_element(b), curve, grp.field
                        )
                    assert grp.from_element(slow) == fast

    def test_axioms_random_trials(self):
        rng = random.Random(7)
        for curve, p in [(E_X3P1, 7), (G2_X5P1, 11), (G2_X5MXP1, 13)]:
            grp = jacobian_group(curve, p)
            els = grp.elements
            for _ in range(200):
                a, b, c = (rng.choice(els) for _ in range(3))
                assert grp.add(grp.add(a, b), c) == grp.add(a, grp.add(b, c))
                assert grp.add(a, b) == grp.add(b, a)
                assert grp.add(a, grp.neg(a)) == grp.identity()
                assert grp.add(a, grp.identity()) == a


class TestJacobianOrder:
    def test_genus1(self):
        assert jacobian_order(E_X3P1, 5) == 6

    def test_genus2_weil_interval(self):
        n = jacobian_order(G2_X5P1, 3)
        assert 1 <= n <= 55

    def test_zeta_equals_enumeration_small(self):
        for curve in [G2_X5P1, G2_X5MXP1]:
            for p in [3, 5, 7, 11, 13]:
                from zcsieve.curves import reduction_type

                if not reduction_type(curve, p).good:
                    continue
                assert jacobian_order(curve, p) == len(jacobian_group(curve, p))

    def test_bad_reduction(self):
        with pytest.raises(BadReduction):
            jacobian_order(G2_X5P1, 5)


class TestReducePoint:
    def test_example(self):
        got = reduce_point(ECPoint(Fraction(3), Fraction(5)), E_X3M2, 5)
        F = PrimeField(5)
        assert got == fp_point(F, 3, 0)

    def test_identity(self):
        assert reduce_point(ECPoint.identity(), E_X3M2, 5).is_identity()

    def test_torsion_order_divides(self):
        # (2,3) has order 6 on y^2 = x^3 + 1
        P = ECPoint(Fraction(2), Fraction(3))
        for p in [5, 7, 11]:
            Q = reduce_point(P, E_X3P1, p)
            F = PrimeField(p)
            assert scalar_mul(6, Q, E_X3P1, F).is_identity()

    def test_homomorphism(self):
        rng = random.Random(3)
        # random small multiples of the generator (3,5) on x^3 - 2
        G = ECPoint(Fraction(3), Fraction(5))
        multiples = [scalar_mul(k, G, E_X3M2, QQ) for k in range(6)]
        for p in [7, 11, 13]:
            F = PrimeField(p)
            for _ in range(20):
                i, j = rng.randrange(6), rng.randrange(6)
                if i + j >= 6:
                    continue
                lhs = reduce_point(multiples[i + j], E_X3M2, p)
                rhs = ec_add(
                    reduce_point(multiples[i], E_X3M2, p),
                    reduce_point(multiples[j], E_X3M2, p),
                    E_X3M2,
                    F,
                )
                assert lhs == rhs

    def test_non_integral(self):
        P = ECPoint(Fraction(129, 100), Fraction(-383, 1000))  # 2*(3,5)
        with pytest.raises(NonIntegralAtP):
            reduce_point(P, E_X3M2, 5)

    def test_mumford_reduction(self):
        D = MumfordDivisor(
            polys.trim((Fraction(0), Fraction(1)), QQ), polys.trim((Fraction(1),), QQ)
        )
        got = reduce_point(D, G2_X5P1, 7)
        F = PrimeField(7)
        assert got == MumfordDivisor(polys.from_ints(F, [0, 1]), polys.from_ints(F, [1]))


class TestQuotient:
    def test_b_one_single_label(self):
        q = quotient_map(E_X3P1, 5, 1)
        assert q.n_labels == 1

    def test_b_coprime_single_label(self):
        q = quotient_map(E_X3P1, 5, 5)  # #E(F_5) = 6, gcd(5, 6) = 1
        assert q.n_labels == 1

    def test_order6_b2_two_labels(self):
        q = quotient_map(E_X3P1, 5, 2)
        assert q.n_labels == 2

    def test_labels_constant_on_cosets(self):
        rng = random.Random(9)
        for curve, p, B in [(E_X3P1, 7, 2), (G2_X5P1, 7, 3), (G2_X5MXP1, 11, 4)]:
            grp = jacobian_group(curve, p)
            q = quotient_map(curve, p, B)
            for _ in range(80):
                x = rng.choice(grp.elements)
                y = grp.mul(B, rng.choice(grp.elements))
                assert q.label_of_key(grp.key(x)) == q.label_of_key(
                    grp.key(grp.add(x, y))
                )

    def test_label_count_is_index(self):
        for p in [7, 11]:
            grp = jacobian_group(G2_X5P1, p)
            q = quotient_map(G2_X5P1, p, 12)
            assert q.n_labels * q.subgroup_size == len(grp)


class TestMordellWeilBasis:
    def test_valid_basis(self):
        basis = MordellWeilBasis(
            E_X3M2, (), (ECPoint(Fraction(3), Fraction(5)),)
        )
        assert basis.rank == 1
        assert basis.torsion_orders == ()

    def test_membership_rejected(self):
        with pytest.raises(PointNotOnCurve):
            MordellWeilBasis(E_X3M2, (), (ECPoint(Fraction(3), Fraction(6)),))

    def test_wrong_torsion_order_rejected(self):
        P = ECPoint(Fraction(2), Fraction(3))  # true order 6 on x^3+1
        with pytest.raises(ParseError):
            MordellWeilBasis(E_X3P1, ((P, 5),), ())

    def test_torsion_accepts_multiple_of_true_order(self):
        P = ECPoint(Fraction(2), Fraction(3))
        basis = MordellWeilBasis(E_X3P1, ((P, 6),), ())
        assert basis.torsion_orders == (6,)

    def test_json_roundtrip(self):
        doc = {
            "torsion": [{"point": [[2, 1], [3, 1]], "order": 6}],
            "free": [],
            "provenance": "hand-checked",
        }
        basis = basis_from_json(doc, E_X3P1)
        assert basis_to_json(basis) == doc

    def test_mumford_json_roundtrip(self):
        doc = {
            "torsion": [
                {"point": {"u": [[0, 1], [1, 1]], "v": [[1, 1]]}, "order": 5}
            ],
            "free": [],
            "provenance": "user-supplied",
        }
        basis = basis_from_json(doc, G2_X5P1)
        assert basis_to_json(basis) == doc

    def test_identity_encoding(self):
        assert element_to_json(ECPoint.identity()) == "identity"
        assert element_from_json("identity", E_X3P1).is_identity()

    def test_unknown_keys_rejected(self):
        with pytest.raises(ParseError):
            basis_from_json({"free": [], "rank": 1}, E_X3M2)


def test_element_key_total_order():
    grp = jacobian_group(G2_X5P1, 7)
    keys = [grp.key(a) for a in grp.elements]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    # public and internal keys agree
    for a in grp.elements[:20]:
        assert element_key(grp.to_element(a)) == grp.key(a)
