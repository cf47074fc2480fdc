import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zcsieve.arith import (
    REAL_PLACE,
    CosetLattice,
    ExtField,
    FieldElement,
    PrimeField,
    ext_mul,
    ext_pow,
    factorize,
    field_sqrts,
    find_irreducible,
    frobenius,
    hilbert_symbol,
    intersect_cosets,
    is_prime,
    is_square,
    legendre,
    sqrt_mod,
)
from zcsieve.errors import (
    CompositeModulus,
    FieldMismatch,
    NonResidue,
    ShapeMismatch,
)

SMALL_ODD_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 101, 199]


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(50):
        assert is_prime(n) == (n in primes)


def test_factorize():
    assert factorize(432) == {2: 4, 3: 3}
    assert factorize(-1728) == {2: 6, 3: 3}
    assert factorize(1) == {}


class TestLegendre:
    def test_one_is_square(self):
        assert legendre(1, 7) == 1

    def test_three_mod_seven(self):
        # oracle: squares mod 7
        squares = {x * x % 7 for x in range(1, 7)}
        assert squares == {1, 2, 4}
        assert legendre(3, 7) == -1

    def test_zero(self):
        assert legendre(0, 5) == 0

    def test_matches_enumeration(self):
        for p in [3, 5, 7, 11, 13]:
            squares = {x * x % p for x in range(1, p)}
            for a in range(p):
                expect = 0 if a == 0 else (1 if a in squares else -1)
                assert legendre(a, p) == expect

    def test_composite_modulus(self):
        with pytest.raises(CompositeModulus):
            legendre(3, 15)
        with pytest.raises(CompositeModulus):
            legendre(3, 2)

    @given(
        a=st.integers(min_value=-1000, max_value=1000),
        b=st.integers(min_value=-1000, max_value=1000),
        p=st.sampled_from(SMALL_ODD_PRIMES),
    )
    def test_multiplicative(self, a, b, p):
        assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


class TestSqrtMod:
    def test_perfect_square(self):
        assert sqrt_mod(4, 7) == 2

    def test_two_mod_seven(self):
        assert sqrt_mod(2, 7) == 3  # roots are {3, 4}, canonical is 3

    def test_nonresidue(self):
        with pytest.raises(NonResidue):
            sqrt_mod(3, 7)

    @given(
        a=st.integers(min_value=0, max_value=10**6),
        p=st.sampled_from(SMALL_ODD_PRIMES),
    )
    def test_roundtrip(self, a, p):
        if legendre(a, p) == -1:
            return
        r = sqrt_mod(a, p)
        assert r * r % p == a % p
        assert r <= p - r or r == 0


def _primitive_sum_of_two_neg_squares_mod16():
    # independent oracle for (-1, -1)_2: z^2 = -x^2 - y^2 with not all even
    for x, y, z in itertools.product(range(16), repeat=3):
        if x % 2 == 0 and y % 2 == 0 and z % 2 == 0:
            continue
        if (z * z + x * x + y * y) % 16 == 0:
            return True
    return False


class TestHilbert:
    def test_trivial_everywhere(self):
        for v in [REAL_PLACE, 2, 3, 5, 7]:
            assert hilbert_symbol(1, 1, v) == 1

    def test_minus_one_real(self):
        assert hilbert_symbol(-1, -1, REAL_PLACE) == -1

    def test_minus_one_at_two(self):
        assert not _primitive_sum_of_two_neg_squares_mod16()
        assert hilbert_symbol(-1, -1, 2) == -1

    def test_symmetry(self):
        rng = random.Random(7)
        for _ in range(200):
            a = rng.choice([x for x in range(-50, 51) if x])
            b = rng.choice([x for x in range(-50, 51) if x])
            for v in [REAL_PLACE, 2, 3, 5]:
                assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)

    def test_fractions_use_square_class(self):
        assert hilbert_symbol(Fraction(1, 2), 3, 2) == hilbert_symbol(2, 3, 2)

    @given(
        a=st.integers(min_value=-50, max_value=50).filter(lambda x: x != 0),
        b=st.integers(min_value=-50, max_value=50).filter(lambda x: x != 0),
    )
    @settings(max_examples=300)
    def test_product_formula(self, a, b):
        places = [REAL_PLACE] + sorted(
            {q for q in factorize(2 * a * b)}
        )
        prod = 1
        for v in places:
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1

    @given(
        a=st.integers(min_value=-30, max_value=30).filter(lambda x: x != 0),
        b=st.integers(min_value=-30, max_value=30).filter(lambda x: x != 0),
        c=st.integers(min_value=-30, max_value=30).filter(lambda x: x != 0),
        v=st.sampled_from([REAL_PLACE, 2, 3, 5, 7]),
    )
    @settings(max_examples=300)
    def test_bimultiplicative(self, a, b, c, v):
        assert hilbert_symbol(a * b, c, v) == hilbert_symbol(a, c, v) * hilbert_symbol(
            b, c, v
        )


class TestExtField:
    def test_f9_construction(self):
        F9 = ExtField(3, (1, 0, 1))  # t^2 + 1
        t = F9.gen()
        assert (t * t).coeffs == (2, 0)  # t^2 = -1

    def test_default_modulus_f9(self):
        assert find_irreducible(3, 2) == (1, 0, 1)

    def test_frobenius_of_t(self):
        F9 = ExtField.generate(3, 2)
        t = F9.gen()
        assert frobenius(t) == F9([0, 2])  # t^3 = -t
        assert frobenius(frobenius(t)) == t

    def test_order_of_t_in_f9(self):
        F9 = ExtField.generate(3, 2)
        t = F9.gen()
        powers = [t]
        while powers[-1] != F9.one():
            powers.append(powers[-1] * t)
        assert len(powers) == 4

    def test_reducible_modulus_rejected(self):
        with pytest.raises(ValueError):
            ExtField(3, (2, 0, 1))  # t^2 + 2 = (t-1)(t+1) mod 3
        with pytest.raises(ValueError):
            ExtField(5, (4, 0, 1))  # t^2 + 4 = (t+1)(t+4) mod 5

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            ExtField.generate(3, 5)

    def test_field_mismatch(self):
        F9 = ExtField.generate(3, 2)
        F25 = ExtField.generate(5, 2)
        with pytest.raises(FieldMismatch):
            F9.one() + F25.one()

    def test_ext_ops_aliases(self):
        F9 = ExtField.generate(3, 2)
        t = F9.gen()
        assert ext_mul(t, t) == t * t
        assert ext_pow(t, 4) == F9.one()

    @given(
        spec=st.sampled_from([(3, 2), (5, 2), (3, 3), (7, 2), (3, 4)]),
        data=st.data(),
    )
    @settings(max_examples=200)
    def test_field_axioms(self, spec, data):
        p, k = spec
        F = ExtField.generate(p, k)
        coeff = st.tuples(*[st.integers(min_value=0, max_value=p - 1)] * k)
        x = F(data.draw(coeff))
        y = F(data.draw(coeff))
        z = F(data.draw(coeff))
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        if not x.is_zero():
            assert x * x.inverse() == F.one()

    def test_every_nonzero_invertible_f27(self):
        F27 = ExtField.generate(3, 3)
        for x in F27.elements():
            if not x.is_zero():
                assert x * x.inverse() == F27.one()

    def test_frobenius_order_divides_k(self):
        for p, k in [(3, 2), (3, 3), (5, 2), (3, 4)]:
            F = ExtField.generate(p, k)
            for x in itertools.islice(F.elements(), 20):
                y = x
                for _ in range(k):
                    y = frobenius(y)
                assert y == x

    def test_sqrt_table(self):
        F25 = ExtField.generate(5, 2)
        for x in F25.elements():
            roots = field_sqrts(x * x)
            assert x in roots or -x in roots
        assert is_square(F25(2) * F25(2))


class TestPrimeField:
    def test_rejects_two_and_composites(self):
        with pytest.raises(CompositeModulus):
            PrimeField(2)
        with pytest.raises(CompositeModulus):
            PrimeField(9)

    def test_basic_ops(self):
        F = PrimeField(7)
        assert (F(3) + F(5)).coeffs == (1,)
        assert (F(3) * F(5)).coeffs == (1,)
        assert F(3).inverse() == F(5)
        assert frobenius(F(3)) == F(3)


class TestCosetLattice:
    def test_identity_element(self):
        full = CosetLattice.full(1, 4)
        w = CosetLattice(1, 4, (), ((1,), (2,)))
        assert intersect_cosets([full, w]) == w

    def test_disjoint_singletons(self):
        a = CosetLattice(1, 2, (), ((0,),))
        b = CosetLattice(1, 2, (), ((1,),))
        assert intersect_cosets([a, b]).is_empty()

    def test_three_way(self):
        a = CosetLattice(1, 4, (), ((0,), (2,)))
        b = CosetLattice(1, 4, (), ((2,), (3,)))
        assert intersect_cosets([a, b]).admissible == ((2,),)

    def test_shape_mismatch(self):
        a = CosetLattice(1, 2, (), ((0,),))
        b = CosetLattice(1, 3, (), ((0,),))
        with pytest.raises(ShapeMismatch):
            intersect_cosets([a, b])

    def test_out_of_range_rejected(self):
        with pytest.raises(ShapeMismatch):
            CosetLattice(1, 2, (), ((2,),))
        with pytest.raises(ShapeMismatch):
            CosetLattice(1, 2, (3,), ((0, 5),))

    def test_canonical_storage(self):
        a = CosetLattice(1, 4, (), ((3,), (1,), (3,)))
        assert a.admissible == ((1,), (3,))

    @given(data=st.data())
    @settings(max_examples=200)
    def test_matches_naive_intersection(self, data):
        rank = data.draw(st.integers(min_value=0, max_value=2))
        modulus = data.draw(st.integers(min_value=1, max_value=4))
        torsion = tuple(
            data.draw(
                st.lists(st.integers(min_value=1, max_value=3), max_size=2)
            )
        )
        width_ranges = [range(modulus)] * rank + [range(t) for t in torsion]
        universe = list(itertools.product(*width_ranges))
        n = data.draw(st.integers(min_value=1, max_value=4))
        sets = [
            set(data.draw(st.lists(st.sampled_from(universe or [()]), max_size=8)))
            for _ in range(n)
        ]
        if not universe:
            sets = [{()} if s else set() for s in sets]
        lats = [
            CosetLattice(rank, modulus, torsion, tuple(s)) for s in sets
        ]
        naive = set(sets[0])
        for s in sets[1:]:
            naive &= s
        assert set(intersect_cosets(lats).admissible) == naive

    def test_associative_commutative_idempotent(self):
        a = CosetLattice(1, 6, (), ((0,), (2,), (4,)))
        b = CosetLattice(1, 6, (), ((2,), (3,), (4,)))
        c = CosetLattice(1, 6, (), ((4,), (5,)))
        ab_c = intersect_cosets([intersect_cosets([a, b]), c])
        a_bc = intersect_cosets([a, intersect_cosets([b, c])])
        assert ab_c == a_bc
        assert intersect_cosets([a, b]) == intersect_cosets([b, a])
        assert intersect_cosets([a, a]) == a
