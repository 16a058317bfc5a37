import pytest
from hypothesis import given, settings, strategies as st

from qcong.eta import f_ell, jacobi_cube_sum, partition_series
from qcong.series import (
    EXACT,
    Mod,
    SeriesError,
    add,
    dilate,
    extract_progression,
    invert,
    make_series,
    mul,
    one,
    power,
    reduce_mod,
    shift,
    sub,
    zero,
)

from oracles import count_partitions, euler_product

FIXED = settings(derandomize=True, max_examples=200, deadline=None)

RINGS = [EXACT, Mod(2), Mod(7), Mod(8), Mod(11), Mod(64)]


def series_in(ring, n):
    lo, hi = (-50, 50) if ring.is_exact else (0, ring.modulus - 1)
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n).map(lambda c: make_series(ring, c))


@st.composite
def same_ring_triple(draw):
    ring = draw(st.sampled_from(RINGS))
    n = draw(st.integers(1, 24))
    return ring, draw(series_in(ring, n)), draw(series_in(ring, n)), draw(series_in(ring, n))


@st.composite
def unit_series(draw):
    ring = draw(st.sampled_from(RINGS))
    n = draw(st.integers(1, 30))
    s = draw(series_in(ring, n))
    c = s.coeffs
    if ring.is_exact:
        c[0] = draw(st.sampled_from([1, -1]))
    else:
        units = [u for u in range(1, ring.modulus) if ring.is_unit(u)]
        c[0] = draw(st.sampled_from(units))
    return make_series(ring, c)


class TestConstruction:
    def test_constant_one(self):
        s = make_series(EXACT, [1])
        assert s.precision == 1 and s.coeffs == [1]

    def test_canonical_residues(self):
        assert make_series(Mod(7), [8, -1]).coeffs == [1, 6]

    def test_f1_cubed_mod2(self):
        # 1 - 3q + 5q^3 - 7q^6 + 9q^10 read mod 2
        s = reduce_mod(power(f_ell(1, EXACT, 11), 3), 2)
        assert s.coeffs == [1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1]

    def test_empty_rejected(self):
        with pytest.raises(SeriesError, match="zero precision"):
            make_series(EXACT, [])

    def test_modulus_below_two_rejected(self):
        with pytest.raises(SeriesError):
            Mod(1)


class TestAddSub:
    def test_additive_identity(self):
        a = f_ell(1, EXACT, 20)
        assert add(a, zero(EXACT, 20)) == a

    def test_inverse(self):
        a = f_ell(1, Mod(5), 30)
        assert sub(a, a).is_zero()
        assert add(a, -a) == zero(Mod(5), 30)

    def test_one_minus_q_plus_q(self):
        a = make_series(EXACT, [1, -1, 0])
        b = make_series(EXACT, [0, 1, 0])
        assert add(a, b) == one(EXACT, 3)

    def test_precision_is_min(self):
        assert add(one(EXACT, 5), one(EXACT, 3)).precision == 3

    def test_ring_mismatch(self):
        with pytest.raises(SeriesError, match="ring mismatch"):
            add(one(EXACT, 3), one(Mod(2), 3))


class TestMul:
    def test_identity(self):
        a = f_ell(3, Mod(7), 40)
        assert mul(a, one(Mod(7), 40)) == a

    def test_f1_times_inverse(self):
        for ring in (EXACT, Mod(2), Mod(11)):
            f1 = f_ell(1, ring, 200)
            assert mul(f1, invert(f1)) == one(ring, 200)

    def test_f1_squared_against_product_oracle(self):
        expected = euler_product(11, power=2)
        assert expected == [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1]
        assert power(f_ell(1, EXACT, 11), 2).coeffs == expected

    def test_word_and_bigint_paths_agree(self):
        # modulus above the word limit takes the Python-int path
        big = Mod(2**61 - 1)
        a = f_ell(1, EXACT, 60)
        b = partition_series(EXACT, 60)
        prod = mul(power(a, 5), power(b, 3))
        assert mul(power(f_ell(1, big, 60), 5), power(partition_series(big, 60), 3)) == reduce_mod(prod, 2**61 - 1)
        assert mul(power(f_ell(1, Mod(97), 60), 5), power(partition_series(Mod(97), 60), 3)) == reduce_mod(prod, 97)


class TestInvert:
    def test_invert_one(self):
        assert invert(one(EXACT, 5)) == one(EXACT, 5)

    def test_partition_numbers(self):
        expected = [count_partitions(n) for n in range(11)]
        assert expected == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
        assert invert(f_ell(1, EXACT, 11)).coeffs == expected

    def test_inverse_of_f2_is_even(self):
        inv = invert(f_ell(2, Mod(2), 100))
        assert all(c == 0 for c in inv.coeffs[1::2])

    def test_not_invertible(self):
        with pytest.raises(SeriesError, match="not invertible"):
            invert(make_series(EXACT, [2, 1]))
        with pytest.raises(SeriesError, match="not invertible"):
            invert(make_series(Mod(8), [2, 1]))

    def test_composite_modulus_unit(self):
        a = make_series(Mod(8), [3, 5, 1, 7])
        assert mul(a, invert(a)) == one(Mod(8), 4)


class TestPower:
    def test_zero_exponent(self):
        assert power(f_ell(1, EXACT, 10), 0) == one(EXACT, 10)

    def test_cube_matches_jacobi(self):
        assert power(f_ell(1, EXACT, 11), 3).coeffs == [1, -3, 0, 5, 0, 0, -7, 0, 0, 0, 9]

    def test_square_mod2_is_f2(self):
        assert power(f_ell(1, Mod(2), 200), 2) == f_ell(2, Mod(2), 200)

    def test_negative_exponent(self):
        a = f_ell(1, EXACT, 40)
        assert power(a, -2) == power(invert(a), 2)


class TestDilateShift:
    def test_dilate_one(self):
        a = f_ell(1, EXACT, 10)
        assert dilate(a, 1) == a

    def test_dilate_binomial(self):
        assert dilate(make_series(EXACT, [1, 1]), 3).coeffs == [1, 0, 0, 1]

    def test_dilate_partitions(self):
        p = partition_series(EXACT, 30)
        d = dilate(p, 2)
        assert d.precision == 59
        assert d.coeffs[::2] == p.coeffs
        assert not any(d.coeffs[1::2])

    def test_dilate_rejects_zero(self):
        with pytest.raises(SeriesError):
            dilate(one(EXACT, 3), 0)

    def test_shift(self):
        a = f_ell(1, EXACT, 10)
        assert shift(a, 0) == a
        assert shift(one(EXACT, 1), 5).coeffs == [0, 0, 0, 0, 0, 1]
        assert shift(a, 3).precision == 13

    def test_shift_of_dilated_cube(self):
        f9cubed = power(f_ell(9, EXACT, 60), 3)
        s = shift(f9cubed, 1)
        assert s[1] == 1 and s[10] == -3 and s[28] == 5
        assert s.coeffs[0] == 0


class TestExtract:
    def test_identity_extraction(self):
        a = f_ell(1, EXACT, 30)
        assert extract_progression(a, 1, 0) == a

    def test_precision_formula(self):
        a = one(EXACT, 100)
        for A in range(1, 12):
            for B in range(0, 12):
                assert extract_progression(a, A, B).precision == (100 - 1 - B) // A + 1

    def test_ramanujan_mod11(self):
        p = partition_series(Mod(11), 2000)
        assert extract_progression(p, 11, 6).is_zero()

    def test_a5_mod2_3n_plus_2(self):
        from qcong.eta import EtaQuotientSpec, eta_quotient

        a5 = eta_quotient(EtaQuotientSpec.of((2, 4), (1, -5)), Mod(2), 1000)
        assert extract_progression(a5, 3, 2).is_zero()

    def test_empty_extraction(self):
        with pytest.raises(SeriesError, match="empty extraction"):
            extract_progression(one(EXACT, 5), 2, 5)


class TestReduceMod:
    def test_residues(self):
        assert reduce_mod(make_series(EXACT, [1, -3, 0, 5]), 7).coeffs == [1, 4, 0, 5]

    def test_cube_against_sum_side(self):
        assert reduce_mod(power(f_ell(1, EXACT, 300), 3), 2) == jacobi_cube_sum(Mod(2), 300)

    def test_a3_coefficient_three(self):
        from qcong.eta import EtaQuotientSpec, eta_quotient

        a3 = eta_quotient(EtaQuotientSpec.of((2, 2), (1, -3)), EXACT, 10)
        assert a3[3] == 16
        assert reduce_mod(a3, 2)[3] == 0

    def test_bad_modulus(self):
        with pytest.raises(SeriesError):
            reduce_mod(one(EXACT, 3), 1)


# -- properties --------------------------------------------------------------------

@FIXED
@given(same_ring_triple())
def test_ring_axioms(t):
    _, a, b, c = t
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(a, b) == mul(b, a)
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


@FIXED
@given(unit_series())
def test_invert_two_sided(a):
    inv = invert(a)
    assert mul(a, inv) == one(a.ring, a.precision)
    assert mul(inv, a) == one(a.ring, a.precision)


@FIXED
@given(unit_series(), st.integers(-4, 4), st.integers(-4, 4))
def test_power_adds_exponents(a, e1, e2):
    assert power(a, e1 + e2) == mul(power(a, e1), power(a, e2))


@FIXED
@given(st.sampled_from(RINGS).flatmap(lambda r: series_in(r, 25)), st.integers(1, 12))
def test_extract_undoes_dilate(a, t):
    assert extract_progression(dilate(a, t), t, 0) == a


@FIXED
@given(series_in(EXACT, 20), series_in(EXACT, 20), st.sampled_from([2, 3, 7, 8, 11, 64]))
def test_reduce_commutes(a, b, m):
    assert reduce_mod(add(a, b), m) == add(reduce_mod(a, m), reduce_mod(b, m))
    assert reduce_mod(mul(a, b), m) == mul(reduce_mod(a, m), reduce_mod(b, m))


def test_series_is_immutable():
    a = f_ell(1, Mod(7), 20)
    with pytest.raises(ValueError):
        a._c[0] = 3
