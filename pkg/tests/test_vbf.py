import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apnlab.field import field_for
from apnlab.vbf import (
    VBF,
    AffineMap,
    LinearMap,
    from_univariate,
    inverse_function,
    is_apn_batch,
    power_function,
    projection_killing,
)

from _oracles import (
    oracle_anf_coeffs,
    oracle_ddt,
    oracle_degree,
    oracle_is_apn,
    oracle_uniformity,
    oracle_walsh,
    oracle_walsh_field,
)


def _random_function(n, m, seed):
    rng = random.Random(seed)
    return VBF(n, m, tuple(rng.randrange(1 << m) for _ in range(1 << n)))


class TestDifferential:
    @pytest.mark.parametrize("seed", range(5))
    def test_ddt_matches_oracle(self, seed):
        F = _random_function(4, 4, seed)
        assert F.ddt().ddt.tolist() == oracle_ddt(F.table, 4, 4)
        assert F.uniformity() == oracle_uniformity(F.table, 4, 4)
        assert F.is_apn() == oracle_is_apn(F.table, 4, 4)

    def test_ddt_row_sums(self):
        F = _random_function(5, 3, 99)
        assert (F.ddt().ddt.sum(axis=1) == 1 << 5).all()

    def test_cube_is_apn_inverse_is_4_uniform(self):
        f = field_for(6)
        assert power_function(f, 3).is_apn()
        assert inverse_function(f).uniformity() == 4

    def test_odd_degree_inverse_is_apn(self):
        assert inverse_function(field_for(5)).is_apn()

    @pytest.mark.parametrize("n", [4, 5])
    def test_batch_apn_matches_scalar(self, n):
        rng = random.Random(7)
        tables = []
        fs = field_for(n)
        tables.append(power_function(fs, 3).table)
        for _ in range(40):
            tables.append(tuple(rng.randrange(1 << n) for _ in range(1 << n)))
        arr = np.array(tables, dtype=np.int64)
        mask = is_apn_batch(arr, n)
        for row, got in zip(tables, mask):
            assert bool(got) == VBF(n, n, row).is_apn()


class TestWalsh:
    @pytest.mark.parametrize("seed", range(3))
    def test_spectrum_matches_oracle(self, seed):
        F = _random_function(4, 3, seed)
        from collections import Counter

        expect = Counter(
            oracle_walsh(F.table, 4, 3, a, b)
            for a in range(1 << 4)
            for b in range(1, 1 << 3)
        )
        assert F.walsh_spectrum().counter() == expect

    def test_field_pairing_used_when_spec_present(self):
        f = field_for(4)
        F = power_function(f, 3)
        for a in range(4):
            for b in range(1, 4):
                assert F.walsh_at(a, b) == oracle_walsh_field(F.table, f, a, b)

    @pytest.mark.parametrize("seed", range(3))
    def test_parseval(self, seed):
        F = _random_function(5, 5, seed)
        for b in (1, 7, 19):
            total = sum(F.walsh_at(a, b) ** 2 for a in range(1 << 5))
            assert total == 1 << (2 * 5)


class TestAlgebraic:
    @pytest.mark.parametrize("seed", range(4))
    def test_anf_and_degree_match_oracle(self, seed):
        F = _random_function(4, 4, seed)
        assert list(F.anf()) == oracle_anf_coeffs(F.table, 4)
        assert F.algebraic_degree() == oracle_degree(F.table, 4)

    def test_power_function_degrees(self):
        f = field_for(6)
        assert power_function(f, 3).algebraic_degree() == 2
        assert power_function(f, 3).is_quadratic()
        assert inverse_function(f).algebraic_degree() == 5
        assert LinearMap.from_linearized(f, [1, 1, 0, 0, 0, 0]).n_in == 6

    def test_constant_and_affine_degrees(self):
        assert VBF(3, 3, (5,) * 8).algebraic_degree() == 0
        f = field_for(3)
        L = from_univariate(f, [(1, 2), (3, 1)])  # x^2 + 3x, linearized
        assert L.algebraic_degree() == 1


class TestFourSums:
    def test_dillon_property_at_small_degrees(self):
        # For an APN function on the whole field the four-sum value set
        # misses exactly 0.
        for n in (4, 5, 6):
            F = power_function(field_for(n), 3)
            assert F.dstar_set() == frozenset(range(1, 1 << n))

    def test_d_set_contains_zero_exactly_for_non_apn(self):
        f = field_for(4)
        cube = power_function(f, 3)
        assert 0 not in cube.dstar_set()
        inv = inverse_function(f)
        assert 0 in inv.dstar_set()  # delta = 4 at even degree

    @pytest.mark.parametrize("seed", range(2))
    def test_four_sum_oracle_agreement(self, seed):
        from _oracles import oracle_four_sum_values

        F = _random_function(4, 4, seed)
        assert set(F.dstar_set()) == oracle_four_sum_values(F.table, 4)


class TestLinearMaps:
    def test_from_linearized_agrees_with_univariate(self):
        f = field_for(5)
        L = LinearMap.from_linearized(f, [3, 1, 0, 7, 0])
        P = from_univariate(f, [(3, 1), (1, 2), (7, 8)])
        assert L.table() == P.table

    def test_linearity(self):
        f = field_for(6)
        L = LinearMap.from_linearized(f, [f.gpow(5), 0, 2, 0, 0, 1])
        for x in range(0, 64, 7):
            for y in range(0, 64, 5):
                assert L(x ^ y) == L(x) ^ L(y)

    def test_kernel_rank_injectivity(self):
        L = LinearMap(3, 3, (1, 2, 4))  # identity
        assert L.is_injective() and L.is_surjective()
        Z = LinearMap.zero(3, 3)
        assert set(Z.kernel()) == set(range(8))
        assert Z.image_rank() == 0

    def test_projection_killing(self):
        for k in (0b10010, 0b00001, 0b11111):
            P = projection_killing(5, k)
            assert set(P.kernel()) == {0, k}
            assert P.is_surjective()

    def test_affine_bijection(self):
        A = AffineMap(LinearMap(3, 3, (1, 2, 4)), 5)
        assert A.is_bijection()
        assert A(0) == 5


class TestProjection:
    def test_project_is_apn_matches_direct(self):
        from apnlab.vbf import project, project_is_apn

        f = field_for(5)
        F = power_function(f, 3)
        for k in (1, 9, 31):
            P = projection_killing(5, k)
            composed = project(F, P)
            assert project_is_apn(F, P) == composed.is_apn()


class TestValidation:
    def test_table_length_checked(self):
        with pytest.raises(ValueError):
            VBF(3, 3, (0,) * 7)

    def test_value_range_checked(self):
        with pytest.raises(ValueError):
            VBF(2, 2, (0, 1, 2, 4))


@given(st.integers(0, 63), st.integers(0, 63))
@settings(max_examples=50)
def test_bform_symmetric_and_bilinear_for_quadratics(x, t):
    f = field_for(6)
    F = power_function(f, 3)
    assert F.bform(x, t) == F.bform(t, x)
    assert F.bform(x, 0) == 0


def test_bform_of_cube_is_x2t_plus_xt2():
    f = field_for(4)
    F = power_function(f, 3)
    for x in range(16):
        for t in range(16):
            expect = f.mul(f.sqr(x), t) ^ f.mul(x, f.sqr(t))
            assert F.bform(x, t) == expect


def test_affine_function_profile():
    f = field_for(4)
    L = from_univariate(f, [(3, 2), (1, 1), (9, 0)])  # 3x^2 + x + 9
    assert L.algebraic_degree() <= 1
    assert L.is_quadratic()
    assert L.uniformity() == 16  # constant derivatives concentrate rows


class TestProjectionCriterion:
    def test_agrees_on_all_single_kernel_projections_of_45_apn(self):
        from apnlab.constructions import inverse_extension
        from apnlab.vbf import project, project_is_apn

        F = inverse_extension(field_for(4))  # (4,5)-APN
        assert F.is_apn()
        for k in range(1, 1 << 5):
            P = projection_killing(5, k)
            predicted = project_is_apn(F, P)
            projected = project(F, P)
            assert predicted == projected.is_apn()
            if not predicted:
                assert projected.uniformity() == 4

    def test_dstar_complement_marks_apn_preserving_projections(self):
        # for a (6,7)-APN lift, a kernel vector k survives projection
        # exactly when k is missing from the four-sum value set
        from apnlab.constructions import pair_lift
        from apnlab.vbf import project_is_apn

        spec = field_for(6)
        cube = power_function(spec, 3)
        g = VBF(6, 1, tuple(spec.trace_absolute(x) for x in range(64)))
        F = pair_lift(cube, g)
        assert F.is_apn()
        missing = set(range(1, 1 << 7)) - set(F.dstar_set())
        for k in range(1, 1 << 7):
            P = projection_killing(7, k)
            assert project_is_apn(F, P) == (k in missing)
