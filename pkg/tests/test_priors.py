"""Prior construction, the risk-maximizing transform, and serialization."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pollaudit.priors import (
    Prior,
    beta_shape,
    hardest_losing_tally,
    rla_transform,
    two_point,
    uniform_all,
    uniform_winning,
    winner_mass,
)


class TestTwoPoint:
    def test_even_n(self):
        f = two_point(100, 50, 75)
        assert f.mass[50] == f.mass[75] == 0.5
        assert winner_mass(f) == 0.5

    def test_odd_n(self):
        f = two_point(101, 50, 76)
        assert f.mass[50] == f.mass[76] == 0.5

    def test_rejects_winning_x0(self):
        with pytest.raises(ValueError):
            two_point(100, 60, 75)

    def test_rejects_losing_x1(self):
        with pytest.raises(ValueError):
            two_point(100, 40, 50)


class TestBetaShape:
    def test_flat_density_is_uniform_on_interior(self):
        f = beta_shape(4, 1, 1)
        assert f.mass[0] == f.mass[4] == 0.0
        np.testing.assert_allclose(f.mass[1:4], 1 / 3, atol=1e-12)

    def test_density_ratio_at_scale(self):
        f = beta_shape(100_000, 0.5, 0.5)
        # (1/2*1/2)^(-1/2) / (1/4*3/4)^(-1/2) = sqrt(0.1875/0.25)
        expected = math.sqrt(0.1875 / 0.25)
        assert f.mass[50_000] / f.mass[25_000] == pytest.approx(expected, rel=1e-9)

    def test_symmetric_tiny(self):
        f = beta_shape(3, 0.5, 0.5)
        assert f.mass[1] == pytest.approx(0.5, abs=1e-12)
        assert f.mass[2] == pytest.approx(0.5, abs=1e-12)

    def test_rejects_nonpositive_shape(self):
        with pytest.raises(ValueError):
            beta_shape(10, 0, 1)

    def test_beta_binomial_variant_normalizes(self):
        f = beta_shape(500, 0.5, 0.5, beta_binomial=True)
        assert f.mass.sum() == pytest.approx(1.0, abs=1e-12)
        assert f.mass[0] > 0  # endpoints carry mass in the urn reading


class TestUniformWinning:
    def test_odd(self):
        f = uniform_winning(5)
        np.testing.assert_allclose(f.mass[3:6], 1 / 3, atol=1e-12)
        assert f.mass[:3].sum() == 0.0

    def test_even(self):
        f = uniform_winning(4)
        np.testing.assert_allclose(f.mass[3:5], 0.5, atol=1e-12)

    def test_larger(self):
        f = uniform_winning(100)
        np.testing.assert_allclose(f.mass[51:], 0.02, atol=1e-12)
        assert winner_mass(f) == pytest.approx(1.0, abs=1e-12)


class TestWinnerMass:
    def test_examples(self):
        assert winner_mass(two_point(100, 50, 75)) == 0.5
        assert winner_mass(uniform_winning(5)) == pytest.approx(1.0)
        assert winner_mass(beta_shape(3, 0.5, 0.5)) == pytest.approx(0.5)


class TestRlaTransform:
    def test_uniform_winning_odd(self):
        out = rla_transform(uniform_winning(5))
        assert out.mass[2] == 0.5
        np.testing.assert_allclose(out.mass[3:6], 1 / 6, atol=1e-12)

    def test_two_point_relocates_losing_mass(self):
        out = rla_transform(two_point(101, 30, 80))
        assert out.mass[50] == 0.5
        assert out.mass[80] == 0.5
        assert out.mass[30] == 0.0

    def test_beta_at_scale_normalizes(self):
        out = rla_transform(beta_shape(100_000, 0.5, 0.5))
        assert out.mass[50_000] == 0.5
        assert out.mass[50_001:].sum() == pytest.approx(0.5, abs=1e-12)
        assert out.mass.sum() == pytest.approx(1.0, abs=1e-12)

    def test_idempotent(self):
        for f in (uniform_winning(7), two_point(20, 9, 15), beta_shape(50, 0.5, 0.5)):
            once = rla_transform(f)
            twice = rla_transform(once)
            np.testing.assert_allclose(once.mass, twice.mass, atol=1e-15)

    def test_winner_mass_is_exactly_half(self):
        for f in (uniform_winning(9), beta_shape(64, 2, 3), two_point(11, 5, 9)):
            assert winner_mass(rla_transform(f)) == pytest.approx(0.5, abs=1e-12)

    def test_odd_n_losing_support_is_margin_one(self):
        for N in (5, 21, 101):
            out = rla_transform(uniform_winning(N))
            losing = np.nonzero(out.mass[: N // 2 + 1])[0]
            assert list(losing) == [(N - 1) // 2]

    def test_rejects_zero_winning_mass(self):
        m = np.zeros(11)
        m[2] = 1.0
        with pytest.raises(ValueError):
            rla_transform(Prior(10, m))


class TestPriorInvariants:
    def test_mass_must_normalize(self):
        with pytest.raises(ValueError):
            Prior(4, np.array([0.5, 0, 0, 0, 0.4]))

    def test_mass_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            Prior(4, np.array([1.5, 0, 0, 0, -0.5]))

    def test_hardest_losing_tally(self):
        assert hardest_losing_tally(101) == 50
        assert hardest_losing_tally(100) == 50
        assert hardest_losing_tally(5) == 2

    def test_balanced_halves(self):
        g = uniform_all(10).balanced()
        assert g.mass[:6].sum() == pytest.approx(0.5, abs=1e-12)
        assert g.mass[6:].sum() == pytest.approx(0.5, abs=1e-12)

    @given(st.integers(min_value=3, max_value=60))
    def test_balanced_preserves_support_shape(self, N):
        f = beta_shape(N, 0.5, 0.5)
        g = f.balanced()
        np.testing.assert_array_equal(f.mass > 0, g.mass > 0)


class TestSerialization:
    def test_raw_round_trip(self):
        f = beta_shape(30, 0.5, 0.5)
        g = Prior.loads(Prior(30, f.mass).dumps())
        np.testing.assert_allclose(f.mass, g.mass, atol=1e-15)

    def test_named_round_trip(self):
        for f in (two_point(40, 18, 31), beta_shape(25, 0.5, 2.0),
                  uniform_winning(13), uniform_all(8), rla_transform(uniform_winning(13))):
            g = Prior.loads(f.dumps())
            assert g.N == f.N
            np.testing.assert_allclose(f.mass, g.mass, atol=1e-12)

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            Prior.from_json({"N": 5, "family": "cauchy", "params": {}})
