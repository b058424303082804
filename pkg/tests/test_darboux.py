import math

import numpy as np
import pytest
from scipy.integrate import quad

from darbouxkdv.darboux import (
    NodalWronskianError,
    SystemSpec,
    base_bound_state,
    base_potential,
    bound_states,
    deformed_potential,
    seed_exponents,
    seed_function,
)

RNG = np.random.default_rng(7)


class TestSystemSpec:
    def test_valid(self):
        spec = SystemSpec(1.5, (2, 6))
        assert spec.h == 1.5
        assert spec.seeds == (2, 6)
        assert spec.n_steps == 2
        assert SystemSpec(1.0).n_base_states == 1
        assert SystemSpec(1.5).n_base_states == 2
        assert SystemSpec(2.0).n_base_states == 2

    @pytest.mark.parametrize("h", [0.0, -1.0, math.inf, math.nan])
    def test_bad_h(self, h):
        with pytest.raises(ValueError):
            SystemSpec(h)

    @pytest.mark.parametrize("seeds", [(3,), (0,), (-2,), (2, 2), (4, 2), (2.5,)])
    def test_bad_seeds(self, seeds):
        with pytest.raises(ValueError):
            SystemSpec(1.0, seeds)


class TestBasePotential:
    def test_depths(self):
        assert base_potential(1.0, 0.0) == -2.0
        assert base_potential(2.0, 0.0) == -6.0

    def test_decay(self):
        assert abs(base_potential(1.0, 20.0)) < 1e-16

    def test_vectorized(self):
        xs = np.linspace(-3, 3, 7)
        np.testing.assert_allclose(base_potential(1.0, xs), -2.0 / np.cosh(xs) ** 2, rtol=1e-14)

    def test_bad_h(self):
        with pytest.raises(ValueError):
            base_potential(0.0, 1.0)


class TestBaseBoundState:
    def test_ground_state(self):
        assert base_bound_state(1.0, 0, 0.0) == 1.0
        xs = np.linspace(-8, 8, 401)
        vals = base_bound_state(1.0, 0, xs)
        assert np.all(vals > 0)  # nodeless

    def test_odd_state_vanishes_at_origin(self):
        assert base_bound_state(2.0, 1, 0.0) == 0.0

    def test_index_range(self):
        with pytest.raises(ValueError):
            base_bound_state(1.0, 1, 0.0)
        with pytest.raises(ValueError):
            base_bound_state(2.5, -1, 0.0)
        base_bound_state(2.5, 2, 0.0)  # ceil(2.5)-1 = 2 is allowed


class TestSeedFunction:
    def test_value_at_origin(self):
        value, dlog, _ = seed_function(1.0, 2, 0.0)
        assert value == 0.5
        assert dlog == 0.0

    @pytest.mark.parametrize("h", [1.0, 2.0, 1.5])
    def test_v2_closed_form(self, h):
        # phi_2 = (h+1)/4 cosh(x)^(h+3) (1 + (2h+3) tanh(x)^2)
        xs = np.linspace(-4, 4, 81)
        value, _, _ = seed_function(h, 2, xs)
        ref = (h + 1) / 4 * np.cosh(xs) ** (h + 3) * (1 + (2 * h + 3) * np.tanh(xs) ** 2)
        np.testing.assert_allclose(value, ref, rtol=1e-13)

    def test_asymptotic_log_derivative(self):
        _, dlog, _ = seed_function(1.0, 2, 8.0)
        assert dlog == pytest.approx(4.0, abs=1e-5)

    def test_second_log_derivative_vs_finite_differences(self):
        h, v, eps = 1.5, 4, 1e-5
        for x in (-1.3, 0.2, 2.7):
            _, _, d2 = seed_function(h, v, x)
            _, dp, _ = seed_function(h, v, x + eps)
            _, dm, _ = seed_function(h, v, x - eps)
            assert d2 == pytest.approx((dp - dm) / (2 * eps), rel=1e-7, abs=1e-7)

    def test_nodeless(self):
        xs = np.linspace(-10, 10, 2001)
        for h, v in [(1.0, 2), (2.0, 4), (0.7, 6)]:
            value, _, _ = seed_function(h, v, xs)
            assert np.all(value > 0)

    def test_odd_degree_rejected(self):
        with pytest.raises(ValueError):
            seed_function(1.0, 3, 0.0)
        with pytest.raises(ValueError):
            seed_function(1.0, 0, 0.0)

    def test_exponents(self):
        assert seed_exponents(1.0, 2) == (4.0, -4.0)
        assert seed_exponents(2.0, 2) == (5.0, -5.0)
        assert seed_exponents(1.0, 4) == (6.0, -6.0)


def profile_h1(x):
    c = np.cosh(x)
    return -30.0 * (4 * c**4 - 8 * c**2 + 5) / (c**2 * (36 * c**4 - 60 * c**2 + 25))


def profile_h2(x):
    c = np.cosh(x)
    return -4.0 * (144 * c**4 - 280 * c**2 + 147) / (c**2 * (64 * c**4 - 112 * c**2 + 49))


class TestDeformedPotential:
    def test_spot_values(self):
        assert deformed_potential(SystemSpec(1.0, (2,)))(0.0) == pytest.approx(-30.0, abs=1e-12)
        assert deformed_potential(SystemSpec(2.0, (2,)))(0.0) == pytest.approx(-44.0, abs=1e-12)
        assert deformed_potential(SystemSpec(1.0))(0.0) == -2.0

    def test_closed_form_profiles(self):
        xs = np.linspace(-6, 6, 241)
        u1 = deformed_potential(SystemSpec(1.0, (2,)))(xs)
        np.testing.assert_allclose(u1, profile_h1(xs), rtol=1e-11, atol=1e-12)
        u2 = deformed_potential(SystemSpec(2.0, (2,)))(xs)
        np.testing.assert_allclose(u2, profile_h2(xs), rtol=1e-11, atol=1e-12)

    @pytest.mark.parametrize("spec", [SystemSpec(1.0, (2,)), SystemSpec(1.5, (4,)), SystemSpec(2.5, (6,))])
    def test_parity_and_decay(self, spec):
        pot = deformed_potential(spec)
        xs = RNG.uniform(0.0, 6.0, size=40)
        np.testing.assert_allclose(pot(xs), pot(-xs), rtol=0, atol=1e-12)
        assert abs(pot(18.0)) < 1e-12

    def test_scalar_path_matches_vectorized(self):
        for spec in (SystemSpec(1.0), SystemSpec(1.5, (2,)), SystemSpec(2.0, (4,))):
            pot = deformed_potential(spec)
            for x in RNG.uniform(-8, 8, size=20):
                assert pot.evaluate_scalar(float(x)) == pytest.approx(float(pot(float(x))), rel=1e-13, abs=1e-13)

    def test_even_multi_index_is_nodal(self):
        # the Wronskian of two or more even seeds vanishes at x = 0
        for seeds in [(2, 4), (2, 6), (2, 4, 6)]:
            with pytest.raises(NodalWronskianError):
                deformed_potential(SystemSpec(1.0, seeds))

    def test_singular_evaluator(self):
        pot = deformed_potential(SystemSpec(1.0, (2, 4)), allow_singular=True)
        assert pot.is_singular
        assert math.isfinite(pot(1.0))
        # symmetric, decaying, and evaluable at complex x for the contour oracle
        assert pot(1.3) == pytest.approx(pot(-1.3), abs=1e-12)
        assert abs(pot(18.0)) < 1e-12
        zval = pot(0.5j)
        assert isinstance(zval, complex) and math.isfinite(zval.real)

    def test_regular_evaluator_not_singular(self):
        assert not deformed_potential(SystemSpec(1.0, (2,))).is_singular


class TestBoundStates:
    def test_h1_v2_spectrum_and_norming(self):
        states = bound_states(SystemSpec(1.0, (2,)))
        assert [s.energy for s in states] == [-16.0, -1.0]
        assert [s.kappa for s in states] == [4.0, 1.0]
        assert [s.index for s in states] == [0, 1]
        assert states[0].norming_constant == pytest.approx(math.sqrt(40.0 / 3.0), abs=1e-9)
        assert states[1].norming_constant == pytest.approx(math.sqrt(10.0 / 3.0), abs=1e-9)

    def test_h2_v2_spectrum(self):
        states = bound_states(SystemSpec(2.0, (2,)))
        assert [s.energy for s in states] == [-25.0, -4.0, -1.0]

    def test_half_integer_h(self):
        states = bound_states(SystemSpec(1.5, (2,)))
        assert [s.energy for s in states] == [-20.25, -2.25, -0.25]

    def test_undeformed_norming(self):
        states = bound_states(SystemSpec(1.0))
        assert len(states) == 1
        # sech(x)/sqrt(2) has tail sqrt(2) e^(-x)
        assert states[0].norming_constant == pytest.approx(math.sqrt(2.0), abs=1e-10)
        assert len(bound_states(SystemSpec(2.5))) == 3

    def test_unit_normalization(self):
        for spec in (SystemSpec(1.0, (2,)), SystemSpec(1.5, (2,))):
            for s in bound_states(spec):
                norm, _ = quad(lambda x: s.wavefunction(x) ** 2, -25, 25, epsabs=1e-11, limit=300)
                assert norm == pytest.approx(1.0, abs=1e-9)

    def test_known_wavefunction_shapes_h1(self):
        # psi(kappa=1) ~ sech x tanh x (1 + 2 sech^2 x/(1+5 tanh^2 x));
        # psi(kappa=4) ~ 1/(cosh^4 x (1+5 tanh^2 x)); shapes checked by ratio
        states = {round(s.kappa): s for s in bound_states(SystemSpec(1.0, (2,)))}
        xs = np.array([0.4, 1.1, 2.3])

        def shape0(x):
            sech = 1 / np.cosh(x)
            return sech * np.tanh(x) * (1 + 2 * sech**2 / (1 + 5 * np.tanh(x) ** 2))

        def shape1(x):
            return 1.0 / (np.cosh(x) ** 4 * (1 + 5 * np.tanh(x) ** 2))

        got0 = states[1].wavefunction(xs)
        got1 = states[4].wavefunction(xs)
        np.testing.assert_allclose(got0 / got0[0], shape0(xs) / shape0(xs[0]), rtol=1e-11)
        np.testing.assert_allclose(got1 / got1[0], shape1(xs) / shape1(xs[0]), rtol=1e-11)

    @pytest.mark.parametrize("spec", [SystemSpec(1.0, (2,)), SystemSpec(1.5, (2,))])
    def test_schrodinger_residual(self, spec):
        # fourth-order finite differences, step 1e-3, on x in [-8, 8]
        pot = deformed_potential(spec)
        dx = 1e-3
        xs = np.linspace(-8, 8, 161)
        for s in bound_states(spec):
            psi = s.wavefunction
            stencil = (
                -psi(xs + 2 * dx) + 16 * psi(xs + dx) - 30 * psi(xs)
                + 16 * psi(xs - dx) - psi(xs - 2 * dx)
            ) / (12 * dx * dx)
            residual = -stencil + (pot(xs) - s.energy) * psi(xs)
            scale = np.max(np.abs(psi(xs)))
            assert np.max(np.abs(residual)) <= 1e-5 * scale

    @pytest.mark.parametrize(
        "spec", [SystemSpec(1.0, (2,)), SystemSpec(2.0, (2,)), SystemSpec(3.0)]
    )
    def test_node_counts(self, spec):
        xs = np.linspace(-12, 12, 4001)
        for s in bound_states(spec):
            vals = s.wavefunction(xs)
            vals = vals[np.abs(vals) > 1e-9 * np.max(np.abs(vals))]
            flips = int(np.sum(np.sign(vals[1:]) * np.sign(vals[:-1]) < 0))
            assert flips == s.index

    def test_tail_extraction_is_reproducible(self):
        for s in bound_states(SystemSpec(1.0, (2,))):
            f12 = float(s.wavefunction(12.0)) * math.exp(12.0 * s.kappa)
            f14 = float(s.wavefunction(14.0)) * math.exp(14.0 * s.kappa)
            assert abs(f12 - f14) <= 1e-8
            assert f14 == pytest.approx(s.norming_constant, abs=1e-8)

    def test_multi_index_rejected(self):
        with pytest.raises(NodalWronskianError):
            bound_states(SystemSpec(1.0, (2, 4)))

    def test_wavefunction_vectorized(self):
        s = bound_states(SystemSpec(1.0, (2,)))[0]
        xs = np.linspace(-2, 2, 5)
        vals = s.wavefunction(xs)
        assert vals.shape == xs.shape
        assert vals[2] == pytest.approx(float(s.wavefunction(0.0)), rel=1e-14)
