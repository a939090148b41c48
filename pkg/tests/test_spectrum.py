import math

import numpy as np
import pytest
from scipy import optimize

from conftest import EXACT_ROOTS, sign_changes
from invsqrt import (BracketError, DomainError, PhysicalSystem, PoleError,
                     SingularRatioError, SolutionCoefficients, approx_root,
                     approx_spectrum, bound_state, coefficient_ratio,
                     energy_from_a, eval_F, eval_psi, exact_spectrum, overlap,
                     recessive_coefficients, solve_exact_root, spectral_point,
                     spectrum_fn)
from invsqrt import spectrum as spec_mod
from invsqrt.spectrum import RootBracket, find_bracket, spectrum_fn_scale


@pytest.fixture(scope="module")
def states():
    sys_ = PhysicalSystem()
    return {n: bound_state(sys_, n) for n in (1, 2, 3, 4)}


class TestSpectrumFunction:
    def test_ground_root(self):
        a1 = solve_exact_root(1)
        assert 0.85 <= a1 <= 0.87
        assert abs(spectrum_fn(a1)) <= 1e-10 * spectrum_fn_scale(a1)

    @pytest.mark.parametrize("n", range(1, 21))
    def test_roots_match_reference(self, n):
        a = solve_exact_root(n)
        assert a == pytest.approx(EXACT_ROOTS[n - 1], rel=1e-12)
        assert abs(spectrum_fn(a)) <= 1e-10 * spectrum_fn_scale(a)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_nonzero_at_integers(self, n):
        assert abs(spectrum_fn(float(n))) > 1e-3 * spectrum_fn_scale(float(n))

    @pytest.mark.parametrize("n", range(1, 21))
    def test_seed_bracket_has_sign_change(self, n):
        assert np.sign(spectrum_fn(n - 0.45)) != np.sign(spectrum_fn(n + 0.05))

    def test_roots_increasing(self):
        roots = [solve_exact_root(n) for n in range(1, 21)]
        assert all(b > a for a, b in zip(roots, roots[1:]))

    @pytest.mark.parametrize("n", range(1, 21))
    def test_roots_near_estimate(self, n):
        assert abs(EXACT_ROOTS[n - 1] - approx_root(n)) < 0.12

    @pytest.mark.xfail(strict=True, reason="the gap to n - 1/(2 pi) bottoms out near n = 7 and then grows")
    def test_gap_to_estimate_decreasing(self):
        gaps = [abs(solve_exact_root(n) - approx_root(n)) for n in range(2, 21)]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))

    def test_gap_profile(self):
        gaps = np.array([abs(r - approx_root(n)) for n, r in enumerate(EXACT_ROOTS, 1)])
        assert int(np.argmin(gaps[1:])) + 2 == 7
        assert gaps[19] > 10 * gaps[6]

    def test_rejects_non_positive(self):
        with pytest.raises(DomainError):
            spectrum_fn(0.0)
        with pytest.raises(DomainError):
            solve_exact_root(0)

    def test_bracket_type(self):
        with pytest.raises(BracketError):
            RootBracket(1.0, 2.0, 1.0, 3.0)
        with pytest.raises(ValueError):
            RootBracket(2.0, 1.0, -1.0, 1.0)
        br = find_bracket(4)
        assert br.lo < EXACT_ROOTS[3] < br.hi

    def test_bracket_expansion_failure(self, monkeypatch):
        monkeypatch.setattr(spec_mod, "spectrum_fn", lambda a: 1.0)
        with pytest.raises(BracketError):
            find_bracket(3)


class TestApprox:
    def test_coarse(self):
        assert approx_root(1) == pytest.approx(1 - 1 / (2 * math.pi), rel=1e-15)
        assert approx_root(1) == pytest.approx(0.84085, abs=5e-6)

    def test_refined_against_fixed_point(self):
        a = 1 - 1 / (2 * math.pi)
        for _ in range(200):
            a = 1 - 1 / (2 * math.pi) + a * math.exp(-2 * a) / math.pi
        assert approx_root(1, refine=True) == pytest.approx(a, abs=1e-11)
        assert approx_root(1, refine=True) == pytest.approx(0.8887, abs=5e-5)

    def test_refined_large_n(self):
        assert abs(approx_root(20, refine=True) - approx_root(20)) < 1e-8

    def test_refined_solves_equation(self):
        for n in range(1, 10):
            a = approx_root(n, refine=True)
            assert abs(math.sin(math.pi * a + 0.5 - a * math.exp(-2 * a))) < 1e-11

    @pytest.mark.parametrize("bad", [0, -2, 1.5])
    def test_rejects(self, bad):
        with pytest.raises(DomainError):
            approx_root(bad)

    def test_energies(self, unit):
        assert approx_spectrum(unit, 1) == pytest.approx(-0.56125, abs=5e-6)
        assert approx_spectrum(unit, 3) == pytest.approx(-0.24927, abs=5e-6)
        for n in range(1, 21):
            assert approx_spectrum(unit, n) == pytest.approx(energy_from_a(unit, approx_root(n)), rel=1e-14)

    def test_general_units(self):
        sys_ = PhysicalSystem(m=1.7, hbar=0.6, V0=-2.2)
        for n in (1, 5):
            assert approx_spectrum(sys_, n) == pytest.approx(energy_from_a(sys_, approx_root(n)), rel=1e-13)

    def test_rejects_repulsive(self):
        with pytest.raises(DomainError):
            approx_spectrum(PhysicalSystem(V0=1.0), 1)


class TestEnergyFromA:
    def test_values(self, unit):
        assert energy_from_a(unit, 1.0) == pytest.approx(-0.5, rel=1e-15)
        assert energy_from_a(unit, 8.0) == pytest.approx(-0.125, rel=1e-15)
        assert energy_from_a(unit, 1 - 1 / (2 * math.pi)) == pytest.approx(-0.56125, abs=5e-6)

    def test_round_trip(self):
        sys_ = PhysicalSystem(m=0.8, hbar=1.9, V0=-3.1)
        for a in (0.3, 1.0, 7.7, 19.1):
            assert spectral_point(sys_, energy_from_a(sys_, a)).a == pytest.approx(a, rel=1e-12)

    def test_rejects(self, unit):
        with pytest.raises(DomainError):
            energy_from_a(unit, 0.0)
        with pytest.raises(DomainError):
            energy_from_a(PhysicalSystem(V0=1.0), 1.0)


class TestCoefficientRatio:
    def test_boundary_condition_at_root(self, unit):
        a1 = solve_exact_root(1)
        sp = spectral_point(unit, energy_from_a(unit, a1))
        c = SolutionCoefficients(coefficient_ratio(a1), 1.0)
        xs = np.linspace(0.0, 8.0, 400)
        psi = eval_psi(unit, sp, c, xs, tail=False)
        assert abs(psi[0]) <= 1e-9 * np.abs(psi).max()

    def test_finite_at_one(self):
        assert math.isfinite(coefficient_ratio(1.0))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_matches_decaying_gauge_at_roots(self, n):
        a = solve_exact_root(n)
        assert coefficient_ratio(a) == pytest.approx(recessive_coefficients(a).c1, rel=1e-9)

    def test_singular(self, monkeypatch):
        class Fake:
            def __init__(self, v):
                self.value, self.abs_error_estimate = v, 0.0

        a = 2.0
        s = math.sqrt(2 * a)
        # force sqrt(2a) H_{a-1} = H_a so the denominator cancels exactly
        monkeypatch.setattr(spec_mod.specfun, "hermite_h",
                            lambda nu, z: Fake(1.0 if nu == a - 1 else s))
        with pytest.raises(SingularRatioError):
            coefficient_ratio(a)


class TestEvalF:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_zero_at_roots(self, n):
        assert abs(eval_F(EXACT_ROOTS[n - 1])) < 1e-9

    def test_poles_interlace_roots(self):
        def den(a):
            return spec_mod.specfun.hermite_h(a, -math.sqrt(2 * a)).value

        grid = np.linspace(0.6, 10.0, 1881)
        d = np.array([den(a) for a in grid])
        idx = np.where(np.sign(d[1:]) != np.sign(d[:-1]))[0]
        poles = [optimize.brentq(den, grid[i], grid[i + 1], xtol=1e-15) for i in idx]
        roots = [r for r in EXACT_ROOTS if 0.6 < r < 10.0]
        # exactly one pole between consecutive roots
        for lo, hi in zip(roots, roots[1:]):
            assert sum(lo < p < hi for p in poles) == 1
        # F is finite away from the poles, and alternates sign across each root and pole
        for lo, hi in zip(sorted(poles + roots), sorted(poles + roots)[1:]):
            inner = np.linspace(lo, hi, 9)[1:-1]
            vals = [eval_F(a) for a in inner]
            assert all(math.isfinite(v) for v in vals)
            assert sign_changes(vals) == 0
        with pytest.raises(PoleError):
            eval_F(poles[0])


class TestBoundStates:
    def test_fields(self, states):
        for n, st in states.items():
            assert st.n == n and st.method == "exact" and st.norm > 0
            assert st.a_n == pytest.approx(EXACT_ROOTS[n - 1], rel=1e-12)
            assert spectral_point(st.system, st.E_n).a == pytest.approx(st.a_n, rel=1e-12)
        assert states[1].E_n < states[2].E_n < states[3].E_n < states[4].E_n < 0

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_boundary_values(self, states, n):
        st = states[n]
        xs = np.linspace(0.0, 4 * st.x_switch, 4000)
        psi = st.psi(xs)
        peak = np.abs(psi).max()
        assert abs(psi[0]) <= 1e-9 * peak
        assert abs(psi[-1]) <= 1e-8 * peak

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_node_count(self, states, n):
        st = states[n]
        xs = np.concatenate([np.geomspace(1e-6, 1.0, 400), np.linspace(1.0, 3 * st.x_switch, 6000)[1:]])
        psi = st.psi(xs)
        assert sign_changes(psi, 1e-12 * np.abs(psi).max()) == n - 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_tail_monotone(self, states, n):
        st = states[n]
        xs = np.linspace(st.turning_point, 4 * st.x_switch, 3000)
        psi = np.abs(st.psi(xs))
        assert np.all(np.diff(psi) < 0)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_normalised(self, states, n):
        assert overlap(states[n], states[n]) == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("n,m", [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    def test_orthogonal(self, states, n, m):
        assert abs(overlap(states[n], states[m])) <= 1e-6

    def test_psi_continuous_at_switch(self, states):
        for st in states.values():
            xs = st.x_switch * (1 + np.array([-1e-9, 1e-9]))
            a, b = st.psi(xs)
            assert b == pytest.approx(a, rel=1e-6)

    def test_approx_method(self, unit):
        st = bound_state(unit, 1, method="approx")
        assert st.method == "approx" and st.a_n == approx_root(1)
        psi = st.psi(np.linspace(0, 20, 200))
        assert 1e-9 * np.abs(psi).max() < abs(psi[0]) < 0.2 * np.abs(psi).max()

    def test_rejects(self, unit):
        with pytest.raises(ValueError):
            bound_state(unit, 1, method="magic")
        with pytest.raises(DomainError):
            bound_state(PhysicalSystem(V0=2.0), 1)

    def test_general_units_scaling(self):
        # the natural energy unit of V0/sqrt(x) is m**(1/3) |V0|**(4/3) hbar**(-2/3)
        sys_ = PhysicalSystem(m=2.0, hbar=0.5, V0=-1.5)
        st = bound_state(sys_, 2)
        unit_E = 2.0 ** (1 / 3) * 1.5 ** (4 / 3) * 0.5 ** (-2 / 3)
        assert st.E_n == pytest.approx(energy_from_a(PhysicalSystem(), EXACT_ROOTS[1]) * unit_E, rel=1e-12)
        assert overlap(st, st) == pytest.approx(1.0, abs=1e-6)

    def test_exact_spectrum_table(self, unit):
        rows = exact_spectrum(unit, 5)
        assert [r[0] for r in rows] == [1, 2, 3, 4, 5]
        assert [r[1] for r in rows] == pytest.approx(EXACT_ROOTS[:5], rel=1e-12)
