"""Tests for Landau-level projectors, truncated operators, and the
strong-field Peierls approximation.

Oracles
-------
* Level energies and degeneracies of the symmetric-gauge Landau problem
  are known in closed form: E_n = hbar*omega_B*(n + 1/2) with
  omega_B = |eB|/(mc), and on the adapted truncated space level n keeps
  exactly n_max - n states.
* The truncated commutator laws are checked against independently built
  canonical operators: with Pi_N the rank-(N+1) level projector,
      [X1t, X2t] = -i (hbar c/eB)(N+1) P_N
      [P1t, P2t] = -i (hbar eB/(4c))(N+1) P_N
      [Xit, Pjt] = i hbar delta_ij (Pi_{N-1} + (1 - (N+1)/2) P_N).
* The lowest-level effective spectra of radial potentials have closed
  forms per ordering: for V = r^2 and s = hbar*c/(eB),
  anti-normal gives 2|s|*lam*(n+1), Weyl 2|s|*lam*(n+1/2), normal
  2|s|*lam*n; for V = r^4 anti-normal gives 4 s^2 lam (n+1)(n+2).
* The full spectrum of Pi^2/2m + lam r^2 is the exact two-frequency
  oscillator: Omega = sqrt(omega_B^2/4 + 2 lam/m), and the lowest branch
  runs E_n = Omega + n*(Omega - omega_B/2).
"""

import json

import numpy as np
import pytest

from ncqmlab.errors import ClusterAmbiguity, DomainError, NonHermitian
from ncqmlab.fock import (
    FockOperator,
    Prescription,
    build_canonical_ops,
    kinetic_hamiltonian,
)
from ncqmlab.params import NCParams
from ncqmlab.peierls import (
    adapted_space,
    effective_potential_spectrum,
    landau_projectors,
    landau_rep,
    peierls_spectrum,
    projector_sinc,
    sinc_profile,
    truncated_commutators,
)
from ncqmlab.polysymbol import PolySymbol

X1SYM = PolySymbol.variable(2, 0)
X2SYM = PolySymbol.variable(2, 1)
R2 = X1SYM * X1SYM + X2SYM * X2SYM


@pytest.fixture(scope="module")
def landau_setup():
    """One shared n_max=20 Landau problem at B=1 with levels 0..2."""
    params = NCParams(theta=0.0, B=1.0)
    space = adapted_space(params, 20)
    ps = landau_projectors(params, space, 2)
    return params, space, ps


class TestPreconditions:
    def test_landau_rep_rejects_noncommutative_plane(self):
        with pytest.raises(DomainError):
            landau_rep(NCParams(theta=0.3, B=1.0))

    def test_landau_rep_rejects_zero_field(self):
        with pytest.raises(DomainError):
            landau_rep(NCParams(theta=0.0, B=0.0))

    def test_adapted_space_propagates_domain_check(self):
        with pytest.raises(DomainError):
            adapted_space(NCParams(theta=0.1, B=1.0), 10)

    def test_negative_level_count_rejected(self, landau_setup):
        params, space, _ = landau_setup
        with pytest.raises(ValueError):
            landau_projectors(params, space, -1)

    def test_level_too_close_to_truncation_rejected(self, landau_setup):
        params, space, _ = landau_setup
        with pytest.raises(ValueError):
            landau_projectors(params, space, 6)  # needs N <= n_max/4

    def test_unresolvable_guiding_structure_raises(self, landau_setup):
        # N=4 passes the cheap bound but its guiding indices are already
        # corrupted by the boundary at n_max=20; the builder must notice.
        params, space, _ = landau_setup
        with pytest.raises(ClusterAmbiguity):
            landau_projectors(params, space, 4)


class TestProjectors:
    def test_level_energies(self, landau_setup):
        _, _, ps = landau_setup
        np.testing.assert_allclose(
            ps.level_energies, [0.5, 1.5, 2.5], rtol=0, atol=1e-9)

    def test_level_multiplicities(self, landau_setup):
        # The adapted scale makes degeneracy exact: level n keeps
        # n_max - n states on the truncated space.
        _, space, ps = landau_setup
        mults = [basis.shape[1] for basis in ps.bases]
        assert mults == [space.n_max - n for n in range(3)]
        for P, m in zip(ps.projectors, mults):
            assert np.trace(P.matrix).real == pytest.approx(m, abs=1e-9)

    def test_projectors_hermitian_idempotent(self, landau_setup):
        _, _, ps = landau_setup
        for P in ps.projectors:
            M = P.matrix
            assert np.max(np.abs(M - M.conj().T)) <= 1e-12
            assert np.max(np.abs(M @ M - M)) <= 1e-10

    def test_projectors_mutually_orthogonal(self, landau_setup):
        _, _, ps = landau_setup
        for n in range(3):
            for m in range(n + 1, 3):
                prod = ps.projectors[n].matrix @ ps.projectors[m].matrix
                assert np.max(np.abs(prod)) <= 1e-10

    def test_cumulative_is_rank_sum_projector(self, landau_setup):
        _, space, ps = landau_setup
        Pi = ps.cumulative.matrix
        assert np.max(np.abs(Pi @ Pi - Pi)) <= 1e-10
        expected_rank = sum(space.n_max - n for n in range(3))
        assert np.trace(Pi).real == pytest.approx(expected_rank, abs=1e-8)

    def test_guiding_indices_consecutive_from_zero(self, landau_setup):
        _, _, ps = landau_setup
        for g in ps.guiding_indices:
            np.testing.assert_array_equal(g, np.arange(len(g)))

    def test_interior_g_cut_and_columns(self, landau_setup):
        _, _, ps = landau_setup
        cut = ps.interior_g_cut()
        assert cut == min(int(g[-1]) for g in ps.guiding_indices) // 2
        for n in range(3):
            cols = ps.interior_columns(n)
            assert cols.shape[1] == int(np.sum(ps.guiding_indices[n] <= cut))
            # columns stay orthonormal
            gram = cols.conj().T @ cols
            assert np.max(np.abs(gram - np.eye(cols.shape[1]))) <= 1e-10

    def test_guiding_center_radius_is_diagonal_within_levels(self,
                                                             landau_setup):
        # Within level n the basis diagonalizes G1^2 + G2^2 with
        # eigenvalues (hbar/|b|)(2g+1); spot-check level 1.
        params, _, ps = landau_setup
        ops = ps.ops
        b = params.e * params.B / params.c
        G1 = ops.X1 + (1.0 / b) * ops.P2
        G2 = ops.X2 - (1.0 / b) * ops.P1
        G_sq = (G1 @ G1 + G2 @ G2).matrix
        W = ps.interior_columns(1)
        block = W.conj().T @ G_sq @ W
        g = ps.guiding_indices[1][ps.guiding_indices[1]
                                  <= ps.interior_g_cut()]
        expected = np.diag((params.hbar / abs(b)) * (2.0 * g + 1.0))
        np.testing.assert_allclose(block, expected, rtol=0, atol=1e-8)


class TestSincProfile:
    def test_unit_argument_is_exact(self):
        for n in range(5):
            assert sinc_profile(1.0, n) == 1.0

    def test_vanishes_at_other_level_ratios(self):
        # h = E_m/E_n = (2m+1)/(2n+1) makes the numerator hit a sinc zero.
        for n in range(4):
            for m in range(8):
                if m == n:
                    continue
                h = (2 * m + 1) / (2 * n + 1)
                assert abs(sinc_profile(h, n)) <= 1e-12

    def test_scalar_and_array_shapes(self):
        assert isinstance(sinc_profile(0.7, 2), float)
        out = sinc_profile(np.array([0.5, 1.0, 3.0]), 1)
        assert out.shape == (3,)
        assert out[1] == 1.0

    def test_tail_bound(self):
        # |f(h)| <= 2/(h+1) because |sinc| <= 1.
        h = np.linspace(0.0, 40.0, 1001)
        assert np.all(np.abs(sinc_profile(h, 3)) <= 2.0 / (h + 1.0) + 1e-15)


class TestProjectorSinc:
    def test_matches_clustered_projectors_on_interior(self, landau_setup):
        params, _, ps = landau_setup
        H = kinetic_hamiltonian(ps.ops, params.m)
        for n in range(3):
            Psinc = projector_sinc(H, n, ps.level_energies[n])
            diff = Psinc.matrix - ps.projectors[n].matrix
            W = ps.interior_columns(n)
            assert np.max(np.abs(diff @ W)) <= 1e-8

    def test_rejects_nonhermitian_operator(self, landau_setup):
        _, space, ps = landau_setup
        M = np.zeros((space.dim, space.dim), dtype=complex)
        M[0, 1] = 1.0
        bad = FockOperator(M, space, degree=1)
        with pytest.raises(NonHermitian):
            projector_sinc(bad, 0, 0.5)


@pytest.fixture(scope="module")
def reports(landau_setup):
    """Truncated-commutator reports for the canonical pair at N = 0, 1, 2."""
    params, space, ps = landau_setup
    canon = build_canonical_ops(space)
    X = (canon.X1, canon.X2)
    P = (canon.P1, canon.P2)
    return {N: truncated_commutators(ps, N, X, P, params)
            for N in (0, 1, 2)}


class TestTruncatedCommutators:
    @pytest.mark.parametrize("N", [0, 1, 2])
    def test_position_commutator_law(self, reports, N):
        rep = reports[N]
        assert rep["predicted_X1X2"] == pytest.approx(-(N + 1))
        assert rep["coefficient_X1X2"] == pytest.approx(-(N + 1), rel=1e-10)
        assert rep["residual_X1X2"] <= 1e-10

    @pytest.mark.parametrize("N", [0, 1, 2])
    def test_momentum_commutator_law(self, reports, N):
        rep = reports[N]
        assert rep["coefficient_P1P2"] == pytest.approx(-(N + 1) / 4.0,
                                                        rel=1e-10)
        assert rep["residual_P1P2"] <= 1e-10

    @pytest.mark.parametrize("N", [0, 1, 2])
    def test_cross_commutator_law(self, reports, N):
        rep = reports[N]
        top = 1.0 - 0.5 * (N + 1)
        assert rep["coefficient_X1P1"] == pytest.approx(top, abs=1e-10)
        assert rep["coefficient_X2P2"] == pytest.approx(top, abs=1e-10)
        assert abs(rep["coefficient_X1P2"]) <= 1e-10
        assert abs(rep["coefficient_X2P1"]) <= 1e-10
        assert rep["residual_norm"] <= 1e-10

    @pytest.mark.parametrize("N", [1, 2])
    def test_canonical_commutator_restored_below_top_level(self, reports, N):
        # The Pi_{N-1} term: levels below N see the untruncated i*hbar.
        assert reports[N]["coefficient_X1P1_lower"] == pytest.approx(
            1.0, rel=1e-10)
        assert reports[N]["coefficient_X1X2_lower"] == pytest.approx(
            0.0, abs=1e-10)

    def test_no_lower_levels_at_base_truncation(self, reports):
        assert "coefficient_X1P1_lower" not in reports[0]

    def test_cross_coefficient_approaches_canonical(self, reports):
        # Watching level 0 while the truncation rank grows: 1/2 at N=0,
        # then exactly 1 once level 0 is no longer the top level.
        seq = [reports[0]["coefficient_X1P1"],
               reports[1]["coefficient_X1P1_lower"],
               reports[2]["coefficient_X1P1_lower"]]
        np.testing.assert_allclose(seq, [0.5, 1.0, 1.0], rtol=0, atol=1e-10)
        assert np.all(np.diff(seq) >= -1e-12)

    def test_kinetic_momenta_compress_to_zero_on_lowest_level(
            self, landau_setup):
        # The minimally coupled momenta are pure inter-level ladders, so
        # their lowest-level compression vanishes -- the closed laws are
        # statements about the canonical pair, not the kinetic one.
        params, _, ps = landau_setup
        X = (ps.ops.X1, ps.ops.X2)
        P = (ps.ops.P1, ps.ops.P2)
        rep = truncated_commutators(ps, 0, X, P, params)
        assert abs(rep["coefficient_X1P1"]) <= 1e-10
        assert abs(rep["coefficient_P1P2"]) <= 1e-10
        assert rep["coefficient_X1X2"] == pytest.approx(-1.0, rel=1e-10)

    def test_report_is_json_serializable(self, reports):
        for rep in reports.values():
            round_trip = json.loads(json.dumps(rep))
            assert round_trip["N"] == rep["N"]
            assert round_trip["g_cut"] == rep["g_cut"]

    def test_rank_beyond_projector_set_rejected(self, reports, landau_setup):
        params, space, ps = landau_setup
        canon = build_canonical_ops(space)
        with pytest.raises(ValueError):
            truncated_commutators(ps, 3, (canon.X1, canon.X2),
                                  (canon.P1, canon.P2), params)


class TestEffectivePotentialSpectrum:
    PARAMS = NCParams(theta=0.0, B=1.0)

    def test_antinormal_matches_exact_lowest_level_compression(self):
        # s = 1 here, so eps_n = 2*lam*(n+1).
        ev = effective_potential_spectrum(R2, 0.1, self.PARAMS, 4)
        np.testing.assert_allclose(ev, 0.2 * np.arange(1, 5),
                                   rtol=0, atol=1e-12)

    def test_weyl_and_normal_orderings_differ_by_half_step(self):
        weyl = effective_potential_spectrum(
            R2, 0.1, self.PARAMS, 3, Prescription.WEYL)
        normal = effective_potential_spectrum(
            R2, 0.1, self.PARAMS, 3, Prescription.NORMAL)
        np.testing.assert_allclose(weyl, 0.2 * (np.arange(3) + 0.5),
                                   rtol=0, atol=1e-12)
        np.testing.assert_allclose(normal, 0.2 * np.arange(3),
                                   rtol=0, atol=1e-12)

    def test_prescription_accepts_string(self):
        ev = effective_potential_spectrum(R2, 0.1, self.PARAMS, 3, "weyl")
        np.testing.assert_allclose(ev, [0.1, 0.3, 0.5], rtol=0, atol=1e-12)

    def test_zero_strength_gives_zero_spectrum(self):
        ev = effective_potential_spectrum(R2, 0.0, self.PARAMS, 3)
        np.testing.assert_array_equal(ev, np.zeros(3))

    def test_negative_field_uses_magnitude_of_cell_area(self):
        params = NCParams(theta=0.0, B=-2.0)   # |s| = 1/2
        ev = effective_potential_spectrum(R2, 0.1, params, 3)
        np.testing.assert_allclose(ev, 0.1 * np.arange(1, 4),
                                   rtol=0, atol=1e-12)

    def test_quartic_antinormal_closed_form(self):
        ev = effective_potential_spectrum(R2 * R2, 1.0, self.PARAMS, 3)
        n = np.arange(3)
        np.testing.assert_allclose(ev, 4.0 * (n + 1) * (n + 2),
                                   rtol=1e-12, atol=1e-10)

    def test_huge_boundary_tolerance_leaks_spurious_zero_mode(self):
        # Anti-normal ladder truncation parks a fake null vector in the
        # top basis state; disabling the filter lets it into the window.
        ev = effective_potential_spectrum(R2, 0.1, self.PARAMS, 3,
                                          boundary_tol=2.0)
        assert abs(ev[0]) <= 1e-12
        assert ev[1] == pytest.approx(0.2, abs=1e-12)

    def test_radial_eigenvectors_carry_no_boundary_weight(self):
        # Number states are exact eigenvectors for radial V, so even a
        # zero tolerance keeps the physical window intact.
        ev = effective_potential_spectrum(R2, 0.1, self.PARAMS, 3,
                                          boundary_tol=0.0)
        np.testing.assert_allclose(ev, [0.2, 0.4, 0.6], rtol=0, atol=1e-12)

    def test_squeezing_potential_starves_the_filter(self):
        # x1^2 spreads every eigenvector across the ladder; at dim=10
        # fewer than 8 survive the boundary screen.
        with pytest.raises(ClusterAmbiguity):
            effective_potential_spectrum(X1SYM * X1SYM, 0.1, self.PARAMS,
                                         8, dim=10)

    def test_rejects_wrong_arity_potential(self):
        with pytest.raises(ValueError):
            effective_potential_spectrum(PolySymbol.variable(4, 0), 0.1,
                                         self.PARAMS, 2)


class TestPeierlsSpectrum:
    def test_strong_field_matches_two_frequency_oscillator(self):
        lam, B = 0.1, 50.0
        params = NCParams(theta=0.0, B=B)
        res = peierls_spectrum(R2, lam, params, 3, n_max=20)
        Omega = np.sqrt(B * B / 4.0 + 2.0 * lam)
        lowest_branch = Omega + np.arange(3) * (Omega - B / 2.0)
        np.testing.assert_allclose(res.full_E_n, lowest_branch,
                                   rtol=0, atol=1e-9)
        np.testing.assert_allclose(res.epsilon_n,
                                   (2.0 * lam / B) * np.arange(1, 4),
                                   rtol=0, atol=1e-12)
        assert res.omega_B == pytest.approx(B)
        assert res.hbar_omega_B == pytest.approx(B)
        assert res.prescription is Prescription.ANTINORMAL

    def test_deviations_definition_and_size(self):
        lam, B = 0.1, 50.0
        params = NCParams(theta=0.0, B=B)
        res = peierls_spectrum(R2, lam, params, 2, n_max=20)
        dev = res.deviations()
        np.testing.assert_array_equal(
            dev, (res.full_E_n - 0.5 * res.hbar_omega_B) - res.epsilon_n)
        # analytic deviation of the ground level:
        # (Omega - B/2) - 2 lam/B, fourth order in the trap frequency
        Omega = np.sqrt(B * B / 4.0 + 2.0 * lam)
        expected = (Omega - B / 2.0) - 2.0 * lam / B
        assert dev[0] == pytest.approx(expected, rel=1e-6)
        assert abs(dev[0]) / res.epsilon_n[0] < 1e-4

    def test_zero_potential_collapses_to_pure_landau(self):
        params = NCParams(theta=0.0, B=10.0)
        res = peierls_spectrum(R2, 0.0, params, 3, n_max=12)
        np.testing.assert_allclose(res.deviations(), np.zeros(3),
                                   rtol=0, atol=1e-9)
        np.testing.assert_allclose(res.full_E_n, np.full(3, 5.0),
                                   rtol=0, atol=1e-9)

    def test_noncommutative_plane_rejected(self):
        with pytest.raises(DomainError):
            peierls_spectrum(R2, 0.1, NCParams(theta=0.2, B=10.0), 2)
