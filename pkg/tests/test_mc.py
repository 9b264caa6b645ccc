import numpy as np
import pytest

from conic_angles import mc
from conic_angles.cones import ConeVRep, linear_subspace_cone, orthant, \
    weyl_chamber_b
from conic_angles.exact import orthant_grassmann, orthant_intrinsic_volumes, \
    weyl_b_intrinsic_volumes
from conic_angles.linalg import RngStream

N = 20_000


def two_sample_z(a, b):
    spread = np.sqrt(a.stderr ** 2 + b.stderr ** 2)
    if spread == 0.0:
        return 0.0 if a.value == b.value else np.inf
    return (a.value - b.value) / spread


class TestEstimateShape:
    def test_wald_stderr(self):
        est = mc.estimate_absorption(np.eye(2), 1, N, RngStream(1))
        assert abs(est.stderr
                   - np.sqrt(est.value * (1 - est.value) / N)) < 1e-12
        assert est.samples == N

    def test_zscore_rules(self):
        est = mc.Estimate(0.5, 0.1, 100, exact_ref=0.8)
        assert abs(est.z_score + 3.0) < 1e-12
        exact_row = mc.Estimate(1.0, 0.0, 100, exact_ref=1.0)
        assert exact_row.z_score == 0.0 and exact_row.passes(3.0)
        bad_row = mc.Estimate(0.9, 0.0, 100, exact_ref=1.0)
        assert not bad_row.passes(3.0)
        free = mc.Estimate(0.5, 0.1, 100)
        assert free.z_score is None and free.passes(0.0)


class TestDeterminism:
    def test_same_seed_same_estimate(self):
        a = mc.estimate_absorption(np.eye(3), 1, N, RngStream(9))
        b = mc.estimate_absorption(np.eye(3), 1, N, RngStream(9))
        assert a == b

    def test_threads_do_not_change_results(self):
        one = mc.estimate_grassmann_subspace(orthant(3), 1, 3 * N,
                                             RngStream(10), threads=1)
        four = mc.estimate_grassmann_subspace(orthant(3), 1, 3 * N,
                                              RngStream(10), threads=4)
        assert one == four

    def test_report_bytes_reproducible(self):
        spec = mc.ExperimentSpec("theorem-655", samples=N, seed=5)
        r1 = mc.run_experiment(spec, threads=1).to_json()
        r2 = mc.run_experiment(spec, threads=3).to_json()
        assert r1 == r2

    def test_scaling_by_powers_of_two_is_bit_identical(self):
        gens = weyl_chamber_b(3).generators
        a = mc.estimate_grassmann_subspace(ConeVRep(3, gens), 1, N,
                                           RngStream(11))
        b = mc.estimate_grassmann_subspace(ConeVRep(3, 4.0 * gens), 1, N,
                                           RngStream(11))
        assert a == b

    def test_generic_scaling_matches_statistically(self):
        gens = weyl_chamber_b(2).generators
        scaled = gens * np.array([[3.0], [7.0]])
        a = mc.estimate_solid_angle(ConeVRep(2, gens), N, RngStream(12))
        b = mc.estimate_solid_angle(ConeVRep(2, scaled), N, RngStream(12))
        assert a == b  # membership is scale-free; the draws are shared


class TestAbsorption:
    def test_wendel_square(self):
        est = mc.estimate_absorption(np.eye(4), 2, N, RngStream(13))
        assert abs(est.value - 0.5) <= 3 * est.stderr

    def test_sign_difference_case(self):
        est = mc.estimate_absorption(np.eye(2), 1, N, RngStream(14))
        assert abs(est.value - 0.5) <= 3 * est.stderr

    def test_weyl_absorption(self):
        est = mc.estimate_absorption(weyl_chamber_b(3).generators, 1, N,
                                     RngStream(15))
        assert abs(est.value - 3 / 8) <= 3 * est.stderr

    def test_rejects_linear_subspace(self):
        with pytest.raises(ValueError, match="linear subspace"):
            mc.estimate_absorption([[1.0, 0.0], [-1.0, 0.0]], 1, N,
                                   RngStream(16))


class TestGrassmannSubspace:
    def test_orthant_values(self):
        gamma = orthant_grassmann(3).values
        for j in (1, 2):
            est = mc.estimate_grassmann_subspace(orthant(3), j, N,
                                                 RngStream(17, j))
            assert abs(est.value - gamma[j]) <= 3 * est.stderr

    def test_j_zero_is_certain(self):
        est = mc.estimate_grassmann_subspace(orthant(3), 0, N, RngStream(18))
        assert est.value == 1.0 and est.stderr == 0.0

    def test_j_equal_dim_is_null(self):
        est = mc.estimate_grassmann_subspace(orthant(3), 3, N, RngStream(19))
        assert est.value == 0.0

    def test_cross_consistency_with_absorption(self):
        a = mc.estimate_absorption(np.eye(3), 1, N, RngStream(20))
        g = mc.estimate_grassmann_subspace(orthant(3), 1, N, RngStream(21))
        assert abs(two_sample_z(a, g)) <= 3.0

    def test_zero_padding_leaves_estimates_unchanged(self):
        padded = ConeVRep(5, np.concatenate([np.eye(3), np.zeros((3, 2))],
                                            axis=1))
        est = mc.estimate_grassmann_subspace(padded, 1, N, RngStream(51))
        assert abs(est.value - 0.75) <= 3 * est.stderr

    def test_subspace_cone_rejected(self):
        with pytest.raises(ValueError):
            mc.estimate_grassmann_subspace(
                linear_subspace_cone(np.eye(3)[:1]), 1, N, RngStream(22))

    def test_estimated_profile_is_monotone_within_noise(self):
        ests = [mc.estimate_grassmann_subspace(orthant(3), j, N,
                                               RngStream(50, j))
                for j in range(4)]
        for lo, hi in zip(ests[1:], ests):
            slack = 3.0 * (lo.stderr + hi.stderr)
            assert hi.value >= lo.value - slack


class TestExpectedGrassmannImage:
    def test_weyl_chamber(self):
        est = mc.estimate_expected_grassmann_image(weyl_chamber_b(3), 2, 1, N,
                                                   RngStream(23))
        assert abs(est.value - 3 / 8) <= 3 * est.stderr
        assert est.excluded == 0

    def test_j_zero_certain(self):
        est = mc.estimate_expected_grassmann_image(orthant(4), 3, 0, N,
                                                   RngStream(24))
        assert est.value == 1.0

    def test_wide_image_dimension_independence(self):
        # mapping into R^5 leaves the angles of a 3-dimensional cone alone
        est = mc.estimate_expected_grassmann_image(orthant(3), 5, 2, N,
                                                   RngStream(25))
        assert abs(est.value - 0.25) <= 3 * est.stderr

    def test_embedding_invariance(self):
        padded = np.concatenate([np.eye(3), np.zeros((3, 2))], axis=1)
        a = mc.estimate_expected_grassmann_image(orthant(3), 2, 1, N,
                                                 RngStream(26))
        b = mc.estimate_expected_grassmann_image(ConeVRep(5, padded), 2, 1, N,
                                                 RngStream(27))
        assert abs(two_sample_z(a, b)) <= 3.0

    def test_invalid_j(self):
        with pytest.raises(ValueError):
            mc.estimate_expected_grassmann_image(orthant(3), 2, 2, N,
                                                 RngStream(28))


class TestSolidAngle:
    def test_quadrant(self):
        est = mc.estimate_solid_angle(orthant(2), N, RngStream(29))
        assert abs(est.value - 0.25) <= 3 * est.stderr

    def test_image_expectation_k1(self):
        est = mc.estimate_expected_solid_angle_image(orthant(3), 1, N,
                                                     RngStream(30))
        assert abs(est.value - 7 / 8) <= 3 * est.stderr

    def test_image_expectation_full_k(self):
        est = mc.estimate_expected_solid_angle_image(orthant(3), 3, N,
                                                     RngStream(31))
        assert abs(est.value - 1 / 8) <= 3 * est.stderr


class TestPersistence:
    def test_orthant(self):
        est = mc.estimate_persistence_v0(np.eye(3), N, RngStream(32))
        assert abs(est.value - 1 / 8) <= 3 * est.stderr

    def test_weyl(self):
        est = mc.estimate_persistence_v0(weyl_chamber_b(2).generators, N,
                                         RngStream(33))
        assert abs(est.value - 3 / 8) <= 3 * est.stderr

    def test_half_line(self):
        est = mc.estimate_persistence_v0(np.eye(1), N, RngStream(34))
        assert abs(est.value - 0.5) <= 3 * est.stderr


class TestIntrinsicVolumes:
    def test_mgf_zero_variance_row_at_one(self):
        _, rows = mc.estimate_intrinsic_volumes_mgf(orthant(2), None, N,
                                                    RngStream(35))
        row = next(r for r in rows if r.name == "mgf[r=1]")
        assert row.value == 1.0 and row.stderr == 0.0

    def test_mgf_recovery(self):
        v, _ = mc.estimate_intrinsic_volumes_mgf(orthant(3), None, 100_000,
                                                 RngStream(36))
        assert np.abs(v.values - orthant_intrinsic_volumes(3).values
                      ).max() <= 0.02

    def test_steiner_recovery(self):
        v, _ = mc.estimate_intrinsic_volumes_steiner(
            weyl_chamber_b(2), None, 100_000, RngStream(37))
        assert np.abs(v.values - weyl_b_intrinsic_volumes(2).values
                      ).max() <= 0.02

    def test_steiner_cdf_reaches_one(self):
        _, rows = mc.estimate_intrinsic_volumes_steiner(orthant(2), None, N,
                                                        RngStream(38))
        assert rows[-1].value == 1.0

    def test_half_line_distance_bounded(self):
        _, rows = mc.estimate_intrinsic_volumes_steiner(orthant(1), None, N,
                                                        RngStream(39))
        assert rows[-1].value == 1.0

    def test_subspace_input_recovers_indicator(self):
        sub = linear_subspace_cone(np.eye(3)[:2])
        v, _ = mc.estimate_intrinsic_volumes_mgf(sub, None, N, RngStream(40))
        assert v.values[2] > 0.9

    def test_sample_floor_enforced(self):
        with pytest.raises(ValueError):
            mc.estimate_intrinsic_volumes_mgf(orthant(2), None, 500,
                                              RngStream(41))


class TestFaceAngleSums:
    def test_two_vertices_give_two(self):
        gauss, regular = mc.estimate_face_angle_sums(2, 2, 0, 0, N,
                                                     RngStream(42))
        assert gauss.value == 2.0 and regular.value == 2.0
        assert gauss.stderr == 0.0

    def test_triangle_agreement(self):
        gauss, regular = mc.estimate_face_angle_sums(3, 2, 0, 1, N,
                                                     RngStream(43))
        assert abs(two_sample_z(gauss, regular)) <= 3.0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            mc.estimate_face_angle_sums(5, 3, 0, 1, N, RngStream(44))
        with pytest.raises(ValueError):
            mc.estimate_face_angle_sums(3, 2, 2, 1, N, RngStream(45))


class TestRunExperiment:
    def test_all_experiments_pass_at_moderate_n(self):
        reports = mc.run_all_experiments(seed=42, samples=N, threads=2)
        assert [r.experiment for r in reports] == list(mc.EXPERIMENT_NAMES)
        for report in reports:
            assert report.passed, (report.experiment, report.to_json())

    def test_conditional_experiment_reference(self):
        spec = mc.ExperimentSpec("conditional-1151", samples=N, seed=4)
        report = mc.run_experiment(spec)
        est = report.estimates[0]
        assert est.exact_ref == 0.5
        assert abs(est.z_score) <= 3.0

    def test_unknown_experiment(self):
        with pytest.raises(ValueError):
            mc.run_experiment(mc.ExperimentSpec("nope"))

    def test_spec_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ValueError):
            mc.ExperimentSpec.from_dict({"experiment": "solid-angle",
                                         "bogus": 1})
