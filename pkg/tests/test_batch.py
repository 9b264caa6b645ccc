"""The vectorized kernels must agree exactly with the scalar predicates."""

import numpy as np
import pytest

from conic_angles import batch
from conic_angles.cones import ConeVRep, orthant, weyl_chamber_b
from conic_angles.feasible import (_strict_combination_value, cone_contains,
                                   origin_in_interior_of_hull,
                                   project_onto_cone)


def scalar_strict(X):
    status, value = _strict_combination_value(X)
    return status == "optimal" and value > 1e-9


def test_positive_combination_matches_scalar_lp():
    rng = np.random.default_rng(40)
    X = rng.standard_normal((400, 3, 6))
    mask = batch.positive_combination_mask(X)
    for i in range(400):
        assert mask[i] == scalar_strict(X[i])


def test_positive_combination_structured_cases():
    # symmetric columns admit a strictly positive null combination
    X = np.array([[[1.0, -1.0, 0.5, -0.5]]])
    assert batch.positive_combination_mask(X)[0]
    # strictly positive row: impossible
    X = np.array([[[1.0, 0.5, 2.0]]])
    assert not batch.positive_combination_mask(X)[0]
    # zero-row systems are vacuously true
    assert batch.positive_combination_mask(np.zeros((3, 0, 4))).all()


def test_positive_combination_rectangular_shapes():
    rng = np.random.default_rng(41)
    for r, m in [(1, 2), (2, 3), (4, 5), (5, 9), (2, 8)]:
        X = rng.standard_normal((120, r, m))
        mask = batch.positive_combination_mask(X)
        for i in range(0, 120, 7):
            assert mask[i] == scalar_strict(X[i])


def test_origin_interior_matches_scalar():
    rng = np.random.default_rng(42)
    for m, k in [(3, 2), (5, 3), (6, 5), (4, 4), (2, 3)]:
        pts = rng.standard_normal((200, m, k))
        mask = batch.origin_in_interior_mask(pts)
        for i in range(0, 200, 5):
            assert mask[i] == origin_in_interior_of_hull(pts[i])


def test_origin_interior_rank_guard():
    # coplanar points in R^3 are never interior
    pts = np.zeros((5, 4, 3))
    pts[:, :, :2] = np.random.default_rng(43).standard_normal((5, 4, 2))
    assert not batch.origin_in_interior_mask(pts).any()


def test_cone_distances_match_scalar_projection():
    rng = np.random.default_rng(44)
    for cone in (orthant(3), weyl_chamber_b(4),
                 ConeVRep(3, rng.standard_normal((5, 3)))):
        Z = rng.standard_normal((150, cone.ambient_dim))
        d2, pn2 = batch.cone_distances(cone, Z)
        for i in range(0, 150, 3):
            res = project_onto_cone(cone, Z[i])
            assert abs(d2[i] - res.residual_norm ** 2) <= 1e-9
            assert abs(pn2[i] - np.linalg.norm(res.projection) ** 2) <= 1e-9


def test_cone_distances_refuses_large_generator_sets():
    gens = np.random.default_rng(45).standard_normal((13, 3))
    with pytest.raises(ValueError):
        batch.cone_distances(ConeVRep(3, gens), np.zeros((1, 3)))


def test_membership_mask_matches_scalar():
    rng = np.random.default_rng(46)
    cone = weyl_chamber_b(3)
    Z = rng.standard_normal((300, 3))
    got = batch.membership_mask(cone, Z)
    expected = np.array([cone_contains(cone, z) for z in Z])
    assert (got == expected).all()


def test_nonneg_solution_mask_matches_membership():
    rng = np.random.default_rng(47)
    gens = rng.standard_normal((4, 3))
    cone = ConeVRep(3, gens)
    unit = gens / np.linalg.norm(gens, axis=1)[:, None]
    Z = rng.standard_normal((300, 3))
    A = np.broadcast_to(unit.T, (300, 3, 4)).copy()
    got = batch.nonneg_solution_mask(A, Z)
    expected = np.array([cone_contains(cone, z) for z in Z])
    assert (got == expected).all()


def test_full_rank_mask():
    rng = np.random.default_rng(48)
    good = rng.standard_normal((50, 3, 5))
    assert batch.full_rank_mask(good, 3).all()
    deficient = np.einsum("bi,bj->bij", rng.standard_normal((50, 3)),
                          rng.standard_normal((50, 5)))
    assert not batch.full_rank_mask(deficient, 2).any()
    assert batch.full_rank_mask(deficient, 1).all()
    assert not batch.full_rank_mask(good, 4).any()  # impossible rank
