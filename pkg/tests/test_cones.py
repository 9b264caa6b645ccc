import numpy as np
import pytest

from conic_angles.cones import (ConeVRep, DegenerateConeError, apply_linear_map,
                                linear_subspace_cone, orthant,
                                parse_cone_literal, simplex_tangent_cone,
                                structure, weyl_chamber_b)
from conic_angles.feasible import cone_contains


def test_orthant_generators():
    assert np.allclose(orthant(2).generators, np.eye(2))
    st = structure(orthant(3))
    assert (st.dim, st.lineality_dim, st.is_linear_subspace) == (3, 0, False)
    assert cone_contains(orthant(1), np.array([1.0]))
    assert not cone_contains(orthant(1), np.array([-1.0]))


def test_weyl_chamber_generators_are_partial_sums():
    assert np.allclose(weyl_chamber_b(2).generators, [[1, 0], [1, 1]])
    cone = weyl_chamber_b(3)
    assert cone_contains(cone, np.array([3.0, 2.0, 1.0]))
    assert cone_contains(weyl_chamber_b(2), np.array([2.0, 1.0]))
    assert not cone_contains(weyl_chamber_b(2), np.array([1.0, 2.0]))
    st = structure(cone)
    assert (st.dim, st.lineality_dim) == (3, 0)


def test_weyl_membership_matches_inequality_description():
    rng = np.random.default_rng(20)
    for n in (2, 3, 4, 5, 6):
        cone = weyl_chamber_b(n)
        for _ in range(200):
            z = rng.standard_normal(n) * rng.uniform(0.2, 3)
            if rng.random() < 0.4:  # bias toward members
                z = np.sort(np.abs(z))[::-1]
            sorted_nonneg = (np.diff(z) <= 1e-12).all() and z[-1] >= -1e-12
            assert cone_contains(cone, z) == bool(sorted_nonneg)


def test_orthant_membership_matches_inequality_description():
    rng = np.random.default_rng(21)
    for n in (2, 4, 6):
        cone = orthant(n)
        for _ in range(200):
            z = rng.standard_normal(n)
            if rng.random() < 0.4:
                z = np.abs(z)
            assert cone_contains(cone, z) == bool(z.min() >= -1e-12)


def test_linear_subspace_cone():
    cone = linear_subspace_cone(np.eye(2)[:1] @ np.eye(2))
    assert np.allclose(cone.generators, [[1, 0], [-1, 0]])
    sub = linear_subspace_cone(np.eye(3)[:2])
    st = structure(sub)
    assert st.is_linear_subspace and st.lineality_dim == st.dim == 2
    assert cone_contains(sub, -sub.generators[0])
    with pytest.raises(ValueError):
        linear_subspace_cone([[1.0, 0.0], [2.0, 0.0]])


def test_subspace_flag_iff_every_generator_negation_contained():
    rng = np.random.default_rng(22)
    for _ in range(40):
        m, n = rng.integers(2, 6), rng.integers(2, 5)
        gens = rng.standard_normal((m, n))
        cone = ConeVRep(n, gens)
        st = structure(cone)
        all_sym = all(cone_contains(cone, -g) for g in gens)
        assert st.is_linear_subspace == all_sym


def test_simplex_tangent_cone_vertex():
    cone = simplex_tangent_cone(np.eye(3), 1)
    assert cone.num_generators == 2  # zero self-difference removed
    # one-dimensional case: tangent cone of [0, 1] at 0
    cone1 = simplex_tangent_cone(np.array([[0.0], [1.0]]), 1)
    assert np.allclose(cone1.generators, [[1.0]])
    with pytest.raises(ValueError):
        simplex_tangent_cone(np.eye(3), 5)


def test_simplex_tangent_cone_edge_has_lineality():
    cone = simplex_tangent_cone(np.eye(3), 2)
    st = structure(cone)
    assert st.lineality_dim == 1
    assert not st.is_linear_subspace


def test_apply_linear_map_identity_and_projection():
    cone = orthant(2)
    same = apply_linear_map(np.eye(2), cone)
    assert np.allclose(same.generators, cone.generators)
    ray = apply_linear_map(np.array([[1.0, 1.0]]), cone)
    assert ray.ambient_dim == 1
    assert np.allclose(ray.generators, [[1.0], [1.0]])
    with pytest.raises(DegenerateConeError):
        apply_linear_map(np.zeros((2, 2)), cone)


def test_image_membership_equivalence():
    # pos(A M) = A pos(M): images of cone combinations stay in the image
    # cone, and points detected outside admit no nearby combination
    rng = np.random.default_rng(23)
    for _ in range(20):
        gens = rng.standard_normal((4, 3))
        cone = ConeVRep(3, gens)
        A = rng.standard_normal((2, 3))
        image = apply_linear_map(A, cone)
        grid = np.stack(np.meshgrid(*[np.linspace(0, 1.5, 4)] * 4),
                        axis=-1).reshape(-1, 4)
        mapped = grid @ gens @ A.T
        for y in mapped[::7]:
            assert cone_contains(image, y, tol=1e-6)
        for _ in range(10):
            y = rng.standard_normal(2) * 3
            if not cone_contains(image, y):
                dists = np.linalg.norm(mapped - y, axis=1)
                assert dists.min() > 1e-8


def test_image_dimension_is_min_of_rank_and_target():
    rng = np.random.default_rng(24)
    mismatches = 0
    for i in range(50):
        dim_c, k = rng.integers(1, 5), rng.integers(1, 5)
        gens = rng.standard_normal((dim_c, 4))
        cone = ConeVRep(4, gens)
        A = rng.standard_normal((k, 4))
        expected = min(structure(cone).dim, k)
        mismatches += structure(apply_linear_map(A, cone)).dim != expected
    assert mismatches == 0


def test_degenerate_and_invalid_constructions():
    with pytest.raises(ValueError):
        ConeVRep(2, [[0.0, 0.0]])
    with pytest.raises(ValueError):
        ConeVRep(2, [[1.0, np.inf]])
    with pytest.raises(ValueError):
        orthant(0)


def test_halfplane_structure():
    cone = ConeVRep(2, [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
    st = structure(cone)
    assert (st.dim, st.lineality_dim, st.is_linear_subspace) == (2, 1, False)


class TestParseConeLiteral:
    def test_families(self):
        assert np.allclose(parse_cone_literal("orthant:3").generators, np.eye(3))
        assert parse_cone_literal("weyl-b:2").num_generators == 2
        sub = parse_cone_literal("subspace:1,2")
        assert structure(sub).is_linear_subspace

    def test_dict_literal(self):
        cone = parse_cone_literal(
            {"ambient_dim": 2, "generators": [[1, 0], [0, 1]]})
        assert cone.ambient_dim == 2

    def test_simplex_tangent_literal_is_deterministic(self):
        a = parse_cone_literal("simplex-tangent:4,3,1,9")
        b = parse_cone_literal("simplex-tangent:4,3,1,9")
        assert np.array_equal(a.generators, b.generators)
        assert a.ambient_dim == 3

    def test_malformed(self):
        for bad in ("orthant:x", "orthant", "unknown:3", "subspace:5"):
            with pytest.raises(ValueError):
                parse_cone_literal(bad)
