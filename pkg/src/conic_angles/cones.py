"""Cone representations, named cone families, and structural queries.

Cones are kept in V-representation only: a finite list of generators whose
nonnegative combinations make up the cone.  Generators are stored exactly as
constructed (unnormalized); predicates normalize internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import feasible
from .linalg import RngStream, numerical_rank

DEFAULT_TOL = 1e-9


class DegenerateConeError(ValueError):
    """A construction produced the trivial cone {0}."""


@dataclass(frozen=True)
class ConeVRep:
    """A polyhedral cone pos(generators) in R^n, generators as rows."""

    ambient_dim: int
    generators: np.ndarray = field(repr=False)

    def __post_init__(self):
        gens = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if gens.shape[0] < 1:
            raise DegenerateConeError("a cone needs at least one generator")
        if gens.shape[1] != self.ambient_dim:
            raise ValueError(
                f"generators have length {gens.shape[1]}, "
                f"ambient dimension is {self.ambient_dim}"
            )
        if not np.isfinite(gens).all():
            raise ValueError("generators must be finite")
        if (np.linalg.norm(gens, axis=1) == 0.0).any():
            raise ValueError("zero generators are not allowed")
        gens = gens.copy()
        gens.flags.writeable = False
        object.__setattr__(self, "generators", gens)

    @property
    def num_generators(self) -> int:
        return self.generators.shape[0]


@dataclass(frozen=True)
class ConeStructure:
    dim: int
    lineality_dim: int
    is_linear_subspace: bool


def orthant(n: int) -> ConeVRep:
    """The nonnegative orthant [0, inf)^n, generated by the standard basis."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return ConeVRep(n, np.eye(n))


def weyl_chamber_b(n: int) -> ConeVRep:
    """The chamber {t_1 >= t_2 >= ... >= t_n >= 0}.

    Generated by the partial sums e_1, e_1+e_2, ..., e_1+...+e_n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return ConeVRep(n, np.tril(np.ones((n, n))))


def linear_subspace_cone(basis) -> ConeVRep:
    """The cone equal to span(basis), generated by +/- each basis vector."""
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    n = basis.shape[1]
    if numerical_rank(basis, DEFAULT_TOL) < basis.shape[0]:
        raise ValueError("basis vectors are linearly dependent")
    return ConeVRep(n, np.concatenate([basis, -basis], axis=0))


def simplex_tangent_cone(points, face_size: int) -> ConeVRep:
    """Feasible-direction cone of a simplex at one of its faces.

    Given the n vertices and a face spanned by the first `face_size` of
    them, the cone is pos(X_i - mean(X_1..X_face_size) : i = 1..n) with any
    zero generators (the face_size = 1 self-difference) removed.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[0]
    if not 1 <= face_size <= n:
        raise ValueError(f"face_size must be in 1..{n}, got {face_size}")
    center = pts[:face_size].mean(axis=0)
    gens = pts - center
    norms = np.linalg.norm(gens, axis=1)
    gens = gens[norms > 1e-12 * max(1.0, norms.max())]
    if gens.shape[0] == 0:
        raise DegenerateConeError("all tangent directions vanish")
    return ConeVRep(pts.shape[1], gens)


def apply_linear_map(A: np.ndarray, cone: ConeVRep) -> ConeVRep:
    """The image cone pos(A g_1, ..., A g_m), dropping zero images."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[1] != cone.ambient_dim:
        raise ValueError(
            f"map has {A.shape[1] if A.ndim == 2 else '?'} columns, "
            f"cone lives in R^{cone.ambient_dim}"
        )
    images = cone.generators @ A.T
    norms = np.linalg.norm(images, axis=1)
    keep = norms > 1e-12 * max(1.0, float(norms.max(initial=0.0)))
    if not keep.any():
        raise DegenerateConeError("every generator maps to zero")
    return ConeVRep(A.shape[0], images[keep])


def structure(cone: ConeVRep, tol: float = DEFAULT_TOL) -> ConeStructure:
    """Dimension, lineality dimension, and the linear-subspace flag.

    The lineality space of pos{g_i} is spanned exactly by the generators
    whose negations also belong to the cone, so its dimension is the rank
    of that sub-list.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    dim = numerical_rank(cone.generators, tol)
    symmetric = [g for g in cone.generators
                 if feasible.cone_contains(cone, -g)]
    lineality = numerical_rank(np.array(symmetric), tol) if symmetric else 0
    return ConeStructure(dim, lineality, lineality == dim)


def parse_cone_literal(literal, rng_seed_offset: int = 0) -> ConeVRep:
    """Build a cone from its CLI/JSON literal.

    Accepts a dict {"ambient_dim": n, "generators": [[...], ...]} or a
    family string: "orthant:n", "weyl-b:n", "subspace:d,n",
    "simplex-tangent:n,k,ell,seed" (n Gaussian points in R^k, face of
    dimension ell, points drawn from the given seed).
    """
    if isinstance(literal, ConeVRep):
        return literal
    if isinstance(literal, dict):
        return ConeVRep(int(literal["ambient_dim"]),
                        np.asarray(literal["generators"], dtype=float))
    if not isinstance(literal, str):
        raise ValueError(f"unsupported cone literal: {literal!r}")
    name, _, argstr = literal.partition(":")
    try:
        args = [int(a) for a in argstr.split(",")] if argstr else []
        if name == "orthant":
            (n,) = args
            return orthant(n)
        if name == "weyl-b":
            (n,) = args
            return weyl_chamber_b(n)
        if name == "subspace":
            d, n = args
            return linear_subspace_cone(np.eye(n)[:d])
        if name == "simplex-tangent":
            n, k, ell, seed = args
            stream = RngStream(seed, rng_seed_offset)
            points = stream.generator().standard_normal((n, k))
            return simplex_tangent_cone(points, ell + 1)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"malformed cone literal {literal!r}: {exc}") from exc
    raise ValueError(f"unknown cone family {name!r}")
