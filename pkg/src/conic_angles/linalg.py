"""Dense small-matrix linear algebra and all randomness.

Every sampler is a pure function of its dimensions and an :class:`RngStream`,
so repeated calls with the same stream return the same values.  Streams are
keyed into a counter-based (Philox) generator, which makes substreams
independent and reproducible across platforms and thread counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Orthonormality tolerance for Subspace bases; dimensions stay small (<= ~16)
# so this is far from conditioning limits.
ORTHO_TOL = 1e-10

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """One round of SplitMix64; used to derive child stream indices."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible random stream: (seed, stream_index).

    The pair is used as a 128-bit Philox key, so distinct indices give
    statistically independent streams and the same pair always reproduces
    the same sequence.
    """

    seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.seed & _MASK64, self.stream_index & _MASK64], dtype=np.uint64
        )
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, index: int) -> "RngStream":
        """Derive an independent substream (for chunked / parallel work)."""
        mixed = _splitmix64((self.stream_index ^ _splitmix64(index + 1)) & _MASK64)
        return RngStream(self.seed, mixed)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^n stored as rows of an orthonormal basis."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        basis = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if basis.size == 0:
            basis = basis.reshape(0, self.ambient_dim)
        if basis.shape[1] != self.ambient_dim:
            raise ValueError(
                f"basis vectors have length {basis.shape[1]}, "
                f"ambient dimension is {self.ambient_dim}"
            )
        if basis.shape[0] > self.ambient_dim:
            raise ValueError("more basis vectors than ambient dimensions")
        gram = basis @ basis.T
        if gram.size and np.abs(gram - np.eye(basis.shape[0])).max() > ORTHO_TOL:
            raise ValueError("basis is not orthonormal")
        basis = basis.copy()
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        """The n x n orthogonal projector onto this subspace."""
        return self.basis.T @ self.basis


def sample_gaussian_matrix(k: int, n: int, rng: RngStream) -> np.ndarray:
    """A k x n matrix of i.i.d. standard normal entries."""
    if k < 1 or n < 1:
        raise ValueError("matrix dimensions must be >= 1")
    return rng.generator().standard_normal((k, n))


def sample_uniform_sphere(n: int, rng: RngStream) -> np.ndarray:
    """A uniform point on the unit sphere in R^n (normalized Gaussian)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    gen = rng.generator()
    while True:
        x = gen.standard_normal(n)
        norm = np.linalg.norm(x)
        if norm > 0.0:
            return x / norm


def sample_uniform_subspace(n: int, d: int, rng: RngStream) -> Subspace:
    """A Haar-distributed d-dimensional linear subspace of R^n.

    Orthonormalizes d i.i.d. Gaussian vectors; rotation invariance of the
    Gaussian makes the span uniform on the Grassmannian.
    """
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    if d == 0:
        return Subspace(n, np.zeros((0, n)))
    gen = rng.generator()
    while True:
        vectors = gen.standard_normal((d, n))
        sub = orthonormalize(vectors)
        if sub.dim == d:
            return Subspace(n, sub.basis)


def project_onto_subspace(x: np.ndarray, subspace: Subspace) -> np.ndarray:
    """Orthogonal projection of x onto the subspace."""
    x = np.asarray(x, dtype=float)
    if x.shape != (subspace.ambient_dim,):
        raise ValueError(
            f"vector has shape {x.shape}, expected ({subspace.ambient_dim},)"
        )
    return subspace.basis.T @ (subspace.basis @ x)


def orthonormalize(vectors, tol: float = ORTHO_TOL) -> Subspace:
    """Modified Gram-Schmidt with re-orthogonalization.

    Vectors whose residual falls below tol times the largest input norm are
    treated as dependent and dropped.
    """
    vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
    n = vecs.shape[1]
    scale = max(np.linalg.norm(vecs, axis=1).max(initial=0.0), 1e-300)
    kept: list[np.ndarray] = []
    for v in vecs:
        w = v.astype(float)
        for _ in range(2):  # re-orthogonalize once for stability
            for q in kept:
                w = w - (q @ w) * q
        norm = np.linalg.norm(w)
        if norm > tol * scale:
            kept.append(w / norm)
    basis = np.array(kept) if kept else np.zeros((0, n))
    return Subspace(n, basis)


def numerical_rank(matrix, tol: float = 1e-9) -> int:
    """Rank of a stack of row vectors: singular values above tol * max row norm."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    mat = np.atleast_2d(np.asarray(matrix, dtype=float))
    if mat.size == 0:
        return 0
    scale = np.linalg.norm(mat, axis=1).max()
    if scale == 0.0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.count_nonzero(s > tol * scale))
