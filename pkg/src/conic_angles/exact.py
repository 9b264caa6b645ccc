"""Closed-form Grassmann angles and conic intrinsic volumes.

Covers the families with known formulas (orthant, the order chamber of
type B, linear subspaces), the tail-sum transform between intrinsic
volumes and Grassmann angles, the regularized incomplete beta function,
and the two design matrices plus the simplex-constrained least-squares
inversion used by the Monte Carlo volume estimators.

All combinatorics are done in exact integer / rational arithmetic and
converted to floats at the end, so cancellation never degrades the
closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, exp, factorial, lgamma, log

import numpy as np

SUM_TOL = 1e-12
MAX_WEYL_N = 20


@dataclass(frozen=True)
class IntrinsicVolumes:
    """The weight vector (v_0, ..., v_n): nonnegative, summing to one."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("values must be a nonempty vector")
        if vals.min() < -SUM_TOL:
            raise ValueError(f"negative intrinsic volume: {vals.min()}")
        if abs(vals.sum() - 1.0) > 1e-9:
            raise ValueError(f"intrinsic volumes sum to {vals.sum()}, not 1")
        vals = np.clip(vals, 0.0, None)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def order(self) -> int:
        """Ambient dimension n (the vector has n + 1 entries)."""
        return self.values.size - 1

    def even_sum(self) -> float:
        return float(self.values[0::2].sum())

    def odd_sum(self) -> float:
        return float(self.values[1::2].sum())


@dataclass(frozen=True)
class AngleProfile:
    """The vector (gamma_0, ..., gamma_n) of Grassmann angles of one cone.

    Nonincreasing with gamma_n = 0; gamma_0 = 1 for every nontrivial cone
    (the all-zero profile of the trivial subspace is also admitted).
    """

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("values must be a nonempty vector")
        if vals.min() < -SUM_TOL or vals.max() > 1.0 + SUM_TOL:
            raise ValueError("angles must lie in [0, 1]")
        if (np.diff(vals) > SUM_TOL).any():
            raise ValueError("angles must be nonincreasing")
        if abs(vals[-1]) > SUM_TOL:
            raise ValueError("the top angle must vanish")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def order(self) -> int:
        return self.values.size - 1


# ---------------------------------------------------------------------------
# Rational tables (exact), used by the float API and the CLI renderer
# ---------------------------------------------------------------------------

def orthant_volume_fractions(n: int) -> list[Fraction]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return [Fraction(comb(n, k), 2 ** n) for k in range(n + 1)]


def orthant_gamma_fractions(n: int) -> list[Fraction]:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [Fraction(sum(comb(n - 1, i) for i in range(k, n)), 2 ** (n - 1))
           for k in range(n)]
    return out + [Fraction(0)]


def weyl_b_coefficients(n: int) -> list[int]:
    """Coefficients B(n, 0..n) of (t+1)(t+3)...(t+2n-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_WEYL_N:
        raise OverflowError(
            f"coefficients grow past the supported range for n > {MAX_WEYL_N}"
        )
    coeffs = [1]
    for i in range(1, n + 1):
        root = 2 * i - 1
        nxt = [0] * (len(coeffs) + 1)
        for p, c in enumerate(coeffs):
            nxt[p] += root * c
            nxt[p + 1] += c
        coeffs = nxt
    return coeffs


def weyl_b_volume_fractions(n: int) -> list[Fraction]:
    coeffs = weyl_b_coefficients(n)
    denom = 2 ** n * factorial(n)
    return [Fraction(c, denom) for c in coeffs]


def weyl_b_gamma_fractions(n: int) -> list[Fraction]:
    coeffs = weyl_b_coefficients(n)
    denom = 2 ** n * factorial(n)
    out = [Fraction(2 * sum(coeffs[k + 1::2]), denom) for k in range(n)]
    return out + [Fraction(0)]


def subspace_gamma_fractions(m: int, n: int) -> list[Fraction]:
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    return [Fraction(1 if k < m else 0) for k in range(n + 1)]


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def orthant_intrinsic_volumes(n: int) -> IntrinsicVolumes:
    """v_k = C(n, k) / 2^n for the nonnegative orthant in R^n."""
    return IntrinsicVolumes(np.array([float(f) for f in
                                      orthant_volume_fractions(n)]))


def orthant_grassmann(n: int) -> AngleProfile:
    """gamma_k = 2^(1-n) * sum_{i >= k} C(n-1, i) for the orthant."""
    return AngleProfile(np.array([float(f) for f in
                                  orthant_gamma_fractions(n)]))


def weyl_b_intrinsic_volumes(n: int) -> IntrinsicVolumes:
    """v_k = B(n, k) / (2^n n!) for the chamber {t_1 >= ... >= t_n >= 0}."""
    return IntrinsicVolumes(np.array([float(f) for f in
                                      weyl_b_volume_fractions(n)]))


def weyl_b_grassmann(n: int) -> AngleProfile:
    """gamma_k = 2 (B(n,k+1) + B(n,k+3) + ...) / (2^n n!)."""
    return AngleProfile(np.array([float(f) for f in
                                  weyl_b_gamma_fractions(n)]))


def subspace_grassmann(m: int, n: int) -> AngleProfile:
    """Angles of an m-dimensional subspace of R^n: m ones, then zeros."""
    return AngleProfile(np.array([float(f) for f in
                                  subspace_gamma_fractions(m, n)]))


def crofton_from_v(volumes: IntrinsicVolumes,
                   is_subspace: bool = False) -> AngleProfile:
    """Grassmann angles as doubled alternating tail sums of the volumes.

    gamma_k = 2 (v_{k+1} + v_{k+3} + ...).  A linear subspace instead has
    the step profile: ones up to its dimension, then zeros.
    """
    v = volumes.values
    n = volumes.order
    if is_subspace:
        m = int(np.argmax(v))
        if abs(v[m] - 1.0) > 1e-9 or abs(v.sum() - v[m]) > 1e-9:
            raise ValueError("a subspace has a single unit intrinsic volume")
        return subspace_grassmann(m, n)
    gamma = np.array([2.0 * v[k + 1::2].sum() for k in range(n + 1)])
    return AngleProfile(gamma)


def wendel_absorption(n: int, k: int) -> float:
    """Probability that n Gaussian points in R^k surround the origin.

    Equals 2^(1-n) * sum_{i=k}^{n-1} C(n-1, i); also the k-th Grassmann
    angle of the orthant in R^n.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    return float(Fraction(sum(comb(n - 1, i) for i in range(k, n)),
                          2 ** (n - 1)))


# ---------------------------------------------------------------------------
# Regularized incomplete beta
# ---------------------------------------------------------------------------

def _beta_continued_fraction(a: float, b: float, x: float,
                             max_iter: int = 300, eps: float = 1e-15) -> float:
    """Modified Lentz evaluation of the incomplete-beta continued fraction."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """The regularized incomplete beta function I_x(a, b), a, b > 0."""
    if a <= 0 or b <= 0:
        raise ValueError("beta parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (lgamma(a + b) - lgamma(a) - lgamma(b)
                + a * log(x) + b * log(1.0 - x))
    if x < (a + 1.0) / (a + b + 2.0):
        return exp(ln_front) * _beta_continued_fraction(a, b, x) / a
    return 1.0 - exp(ln_front) * _beta_continued_fraction(b, a, 1.0 - x) / b


# ---------------------------------------------------------------------------
# Design matrices and the constrained inversion
# ---------------------------------------------------------------------------

def _distance_mixture_cdf(k: int, n: int, r: float) -> float:
    """CDF at r of the squared sphere-to-cone distance on the k-stratum.

    On the stratum where the projection has dimension k, the squared
    distance of a uniform sphere point follows Beta((n-k)/2, k/2).  The
    edge strata are degenerate: k = n is a point mass at 0 (the point lands
    inside the cone) and k = 0 a point mass at 1 (the projection vanishes).
    """
    if k == n:
        return 1.0
    if k == 0:
        return 1.0 if r >= 1.0 else 0.0
    return reg_inc_beta((n - k) / 2.0, k / 2.0, r)


def steiner_design_matrix(n: int, r_grid) -> np.ndarray:
    """Rows index grid radii, columns the strata k = 0..n.

    Entry (j, k) is the k-stratum CDF at r_j, so that the distance CDF of a
    cone is this matrix applied to its intrinsic-volume vector.
    """
    grid = np.asarray(r_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("r_grid must be a nonempty vector")
    if grid.min() <= 0.0 or grid.max() > 1.0:
        raise ValueError("grid radii must lie in (0, 1]")
    if (np.diff(grid) <= 0).any():
        raise ValueError("grid radii must be strictly increasing")
    return np.array([[_distance_mixture_cdf(k, n, r) for k in range(n + 1)]
                     for r in grid])


def mgf_design_matrix(n: int, r_grid) -> np.ndarray:
    """Vandermonde rows (1, r, r^2, ..., r^n) over the grid."""
    grid = np.asarray(r_grid, dtype=float)
    if grid.ndim != 1 or np.unique(grid).size < n + 1:
        raise ValueError(f"need at least {n + 1} distinct grid values")
    if grid.min() <= 0.0:
        raise ValueError("grid values must be positive")
    return np.vander(grid, n + 1, increasing=True)


def default_steiner_grid(num: int = 12) -> np.ndarray:
    """Equispaced radii in (0, 1]; the squared distance never exceeds 1."""
    return np.arange(1, num + 1) / float(num)


def default_mgf_grid(n: int) -> np.ndarray:
    """Moment-curve radii in [0.1, 1.4] with r = 1 forced into the grid.

    The curve value at small r approaches the bottom volume and those rows
    are bounded, while variance blows up past sqrt(2); an overdetermined
    spread over [0.1, 1.4] keeps the constrained inversion conditioned at
    realistic sample sizes, where a minimal n+1-point grid does not.  The
    r = 1 row is a zero-variance consistency row.
    """
    grid = np.linspace(0.1, 1.4, max(16, 2 * n + 8))
    nearest = int(np.argmin(np.abs(grid - 1.0)))
    if abs(grid[nearest] - 1.0) < 1e-9:
        grid[nearest] = 1.0
    else:
        grid = np.sort(np.append(grid, 1.0))
    return grid


class SolverFailure(RuntimeError):
    """The constrained least-squares iteration failed to converge."""


def parity_equalities(n: int) -> tuple[np.ndarray, np.ndarray]:
    """The even-index mass constraint: v_0 + v_2 + ... = 1/2.

    Together with the unit total this pins both parity sums at 1/2, an
    identity satisfied by every cone that is not a linear subspace.
    """
    row = np.zeros((1, n + 1))
    row[0, 0::2] = 1.0
    return row, np.array([0.5])


def solve_simplex_constrained_ls(A: np.ndarray, b: np.ndarray,
                                 kkt_tol: float = 1e-9,
                                 extra_equalities: tuple[np.ndarray, np.ndarray]
                                 | None = None) -> IntrinsicVolumes:
    """Least squares over the probability simplex {v >= 0, sum v = 1}.

    Primal active-set iteration on the strictly convex QP; finite
    termination since the objective strictly decreases between working
    sets.  Raises on rank-deficient designs.

    `extra_equalities = (C, d)` appends equality rows C v = d to the
    simplex constraint, for identities the caller knows the solution
    satisfies (see :func:`parity_equalities`).
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, p = A.shape
    if b.shape != (m,):
        raise ValueError("right-hand side does not match the design matrix")
    if np.linalg.matrix_rank(A) < p:
        raise ValueError("design matrix is rank deficient")

    C = np.ones((1, p))
    d = np.ones(1)
    if extra_equalities is not None:
        C = np.concatenate(
            [C, np.atleast_2d(np.asarray(extra_equalities[0], dtype=float))])
        d = np.concatenate(
            [d, np.atleast_1d(np.asarray(extra_equalities[1], dtype=float))])
    q = C.shape[0]

    gram = A.T @ A
    target = A.T @ b
    scale = max(1.0, float(np.abs(gram).max()), float(np.abs(target).max()))
    kkt_tol = kkt_tol * scale
    x = np.linalg.lstsq(C, d, rcond=None)[0]  # feasible start
    if x.min() < 0.0 or np.abs(C @ x - d).max() > 1e-9:
        raise SolverFailure("equality constraints admit no interior start")
    active = np.zeros(p, dtype=bool)

    def solve_on_free(free: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # stationarity on the free set: (G v - h)_F = (C^T lam)_F
        idx = np.where(free)[0]
        f = idx.size
        kkt = np.zeros((f + q, f + q))
        kkt[:f, :f] = gram[np.ix_(idx, idx)]
        kkt[:f, f:] = -C[:, idx].T
        kkt[f:, :f] = C[:, idx]
        rhs = np.concatenate([target[idx], d])
        try:
            sol = np.linalg.solve(kkt, rhs)
        except np.linalg.LinAlgError as exc:
            raise SolverFailure(f"singular working-set system: {exc}") from exc
        full = np.zeros(p)
        full[idx] = sol[:f]
        return full, sol[f:]

    for _ in range(10 * p * p + 20):
        free = ~active
        candidate, lam = solve_on_free(free)
        if candidate[free].min(initial=1.0) >= -kkt_tol:
            x = np.where(free, candidate, 0.0)
            multipliers = gram @ x - target - C.T @ lam
            blocked = active & (multipliers < -kkt_tol)
            if not blocked.any():
                break
            release = int(np.argmin(np.where(blocked, multipliers, np.inf)))
            active[release] = False
            continue
        # step from x toward the candidate until a free coordinate hits zero
        with np.errstate(divide="ignore", invalid="ignore"):
            steps = np.where(free & (candidate <= 0.0) & (candidate < x),
                             x / (x - candidate), np.inf)
        alpha = min(1.0, float(steps.min()))
        x = x + alpha * (candidate - x)
        hit = free & (candidate <= 0.0) & (x <= kkt_tol)
        if not hit.any():
            raise SolverFailure("constrained least squares made no progress")
        active |= hit
        x[active] = 0.0
    else:
        raise SolverFailure("constrained least squares iteration cap exceeded")

    x = np.clip(x, 0.0, None)
    x /= x.sum()
    return IntrinsicVolumes(x)
