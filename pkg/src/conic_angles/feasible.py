"""Geometric predicates and the small dense solvers behind them.

Two solvers carry everything: an active-set nonnegative least squares
(metric projection onto a finitely generated cone) and a two-phase dense
simplex with Bland's rule.  The predicates built on top decide cone
membership, whether the origin lies in the interior of a convex hull, and
whether the relative interior of a cone meets a linear subspace.

All problems here are tiny (tens of variables); robustness beats speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .linalg import Subspace, numerical_rank

if TYPE_CHECKING:  # pragma: no cover
    from .cones import ConeVRep

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-7
# Threshold for strict "t > 0" decisions.  Boundary events have probability
# zero under every sampling distribution used, so this only controls
# numerics, never statistics.
STRICT_TOL = 1e-9
MEMBERSHIP_TOL = 1e-8


class SolverError(RuntimeError):
    """An iterative solver failed to terminate within its cap."""


@dataclass(frozen=True)
class NnlsResult:
    """Nonnegative least-squares fit: coefficients, projection, residual."""

    coefficients: np.ndarray
    projection: np.ndarray
    residual_norm: float


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: float
    solution: np.ndarray | None


def nnls(G: np.ndarray, z: np.ndarray, tol: float = 1e-10,
         max_iter: int | None = None) -> NnlsResult:
    """Solve min_{mu >= 0} |z - G mu| by Lawson-Hanson active sets.

    Columns of G are the atoms.  Terminates at KKT optimality: mu >= 0,
    G^T (z - G mu) <= tol componentwise (scaled), complementary slackness.
    Raises SolverError if the iteration cap (10 * m * n) is exceeded.
    """
    G = np.asarray(G, dtype=float)
    z = np.asarray(z, dtype=float)
    if G.ndim != 2 or G.shape[1] < 1:
        raise ValueError("G must be a matrix with at least one column")
    n, m = G.shape
    if z.shape != (n,):
        raise ValueError(f"z has shape {z.shape}, expected ({n},)")
    if max_iter is None:
        max_iter = max(10 * m * n, 50)

    scale = max(1.0, float(np.linalg.norm(z)))
    col_scale = max(1.0, float(np.abs(G).max(initial=0.0)))
    ktol = tol * scale * col_scale

    x = np.zeros(m)
    passive = np.zeros(m, dtype=bool)
    iters = 0
    while True:
        w = G.T @ (z - G @ x)
        candidates = ~passive & (w > ktol)
        if not candidates.any():
            break
        j = int(np.argmax(np.where(candidates, w, -np.inf)))
        passive[j] = True
        while True:
            iters += 1
            if iters > max_iter:
                raise SolverError("nnls: iteration cap exceeded")
            s = np.zeros(m)
            sol, *_ = np.linalg.lstsq(G[:, passive], z, rcond=None)
            s[passive] = sol
            if sol.size == 0 or sol.min() > 0.0:
                x = s
                break
            # step from x toward s until a passive coefficient hits zero
            mask = passive & (s <= 0.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(mask, x / (x - s), np.inf)
            alpha = float(ratios.min())
            x = x + alpha * (s - x)
            passive &= x > ktol
            x[~passive] = 0.0

    proj = G @ x
    return NnlsResult(x, proj, float(np.linalg.norm(z - proj)))


def _normalized_generators(cone: "ConeVRep") -> tuple[np.ndarray, np.ndarray]:
    gens = cone.generators
    norms = np.linalg.norm(gens, axis=1)
    return gens / norms[:, None], norms


def project_onto_cone(cone: "ConeVRep", z: np.ndarray) -> NnlsResult:
    """Metric projection of z onto the cone (coefficients per generator)."""
    z = np.asarray(z, dtype=float)
    if z.shape != (cone.ambient_dim,):
        raise ValueError(f"point has shape {z.shape}, cone lives in "
                         f"R^{cone.ambient_dim}")
    unit, norms = _normalized_generators(cone)
    result = nnls(unit.T, z)
    # report coefficients relative to the original, unnormalized generators
    return NnlsResult(result.coefficients / norms, result.projection,
                      result.residual_norm)


def dist2(cone: "ConeVRep", z: np.ndarray) -> float:
    """Squared Euclidean distance from z to the cone."""
    return project_onto_cone(cone, z).residual_norm ** 2


def proj_norm2(cone: "ConeVRep", z: np.ndarray) -> float:
    """Squared norm of the metric projection of z onto the cone."""
    return float(np.linalg.norm(project_onto_cone(cone, z).projection) ** 2)


def cone_contains(cone: "ConeVRep", z: np.ndarray,
                  tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership test: projection residual below tol * max(1, |z|)."""
    z = np.asarray(z, dtype=float)
    res = project_onto_cone(cone, z)
    return res.residual_norm <= tol * max(1.0, float(np.linalg.norm(z)))


# ---------------------------------------------------------------------------
# Two-phase simplex
# ---------------------------------------------------------------------------

def _simplex_min(c: np.ndarray, A: np.ndarray, b: np.ndarray,
                 max_iter: int | None = None) -> tuple[str, np.ndarray | None]:
    """Minimize c @ x subject to A x = b, x >= 0.

    Textbook dense two-phase simplex.  Bland's rule (lowest eligible index
    entering, lowest basis index on ratio ties) guarantees termination;
    redundant equality rows are detected after phase one and left inert.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if max_iter is None:
        max_iter = 500 + 100 * (m + n)

    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # tableau: original columns | artificial columns | rhs
    T = np.zeros((m, n + m + 1))
    T[:, :n] = A
    T[:, n:n + m] = np.eye(m)
    T[:, -1] = b
    basis = list(range(n, n + m))
    allowed = np.ones(n + m, dtype=bool)
    iters = 0

    def pivot(row: int, col: int) -> None:
        T[row] /= T[row, col]
        other = T[:, col].copy()
        other[row] = 0.0
        T[:, :] -= np.outer(other, T[row])
        basis[row] = col

    def run(costs: np.ndarray) -> str:
        nonlocal iters
        while True:
            iters += 1
            if iters > max_iter:
                raise SolverError("simplex: iteration cap exceeded")
            reduced = costs - costs[basis] @ T[:, :-1]
            eligible = np.where(allowed & (reduced < -PIVOT_TOL))[0]
            if eligible.size == 0:
                return "optimal"
            j = int(eligible[0])
            col = T[:, j]
            rows = np.where(col > PIVOT_TOL)[0]
            if rows.size == 0:
                return "unbounded"
            ratios = T[rows, -1] / col[rows]
            rmin = ratios.min()
            ties = rows[ratios == rmin]
            row = int(ties[np.argmin([basis[i] for i in ties])])
            pivot(row, j)

    # phase one: minimize the artificial total
    costs1 = np.concatenate([np.zeros(n), np.ones(m)])
    if run(costs1) != "optimal":
        raise SolverError("simplex: phase one did not terminate at an optimum")
    infeas = float(costs1[basis] @ T[:, -1])
    if infeas > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
        return "infeasible", None

    # drive artificials out of the basis; an all-zero row is redundant
    for row in range(m):
        if basis[row] >= n:
            pivots = np.where(allowed[:n] & (np.abs(T[row, :n]) > PIVOT_TOL))[0]
            if pivots.size:
                pivot(row, int(pivots[0]))
    allowed[n:] = False

    costs2 = np.concatenate([c, np.zeros(m)])
    status = run(costs2)
    if status != "optimal":
        return status, None
    x = np.zeros(n + m)
    x[basis] = T[:, -1]
    return "optimal", x[:n]


def lp_solve(objective, equality_constraints, rhs,
             lower_bounds=None) -> LpResult:
    """Maximize objective @ x subject to equality constraints and x_i >= lb_i.

    Lower bounds may be finite (variable is shifted) or -inf (variable is
    split into a difference of nonnegatives).  Default bound is 0.
    """
    c = np.asarray(objective, dtype=float)
    A = np.atleast_2d(np.asarray(equality_constraints, dtype=float))
    b = np.asarray(rhs, dtype=float)
    n = c.shape[0]
    if A.shape[1] != n or b.shape[0] != A.shape[0]:
        raise ValueError("inconsistent LP dimensions")
    lb = (np.zeros(n) if lower_bounds is None
          else np.asarray(lower_bounds, dtype=float))

    free = np.isinf(lb)
    shift = np.where(free, 0.0, lb)
    b_std = b - A @ shift
    # columns: shifted bounded vars, then (u, v) pairs for each free var
    A_std = np.concatenate([A, A[:, free], -A[:, free]], axis=1)
    c_std = np.concatenate([c, c[free], -c[free]])
    c_std[:n][free] = 0.0
    A_std[:, :n][:, free] = 0.0

    status, x_std = _simplex_min(-c_std, A_std, b_std)
    if status != "optimal":
        return LpResult(status, float("nan"), None)
    x = x_std[:n] + shift
    nfree = int(free.sum())
    if nfree:
        x[free] = x_std[n:n + nfree] - x_std[n + nfree:n + 2 * nfree]
    return LpResult("optimal", float(c @ x), x)


def _strict_combination_value(X: np.ndarray) -> tuple[str, float]:
    """Max t such that X mu = 0, sum(mu) = 1, mu >= t componentwise.

    A strictly positive optimum certifies that zero is a strictly positive
    combination of the columns of X; infeasibility means zero is not even an
    affine combination.  Substituting s = mu - t keeps the LP in bounded
    variables with one free t.
    """
    r, m = X.shape
    col_sum = X.sum(axis=1)
    A = np.zeros((r + 1, m + 1))
    A[:r, :m] = X
    A[:r, m] = col_sum
    A[r, :m] = 1.0
    A[r, m] = m
    b = np.zeros(r + 1)
    b[r] = 1.0
    objective = np.zeros(m + 1)
    objective[m] = 1.0
    lb = np.zeros(m + 1)
    lb[m] = -np.inf
    res = lp_solve(objective, A, b, lb)
    if res.status == "unbounded":  # cannot happen: t <= 1/m
        raise SolverError("relint LP reported unbounded")
    return res.status, res.objective


def origin_in_interior_of_hull(points) -> bool:
    """Is the origin in the interior of the convex hull of the points?

    Solves max t s.t. sum(lambda_i x_i) = 0, sum(lambda_i) = 1,
    lambda_i >= t, and requires t > STRICT_TOL.  The LP alone certifies the
    origin in the *relative* interior, so a full-rank check is added; the
    two differ only on rank-deficient point sets.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 1:
        raise ValueError("need at least one point")
    k = pts.shape[1]
    if numerical_rank(pts, STRICT_TOL) < k:
        return False
    status, value = _strict_combination_value(pts.T)
    return status == "optimal" and value > STRICT_TOL


def relint_meets_subspace(cone: "ConeVRep", subspace: Subspace) -> bool:
    """Does the relative interior of the cone meet the subspace?

    Uses the classical description relint(pos{g_i}) = {sum mu_i g_i : mu > 0}
    for finite generator sets: the relative interior meets W exactly when
    some strictly positive, normalizable combination lands in W, i.e. when
    max t s.t. (I - P_W) G mu = 0, sum(mu) = 1, mu >= t has optimum > 0.

    Callers must route cones that are themselves linear subspaces to the
    closed-form profile instead; for those, 0 lies in the relative interior
    and this test degenerates to `True` for every W.
    """
    if cone.ambient_dim != subspace.ambient_dim:
        raise ValueError("cone and subspace live in different dimensions")
    unit, _ = _normalized_generators(cone)
    residual = np.eye(cone.ambient_dim) - subspace.projector()
    X = residual @ unit.T  # one column per generator
    status, value = _strict_combination_value(X)
    return status == "optimal" and value > STRICT_TOL
