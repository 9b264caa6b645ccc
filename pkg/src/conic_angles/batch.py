"""Vectorized batch kernels for the Monte Carlo inner loops.

These run the same mathematics as the scalar predicates in
:mod:`conic_angles.feasible`, data-parallel across a batch of independent
samples: a batched two-phase simplex (one tableau per sample, every pivot
applied across the batch), a batched metric projection by enumeration of
independent generator subsets, and batched rank guards.

Scalar predicates remain the reference implementation; the equivalence of
the two paths is property-tested.  Inputs here come from continuous
distributions, so ties and degeneracies have probability zero.
"""

from __future__ import annotations

from itertools import combinations
from typing import TYPE_CHECKING

import numpy as np

from .feasible import FEAS_TOL, PIVOT_TOL, STRICT_TOL, SolverError

if TYPE_CHECKING:  # pragma: no cover
    from .cones import ConeVRep

_MAX_PIVOTS = 2000
_ENUM_LIMIT = 12  # generator count beyond which subset enumeration is refused


def _run_phase(T: np.ndarray, basis: np.ndarray, allowed: np.ndarray,
               costs: np.ndarray, idx: np.ndarray) -> None:
    """Pivot every listed tableau to optimality under the given costs.

    Bland's rule throughout: lowest eligible entering column, lowest basis
    index among exact ratio ties.  Samples drop out as they reach
    optimality; any sample exhausting the pivot cap raises.
    """
    work = idx
    for _ in range(_MAX_PIVOTS):
        if work.size == 0:
            return
        Tb = T[work]
        bas = basis[work]
        alw = allowed[work]
        reduced = costs[None, :] - np.einsum(
            "br,brw->bw", costs[bas], Tb[:, :, :-1])
        cand = alw & (reduced < -PIVOT_TOL)
        has = cand.any(axis=1)
        if not has.any():
            return
        work = work[has]
        Tb = Tb[has]
        bas = bas[has]
        alw = alw[has]
        enter = np.argmax(cand[has], axis=1)

        col = np.take_along_axis(
            Tb[:, :, :-1], enter[:, None, None], axis=2)[:, :, 0]
        rhs = Tb[:, :, -1]
        pos = col > PIVOT_TOL
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(pos, rhs / col, np.inf)
        if np.isinf(ratios).all(axis=1).any():
            raise SolverError("batched simplex: unbounded pivot column")
        rmin = ratios.min(axis=1)
        ties = ratios == rmin[:, None]
        leave = np.argmin(np.where(ties, bas, np.iinfo(np.int64).max), axis=1)

        ar = np.arange(work.size)
        piv = col[ar, leave]
        prow = Tb[ar, leave] / piv[:, None]
        Tb -= col[:, :, None] * prow[:, None, :]
        Tb[ar, leave] = prow
        leaving = bas[ar, leave]
        bas[ar, leave] = enter
        art_left = leaving >= costs.size - basis.shape[1]  # artificial index
        alw[ar[art_left], leaving[art_left]] = False

        T[work] = Tb
        basis[work] = bas
        allowed[work] = alw
    raise SolverError("batched simplex: pivot cap exceeded")


def _drive_out_artificials(T, basis, allowed, rows_body: int, cols_body: int,
                           idx: np.ndarray) -> None:
    """Pivot zero-level artificial basics onto body columns where possible.

    Degenerate pivots on a zero right-hand side preserve feasibility for
    any nonzero pivot entry; an all-zero row is redundant and stays inert.
    Rare (only for redundant or degenerate systems), so a scalar loop is fine.
    """
    for b in idx:
        for row in range(rows_body):
            if basis[b, row] < cols_body:
                continue
            eligible = np.where(allowed[b, :cols_body]
                                & (np.abs(T[b, row, :cols_body]) > PIVOT_TOL))[0]
            if eligible.size == 0:
                continue
            j = int(eligible[0])
            T[b, row] /= T[b, row, j]
            colv = T[b, :, j].copy()
            colv[row] = 0.0
            T[b] -= np.outer(colv, T[b, row])
            basis[b, row] = j


def positive_combination_mask(X: np.ndarray,
                              strict_tol: float = STRICT_TOL) -> np.ndarray:
    """For each sample, does a strictly positive mu with X mu = 0 exist?

    Solves max t s.t. X mu = 0, sum(mu) = 1, mu >= t per sample and tests
    t > strict_tol.  X has shape (batch, rows, m); zero rows make the
    answer trivially true.
    """
    X = np.asarray(X, dtype=float)
    B, r, m = X.shape
    if B == 0:
        return np.zeros(0, dtype=bool)
    if r == 0:
        return np.ones(B, dtype=bool)

    R = r + 1
    C = m + 2  # s variables, then t+ and t-
    T = np.zeros((B, R, C + R + 1))
    T[:, :r, :m] = X
    colsum = X.sum(axis=2)
    T[:, :r, m] = colsum
    T[:, :r, m + 1] = -colsum
    T[:, r, :m] = 1.0
    T[:, r, m] = float(m)
    T[:, r, m + 1] = -float(m)
    T[:, :, C:C + R] = np.eye(R)
    T[:, r, -1] = 1.0
    basis = np.tile(np.arange(C, C + R), (B, 1))
    allowed = np.ones((B, C + R), dtype=bool)

    phase1 = np.zeros(C + R)
    phase1[C:] = 1.0
    _run_phase(T, basis, allowed, phase1, np.arange(B))
    art_value = np.where(basis >= C, T[:, :, -1], 0.0).sum(axis=1)
    feasible = art_value <= FEAS_TOL

    stuck = np.where(feasible & (basis >= C).any(axis=1))[0]
    if stuck.size:
        _drive_out_artificials(T, basis, allowed, R, C, stuck)
    allowed[:, C:] = False

    # minimize -(t+ - t-)
    phase2 = np.zeros(C + R)
    phase2[m] = -1.0
    phase2[m + 1] = 1.0
    _run_phase(T, basis, allowed, phase2, np.where(feasible)[0])
    t_star = -np.einsum("br,br->b", phase2[basis], T[:, :, -1])
    return feasible & (t_star > strict_tol)


def nonneg_solution_mask(A: np.ndarray, z: np.ndarray,
                         tol: float = FEAS_TOL) -> np.ndarray:
    """For each sample, does mu >= 0 with A mu = z exist?  (phase one only)

    A has shape (batch, rows, m), z shape (batch, rows).  The feasibility
    tolerance scales with max(1, |z|).
    """
    A = np.asarray(A, dtype=float)
    z = np.asarray(z, dtype=float)
    B, r, m = A.shape
    if B == 0:
        return np.zeros(0, dtype=bool)
    flip = np.where(z < 0, -1.0, 1.0)
    R, C = r, m
    T = np.zeros((B, R, C + R + 1))
    T[:, :, :m] = A * flip[:, :, None]
    T[:, :, C:C + R] = np.eye(R)
    T[:, :, -1] = z * flip
    basis = np.tile(np.arange(C, C + R), (B, 1))
    allowed = np.ones((B, C + R), dtype=bool)
    phase1 = np.zeros(C + R)
    phase1[C:] = 1.0
    _run_phase(T, basis, allowed, phase1, np.arange(B))
    art_value = np.where(basis >= C, T[:, :, -1], 0.0).sum(axis=1)
    scale = np.maximum(1.0, np.linalg.norm(z, axis=1))
    return art_value <= tol * scale


def full_rank_mask(mats: np.ndarray, rank: int, tol: float = 1e-9) -> np.ndarray:
    """For each stacked matrix, is the numerical rank at least `rank`?"""
    mats = np.asarray(mats, dtype=float)
    B = mats.shape[0]
    if rank == 0:
        return np.ones(B, dtype=bool)
    if min(mats.shape[1], mats.shape[2]) < rank:
        return np.zeros(B, dtype=bool)
    svals = np.linalg.svd(mats, compute_uv=False)
    scale = np.maximum(svals[:, 0], 1e-300)
    return svals[:, rank - 1] > tol * scale


def origin_in_interior_mask(points: np.ndarray) -> np.ndarray:
    """Batched version of the interior-of-hull predicate.

    points has shape (batch, m, k): m points in R^k per sample.
    """
    points = np.asarray(points, dtype=float)
    k = points.shape[2]
    full = full_rank_mask(points, k, STRICT_TOL)
    strict = positive_combination_mask(np.swapaxes(points, 1, 2))
    return full & strict


def _independent_subsets(m: int, max_size: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for size in range(1, min(m, max_size) + 1):
        out.extend(combinations(range(m), size))
    return out


def cone_distances(cone: "ConeVRep", Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Squared distance and squared projection norm from each row of Z.

    Exact metric projection onto a fixed cone by enumerating generator
    subsets: the projection lies in the span of some independent active
    subset with nonnegative coefficients, so the feasible subset with the
    largest projected norm is the true projection.  Practical for the
    small generator counts used here (refuses more than 12).
    """
    gens = cone.generators
    m, n = gens.shape
    if m > _ENUM_LIMIT:
        raise ValueError(f"subset enumeration limited to {_ENUM_LIMIT} generators")
    unit = gens / np.linalg.norm(gens, axis=1)[:, None]
    Z = np.asarray(Z, dtype=float)
    best_pn = np.zeros(Z.shape[0])  # empty subset: projection zero
    best_proj = np.zeros_like(Z)
    for subset in _independent_subsets(m, n):
        sub = unit[list(subset)]
        pinv = np.linalg.pinv(sub.T)
        mu = Z @ pinv.T
        proj = mu @ sub
        ok = (mu >= -1e-12).all(axis=1)
        pn = np.einsum("bn,bn->b", proj, proj)
        better = ok & (pn > best_pn)
        best_pn = np.where(better, pn, best_pn)
        best_proj = np.where(better[:, None], proj, best_proj)
    # residuals computed directly: |z|^2 - |proj|^2 cancels catastrophically
    # for points inside the cone
    resid = Z - best_proj
    dist2 = np.einsum("bn,bn->b", resid, resid)
    return dist2, best_pn


def membership_mask(cone: "ConeVRep", Z: np.ndarray,
                    tol: float = 1e-8) -> np.ndarray:
    """Batched cone membership for a fixed cone."""
    Z = np.asarray(Z, dtype=float)
    dist2, _ = cone_distances(cone, Z)
    scale = np.maximum(1.0, np.linalg.norm(Z, axis=1))
    return np.sqrt(dist2) <= tol * scale
