"""Small-scale exact geometry of 3-D polytopes.

Half-space intersections are tiny here (at most a dozen constraints), so
vertices are enumerated directly: every triple of constraints with
linearly independent normals is solved as a 3x3 system and the solution
is kept iff it satisfies all constraints.  Geometric vertices where more
than three constraints are tight are reported once via deduplication.

Boundedness is decided from the recession cone {d : A d <= 0}: it is
nontrivial iff A has a nonzero null vector or some edge direction
cross(n_i, n_j) recedes.  Emptiness falls back to one feasibility LP.

Convex hulls of point clouds go through Qhull with an explicit rank
reduction for degenerate (collinear/coplanar) inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

__all__ = [
    "HalfSpace3",
    "HPolytope3",
    "VertexSet",
    "enumerate_vertices",
    "contains",
    "convex_hull",
    "hull_halfspaces",
    "hull_contains",
    "write_vertices_csv",
]

FEAS_TOL = 1e-9
RANK_TOL = 1e-10
DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class HalfSpace3:
    """One constraint normal . x <= offset."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        if n.shape != (3,):
            raise ValueError("normal must be a 3-vector")
        if not np.any(n != 0.0):
            raise ValueError("normal must be nonzero")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True)
class HPolytope3:
    """Intersection of half-spaces {x : A x <= b} in R^3."""

    halfspaces: tuple[HalfSpace3, ...]

    def __post_init__(self):
        object.__setattr__(self, "halfspaces", tuple(self.halfspaces))
        if not self.halfspaces:
            raise ValueError("a polytope needs at least one half-space")

    @classmethod
    def from_arrays(cls, A: np.ndarray, b: np.ndarray) -> "HPolytope3":
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float).ravel()
        return cls(tuple(HalfSpace3(row, off) for row, off in zip(A, b)))

    @property
    def A(self) -> np.ndarray:
        return np.array([h.normal for h in self.halfspaces])

    @property
    def b(self) -> np.ndarray:
        return np.array([h.offset for h in self.halfspaces])

    def with_halfspaces(self, extra: Iterable[HalfSpace3]) -> "HPolytope3":
        return HPolytope3(self.halfspaces + tuple(extra))


@dataclass(frozen=True)
class VertexSet:
    """Deduplicated vertex list; ``status`` records degenerate outcomes.

    status is "bounded" for an ordinary polytope, "empty" when the
    constraint set is infeasible and "unbounded" when the recession cone
    is nontrivial (no vertex list is reported in that case).
    """

    points: np.ndarray
    dedup_tolerance: float = DEDUP_TOL
    status: str = "bounded"

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float).reshape(-1, 3)
        object.__setattr__(self, "points", p)

    def __len__(self) -> int:
        return self.points.shape[0]


def _dedup_and_sort(points: np.ndarray, tol: float) -> np.ndarray:
    """Keep one representative per tol-cluster, lexicographically sorted."""
    if points.size == 0:
        return points.reshape(0, 3)
    points = points + 0.0  # clear negative zeros
    kept: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol for q in kept):
            kept.append(p)
    arr = np.array(kept)
    order = np.lexsort((arr[:, 2], arr[:, 1], arr[:, 0]))
    return arr[order]


def _recession_nontrivial(A: np.ndarray, tol: float = 1e-10) -> bool:
    # lineality: nonzero d with A d = 0
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.size < 3 or sv[-1] < 1e-10 * max(sv[0], 1.0):
        null = np.linalg.svd(A)[2][-1]
        if np.all(np.abs(A @ null) <= tol):
            return True
    # pointed-cone extreme rays lie on two constraint planes
    m = A.shape[0]
    for i, j in itertools.combinations(range(m), 2):
        d = np.cross(A[i], A[j])
        norm = np.linalg.norm(d)
        if norm < 1e-12:
            continue
        d = d / norm
        if np.all(A @ d <= tol) or np.all(A @ -d <= tol):
            return True
    return False


def _feasible(A: np.ndarray, b: np.ndarray) -> bool:
    res = linprog(
        c=np.zeros(3), A_ub=A, b_ub=b, bounds=[(None, None)] * 3, method="highs"
    )
    return res.status == 0


def enumerate_vertices(
    p: HPolytope3,
    feas_tol: float = FEAS_TOL,
    rank_tol: float = RANK_TOL,
    dedup_tol: float = DEDUP_TOL,
) -> VertexSet:
    """Vertices of a bounded polytope by active-constraint triples.

    Every 3-subset of constraints whose normals pass an SVD rank test
    (smallest singular value above ``rank_tol``) is solved; solutions
    violating any constraint by more than ``feas_tol`` are discarded.
    Empty or unbounded inputs give an empty VertexSet whose ``status``
    says which case occurred.
    """
    A, b = p.A, p.b
    if _recession_nontrivial(A):
        if not _feasible(A, b):
            return VertexSet(np.empty((0, 3)), dedup_tol, status="empty")
        return VertexSet(np.empty((0, 3)), dedup_tol, status="unbounded")

    m = A.shape[0]
    triples = list(itertools.combinations(range(m), 3))
    if not triples:
        return VertexSet(np.empty((0, 3)), dedup_tol, status="empty")
    idx = np.array(triples)
    A3 = A[idx]  # (T, 3, 3)
    b3 = b[idx]  # (T, 3)
    sv = np.linalg.svd(A3, compute_uv=False)
    regular = sv[:, -1] > rank_tol
    candidates = np.empty((0, 3))
    if np.any(regular):
        sols = np.linalg.solve(A3[regular], b3[regular][..., None])[..., 0]
        ok = np.all(sols @ A.T <= b[None, :] + feas_tol, axis=1)
        candidates = sols[ok]
    if candidates.shape[0] == 0:
        status = "empty" if not _feasible(A, b) else "degenerate"
        return VertexSet(np.empty((0, 3)), dedup_tol, status=status)
    return VertexSet(_dedup_and_sort(candidates, dedup_tol), dedup_tol)


def contains(p: HPolytope3, point: Sequence[float], tol: float = FEAS_TOL) -> bool:
    """True iff the point satisfies every half-space within ``tol``."""
    x = np.asarray(point, dtype=float)
    return bool(np.all(p.A @ x <= p.b + tol))


def _rank_basis(points: np.ndarray, tol: float):
    center = points.mean(axis=0)
    centered = points - center
    u, s, vt = np.linalg.svd(centered, full_matrices=False)
    scale = max(float(s[0]) if s.size else 0.0, 1.0)
    rank = int(np.sum(s > tol * scale))
    return center, vt[:rank], rank


def convex_hull(points: Sequence[Sequence[float]], tol: float = 1e-9) -> VertexSet:
    """Extreme points of the convex hull of a 3-D point cloud.

    Degenerate clouds are handled by rank reduction: a single cluster
    collapses to one point, collinear clouds to their two endpoints,
    coplanar clouds to a 2-D hull computed in the plane.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if pts.shape[0] == 0:
        raise ValueError("convex_hull needs at least one point")
    center, basis, rank = _rank_basis(pts, tol)
    if rank == 0:
        return VertexSet(pts[:1], tol)
    proj = (pts - center) @ basis.T
    if rank == 1:
        ext = np.array([pts[np.argmin(proj[:, 0])], pts[np.argmax(proj[:, 0])]])
        return VertexSet(_dedup_and_sort(ext, tol), tol)
    hull = ConvexHull(proj)
    ext = pts[hull.vertices]
    return VertexSet(_dedup_and_sort(ext, tol), tol)


def hull_halfspaces(points: Sequence[Sequence[float]]) -> HPolytope3:
    """H-representation of the hull of a full-dimensional point cloud."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    hull = ConvexHull(pts)
    # Qhull equations are A x + c <= 0
    eq = hull.equations
    return HPolytope3.from_arrays(eq[:, :3], -eq[:, 3])


def hull_contains(
    points: Sequence[Sequence[float]], query: Sequence[float], tol: float = 1e-9
) -> bool:
    """Is ``query`` a convex combination of ``points`` within ``tol``?

    Solved as an LP minimizing the Chebyshev reconstruction error, so
    degenerate (flat) point sets are fine.
    """
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    q = np.asarray(query, dtype=float)
    k = P.shape[0]
    # variables: lambda_1..k, t ; minimize t
    c = np.zeros(k + 1)
    c[-1] = 1.0
    A_ub = np.zeros((6, k + 1))
    b_ub = np.zeros(6)
    for i in range(3):
        A_ub[2 * i, :k] = P[:, i]
        A_ub[2 * i, -1] = -1.0
        b_ub[2 * i] = q[i]
        A_ub[2 * i + 1, :k] = -P[:, i]
        A_ub[2 * i + 1, -1] = -1.0
        b_ub[2 * i + 1] = -q[i]
    A_eq = np.zeros((1, k + 1))
    A_eq[0, :k] = 1.0
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * k + [(0, None)],
        method="highs",
    )
    return res.status == 0 and res.fun <= tol


def write_vertices_csv(vs: VertexSet, path: str | Path) -> None:
    """CSV export: header r0,r0p,r1 and >= 12 significant digits."""
    lines = ["r0,r0p,r1"]
    for v in vs.points:
        lines.append(",".join(f"{x:.15g}" for x in v))
    Path(path).write_text("\n".join(lines) + "\n")
