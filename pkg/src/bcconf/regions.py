"""Rate-region polytopes for the conference-aided broadcast channel.

For a fixed auxiliary distribution the achievable ("inner") region and
the converse-side ("outer") region are 3-D polytopes in the rate
coordinates (r0, r0p, r1) = (common, residual-common, private).  The
full regions are unions of these polytopes over all auxiliary
distributions; ``sample_region`` approximates that union by sampling and
reports the convex hull of the collected inner vertices, achievable by
time sharing.

``check_equivalence`` executes the vertex argument showing the two
per-distribution polytopes describe the same region: every outer vertex
with all rates strictly positive must have its first two constraints
active and must satisfy all inner inequalities, while vertices on a
boundary plane must fall inside the matching lower-dimensional region
(no-residual, no-common, or no-private special case).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import AuxJoint, ChannelLaw, MIVector, mi_vector, random_aux
from .polytope import (
    HalfSpace3,
    HPolytope3,
    VertexSet,
    contains,
    convex_hull,
    enumerate_vertices,
)

__all__ = [
    "RateTriple",
    "RegionSample",
    "RegionApprox",
    "inner_polytope",
    "outer_polytope",
    "special_region",
    "check_equivalence",
    "EquivalenceReport",
    "sample_region",
    "region_report",
]

SPECIAL_KINDS = ("BC", "BCC", "NO_R1_INNER", "NO_R1_OUTER")

# axis index fixed to zero by each special-case region
_PLANE_OF_KIND = {"BC": 1, "BCC": 0, "NO_R1_INNER": 2, "NO_R1_OUTER": 2}


@dataclass(frozen=True)
class RateTriple:
    r0: float
    r0p: float
    r1: float

    def __post_init__(self):
        if min(self.r0, self.r0p, self.r1) < 0.0:
            raise ValueError("rates must be nonnegative")

    def as_array(self) -> np.ndarray:
        return np.array([self.r0, self.r0p, self.r1], dtype=float)


def _nonnegativity() -> list[HalfSpace3]:
    return [
        HalfSpace3(np.array([-1.0, 0.0, 0.0]), 0.0),
        HalfSpace3(np.array([0.0, -1.0, 0.0]), 0.0),
        HalfSpace3(np.array([0.0, 0.0, -1.0]), 0.0),
    ]


def inner_polytope(mi: MIVector, c1: float) -> HPolytope3:
    """Achievable polytope of one distribution: five bounds + nonnegativity.

        r0            <= I(U;Y2)
        r0p           <= I(V;Y2|U) + C1
        r1            <= I(X;Y1|UV)
        r0p + r1      <= I(X;Y1|U)
        r0 + r0p + r1 <= I(X;Y1)
    """
    if c1 < 0.0:
        raise ValueError("conference capacity must be nonnegative")
    rows = [
        HalfSpace3(np.array([1.0, 0.0, 0.0]), mi.i_u_y2),
        HalfSpace3(np.array([0.0, 1.0, 0.0]), mi.i_v_y2_given_u + c1),
        HalfSpace3(np.array([0.0, 0.0, 1.0]), mi.i_x_y1_given_uv),
        HalfSpace3(np.array([0.0, 1.0, 1.0]), mi.i_x_y1_given_u),
        HalfSpace3(np.array([1.0, 1.0, 1.0]), mi.i_x_y1),
    ]
    return HPolytope3(tuple(rows + _nonnegativity()))


def outer_polytope(mi: MIVector, c1: float) -> HPolytope3:
    """Converse-side polytope of one distribution.

        r0            <= I(U;Y2)
        r0 + r0p      <= I(UV;Y2) + C1
        r0 + r0p + r1 <= I(X;Y1)
        r0 + r0p + r1 <= I(U;Y2) + I(X;Y1|U)
        r0 + r0p + r1 <= I(UV;Y2) + C1 + I(X;Y1|UV)
    """
    if c1 < 0.0:
        raise ValueError("conference capacity must be nonnegative")
    rows = [
        HalfSpace3(np.array([1.0, 0.0, 0.0]), mi.i_u_y2),
        HalfSpace3(np.array([1.0, 1.0, 0.0]), mi.i_uv_y2 + c1),
        HalfSpace3(np.array([1.0, 1.0, 1.0]), mi.i_x_y1),
        HalfSpace3(np.array([1.0, 1.0, 1.0]), mi.i_u_y2 + mi.i_x_y1_given_u),
        HalfSpace3(
            np.array([1.0, 1.0, 1.0]), mi.i_uv_y2 + c1 + mi.i_x_y1_given_uv
        ),
    ]
    return HPolytope3(tuple(rows + _nonnegativity()))


def _plane(axis: int) -> list[HalfSpace3]:
    e = np.zeros(3)
    e[axis] = 1.0
    return [HalfSpace3(e.copy(), 0.0), HalfSpace3(-e, 0.0)]


def slice_at_zero(p: HPolytope3, axis: int) -> HPolytope3:
    """Intersect with the coordinate plane {x_axis = 0} (two half-spaces)."""
    if axis not in (0, 1, 2):
        raise ValueError("axis must be 0, 1 or 2")
    return p.with_halfspaces(_plane(axis))


def special_region(kind: str, mi: MIVector, c1: float) -> HPolytope3:
    """2-D special-case region embedded in its coordinate plane of R^3.

    BC          no residual message (plane r0p = 0)
    BCC         no common message   (plane r0 = 0); the cloud and
                satellite layers act as one auxiliary, so the bounds use
                I(UV;Y2) and I(X;Y1|UV)
    NO_R1_INNER common messages only, achievable form (plane r1 = 0);
                expects an auxiliary with V = X
    NO_R1_OUTER common messages only, converse form (plane r1 = 0)
    """
    if c1 < 0.0:
        raise ValueError("conference capacity must be nonnegative")
    if kind == "BC":
        rows = [
            HalfSpace3(np.array([1.0, 0.0, 0.0]), mi.i_u_y2),
            HalfSpace3(np.array([1.0, 0.0, 1.0]), mi.i_x_y1),
            HalfSpace3(np.array([1.0, 0.0, 1.0]), mi.i_u_y2 + mi.i_x_y1_given_u),
        ]
    elif kind == "BCC":
        rows = [
            HalfSpace3(np.array([0.0, 1.0, 0.0]), mi.i_uv_y2 + c1),
            HalfSpace3(np.array([0.0, 0.0, 1.0]), mi.i_x_y1_given_uv),
            HalfSpace3(np.array([0.0, 1.0, 1.0]), mi.i_x_y1),
        ]
    elif kind == "NO_R1_INNER":
        rows = [
            HalfSpace3(np.array([1.0, 0.0, 0.0]), mi.i_u_y2),
            HalfSpace3(np.array([0.0, 1.0, 0.0]), mi.i_x_y1_given_u),
            HalfSpace3(np.array([0.0, 1.0, 0.0]), mi.i_x_y2_given_u + c1),
            HalfSpace3(np.array([1.0, 1.0, 0.0]), mi.i_x_y1),
        ]
    elif kind == "NO_R1_OUTER":
        rows = [
            HalfSpace3(np.array([1.0, 0.0, 0.0]), mi.i_u_y2),
            HalfSpace3(np.array([1.0, 1.0, 0.0]), mi.i_u_y2 + mi.i_x_y1_given_u),
            HalfSpace3(np.array([1.0, 1.0, 0.0]), mi.i_x_y2 + c1),
            HalfSpace3(np.array([1.0, 1.0, 0.0]), mi.i_x_y1),
        ]
    else:
        raise ValueError(f"unknown special region kind {kind!r}")
    plane = _plane(_PLANE_OF_KIND[kind])
    return HPolytope3(tuple(rows + _nonnegativity() + plane))


@dataclass(frozen=True)
class EquivalenceReport:
    passed: bool
    n_vertices: int
    n_positive: int
    failures: tuple[dict, ...]

    @property
    def failing_vertex(self):
        return self.failures[0]["vertex"] if self.failures else None


def _boundary_vertex_ok(
    v: np.ndarray, mi: MIVector, c1: float, zero_tol: float, tol: float
) -> bool:
    """Membership of a boundary-plane vertex in a matching special region.

    A vertex may sit on several coordinate planes at once; it is accepted
    if the special region of any plane through it contains it.
    """
    kinds_by_axis = {1: "BC", 0: "BCC", 2: "NO_R1_OUTER"}
    for axis, kind in kinds_by_axis.items():
        if abs(v[axis]) <= zero_tol and contains(
            special_region(kind, mi, c1), v, tol
        ):
            return True
    return False


def check_equivalence(
    mi: MIVector,
    c1: float,
    zero_tol: float = 1e-9,
    active_tol: float = 1e-8,
    feas_tol: float = 1e-9,
) -> EquivalenceReport:
    """Run the vertex-level inner/outer equivalence check for one
    distribution.

    Enumerates the outer polytope's vertices and classifies each one.
    Strictly positive vertices must have the r0 bound and the
    (r0 + r0p) bound active within ``active_tol`` and must satisfy every
    inner inequality within ``feas_tol``.  Vertices on a coordinate
    plane must lie in the special region matched to that plane.
    Failures are reported, never raised.
    """
    outer = outer_polytope(mi, c1)
    inner = inner_polytope(mi, c1)
    vs = enumerate_vertices(outer, feas_tol=feas_tol)
    failures: list[dict] = []
    n_positive = 0
    A, b = outer.A, outer.b
    for v in vs.points:
        if np.min(v) > zero_tol:
            n_positive += 1
            slack_r0 = abs(A[0] @ v - b[0])
            slack_sum01 = abs(A[1] @ v - b[1])
            if slack_r0 > active_tol or slack_sum01 > active_tol:
                failures.append(
                    {
                        "vertex": v.tolist(),
                        "reason": "expected active constraints are slack",
                        "slacks": [float(slack_r0), float(slack_sum01)],
                    }
                )
                continue
            if not contains(inner, v, feas_tol):
                failures.append(
                    {
                        "vertex": v.tolist(),
                        "reason": "positive vertex violates an inner inequality",
                    }
                )
        else:
            if not _boundary_vertex_ok(v, mi, c1, zero_tol, feas_tol):
                failures.append(
                    {
                        "vertex": v.tolist(),
                        "reason": "boundary vertex outside its special region",
                    }
                )
    return EquivalenceReport(
        passed=not failures,
        n_vertices=len(vs),
        n_positive=n_positive,
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# sampling the union over auxiliary distributions


@dataclass(frozen=True)
class RegionSample:
    aux: AuxJoint
    mi: MIVector
    inner_poly: HPolytope3
    outer_poly: HPolytope3
    inner_vertices: VertexSet
    outer_vertices: VertexSet


@dataclass(frozen=True)
class RegionApprox:
    samples: tuple[RegionSample, ...]
    hull: VertexSet
    c1: float


def _structured_auxes(u_size: int, v_size: int, x_size: int) -> list[AuxJoint]:
    """Deterministic corner distributions: degenerate layers and V = X.

    These hit the special-case regions the union leans on; the uniform
    joint and per-cell point masses pad out generic coverage.
    """
    out: list[AuxJoint] = []

    def aux_from_map(u_of_x, v_of_x):
        w = np.zeros((u_size, v_size, x_size))
        for x in range(x_size):
            w[u_of_x(x), v_of_x(x), x] = 1.0 / x_size
        return AuxJoint(w)

    # V degenerate, U tracks X (no-residual corner)
    out.append(aux_from_map(lambda x: x % u_size, lambda x: 0))
    # U degenerate, V tracks X (no-common corner)
    out.append(aux_from_map(lambda x: 0, lambda x: x % v_size))
    # V equals X up to alphabet size (common-messages-only corner)
    out.append(aux_from_map(lambda x: x % u_size, lambda x: x % v_size))
    # both layers degenerate
    out.append(aux_from_map(lambda x: 0, lambda x: 0))
    out.append(AuxJoint(np.full((u_size, v_size, x_size), 1.0 / (u_size * v_size * x_size))))
    for u in range(u_size):
        for v in range(v_size):
            for x in range(x_size):
                w = np.zeros((u_size, v_size, x_size))
                w[u, v, x] = 1.0
                out.append(AuxJoint(w))
    return out


def sample_region(
    ch: ChannelLaw,
    c1: float,
    n_samples: int,
    cards: tuple[int, int] | None = None,
    seed: int = 0,
) -> RegionApprox:
    """Sample auxiliary distributions and aggregate their inner vertices.

    The sample list starts with the deterministic structured corners and
    is padded with symmetric-Dirichlet(1) draws, so runs with the same
    seed and a larger ``n_samples`` extend the smaller run's samples.
    The hull of all inner vertices is an inner approximation of the
    achievable region (time sharing makes it achievable).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if c1 < 0.0:
        raise ValueError("conference capacity must be nonnegative")
    if cards is None:
        cards = (ch.x_size + 3, ch.x_size + 3)
    u_size, v_size = cards
    if min(u_size, v_size) < 1:
        raise ValueError("auxiliary cardinalities must be >= 1")
    rng = np.random.default_rng(seed)
    auxes = _structured_auxes(u_size, v_size, ch.x_size)[:n_samples]
    while len(auxes) < n_samples:
        auxes.append(random_aux(rng, u_size, v_size, ch.x_size))

    samples: list[RegionSample] = []
    cloud: list[np.ndarray] = []
    for aux in auxes:
        mi = mi_vector(aux, ch)
        inner = inner_polytope(mi, c1)
        outer = outer_polytope(mi, c1)
        iv = enumerate_vertices(inner)
        ov = enumerate_vertices(outer)
        samples.append(RegionSample(aux, mi, inner, outer, iv, ov))
        cloud.append(iv.points)
    hull = convex_hull(np.vstack(cloud))
    return RegionApprox(tuple(samples), hull, c1)


def region_report(approx: RegionApprox, seed: int | None = None) -> dict:
    """JSON-ready report: per-sample functionals, vertices and verdicts."""
    sample_rows = []
    for i, s in enumerate(approx.samples):
        eq = check_equivalence(s.mi, approx.c1)
        inner_in_outer = all(
            contains(s.outer_poly, v, 1e-9) for v in s.inner_vertices.points
        )
        sample_rows.append(
            {
                "index": i,
                "mi": s.mi.as_dict(),
                "inner_vertices": s.inner_vertices.points.tolist(),
                "outer_vertices": s.outer_vertices.points.tolist(),
                "inner_in_outer": inner_in_outer,
                "equivalence_passed": eq.passed,
                "equivalence_failing_vertex": eq.failing_vertex,
            }
        )
    report = {
        "c1": approx.c1,
        "n_samples": len(approx.samples),
        "hull": approx.hull.points.tolist(),
        "hull_is_time_sharing_inner_approximation": True,
        "samples": sample_rows,
    }
    if seed is not None:
        report["seed"] = seed
    return report
