"""Broadcast-channel and auxiliary-distribution objects.

A two-receiver channel is the conditional law P(y1, y2 | x) on finite
alphabets.  An auxiliary joint is a distribution p(u, v, x) over two
code-layer variables and the channel input.  Composing the two gives the
full joint law p(u,v,x) * P(y1,y2|x), from which the eight mutual
informations driving the rate-region bounds are extracted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .probability import (
    JointPmf,
    conditional_mutual_information,
    mutual_information,
)

__all__ = [
    "ChannelLaw",
    "AuxJoint",
    "MIVector",
    "compose_full_joint",
    "mi_vector",
    "load_channel",
    "save_channel",
    "random_channel",
    "random_aux",
    "independent_bsc_pair",
]

AXES = ("U", "V", "X", "Y1", "Y2")

STOCHASTIC_TOL = 1e-9


@dataclass(frozen=True)
class ChannelLaw:
    """Transition law P(y1, y2 | x) as a tensor indexed (x, y1, y2)."""

    transition: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.transition, dtype=float)
        if t.ndim != 3:
            raise ValueError("transition must be a 3-D tensor (x, y1, y2)")
        if np.any(t < 0.0):
            raise ValueError("transition has negative entries")
        rows = t.sum(axis=(1, 2))
        bad = np.abs(rows - 1.0) > STOCHASTIC_TOL
        if np.any(bad):
            x = int(np.argmax(bad))
            raise ValueError(
                f"transition rows must sum to 1: row x={x} sums to {rows[x]!r}"
            )
        object.__setattr__(self, "transition", t)

    @property
    def x_size(self) -> int:
        return self.transition.shape[0]

    @property
    def y1_size(self) -> int:
        return self.transition.shape[1]

    @property
    def y2_size(self) -> int:
        return self.transition.shape[2]

    def y1_given_x(self) -> np.ndarray:
        return self.transition.sum(axis=2)

    def y2_given_x(self) -> np.ndarray:
        return self.transition.sum(axis=1)


@dataclass(frozen=True)
class AuxJoint:
    """Auxiliary joint p(u, v, x) as a tensor indexed (u, v, x)."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 3:
            raise ValueError("aux weights must be a 3-D tensor (u, v, x)")
        if np.any(w < 0.0):
            raise ValueError("aux weights has negative entries")
        total = float(w.sum())
        if abs(total - 1.0) > STOCHASTIC_TOL:
            raise ValueError(f"aux weights has total mass {total!r}, expected 1")
        object.__setattr__(self, "weights", w)

    @property
    def u_size(self) -> int:
        return self.weights.shape[0]

    @property
    def v_size(self) -> int:
        return self.weights.shape[1]

    @property
    def x_size(self) -> int:
        return self.weights.shape[2]

    def p_u(self) -> np.ndarray:
        return self.weights.sum(axis=(1, 2))

    def p_v_given_u(self) -> np.ndarray:
        """Rows for zero-probability u are filled uniformly (never drawn)."""
        p_uv = self.weights.sum(axis=2)
        p_u = p_uv.sum(axis=1, keepdims=True)
        out = np.where(p_u > 0.0, p_uv / np.where(p_u > 0.0, p_u, 1.0), 1.0 / self.v_size)
        return out

    def p_x_given_uv(self) -> np.ndarray:
        p_uv = self.weights.sum(axis=2, keepdims=True)
        return np.where(
            p_uv > 0.0, self.weights / np.where(p_uv > 0.0, p_uv, 1.0), 1.0 / self.x_size
        )


@dataclass(frozen=True)
class MIVector:
    """The eight mutual informations a distribution induces, in bits."""

    i_u_y2: float
    i_v_y2_given_u: float
    i_x_y1_given_uv: float
    i_x_y1_given_u: float
    i_x_y1: float
    i_uv_y2: float
    i_x_y2_given_u: float
    i_x_y2: float

    def as_dict(self) -> dict[str, float]:
        return {
            "i_u_y2": self.i_u_y2,
            "i_v_y2_given_u": self.i_v_y2_given_u,
            "i_x_y1_given_uv": self.i_x_y1_given_uv,
            "i_x_y1_given_u": self.i_x_y1_given_u,
            "i_x_y1": self.i_x_y1,
            "i_uv_y2": self.i_uv_y2,
            "i_x_y2_given_u": self.i_x_y2_given_u,
            "i_x_y2": self.i_x_y2,
        }


def compose_full_joint(aux: AuxJoint, ch: ChannelLaw) -> JointPmf:
    """Joint law p(u,v,x) * P(y1,y2|x) over axes (U, V, X, Y1, Y2).

    The chain (U,V) - X - (Y1,Y2) holds by construction.
    """
    if aux.x_size != ch.x_size:
        raise ValueError(
            f"input alphabet mismatch: aux has |X|={aux.x_size}, "
            f"channel has |X|={ch.x_size}"
        )
    w = np.einsum("uvx,xab->uvxab", aux.weights, ch.transition)
    return JointPmf(AXES, w)


def mi_vector(aux: AuxJoint, ch: ChannelLaw) -> MIVector:
    """Extract the eight rate-bound functionals from the composed joint."""
    j = compose_full_joint(aux, ch)
    return MIVector(
        i_u_y2=mutual_information(j, ("U",), ("Y2",)),
        i_v_y2_given_u=conditional_mutual_information(j, ("V",), ("Y2",), ("U",)),
        i_x_y1_given_uv=conditional_mutual_information(j, ("X",), ("Y1",), ("U", "V")),
        i_x_y1_given_u=conditional_mutual_information(j, ("X",), ("Y1",), ("U",)),
        i_x_y1=mutual_information(j, ("X",), ("Y1",)),
        i_uv_y2=mutual_information(j, ("U", "V"), ("Y2",)),
        i_x_y2_given_u=conditional_mutual_information(j, ("X",), ("Y2",), ("U",)),
        i_x_y2=mutual_information(j, ("X",), ("Y2",)),
    )


def validate_mi_vector(mi: MIVector, tol: float = 1e-9) -> None:
    vals = mi.as_dict()
    for name, v in vals.items():
        if v < -tol:
            raise ValueError(f"{name} is negative: {v!r}")
    if abs(mi.i_uv_y2 - mi.i_u_y2 - mi.i_v_y2_given_u) > tol:
        raise ValueError("chain rule violated: I(UV;Y2) != I(U;Y2) + I(V;Y2|U)")
    if mi.i_x_y1 < mi.i_x_y1_given_u - tol:
        raise ValueError("I(X;Y1) < I(X;Y1|U) violates the chain identity")


# ---------------------------------------------------------------------------
# channel spec files


def channel_to_dict(ch: ChannelLaw) -> dict:
    return {
        "x_size": ch.x_size,
        "y1_size": ch.y1_size,
        "y2_size": ch.y2_size,
        "transition": ch.transition.tolist(),
    }


def channel_from_dict(d: dict) -> ChannelLaw:
    try:
        shape = (int(d["x_size"]), int(d["y1_size"]), int(d["y2_size"]))
        t = np.asarray(d["transition"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed channel spec: {exc}") from exc
    if t.shape != shape:
        raise ValueError(
            f"transition shape {t.shape} disagrees with declared sizes {shape}"
        )
    return ChannelLaw(t)


def load_channel(path: str | Path) -> ChannelLaw:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"channel spec not found: {p}")
    with open(p) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"channel spec is not valid JSON: {exc}") from exc
    return channel_from_dict(d)


def save_channel(ch: ChannelLaw, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(channel_to_dict(ch), f, indent=2, sort_keys=True)
        f.write("\n")


# ---------------------------------------------------------------------------
# constructors used by samplers, demos and tests


def random_channel(
    rng: np.random.Generator, x_size: int, y1_size: int, y2_size: int
) -> ChannelLaw:
    """Dirichlet(1) transition rows, one per input symbol."""
    rows = rng.dirichlet(np.ones(y1_size * y2_size), size=x_size)
    return ChannelLaw(rows.reshape(x_size, y1_size, y2_size))


def random_aux(
    rng: np.random.Generator, u_size: int, v_size: int, x_size: int
) -> AuxJoint:
    """Dirichlet(1) draw over the full p(u,v,x) simplex."""
    w = rng.dirichlet(np.ones(u_size * v_size * x_size))
    return AuxJoint(w.reshape(u_size, v_size, x_size))


def independent_bsc_pair(eps1: float, eps2: float) -> ChannelLaw:
    """Binary input, two conditionally independent BSC outputs."""
    if not (0.0 <= eps1 <= 1.0 and 0.0 <= eps2 <= 1.0):
        raise ValueError("crossover probabilities must lie in [0, 1]")
    b1 = np.array([[1 - eps1, eps1], [eps1, 1 - eps1]])
    b2 = np.array([[1 - eps2, eps2], [eps2, 1 - eps2]])
    return ChannelLaw(np.einsum("xa,xb->xab", b1, b2))
