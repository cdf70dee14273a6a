"""Finite-alphabet probability primitives.

Distributions are dense numpy tensors with named axes.  All information
quantities are in bits (log base 2) with the convention 0*log(0) = 0.
Tiny negative mutual informations caused by floating cancellation are
clamped to zero so downstream polytope right-hand sides stay valid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Pmf",
    "JointPmf",
    "marginalize",
    "entropy",
    "mutual_information",
    "conditional_mutual_information",
]

MASS_TOL = 1e-9


def _entropy_bits(weights: np.ndarray) -> float:
    w = np.asarray(weights, dtype=float).ravel()
    nz = w[w > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def _validate_mass(w: np.ndarray, what: str) -> None:
    if np.any(w < 0.0):
        raise ValueError(f"{what} has negative entries")
    total = float(w.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise ValueError(f"{what} has total mass {total!r}, expected 1")


@dataclass(frozen=True)
class Pmf:
    """Probability mass function on {0, ..., support_size-1}."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("pmf weights must be a nonempty 1-D vector")
        _validate_mass(w, "pmf")
        object.__setattr__(self, "weights", w)

    @property
    def support_size(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class JointPmf:
    """Joint pmf over named axes, stored as a dense tensor.

    ``axis_names`` are unique labels, one per tensor dimension; the
    tensor is nonnegative with total mass one.
    """

    axis_names: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        names = tuple(self.axis_names)
        w = np.asarray(self.weights, dtype=float)
        if len(names) != w.ndim:
            raise ValueError(
                f"{len(names)} axis names for a {w.ndim}-dimensional tensor"
            )
        if len(set(names)) != len(names):
            raise ValueError("axis names must be unique")
        _validate_mass(w, "joint pmf")
        object.__setattr__(self, "axis_names", names)
        object.__setattr__(self, "weights", w)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.weights.shape

    def axes_of(self, labels: Iterable[str]) -> tuple[int, ...]:
        out = []
        for lab in labels:
            if lab not in self.axis_names:
                raise ValueError(f"unknown axis label {lab!r}")
            out.append(self.axis_names.index(lab))
        return tuple(out)

    def group_weights(self, labels: Sequence[str]) -> np.ndarray:
        """Marginal tensor over ``labels`` (original axis order kept)."""
        keep = set(self.axes_of(labels))
        drop = tuple(i for i in range(self.weights.ndim) if i not in keep)
        return self.weights.sum(axis=drop) if drop else self.weights

    def to_pmf(self) -> Pmf:
        if self.weights.ndim != 1:
            raise ValueError("only a single-axis joint converts to a Pmf")
        return Pmf(self.weights)


def marginalize(j: JointPmf, keep_axes: Sequence[str]) -> JointPmf:
    """Sum out every axis not listed in ``keep_axes``.

    The kept axes stay in the order they have in ``j``.
    """
    if not keep_axes:
        raise ValueError("keep_axes must be nonempty")
    keep = set(j.axes_of(keep_axes))
    names = tuple(n for i, n in enumerate(j.axis_names) if i in keep)
    drop = tuple(i for i in range(j.weights.ndim) if i not in keep)
    w = j.weights.sum(axis=drop) if drop else j.weights
    return JointPmf(names, w)


def entropy(p: Pmf) -> float:
    """Shannon entropy H(p) in bits; lies in [0, log2(support_size)]."""
    return _entropy_bits(p.weights)


def _check_disjoint(*groups: Sequence[str]) -> None:
    seen: set[str] = set()
    for g in groups:
        for lab in g:
            if lab in seen:
                raise ValueError(f"axis label {lab!r} appears in two groups")
            seen.add(lab)


def mutual_information(
    j: JointPmf, group_a: Sequence[str], group_b: Sequence[str]
) -> float:
    """I(A;B) = H(A) + H(B) - H(A,B) in bits, clamped at zero."""
    _check_disjoint(group_a, group_b)
    ha = _entropy_bits(j.group_weights(group_a))
    hb = _entropy_bits(j.group_weights(group_b))
    hab = _entropy_bits(j.group_weights(tuple(group_a) + tuple(group_b)))
    return max(ha + hb - hab, 0.0)


def conditional_mutual_information(
    j: JointPmf,
    group_a: Sequence[str],
    group_b: Sequence[str],
    group_c: Sequence[str],
) -> float:
    """I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C) in bits.

    Equals the conditioned average sum_c p(c) I(A;B|C=c); the entropy
    form is used so the chain rule I(A,C;B) = I(C;B) + I(A;B|C) holds
    to floating precision.
    """
    _check_disjoint(group_a, group_b, group_c)
    a, b, c = tuple(group_a), tuple(group_b), tuple(group_c)
    if not c:
        return mutual_information(j, a, b)
    hac = _entropy_bits(j.group_weights(a + c))
    hbc = _entropy_bits(j.group_weights(b + c))
    habc = _entropy_bits(j.group_weights(a + b + c))
    hc = _entropy_bits(j.group_weights(c))
    return max(hac + hbc - habc - hc, 0.0)
