"""RBF kernel evaluation, Gram matrices, and bandwidth selection.

All kernels here are Gaussian RBF, k(x, y) = exp(-gamma * ||x - y||^2),
so every kernel value lies in (0, 1]. Squared distances are computed with
the expansion ||x||^2 + ||y||^2 - 2<x, y>, clamped at zero so cancellation
can never produce a negative distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateBandwidthError, InputError
from .validation import as_features, as_vector, check_positive, check_same_dim


class KernelSource(str, Enum):
    """Provenance of a bandwidth: user-supplied or data-derived."""

    FIXED = "fixed"
    MEDIAN_HEURISTIC = "median_heuristic"


@dataclass(frozen=True)
class KernelSpec:
    """Bandwidth gamma of the RBF kernel plus where it came from."""

    gamma: float
    source: KernelSource = KernelSource.FIXED

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", check_positive(self.gamma, "gamma"))
        object.__setattr__(self, "source", KernelSource(self.source))


def _row_sqnorms(X: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", X, X)


def _sq_dists(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    d2 = _row_sqnorms(X)[:, None] + _row_sqnorms(Y)[None, :] - 2.0 * (X @ Y.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def rbf_kernel(x, y, spec: KernelSpec) -> float:
    """Evaluate exp(-gamma * ||x - y||^2) for a single pair of vectors.

    Parameters
    ----------
    x, y : array-like, shape (d,)
        Feature vectors of equal dimension.
    spec : KernelSpec
        Bandwidth to use.

    Returns
    -------
    float
        Kernel value in (0, 1]; exactly 1.0 when x equals y.
    """
    xv = as_vector(x, "x")
    yv = as_vector(y, "y")
    if xv.shape[0] != yv.shape[0]:
        raise InputError(
            f"x and y disagree on dimension: {xv.shape[0]} vs {yv.shape[0]}"
        )
    sq = float(np.dot(xv, xv)) + float(np.dot(yv, yv)) - 2.0 * float(np.dot(xv, yv))
    return math.exp(-spec.gamma * max(sq, 0.0))


def gram_matrix(X, Y, spec: KernelSpec) -> np.ndarray:
    """Kernel matrix with entry (i, j) = rbf_kernel(X[i], Y[j], spec).

    Parameters
    ----------
    X : array-like, shape (n_x, d)
    Y : array-like, shape (n_y, d) or None
        Pass None (or the same data as X) for the self-Gram; that path
        mirrors the upper triangle and pins the diagonal to exactly 1.0,
        so the result is bitwise symmetric with a unit diagonal.
    spec : KernelSpec

    Returns
    -------
    ndarray, shape (n_x, n_y)
        Entries in (0, 1].
    """
    Xa = as_features(X, "X")
    if Y is None:
        same = True
        Ya = Xa
    else:
        Ya = as_features(Y, "Y")
        check_same_dim(Xa, Ya, "X", "Y")
        same = Ya is Xa or (Ya.shape == Xa.shape and np.array_equal(Xa, Ya))
    d2 = _sq_dists(Xa, Ya)
    if same:
        # mirror one triangle so K == K.T holds bitwise, not just approximately
        upper = np.triu(d2, 1)
        d2 = upper + upper.T
    return np.exp(-spec.gamma * d2)


def median_heuristic(X, Y=None) -> KernelSpec:
    """Bandwidth from the median pairwise squared distance of the pooled sample.

    gamma = 1 / (2 * median ||x - y||^2) over distinct pooled pairs.

    Parameters
    ----------
    X : array-like, shape (n_x, d)
    Y : array-like, shape (n_y, d), optional
        Second sample pooled with X before taking the median.

    Returns
    -------
    KernelSpec with source recorded as the median heuristic.

    Raises
    ------
    DegenerateBandwidthError
        If the median distance is zero (all points coincide pairwise).
    """
    Xa = as_features(X, "X")
    if Y is not None:
        Ya = as_features(Y, "Y")
        check_same_dim(Xa, Ya, "X", "Y")
        pooled = np.vstack([Xa, Ya])
    else:
        pooled = Xa
    n = pooled.shape[0]
    if n < 2:
        raise InputError("median heuristic needs at least two pooled samples")
    d2 = _sq_dists(pooled, pooled)
    med = float(np.median(d2[np.triu_indices(n, k=1)]))
    if med <= 0.0:
        raise DegenerateBandwidthError(
            "median pairwise distance is zero; cannot infer a bandwidth"
        )
    return KernelSpec(gamma=1.0 / (2.0 * med), source=KernelSource.MEDIAN_HEURISTIC)
