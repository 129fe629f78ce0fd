"""Geodesic distortion diagnostics around anchor points.

For an anchor f and samples Xs, Xt, the mean kernel-metric distance gap
linearizes locally to sqrt(2 gamma) * |E_s||f - y|| - E_t||f - y|||, which
the shift bounds by sqrt(2 gamma) * C_W * MMD up to a remainder quadratic
in the local radius eps_bar. The report carries both sides, the slack, and
eps_bar so callers can apply their own remainder tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .kernels import KernelSpec
from .mmd import mmd2_unbiased
from .validation import as_features, as_vector, check_nonnegative, check_same_dim


@dataclass(frozen=True)
class DistortionReport:
    anchor_index: int
    lhs_estimate: float
    rhs_bound: float
    slack: float
    epsilon_bar: float


@dataclass(frozen=True)
class ClassDistortionSummary:
    class_label: str
    sample_count: int
    mean_distortion: float
    max_distortion: float


def expected_feature_distance(anchor, X) -> float:
    """Mean Euclidean distance from the anchor to the rows of X."""
    a = as_vector(anchor, "anchor")
    Xa = as_features(X, "X")
    if Xa.shape[1] != a.shape[0]:
        raise InputError(
            f"anchor dimension {a.shape[0]} does not match X dimension {Xa.shape[1]}"
        )
    return float(np.mean(np.linalg.norm(Xa - a, axis=1)))


def _anchor_distances(anchors: np.ndarray, X: np.ndarray) -> np.ndarray:
    # (n_anchors, n_rows) Euclidean distances
    diffs = anchors[:, None, :] - X[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diffs, diffs))


def geodesic_distortion(
    anchor,
    Xs,
    Xt,
    k: KernelSpec,
    c_w: float = 1.0,
    anchor_index: int = 0,
) -> DistortionReport:
    """Distortion diagnostic at one anchor.

    lhs_estimate = sqrt(2 gamma) * |mean dist to Xs - mean dist to Xt|,
    rhs_bound = sqrt(2 gamma) * c_w * unbiased MMD (negative squared
    estimates clamp to zero), epsilon_bar = the largest anchor distance
    among all rows used, slack = rhs - lhs. The linearization is trustworthy
    only when epsilon_bar is small; it is reported, not enforced.
    """
    a = as_vector(anchor, "anchor")
    Xsa = as_features(Xs, "Xs")
    Xta = as_features(Xt, "Xt")
    check_same_dim(Xsa, Xta, "Xs", "Xt")
    if Xsa.shape[1] != a.shape[0]:
        raise InputError(
            f"anchor dimension {a.shape[0]} does not match sample dimension "
            f"{Xsa.shape[1]}"
        )
    c_w = check_nonnegative(c_w, "c_w")
    scale = math.sqrt(2.0 * k.gamma)
    dist_s = np.linalg.norm(Xsa - a, axis=1)
    dist_t = np.linalg.norm(Xta - a, axis=1)
    lhs = scale * abs(float(np.mean(dist_s)) - float(np.mean(dist_t)))
    est = mmd2_unbiased(Xsa, Xta, k)
    rhs = scale * c_w * est.mmd
    eps_bar = max(float(np.max(dist_s)), float(np.max(dist_t)))
    return DistortionReport(
        anchor_index=int(anchor_index),
        lhs_estimate=lhs,
        rhs_bound=rhs,
        slack=rhs - lhs,
        epsilon_bar=eps_bar,
    )


def rare_class_report(
    anchors,
    labels,
    Xs,
    Xt,
    k: KernelSpec,
    c_w: float = 1.0,
) -> list[ClassDistortionSummary]:
    """Per-class distortion summary, rare classes first.

    Groups the anchors by label, computes each anchor's lhs_estimate (the
    MMD side is shared, it does not depend on the anchor), and reports mean
    and max per class, sorted by ascending sample count.
    """
    anchors_a = as_features(anchors, "anchors")
    label_list = [str(v) for v in np.asarray(labels).ravel()]
    if len(label_list) != anchors_a.shape[0]:
        raise InputError(
            f"labels length {len(label_list)} does not match anchor count "
            f"{anchors_a.shape[0]}"
        )
    Xsa = as_features(Xs, "Xs")
    Xta = as_features(Xt, "Xt")
    check_same_dim(Xsa, Xta, "Xs", "Xt")
    if Xsa.shape[1] != anchors_a.shape[1]:
        raise InputError(
            f"anchor dimension {anchors_a.shape[1]} does not match sample "
            f"dimension {Xsa.shape[1]}"
        )
    check_nonnegative(c_w, "c_w")
    scale = math.sqrt(2.0 * k.gamma)
    mean_s = np.mean(_anchor_distances(anchors_a, Xsa), axis=1)
    mean_t = np.mean(_anchor_distances(anchors_a, Xta), axis=1)
    lhs = scale * np.abs(mean_s - mean_t)
    groups: dict[str, list[int]] = {}
    for i, label in enumerate(label_list):
        groups.setdefault(label, []).append(i)
    summaries = [
        ClassDistortionSummary(
            class_label=label,
            sample_count=len(idx),
            mean_distortion=float(np.mean(lhs[idx])),
            max_distortion=float(np.max(lhs[idx])),
        )
        for label, idx in groups.items()
    ]
    summaries.sort(key=lambda s: (s.sample_count, s.class_label))
    return summaries
