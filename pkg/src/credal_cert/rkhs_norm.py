"""RKHS loss-norm estimation via kernel ridge regression.

Fits (K + lambda I) alpha = losses and reports l_h = sqrt(alpha' K alpha),
the RKHS norm of the fitted interpolant. residual_rms measures fit quality:
a large residual suggests the loss function is poorly represented in the
kernel's RKHS and l_h should not be trusted as its norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import InputError, SingularSystemError
from .kernels import KernelSpec, gram_matrix
from .validation import as_features, as_vector, check_positive


@dataclass(frozen=True)
class NormEstimate:
    l_h: float
    ridge_lambda: float
    n_fit: int
    residual_rms: float


def estimate_rkhs_norm(
    X,
    losses,
    k: KernelSpec,
    ridge_lambda: float | None = None,
) -> NormEstimate:
    """Estimate the RKHS norm of the loss function from point evaluations.

    Parameters
    ----------
    X : array-like, shape (n, d)
        Points at which the loss was observed.
    losses : array-like, shape (n,)
        Loss values at those points.
    k : KernelSpec
    ridge_lambda : float, optional
        Ridge regularizer; defaults to 1e-6 * trace(K) / n. Larger values
        shrink the fitted norm.

    Returns
    -------
    NormEstimate

    Raises
    ------
    SingularSystemError
        If the regularized system is singular or conditioned beyond float64
        resolution.
    """
    Xa = as_features(X, "X")
    y = as_vector(losses, "losses")
    n = Xa.shape[0]
    if y.shape[0] != n:
        raise InputError(
            f"losses length {y.shape[0]} does not match sample count {n}"
        )
    K = gram_matrix(Xa, None, k)
    if ridge_lambda is None:
        ridge_lambda = 1e-6 * float(np.trace(K)) / n
    ridge_lambda = check_positive(ridge_lambda, "ridge_lambda")

    system = K + ridge_lambda * np.eye(n)
    try:
        factor = cho_factor(system, lower=True)
    except LinAlgError as exc:
        raise SingularSystemError(
            f"kernel system is not positive definite at lambda={ridge_lambda}"
        ) from exc
    diag = np.abs(np.diag(factor[0]))
    if (diag.min() / diag.max()) ** 2 < np.finfo(np.float64).eps:
        raise SingularSystemError(
            "kernel system conditioning exceeds float64 resolution; "
            "increase ridge_lambda"
        )
    alpha = cho_solve(factor, y)
    fitted = K @ alpha
    norm2 = float(alpha @ fitted)
    residual = fitted - y
    return NormEstimate(
        l_h=math.sqrt(max(norm2, 0.0)),
        ridge_lambda=ridge_lambda,
        n_fit=n,
        residual_rms=math.sqrt(float(np.mean(residual**2))),
    )


def posterior_average_norm(estimates: Sequence[NormEstimate]) -> float:
    """Mean l_h over per-posterior-sample estimates (one fit per sample)."""
    if not estimates:
        raise InputError("posterior_average_norm: empty estimate list")
    return float(np.mean([e.l_h for e in estimates]))
