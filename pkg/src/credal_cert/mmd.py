"""Squared-MMD estimators, concentration widths, and permutation calibration.

The unbiased estimator is the U-statistic (diagonal terms excluded; the raw
value may be negative and is kept as-is so unbiasedness stays testable). The
biased estimator is the V-statistic, clamped at zero. Cross-block sums use
exact summation (math.fsum) so estimates are invariant under swapping the
two samples, bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputError
from .kernels import KernelSpec, gram_matrix
from .validation import (
    as_features,
    check_count,
    check_probability,
    check_same_dim,
)


class MmdKind(str, Enum):
    UNBIASED = "unbiased"
    BIASED = "biased"


@dataclass(frozen=True)
class MmdEstimate:
    """A squared-MMD estimate with its provenance.

    mmd2 is the raw estimate (negative values possible for the unbiased
    kind); mmd = sqrt(max(mmd2, 0)); m and n are the source and target
    sample counts that produced it.
    """

    mmd2: float
    mmd: float
    kind: MmdKind
    m: int
    n: int


@dataclass(frozen=True)
class CalibrationResult:
    """Permutation-calibrated credal radius at level alpha.

    epsilon_alpha is reported on the MMD scale (square root of the clamped
    (1 - alpha) order statistic of the permuted squared-MMD statistics).
    """

    epsilon_alpha: float
    p_value: float
    num_permutations: int
    alpha: float
    seed: int


def _validated_pair(Xs, Xt, min_count: int) -> tuple[np.ndarray, np.ndarray]:
    Xsa = as_features(Xs, "Xs")
    Xta = as_features(Xt, "Xt")
    check_same_dim(Xsa, Xta, "Xs", "Xt")
    if Xsa.shape[0] < min_count or Xta.shape[0] < min_count:
        raise InputError(
            f"need at least {min_count} samples per side, "
            f"got m={Xsa.shape[0]}, n={Xta.shape[0]}"
        )
    return Xsa, Xta


def _block_sums(Xs: np.ndarray, Xt: np.ndarray, spec: KernelSpec):
    """Sums of the three Gram blocks (ss, tt, st), full blocks incl. diagonals.

    The cross sum uses math.fsum, which is order-exact, so the result does
    not depend on which sample was passed first. Identical inputs reuse the
    self-Gram sum so all three sums are the same float.
    """
    k_ss = gram_matrix(Xs, None, spec)
    s_ss = float(np.sum(k_ss))
    if Xs.shape == Xt.shape and np.array_equal(Xs, Xt):
        return s_ss, s_ss, s_ss
    k_tt = gram_matrix(Xt, None, spec)
    s_tt = float(np.sum(k_tt))
    k_st = gram_matrix(Xs, Xt, spec)
    s_st = math.fsum(k_st.ravel().tolist())
    return s_ss, s_tt, s_st


def mmd2_unbiased(Xs, Xt, spec: KernelSpec) -> MmdEstimate:
    """U-statistic estimate of squared MMD between two samples.

    Parameters
    ----------
    Xs, Xt : array-like, shapes (m, d) and (n, d) with m, n >= 2
    spec : KernelSpec

    Returns
    -------
    MmdEstimate
        mmd2 = sum_{i != j} k(xs_i, xs_j)/(m(m-1))
             + sum_{i != j} k(xt_i, xt_j)/(n(n-1))
             - 2 sum_{i,j} k(xs_i, xt_j)/(mn).
        Its expectation over resampling equals the population squared MMD.
    """
    Xsa, Xta = _validated_pair(Xs, Xt, min_count=2)
    m, n = Xsa.shape[0], Xta.shape[0]
    s_ss, s_tt, s_st = _block_sums(Xsa, Xta, spec)
    # self-Gram diagonals are exactly 1.0 each, so subtracting the count
    # removes them
    value = (
        (s_ss - m) / (m * (m - 1))
        + (s_tt - n) / (n * (n - 1))
        - 2.0 * s_st / (m * n)
    )
    return MmdEstimate(
        mmd2=value,
        mmd=math.sqrt(max(value, 0.0)),
        kind=MmdKind.UNBIASED,
        m=m,
        n=n,
    )


def mmd2_biased(Xs, Xt, spec: KernelSpec) -> MmdEstimate:
    """V-statistic (plug-in) estimate of squared MMD, clamped at zero.

    Accepts single-sample sides (m, n >= 1). Equals the squared RKHS
    distance between the two empirical mean embeddings.
    """
    Xsa, Xta = _validated_pair(Xs, Xt, min_count=1)
    m, n = Xsa.shape[0], Xta.shape[0]
    s_ss, s_tt, s_st = _block_sums(Xsa, Xta, spec)
    value = s_ss / (m * m) + s_tt / (n * n) - 2.0 * s_st / (m * n)
    value = max(0.0, value)
    return MmdEstimate(
        mmd2=value, mmd=math.sqrt(value), kind=MmdKind.BIASED, m=m, n=n
    )


def concentration_width(m: int, n: int, alpha: float) -> float:
    """Distribution-free deviation width for the unbiased MMD estimate.

    Returns sqrt(2 * ln(2 / alpha) / min(m, n)): with probability at least
    1 - alpha the estimate is within this distance of the population MMD.
    """
    m = check_count(m, "m")
    n = check_count(n, "n")
    alpha = check_probability(alpha, "alpha")
    return math.sqrt(2.0 * math.log(2.0 / alpha) / min(m, n))


def mmd_upper_confidence(est: MmdEstimate, alpha: float) -> float:
    """Upper confidence limit est.mmd + concentration_width at level alpha.

    Defined for unbiased estimates only; the width has no guarantee for the
    plug-in estimator.
    """
    if est.kind is not MmdKind.UNBIASED:
        raise InputError("upper confidence limit requires an unbiased estimate")
    return est.mmd + concentration_width(est.m, est.n, alpha)


def _permutation_stats(
    K: np.ndarray,
    row_sums: np.ndarray,
    total: float,
    m: int,
    n: int,
    z: np.ndarray,
) -> np.ndarray:
    # z: (m+n, b) 0/1 indicator columns marking the permuted source rows
    g = K @ z
    s_ss = np.einsum("ij,ij->j", z, g)
    s_sall = row_sums @ z
    s_st = s_sall - s_ss
    s_tt = total - 2.0 * s_sall + s_ss
    return (
        (s_ss - m) / (m * (m - 1))
        + (s_tt - n) / (n * (n - 1))
        - 2.0 * s_st / (m * n)
    )


def permutation_calibrate(
    Xs,
    Xt,
    spec: KernelSpec,
    num_permutations: int = 1000,
    alpha: float = 0.05,
    seed: int = 0,
    threads: int = 1,
) -> CalibrationResult:
    """Permutation-test calibration of the credal radius.

    Pools the two samples, recomputes the unbiased squared-MMD statistic
    under num_permutations random relabelings (split sizes fixed at m | n),
    and returns

    - epsilon_alpha: the (1 - alpha) order statistic of the permuted
      statistics, clamped at zero and mapped to the MMD scale;
    - p_value: (1 + #{permuted >= observed}) / (num_permutations + 1),
      never exactly zero.

    Each permutation is generated from its own child of SeedSequence(seed),
    so results are identical for any thread count. The pooled Gram matrix is
    computed once; each permutation costs one matrix-vector pass.

    Parameters
    ----------
    Xs, Xt : array-like, shapes (m, d), (n, d), m, n >= 2
    spec : KernelSpec
    num_permutations : int, >= 100
    alpha : float in (0, 1)
    seed : int
    threads : int, optional
        Worker threads for the permutation batches.
    """
    Xsa, Xta = _validated_pair(Xs, Xt, min_count=2)
    m, n = Xsa.shape[0], Xta.shape[0]
    num_permutations = check_count(num_permutations, "num_permutations", minimum=100)
    alpha = check_probability(alpha, "alpha")
    seed = check_count(seed, "seed", minimum=0)
    threads = check_count(threads, "threads")

    pooled = np.vstack([Xsa, Xta])
    N = m + n
    K = gram_matrix(pooled, None, spec)
    row_sums = np.sum(K, axis=1)
    total = float(np.sum(K))

    z0 = np.zeros((N, 1))
    z0[:m, 0] = 1.0
    observed = float(_permutation_stats(K, row_sums, total, m, n, z0)[0])

    children = np.random.SeedSequence(seed).spawn(num_permutations)
    stats = np.empty(num_permutations)

    def fill(lo: int, hi: int) -> None:
        step = 256
        for start in range(lo, hi, step):
            stop = min(start + step, hi)
            z = np.zeros((N, stop - start))
            for j, b in enumerate(range(start, stop)):
                rng = np.random.Generator(np.random.PCG64(children[b]))
                z[rng.permutation(N)[:m], j] = 1.0
            stats[start:stop] = _permutation_stats(K, row_sums, total, m, n, z)

    if threads <= 1:
        fill(0, num_permutations)
    else:
        bounds = np.linspace(0, num_permutations, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(fill, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            ]
            for f in futures:
                f.result()

    p_value = (1.0 + float(np.sum(stats >= observed))) / (num_permutations + 1.0)
    q = float(np.quantile(stats, 1.0 - alpha, method="higher"))
    return CalibrationResult(
        epsilon_alpha=math.sqrt(max(q, 0.0)),
        p_value=p_value,
        num_permutations=num_permutations,
        alpha=alpha,
        seed=seed,
    )
