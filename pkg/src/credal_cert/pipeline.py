"""Certificate assembly shared by the certify and monitor commands.

The certificate is a flat key-value record. Its arithmetic structure
(upper = empirical + complexity + shift, width = 2*complexity + 2*shift)
holds bitwise for the serialized numbers unless --clamp-risk rewrites the
risk fields for display.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .conformal import CoveragePolicy, coverage_increment
from .credal import CredalSpec, RadiusSource, decide_adaptation, risk_interval
from .errors import InputError
from .io import CertifyConfig
from .kernels import KernelSpec, median_heuristic
from .mmd import (
    concentration_width,
    mmd2_unbiased,
    mmd_upper_confidence,
    permutation_calibrate,
)
from .pac_bayes import PosteriorComplexity, finite_sample_bound
from .rkhs_norm import NormEstimate, estimate_rkhs_norm
from .validation import as_features, as_vector


@dataclass(frozen=True)
class SourceState:
    """Source-side quantities precomputed once and reused per target batch."""

    features: np.ndarray
    losses: np.ndarray
    kernel: KernelSpec
    emp_risk: float
    l_h: float
    l_h_source: str
    norm: NormEstimate | None


def prepare_source(
    cfg: CertifyConfig,
    source_features,
    source_losses,
    target_for_bandwidth=None,
) -> SourceState:
    """Resolve bandwidth, empirical risk, and the loss norm from the source.

    target_for_bandwidth joins the median-heuristic pool when given (the
    certify path); monitor resolves the bandwidth from the source alone so
    the kernel stays fixed across batches.
    """
    Xs = as_features(source_features, "source features")
    losses = as_vector(source_losses, "source losses")
    if losses.shape[0] != Xs.shape[0]:
        raise InputError(
            f"source losses count {losses.shape[0]} does not match source "
            f"feature rows {Xs.shape[0]}"
        )
    if cfg.gamma is not None:
        kernel = KernelSpec(gamma=cfg.gamma)
    else:
        kernel = median_heuristic(Xs, target_for_bandwidth)
    emp_risk = float(np.mean(losses))
    if cfg.l_h is None:
        norm = estimate_rkhs_norm(Xs, losses, kernel, cfg.ridge_lambda)
        l_h = norm.l_h
        l_h_source = "estimated"
    else:
        norm = None
        l_h = cfg.l_h
        l_h_source = "user"
    return SourceState(
        features=Xs,
        losses=losses,
        kernel=kernel,
        emp_risk=emp_risk,
        l_h=l_h,
        l_h_source=l_h_source,
        norm=norm,
    )


def certificate_body(
    state: SourceState,
    target_features,
    cfg: CertifyConfig,
    seed: int,
    threads: int = 1,
    clamp_risk: bool = False,
) -> dict:
    """Assemble the full certificate record for one target sample."""
    Xt = as_features(target_features, "target features")
    est = mmd2_unbiased(state.features, Xt, state.kernel)
    mmd_width = concentration_width(est.m, est.n, cfg.delta / 2.0)

    calibration = None
    if cfg.calibrate:
        calibration = permutation_calibrate(
            state.features,
            Xt,
            state.kernel,
            num_permutations=cfg.num_permutations,
            alpha=cfg.alpha,
            seed=seed,
            threads=threads,
        )
        epsilon = calibration.epsilon_alpha
        radius_source = RadiusSource.PERMUTATION_CALIBRATED
    elif cfg.epsilon is not None:
        epsilon = cfg.epsilon
        radius_source = RadiusSource.USER_FIXED
    else:
        epsilon = mmd_upper_confidence(est, cfg.delta / 2.0)
        radius_source = RadiusSource.UPPER_CONFIDENCE

    complexity = PosteriorComplexity(
        kl=cfg.kl, n_labeled=cfg.n_labeled, delta=cfg.delta
    )
    bound = finite_sample_bound(state.emp_risk, complexity, state.l_h, est)
    interval = risk_interval(
        state.emp_risk,
        complexity,
        state.l_h,
        CredalSpec(epsilon=epsilon, radius_source=radius_source),
    )

    cert: dict = {
        "gamma": state.kernel.gamma,
        "gamma_source": state.kernel.source.value,
        "m": est.m,
        "n": est.n,
        "mmd2": est.mmd2,
        "mmd": est.mmd,
        "mmd_width": mmd_width,
        "empirical_risk": state.emp_risk,
        "kl": cfg.kl,
        "n_labeled": cfg.n_labeled,
        "delta": cfg.delta,
        "l_h": state.l_h,
        "l_h_source": state.l_h_source,
    }
    if state.norm is not None:
        cert["ridge_lambda"] = state.norm.ridge_lambda
        cert["residual_rms"] = state.norm.residual_rms
    cert.update(
        {
            "complexity_term": bound.complexity_term,
            "shift_penalty": bound.shift_penalty,
            "upper_risk": bound.upper_risk,
            "lower_risk": bound.lower_risk,
            "bound_kind": bound.kind.value,
            "epsilon": epsilon,
            "epsilon_source": radius_source.value,
        }
    )
    if calibration is not None:
        cert["calibration_p_value"] = calibration.p_value
        cert["calibration_alpha"] = calibration.alpha
        cert["calibration_num_permutations"] = calibration.num_permutations
        cert["calibration_seed"] = calibration.seed
    cert.update(
        {
            "interval_lower": interval.lower,
            "interval_upper": interval.upper,
            "interval_width": interval.width,
        }
    )
    if cfg.r_max is not None:
        decision = decide_adaptation(interval, cfg.r_max)
        cert["r_max"] = decision.r_max
        cert["verdict"] = decision.verdict.value
    if cfg.alpha0 is not None:
        policy = CoveragePolicy(
            alpha0=cfg.alpha0,
            emp_risk=state.emp_risk,
            kl=cfg.kl,
            n_labeled=cfg.n_labeled,
            l_h=state.l_h,
        )
        increment = coverage_increment(policy, epsilon)
        cert["alpha0"] = cfg.alpha0
        cert["coverage_increment"] = increment
        cert["adaptive_alpha"] = min(1.0, cfg.alpha0 + increment)
    if clamp_risk:
        for key in (
            "empirical_risk",
            "upper_risk",
            "lower_risk",
            "interval_lower",
            "interval_upper",
        ):
            cert[key] = min(1.0, max(0.0, cert[key]))
    cert["tool_version"] = __version__
    return cert
