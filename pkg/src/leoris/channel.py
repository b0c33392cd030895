"""First- and second-order statistics of the combined channel response,
and the two-moment Gamma model built from them.

The combined response is a sum of per-RIS terms (each a coherently
aligned sum over reflecting elements, damped by both hop distances) plus
an optional direct satellite-user path. Means and variances follow from
independence of fading and positions; the Gamma shape/scale pair is the
moment fit used by the coverage and capacity expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ComputationError, DomainError
from .fading import KappaMuParams, envelope_moment
from .geometry import Constellation, CylinderGeometry, ris_distance_moment, sat_distance_moment
from .specfun import ln_gamma

__all__ = [
    "GammaApprox",
    "RisLink",
    "DirectPath",
    "LinkConfig",
    "mean_abs_A",
    "var_abs_A",
    "gamma_approx",
    "abs_A_pdf",
    "snr_pdf",
]


@dataclass(frozen=True)
class GammaApprox:
    """Shape/scale of the Gamma model of the combined response magnitude."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta}")

    @property
    def mean(self) -> float:
        return self.alpha * self.beta

    @property
    def variance(self) -> float:
        return self.alpha * self.beta ** 2

    @classmethod
    def from_moments(cls, mean: float, variance: float) -> "GammaApprox":
        if not mean > 0 or not variance > 0:
            raise ComputationError(
                f"Gamma fit needs positive moments, got mean={mean}, variance={variance}"
            )
        return cls(alpha=mean * mean / variance, beta=variance / mean)


@dataclass(frozen=True)
class RisLink:
    """One RIS: element count, per-hop fading, per-hop path-loss exponents."""

    elements: int
    sat_fading: KappaMuParams
    user_fading: KappaMuParams
    sat_exponent: float
    user_exponent: float

    def __post_init__(self) -> None:
        if self.elements < 1:
            raise DomainError(f"elements must be >= 1, got {self.elements}")


@dataclass(frozen=True)
class DirectPath:
    enabled: bool = True
    fading: KappaMuParams = field(default_factory=lambda: KappaMuParams(0.0, 1.0))
    exponent: float = 2.0


@dataclass(frozen=True)
class LinkConfig:
    """Everything about the signal paths: the RIS list, the direct path,
    and the transmit SNR (symbol energy over noise power, linear)."""

    ris: tuple[RisLink, ...]
    direct: DirectPath = field(default_factory=DirectPath)
    transmit_snr: float = 1.0

    def __post_init__(self) -> None:
        if not self.transmit_snr > 0:
            raise DomainError(f"transmit_snr must be > 0, got {self.transmit_snr}")


def _per_ris_mean(link: RisLink, geom: CylinderGeometry, con: Constellation) -> float:
    m1 = envelope_moment(1.0, link.sat_fading) * envelope_moment(1.0, link.user_fading)
    return (link.elements * m1
            * sat_distance_moment(1, link.sat_exponent, con)
            * ris_distance_moment(1, link.user_exponent, geom))


def mean_abs_A(cfg: LinkConfig, geom: CylinderGeometry, con: Constellation) -> float:
    """Mean magnitude of the combined channel response."""
    total = sum(_per_ris_mean(link, geom, con) for link in cfg.ris)
    if cfg.direct.enabled:
        total += (envelope_moment(1.0, cfg.direct.fading)
                  * sat_distance_moment(1, cfg.direct.exponent, con))
    return total


def var_abs_A(cfg: LinkConfig, geom: CylinderGeometry, con: Constellation) -> float:
    """Variance of the combined channel response magnitude.

    Per-path second moments use the unit-power normalization
    E[|q|^2] = E[|g|^2] = E[|u|^2] = 1, so the element-sum second moment
    reduces to L + (L^2 - L) * (first-moment product)^2.
    """
    total = 0.0
    for link in cfg.ris:
        L = link.elements
        m1 = envelope_moment(1.0, link.sat_fading) * envelope_moment(1.0, link.user_fading)
        second = (L + (L * L - L) * m1 * m1) \
            * sat_distance_moment(2, link.sat_exponent, con) \
            * ris_distance_moment(2, link.user_exponent, geom)
        total += second - _per_ris_mean(link, geom, con) ** 2
    if cfg.direct.enabled:
        mean_direct = (envelope_moment(1.0, cfg.direct.fading)
                       * sat_distance_moment(1, cfg.direct.exponent, con))
        total += sat_distance_moment(2, cfg.direct.exponent, con) - mean_direct ** 2
    if not total > 0.0 or not math.isfinite(total):
        raise ComputationError(
            f"variance of the combined response came out non-positive ({total}); "
            "check for a degenerate configuration or catastrophic cancellation"
        )
    return total


def gamma_approx(cfg: LinkConfig, geom: CylinderGeometry, con: Constellation) -> GammaApprox:
    """Two-moment Gamma fit of the combined response magnitude."""
    mean = mean_abs_A(cfg, geom, con)
    if not mean > 0.0:
        raise ComputationError(
            "mean of the combined response is not positive; the configuration "
            "has no active signal path"
        )
    return GammaApprox.from_moments(mean, var_abs_A(cfg, geom, con))


def abs_A_pdf(x, ga: GammaApprox):
    """Gamma density of the combined response magnitude."""
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr < 0):
        raise DomainError("magnitude must be >= 0")
    a, b = ga.alpha, ga.beta
    out = np.zeros_like(arr)
    pos = arr > 0
    xp = arr[pos]
    out[pos] = np.exp((a - 1.0) * np.log(xp) - xp / b - a * math.log(b) - ln_gamma(a))
    zero = ~pos
    if np.any(zero):
        if a > 1.0:
            out[zero] = 0.0
        elif a == 1.0:
            out[zero] = 1.0 / b
        else:
            out[zero] = np.inf
    return float(out[0]) if scalar else out


def snr_pdf(x, ga: GammaApprox, rho0: float):
    """Density of the received SNR under the Gamma model.

    Equals abs_A_pdf(sqrt(x / rho0)) / (2 sqrt(rho0 x)) by change of
    variables; written directly to avoid the removable 0/0 at x = 0.
    """
    if not rho0 > 0:
        raise DomainError(f"rho0 must be > 0, got {rho0}")
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr < 0):
        raise DomainError("SNR must be >= 0")
    a, b = ga.alpha, ga.beta
    out = np.zeros_like(arr)
    pos = arr > 0
    xp = arr[pos]
    log_pref = -math.log(2.0) - a * math.log(b) - ln_gamma(a) - (a / 2.0) * math.log(rho0)
    out[pos] = np.exp(log_pref + (a - 2.0) / 2.0 * np.log(xp)
                      - np.sqrt(xp / (b * b * rho0)))
    zero = ~pos
    if np.any(zero):
        if a > 2.0:
            out[zero] = 0.0
        elif a == 2.0:
            out[zero] = math.exp(log_pref)
        else:
            out[zero] = np.inf
    return float(out[0]) if scalar else out
