"""Decoy-state BB84: asymptotic observables, decoy bounds, and key rates.

Weak+vacuum two-decoy estimation for a signal intensity mu and decoys
nu1 > nu2.  The channel model produces asymptotic gains/QBERs; the bound
functions then act only on those observables, exactly as an experiment
would.  Model-true yields stay available separately so tests can sandwich
every bound between its estimate and the truth.

Channel model (dark counts add, no afterpulsing):
    eta   = eta_det * 10^(-alpha L / 10)
    Q_x   = Y0 + 1 - exp(-eta x)          for intensity x
    ExQx  = 0.5 Y0 + e_det (1 - exp(-eta x))
with Y0 the dark rate.  The implied photon-number yields are
Y_n = Y0 + 1 - (1-eta)^n, which reproduce the gains exactly.

All estimated fractions are clamped into [0, 1]; clamping is logged.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .cascade import BlockHistogram
from .core import binary_entropy, channel_transmittance, poisson_pmf
from .leakage import SkrBreakdown, leaked_useful_bound, expected_leaked_multi

__all__ = [
    "DecoyParams",
    "DecoyObservables",
    "DecoyBounds",
    "DEFAULT_PARAMS",
    "simulate_observables",
    "true_yield",
    "true_fractions",
    "upper_bound_y1_delta1",
    "upper_bound_y0_delta0",
    "lower_bounds",
    "delta_multi_min",
    "decoy_bounds",
    "skr_decoy",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecoyParams:
    """Source, sifting and channel parameters for one BB84 setup."""

    mu: float
    nu1: float
    nu2: float
    q: float  # sifting factor applied to the final rate
    alpha_db_per_km: float
    dark_rate: float
    eta_det: float
    e_det: float

    def __post_init__(self) -> None:
        if not 0.0 < self.nu2 < self.nu1 < self.mu:
            raise ValueError(
                f"need 0 < nu2 < nu1 < mu, got mu={self.mu}, nu1={self.nu1}, nu2={self.nu2}"
            )
        if self.nu1 + self.nu2 >= self.mu:
            raise ValueError(
                f"decoy estimation needs nu1 + nu2 < mu, got {self.nu1} + {self.nu2} vs {self.mu}"
            )
        if not 0.0 < self.q <= 1.0:
            raise ValueError(f"q must be in (0, 1], got {self.q}")
        if not 0.0 <= self.dark_rate < 1.0:
            raise ValueError(f"dark_rate must be in [0, 1), got {self.dark_rate}")
        if not 0.0 <= self.e_det <= 0.5:
            raise ValueError(f"e_det must be in [0, 0.5], got {self.e_det}")


# defaults used by the bundled experiment configs (efficient-BB84 setup,
# 0.2 dB/km fibre, 20% detectors)
DEFAULT_PARAMS = DecoyParams(
    mu=0.4,
    nu1=0.1,
    nu2=0.0007,
    q=0.9,
    alpha_db_per_km=0.20,
    dark_rate=1e-5,
    eta_det=0.20,
    e_det=0.033,
)


@dataclass(frozen=True)
class DecoyObservables:
    """Asymptotic gains and error rates at one distance."""

    eta: float
    y0: float
    q_mu: float
    q_nu1: float
    q_nu2: float
    e_mu: float
    e_nu1: float
    e_nu2: float


def _gain(y0: float, eta: float, x: float) -> float:
    return y0 + 1.0 - math.exp(-eta * x)


def _error_gain(y0: float, eta: float, x: float, e_det: float) -> float:
    return 0.5 * y0 + e_det * (1.0 - math.exp(-eta * x))


def simulate_observables(params: DecoyParams, distance_km: float) -> DecoyObservables:
    """Gains and QBERs of the signal and both decoys at distance_km."""
    eta = channel_transmittance(distance_km, params.alpha_db_per_km, params.eta_det)
    y0 = params.dark_rate
    q_mu = _gain(y0, eta, params.mu)
    q_nu1 = _gain(y0, eta, params.nu1)
    q_nu2 = _gain(y0, eta, params.nu2)
    return DecoyObservables(
        eta=eta,
        y0=y0,
        q_mu=q_mu,
        q_nu1=q_nu1,
        q_nu2=q_nu2,
        e_mu=_error_gain(y0, eta, params.mu, params.e_det) / q_mu,
        e_nu1=_error_gain(y0, eta, params.nu1, params.e_det) / q_nu1,
        e_nu2=_error_gain(y0, eta, params.nu2, params.e_det) / q_nu2,
    )


def true_yield(obs: DecoyObservables, n: int) -> float:
    """Model-true n-photon yield Y_n = Y0 + 1 - (1-eta)^n."""
    return obs.y0 + 1.0 - (1.0 - obs.eta) ** n


def true_fractions(params: DecoyParams, obs: DecoyObservables) -> tuple[float, float, float]:
    """Model-true detection-conditioned photon-class fractions.

    Returns (delta_0, delta_1, delta_multi); the three sum to 1 because
    the yields reproduce Q_mu exactly.
    """
    d0 = poisson_pmf(params.mu, 0) * true_yield(obs, 0) / obs.q_mu
    d1 = poisson_pmf(params.mu, 1) * true_yield(obs, 1) / obs.q_mu
    return d0, d1, 1.0 - d0 - d1


def _clamp01(value: float, name: str) -> float:
    if value < 0.0 or value > 1.0:
        log.debug("%s=%.6g clamped into [0, 1]", name, value)
        return min(max(value, 0.0), 1.0)
    return value


def upper_bound_y1_delta1(params: DecoyParams, obs: DecoyObservables) -> tuple[float, float]:
    """Upper bounds (y1_max, delta1_max) from the two decoy gains."""
    p = params
    y1_max = (obs.q_nu1 * math.exp(p.nu1) - obs.q_nu2 * math.exp(p.nu2)) / (p.nu1 - p.nu2)
    delta1_max = _clamp01(
        y1_max * p.mu * math.exp(-p.mu) / obs.q_mu, "delta1_max"
    )
    return y1_max, delta1_max


def lower_bounds(params: DecoyParams, obs: DecoyObservables) -> tuple[float, float, float, float, float]:
    """Lower bounds (y1_min, delta1_min, y0_lower, delta0_min) and e1_max.

    y1_min is the standard two-decoy single-photon yield bound; e1_max the
    matching single-photon error bound.  A nonpositive y1_min marks the
    vacuum-dominated regime: the rate will be zero, e1_max pins to 1/2.
    """
    p = params
    denom = p.mu * p.nu1 - p.mu * p.nu2 - p.nu1**2 + p.nu2**2
    y1_min = (p.mu / denom) * (
        obs.q_nu1 * math.exp(p.nu1)
        - obs.q_nu2 * math.exp(p.nu2)
        - ((p.nu1**2 - p.nu2**2) / p.mu**2) * (obs.q_mu * math.exp(p.mu) - obs.y0)
    )
    if y1_min <= 0.0:
        log.warning("y1_min=%.3g <= 0: vacuum-dominated regime, rate will be 0", y1_min)
        y1_min = 0.0
        e1_max = 0.5
    else:
        e1_num = obs.e_nu1 * obs.q_nu1 * math.exp(p.nu1) - obs.e_nu2 * obs.q_nu2 * math.exp(p.nu2)
        e1_max = _clamp01(e1_num / ((p.nu1 - p.nu2) * y1_min), "e1_max")
    delta1_min = _clamp01(y1_min * p.mu * math.exp(-p.mu) / obs.q_mu, "delta1_min")
    y0_lower = max(
        0.0,
        (p.nu1 * obs.q_nu2 * math.exp(p.nu2) - p.nu2 * obs.q_nu1 * math.exp(p.nu1))
        / (p.nu1 - p.nu2),
    )
    delta0_min = _clamp01(y0_lower * math.exp(-p.mu) / obs.q_mu, "delta0_min")
    return y1_min, delta1_min, y0_lower, delta0_min, e1_max


def upper_bound_y0_delta0(
    params: DecoyParams, obs: DecoyObservables, y1_min: float
) -> tuple[float, float]:
    """Upper bounds (y0_max, delta0_max) from the weakest decoy gain."""
    p = params
    y0_max = obs.q_nu2 * math.exp(p.nu2) - y1_min * p.nu2
    delta0_max = _clamp01(y0_max * math.exp(-p.mu) / obs.q_mu, "delta0_max")
    return y0_max, delta0_max


def delta_multi_min(delta0_max: float, delta1_max: float) -> float:
    """Lower bound on the multi-photon fraction among detected signals."""
    return max(0.0, 1.0 - delta0_max - delta1_max)


@dataclass(frozen=True)
class DecoyBounds:
    """All decoy estimates needed by the key-rate formulas."""

    y1_min: float
    y1_max: float
    y0_lower: float
    y0_max: float
    delta1_min: float
    delta1_max: float
    delta0_min: float
    delta0_max: float
    delta_multi_min: float
    e1_max: float


def decoy_bounds(params: DecoyParams, obs: DecoyObservables) -> DecoyBounds:
    """Evaluate every bound once; the pieces are individually exported."""
    y1_max, delta1_max = upper_bound_y1_delta1(params, obs)
    y1_min, delta1_min, y0_lower, delta0_min, e1_max = lower_bounds(params, obs)
    y0_max, delta0_max = upper_bound_y0_delta0(params, obs, y1_min)
    return DecoyBounds(
        y1_min=y1_min,
        y1_max=y1_max,
        y0_lower=y0_lower,
        y0_max=y0_max,
        delta1_min=delta1_min,
        delta1_max=delta1_max,
        delta0_min=delta0_min,
        delta0_max=delta0_max,
        delta_multi_min=delta_multi_min(delta0_max, delta1_max),
        e1_max=e1_max,
    )


def skr_decoy(
    params: DecoyParams,
    obs: DecoyObservables,
    bounds: DecoyBounds,
    hist: BlockHistogram,
) -> SkrBreakdown:
    """Key rates with full-leakage vs useful-leakage reconciliation cost.

    Both rates share the single-photon and vacuum terms; they differ only
    in the leakage charged per reconciled bit, so the improved rate can
    never fall below the original.
    """
    n = hist.n
    priv = bounds.delta1_min * (1.0 - binary_entropy(bounds.e1_max)) + bounds.delta0_min
    leaked_all_pb = hist.total() / n
    leaked_useful_pb = leaked_useful_bound(hist, bounds.delta_multi_min) / n
    leaked_multi_pb = expected_leaked_multi(hist, bounds.delta_multi_min) / n
    scale = params.q * obs.q_mu
    return SkrBreakdown(
        r_original=scale * max(priv - leaked_all_pb, 0.0),
        r_improved=scale * max(priv - leaked_useful_pb, 0.0),
        leaked_all_per_bit=leaked_all_pb,
        leaked_multi_per_bit=leaked_multi_pb,
        leaked_useful_per_bit=leaked_useful_pb,
        delta_multi_min=bounds.delta_multi_min,
    )
