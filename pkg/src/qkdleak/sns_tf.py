"""Sending-or-not-sending twin-field QKD: observables, bounds, key rates.

Both parties send phase-randomised pulses to a middle measurement node;
in a Z (signal) window each party independently sends (probability
eps_a/eps_b, intensity mu_a/mu_b) or stays silent.  Single-send clicks
carry the key bit; both-send and no-send clicks are errors.

Channel model (symmetric fibre halves, two threshold detectors at the
middle node):
    eta        = eta_det * 10^(-alpha (L/2) / 10)     per-arm transmittance
    p_d        = 2 d (1 - d)                          effective dark click
    P_click(i) = 1 - (1 - p_d) exp(-i)                for arriving intensity i
    s_z  = ea(1-eb) P(mu_a eta) + eb(1-ea) P(mu_b eta)
         + ea eb P((mu_a+mu_b) eta) + (1-ea)(1-eb) p_d
    E_z s_z = ea eb P((mu_a+mu_b) eta) + (1-ea)(1-eb) p_d
    s_1^z = 1 - (1 - p_d)(1 - eta)                    true 1-photon count rate
    s_0^z = p_d
    e_1^ph = e_d + 0.5 p_d / (eta + p_d), clamped to [0, 0.5]

X-window single-side count rates at two probe intensities per party feed
the upper estimate of the single-photon count rate; together with the
vacuum count rate they lower-bound the multi-photon fraction of Z-window
pulses.  The fraction comes in two conventions: the plain form
1 - P1 s1 - P0 s0 and a variant normalised by the Z count rate s_z
(fraction of detections); both are exposed, selected by `normalized`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .cascade import BlockHistogram
from .core import binary_entropy, channel_transmittance
from .leakage import SkrBreakdown, expected_leaked_multi, leaked_useful_bound

__all__ = [
    "SnsParams",
    "SnsObservables",
    "DEFAULT_PARAMS",
    "simulate_sns_observables",
    "send_mixture_p0_p1",
    "s10_upper",
    "s01_upper",
    "s1z_upper_estimate",
    "delta_multi_z",
    "skr_sns",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SnsParams:
    """Source, send-probability and channel parameters for one SNS setup.

    mu_a1/mu_a2 (and the B-side pair) are the probe intensities used for
    the single-photon estimate; they default to the signal intensity and
    twice the signal intensity.
    """

    pz_a: float
    pz_b: float
    eps_a: float
    eps_b: float
    mu_a: float
    mu_b: float
    e_d: float
    alpha_db_per_km: float
    dark_rate: float
    eta_det: float
    mu_a1: float | None = None
    mu_a2: float | None = None
    mu_b1: float | None = None
    mu_b2: float | None = None

    def __post_init__(self) -> None:
        for name in ("pz_a", "pz_b", "eta_det"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        for name in ("eps_a", "eps_b"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {v}")
        if self.mu_a <= 0.0 or self.mu_b <= 0.0:
            raise ValueError(f"intensities must be positive, got {self.mu_a}, {self.mu_b}")
        if not 0.0 <= self.e_d <= 0.5:
            raise ValueError(f"e_d must be in [0, 0.5], got {self.e_d}")
        if not 0.0 <= self.dark_rate < 1.0:
            raise ValueError(f"dark_rate must be in [0, 1), got {self.dark_rate}")
        if self.alpha_db_per_km < 0.0:
            raise ValueError(f"alpha_db_per_km must be >= 0, got {self.alpha_db_per_km}")
        if self.mu_a1 is None:
            object.__setattr__(self, "mu_a1", self.mu_a)
        if self.mu_a2 is None:
            object.__setattr__(self, "mu_a2", 2.0 * self.mu_a)
        if self.mu_b1 is None:
            object.__setattr__(self, "mu_b1", self.mu_b)
        if self.mu_b2 is None:
            object.__setattr__(self, "mu_b2", 2.0 * self.mu_b)
        if not 0.0 < self.mu_a1 < self.mu_a2:
            raise ValueError(f"need 0 < mu_a1 < mu_a2, got {self.mu_a1}, {self.mu_a2}")
        if not 0.0 < self.mu_b1 < self.mu_b2:
            raise ValueError(f"need 0 < mu_b1 < mu_b2, got {self.mu_b1}, {self.mu_b2}")


# defaults used by the bundled experiment configs (asymmetric send
# probabilities/intensities, 0.2 dB/km fibre, 50% detectors)
DEFAULT_PARAMS = SnsParams(
    pz_a=0.7,
    pz_b=0.8,
    eps_a=0.022,
    eps_b=0.48,
    mu_a=0.042,
    mu_b=0.425,
    e_d=0.05,
    alpha_db_per_km=0.20,
    dark_rate=1e-10,
    eta_det=0.50,
)


@dataclass(frozen=True)
class SnsObservables:
    """Count rates and error rates of the SNS link at one distance."""

    eta: float  # per-arm transmittance
    p_d: float
    s_z: float
    e_z: float
    s1z_true: float
    s0z: float
    e1_ph: float
    s00: float  # X-window vacuum/vacuum count rate
    s10: float  # A sends probe 1, B silent
    s20: float  # A sends probe 2, B silent
    s01: float  # B sends probe 1, A silent
    s02: float  # B sends probe 2, A silent


def _p_click(p_d: float, arriving_intensity: float) -> float:
    return 1.0 - (1.0 - p_d) * math.exp(-arriving_intensity)


def simulate_sns_observables(params: SnsParams, distance_km: float) -> SnsObservables:
    """Evaluate the channel model at total link length distance_km."""
    p = params
    eta = channel_transmittance(distance_km / 2.0, p.alpha_db_per_km, p.eta_det)
    p_d = 2.0 * p.dark_rate * (1.0 - p.dark_rate)
    ea, eb = p.eps_a, p.eps_b
    s_z = (
        ea * (1.0 - eb) * _p_click(p_d, p.mu_a * eta)
        + eb * (1.0 - ea) * _p_click(p_d, p.mu_b * eta)
        + ea * eb * _p_click(p_d, (p.mu_a + p.mu_b) * eta)
        + (1.0 - ea) * (1.0 - eb) * p_d
    )
    ez_sz = ea * eb * _p_click(p_d, (p.mu_a + p.mu_b) * eta) + (1.0 - ea) * (1.0 - eb) * p_d
    e1_ph = min(max(p.e_d + 0.5 * p_d / (eta + p_d), 0.0), 0.5)
    return SnsObservables(
        eta=eta,
        p_d=p_d,
        s_z=s_z,
        e_z=ez_sz / s_z,
        s1z_true=1.0 - (1.0 - p_d) * (1.0 - eta),
        s0z=p_d,
        e1_ph=e1_ph,
        s00=p_d,
        s10=_p_click(p_d, p.mu_a1 * eta),
        s20=_p_click(p_d, p.mu_a2 * eta),
        s01=_p_click(p_d, p.mu_b1 * eta),
        s02=_p_click(p_d, p.mu_b2 * eta),
    )


def send_mixture_p0_p1(params: SnsParams) -> tuple[float, float]:
    """Vacuum and single-photon emission probabilities of a Z window.

    The Z-window photon number is a mixture over the four send/not-send
    combinations; P0 + P1 <= 1 always.
    """
    p = params
    ea, eb = p.eps_a, p.eps_b
    p0 = (
        ea * (1.0 - eb) * math.exp(-p.mu_a)
        + eb * (1.0 - ea) * math.exp(-p.mu_b)
        + ea * eb * math.exp(-(p.mu_a + p.mu_b))
        + (1.0 - ea) * (1.0 - eb)
    )
    p1 = (
        ea * (1.0 - eb) * p.mu_a * math.exp(-p.mu_a)
        + eb * (1.0 - ea) * p.mu_b * math.exp(-p.mu_b)
        + ea * eb * (p.mu_a + p.mu_b) * math.exp(-(p.mu_a + p.mu_b))
    )
    return p0, p1


def _clamp01(value: float, name: str) -> float:
    if value < 0.0 or value > 1.0:
        log.debug("%s=%.6g clamped into [0, 1]", name, value)
        return min(max(value, 0.0), 1.0)
    return value


def s10_upper(params: SnsParams, obs: SnsObservables) -> float:
    """Upper bound on the single-photon-from-A count rate (two probes)."""
    p = params
    raw = (math.exp(p.mu_a2) * obs.s20 - math.exp(p.mu_a1) * obs.s10) / (p.mu_a2 - p.mu_a1)
    return _clamp01(raw, "s10_upper")


def s01_upper(params: SnsParams, obs: SnsObservables) -> float:
    """Upper bound on the single-photon-from-B count rate (two probes)."""
    p = params
    raw = (math.exp(p.mu_b2) * obs.s02 - math.exp(p.mu_b1) * obs.s01) / (p.mu_b2 - p.mu_b1)
    return _clamp01(raw, "s01_upper")


def s1z_upper_estimate(params: SnsParams, obs: SnsObservables) -> float:
    """Upper estimate of the Z-window single-photon count rate.

    Probe-intensity-weighted mixture of the per-side upper bounds.
    """
    p = params
    w = p.mu_a1 + p.mu_b1
    return (p.mu_a1 * s10_upper(params, obs) + p.mu_b1 * s01_upper(params, obs)) / w


def delta_multi_z(
    params: SnsParams,
    obs: SnsObservables,
    use_estimators: bool = True,
    normalized: bool = False,
) -> float:
    """Multi-photon fraction of Z windows, clamped to [0, 1].

    With use_estimators the single-photon count rate comes from the probe
    bounds (upper estimates), which minimises the result - that is the
    certifiable lower bound an experiment can claim.  Without it the
    model-true count rates are used.  `normalized` divides the subtracted
    mass by the Z count rate s_z (fraction-of-detections convention)
    instead of using the plain form.
    """
    p0, p1 = send_mixture_p0_p1(params)
    s1 = s1z_upper_estimate(params, obs) if use_estimators else obs.s1z_true
    s0 = obs.s00 if use_estimators else obs.s0z
    mass = p1 * s1 + p0 * s0
    if normalized:
        mass = mass / obs.s_z
    return _clamp01(1.0 - mass, "delta_multi_z")


def skr_sns(
    params: SnsParams,
    obs: SnsObservables,
    delta_multi_min: float,
    hist: BlockHistogram,
    f_ec: float | None = None,
) -> SkrBreakdown:
    """Key rates with full-leakage vs useful-leakage reconciliation cost.

    The reconciliation charge is per detected Z bit, so the per-bit
    leakage is multiplied by the Z count rate s_z.  f_ec=None charges the
    original rate with the full measured leakage (equivalent to deriving
    the inefficiency from the histogram, but sharing the improved
    charge's float path so the rate comparison is exact); in the
    rescaled-histogram convention that inefficiency is exactly 1.
    """
    if not 0.0 <= delta_multi_min <= 1.0:
        raise ValueError(f"delta_multi_min must be in [0, 1], got {delta_multi_min}")
    p = params
    n = hist.n
    h_ez = binary_entropy(obs.e_z)
    t_single = (
        p.eps_a * (1.0 - p.eps_b) * p.mu_a * math.exp(-p.mu_a)
        + p.eps_b * (1.0 - p.eps_a) * p.mu_b * math.exp(-p.mu_b)
    ) * obs.s1z_true * (1.0 - binary_entropy(obs.e1_ph))
    leaked_all_pb = hist.total() / n
    leaked_useful_pb = leaked_useful_bound(hist, delta_multi_min) / n
    leaked_multi_pb = expected_leaked_multi(hist, delta_multi_min) / n
    if f_ec is None:
        charge_original = obs.s_z * leaked_all_pb
    else:
        charge_original = f_ec * obs.s_z * h_ez
    scale = p.pz_a * p.pz_b
    return SkrBreakdown(
        r_original=scale * max(t_single - charge_original, 0.0),
        r_improved=scale * max(t_single - obs.s_z * leaked_useful_pb, 0.0),
        leaked_all_per_bit=leaked_all_pb,
        leaked_multi_per_bit=leaked_multi_pb,
        leaked_useful_per_bit=leaked_useful_pb,
        delta_multi_min=delta_multi_min,
    )
