"""Closed-form math kernel shared by every other module in the package.

Binary entropy, Poisson photon-number statistics, fibre transmittance, and
the seed-splitting rule that all stochastic components derive their RNG
streams from.  Everything here is deterministic and side-effect free.
"""

from __future__ import annotations

import hashlib
import math

__all__ = [
    "binary_entropy",
    "poisson_pmf",
    "multi_photon_fraction",
    "channel_transmittance",
    "task_seed",
]


def binary_entropy(x: float) -> float:
    """Shannon entropy of a Bernoulli(x) bit, in bits.

    Defined on [0, 1]; the endpoint values use the limit H(0) = H(1) = 0.

    Raises:
        ValueError: if x lies outside [0, 1].
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary_entropy expects x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def poisson_pmf(mu: float, n: int) -> float:
    """Probability of emitting exactly n photons from a phase-randomised
    coherent pulse of mean photon number mu.

    Raises:
        ValueError: if mu < 0 or n is not a nonnegative integer.
    """
    if mu < 0.0:
        raise ValueError(f"poisson_pmf expects mu >= 0, got {mu}")
    if n != int(n) or n < 0:
        raise ValueError(f"poisson_pmf expects integer n >= 0, got {n}")
    n = int(n)
    if mu == 0.0:
        return 1.0 if n == 0 else 0.0
    # log-space form stays finite for large n where mu**n would overflow
    return math.exp(n * math.log(mu) - mu - math.lgamma(n + 1))


def multi_photon_fraction(mu: float) -> float:
    """Fraction of pulses carrying two or more photons: 1 - e^-mu (1 + mu)."""
    if mu < 0.0:
        raise ValueError(f"multi_photon_fraction expects mu >= 0, got {mu}")
    # exact complement of the n=0 and n=1 terms; clamp fp dust at tiny mu
    return max(0.0, 1.0 - math.exp(-mu) * (1.0 + mu))


def channel_transmittance(distance_km: float, alpha_db_per_km: float, eta_det: float) -> float:
    """Overall transmittance of a fibre of the given length followed by a
    detector of efficiency eta_det: eta_det * 10^(-alpha * L / 10).
    """
    if distance_km < 0.0:
        raise ValueError(f"distance_km must be >= 0, got {distance_km}")
    if alpha_db_per_km < 0.0:
        raise ValueError(f"alpha_db_per_km must be >= 0, got {alpha_db_per_km}")
    if not 0.0 < eta_det <= 1.0:
        raise ValueError(f"eta_det must be in (0, 1], got {eta_det}")
    return eta_det * 10.0 ** (-alpha_db_per_km * distance_km / 10.0)


def task_seed(master_seed: int, *labels: object) -> int:
    """Derive a 64-bit per-task seed from one master seed and a label path.

    Every RNG in the repository is seeded through this rule, so a single
    master seed pins the entire run.  The split is a BLAKE2b digest of the
    decimal master seed followed by each stringified label with a length
    prefix, so distinct label paths give independent streams and no two
    paths collide by concatenation.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master_seed)).encode())
    for label in labels:
        encoded = str(label).encode()
        h.update(f"/{len(encoded)}:".encode())
        h.update(encoded)
    return int.from_bytes(h.digest(), "little")
