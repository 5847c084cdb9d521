"""BIAWGN channel under all-zero transmission (bit 0 -> +1, bit 1 -> -1)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelSpec:
    sigma: float
    rate: float

    def __post_init__(self):
        _check(self.sigma, self.rate)

    @property
    def ebn0_db(self) -> float:
        return sigma_to_ebn0_db(self.sigma, self.rate)


def _check(sigma: float, rate: float | None = None) -> None:
    if not (sigma > 0 and math.isfinite(sigma)):
        raise ValueError(f"sigma must be positive and finite, got {sigma}")
    if rate is not None and not 0 < rate < 1:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")


def sigma_to_ebn0_db(sigma: float, rate: float) -> float:
    """Eb/N0 in dB for noise std ``sigma`` at code rate ``rate``: 1 / (2 R sigma^2)."""
    _check(sigma, rate)
    return 10.0 * math.log10(1.0 / (2.0 * rate * sigma * sigma))


def ebn0_db_to_sigma(ebn0_db: float, rate: float) -> float:
    if not 0 < rate < 1:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def llr_from_received(y, sigma: float) -> np.ndarray:
    _check(sigma)
    return 2.0 * np.asarray(y, dtype=np.float64) / (sigma * sigma)


def sample_llr(n: int, sigma: float, seed: int) -> np.ndarray:
    """n i.i.d. channel LLRs ~ N(2/sigma^2, 4/sigma^2) for the all-zero word."""
    _check(sigma)
    rng = np.random.default_rng(seed)
    y = 1.0 + sigma * rng.standard_normal(n)
    return llr_from_received(y, sigma)
