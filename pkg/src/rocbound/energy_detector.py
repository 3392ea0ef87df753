"""Energy detection baseline.

All energies live in the whitened domain where every complex noise sample
has unit variance, so ``||Z||^2`` is Gamma(kn, 1) and ``||A + Z||^2`` is a
scaled noncentral chi-square with noncentrality ``2 snr``.

The printed decision rule compares the energy with ``theta + ln(alpha_bar)``
for false alarms and ``theta + ln(alpha)`` for missed detections. When
alpha != 1/2 these offsets differ and leave a band of energies with no
decision. :func:`pfa_analytic` and :func:`pmd_analytic` follow those two
formulas literally; :func:`rule_operating_point` evaluates the single rule
the simulator actually runs, which declares "busy" inside the band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from rocbound.channel_mi import GammaMixture
from rocbound.roc_bound import CurveSource, OperatingPoint, RocCurve
from rocbound.special_functions import (
    marcum_q_complement,
    regularized_gamma_upper,
)

DEFAULT_GRID_POINTS = 400


class UnreachableTargetError(ValueError):
    pass


@dataclass(frozen=True)
class EnergyDetectorConfig:
    kn: int
    snr: float
    alpha: float
    theta: float

    def __post_init__(self):
        if int(self.kn) != self.kn or self.kn < 1:
            raise ValueError(f"kn must be a positive integer, got {self.kn!r}")
        if self.snr < 0:
            raise ValueError(f"snr must be nonnegative, got {self.snr!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")


def _safe_log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _tail_h0(kn: int, u: float) -> float:
    return 1.0 if u <= 0 else regularized_gamma_upper(int(kn), u)


def _cdf_h1(kn: int, snr: float, u: float) -> float:
    if u <= 0:
        return 0.0
    return marcum_q_complement(int(kn), math.sqrt(2.0 * snr), math.sqrt(2.0 * u))


def pfa_analytic(cfg: EnergyDetectorConfig) -> float:
    """``P(||Z||^2 > theta + ln alpha_bar)``."""
    return _tail_h0(cfg.kn, cfg.theta + _safe_log(1.0 - cfg.alpha))


def pmd_analytic(cfg: EnergyDetectorConfig) -> float:
    """``P(||A + Z||^2 < theta + ln alpha)``."""
    return _cdf_h1(cfg.kn, cfg.snr, cfg.theta + _safe_log(cfg.alpha))


def decision_threshold(alpha: float, theta: float) -> float:
    """Energy above which the simulated detector declares the channel busy."""
    return theta + _safe_log(min(alpha, 1.0 - alpha))


def rule_operating_point(cfg: EnergyDetectorConfig) -> OperatingPoint:
    """(Pfa, Pmd) of the busy-on-tie rule; equals the printed pair at alpha = 1/2."""
    u = decision_threshold(cfg.alpha, cfg.theta)
    return OperatingPoint(_tail_h0(cfg.kn, u), _cdf_h1(cfg.kn, cfg.snr, u))


def default_theta_grid(kn: int, snr: float, alpha: float = 0.5,
                       points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Thresholds covering both hypotheses to +-8 standard deviations.

    The grid is laid out in the false-alarm energy ``u = theta + ln alpha_bar``
    and shifted back to ``theta``.
    """
    center = kn + snr
    spread = math.sqrt(kn + 2.0 * snr)
    u = np.linspace(max(0.0, center - 8.0 * spread), center + 8.0 * spread, points)
    return u - _safe_log(1.0 - alpha)


def _assemble(pairs: Iterable[tuple[float, float]], source: CurveSource,
              meta: dict) -> RocCurve:
    best: dict[float, float] = {}
    for pfa, pmd in pairs:
        best[pfa] = min(pmd, best.get(pfa, math.inf))
    pts = []
    for pfa in sorted(best):
        pmd = best[pfa]
        if pts and pmd > pts[-1].pmd:
            pmd = pts[-1].pmd  # rounding-level wiggle only; both maps are monotone in theta
        pts.append(OperatingPoint(pfa, pmd))
    return RocCurve(tuple(pts), source, meta)


def roc_sweep(kn: int, snr: float, alpha: float, theta_grid: Sequence[float] | None = None,
              *, rule: bool = False) -> RocCurve:
    """Analytic energy-detector ROC over a threshold grid.

    ``rule=True`` uses :func:`rule_operating_point` instead of the printed
    pair of formulas. Duplicate Pfa values keep their smallest Pmd.
    """
    if theta_grid is None:
        theta_grid = default_theta_grid(kn, snr, alpha)
    pairs = []
    for theta in theta_grid:
        cfg = EnergyDetectorConfig(kn, snr, alpha, float(theta))
        if rule:
            op = rule_operating_point(cfg)
            pairs.append((op.pfa, op.pmd))
        else:
            pairs.append((pfa_analytic(cfg), pmd_analytic(cfg)))
    meta = {"kn": kn, "snr": snr, "alpha": alpha, "rule": "busy_on_tie" if rule else "printed"}
    return _assemble(pairs, CurveSource.ENERGY_DETECTOR_ANALYTIC, meta)


def threshold_for_pfa(kn: int, alpha: float, target_pfa: float) -> float:
    """Threshold ``theta`` at which :func:`pfa_analytic` equals ``target_pfa``."""
    if not 0.0 < target_pfa < 1.0:
        raise UnreachableTargetError(f"target pfa must lie in (0, 1), got {target_pfa!r}")
    if alpha >= 1.0:
        raise UnreachableTargetError("alpha = 1 pins the false-alarm threshold at -inf")
    lo, hi = 0.0, float(kn)
    while regularized_gamma_upper(kn, hi) > target_pfa:
        lo, hi = hi, 2.0 * hi
        if hi > 1e6:
            raise UnreachableTargetError(f"target pfa {target_pfa!r} below representable tail")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if regularized_gamma_upper(kn, mid) > target_pfa:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4e-16 * hi:
            break
    return 0.5 * (lo + hi) - math.log(1.0 - alpha)


# --------------------------------------------------------------------------
# Rayleigh fading: snr random with an exponential-mixture law
# --------------------------------------------------------------------------

def _pmd_exponential_snr(kn: int, mean: float, u: float) -> float:
    """``P(||A + Z||^2 < u)`` when ``||A||^2`` is exponential with the given mean.

    Conditioning on the Poisson index of the noncentral chi-square collapses
    the average to ``e^-u sum_{j >= kn-1} (1 - c^(j-kn+1)) u^j / j!`` with
    ``c = mean / (1 + mean)``; every term is nonnegative.
    """
    if u <= 0:
        return 0.0
    n = kn - 1
    log_c = math.log(mean) - math.log1p(mean)
    j_hi = int(max(n, u) + 12.0 * math.sqrt(u) + 60)
    j = np.arange(n, j_hi + 1)
    log_fact = np.array([math.lgamma(v + 1.0) for v in range(n, j_hi + 1)])
    terms = np.exp(-u + j * math.log(u) - log_fact) * -np.expm1((j - n) * log_c)
    return min(max(math.fsum(terms), 0.0), 1.0)


def pmd_rayleigh_at_energy(kn: int, mixture: GammaMixture, u: float) -> float:
    """Fading-averaged ``P(||A + Z||^2 < u)`` at energy threshold ``u``."""
    if u <= 0:
        return 0.0
    out = math.fsum(w * _pmd_exponential_snr(kn, m, u) for w, m in mixture.components)
    out += math.fsum(w * _cdf_h1(kn, v, u) for w, v in mixture.atoms)
    return min(max(out, 0.0), 1.0)


def pmd_rayleigh(kn: int, mixture: GammaMixture, alpha: float, theta: float) -> float:
    """Missed-detection probability averaged over the random additive SNR."""
    return pmd_rayleigh_at_energy(kn, mixture, theta + _safe_log(alpha))


def roc_sweep_rayleigh(kn: int, mixture: GammaMixture, alpha: float,
                       theta_grid: Sequence[float] | None = None,
                       *, rule: bool = False) -> RocCurve:
    """Analytic ROC of the energy detector under fading, snr drawn from ``mixture``."""
    if theta_grid is None:
        theta_grid = default_theta_grid(kn, mixture.mean, alpha)
    pairs = []
    for theta in theta_grid:
        theta = float(theta)
        if rule:
            u = decision_threshold(alpha, theta)
            pairs.append((_tail_h0(kn, u), pmd_rayleigh_at_energy(kn, mixture, u)))
        else:
            cfg = EnergyDetectorConfig(kn, 0.0, alpha, theta)
            pairs.append((pfa_analytic(cfg), pmd_rayleigh(kn, mixture, alpha, theta)))
    meta = {"kn": kn, "snr": mixture.mean, "alpha": alpha, "fading": "rayleigh",
            "rule": "busy_on_tie" if rule else "printed"}
    return _assemble(pairs, CurveSource.ENERGY_DETECTOR_ANALYTIC, meta)


__all__ = [
    "EnergyDetectorConfig",
    "UnreachableTargetError",
    "decision_threshold",
    "default_theta_grid",
    "pfa_analytic",
    "pmd_analytic",
    "pmd_rayleigh",
    "pmd_rayleigh_at_energy",
    "roc_sweep",
    "roc_sweep_rayleigh",
    "rule_operating_point",
    "threshold_for_pfa",
]
