"""Lower bound to the ROC from the data-processing inequality.

Whatever the fusion rule, the decision ``xi_hat`` can carry no more
information about ``xi`` than the observation does. Fixing the false-alarm
probability, the bound is the smallest missed-detection probability whose
binary asymmetric channel still respects that information budget.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from rocbound.channel_mi import (
    GammaMixture,
    Prior,
    as_prior,
    averaged_deficit,
    biawgn_deficit,
)
from rocbound.special_functions import LN2, binary_entropy

_PMD_TOL = 1e-14
_LOG_P_FLOOR = -745.0


class NoSolutionError(ValueError):
    """The requested information exceeds what the prior allows."""


@dataclass(frozen=True)
class OperatingPoint:
    pfa: float
    pmd: float

    def __post_init__(self):
        for name in ("pfa", "pmd"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


class CurveSource(str, enum.Enum):
    DPI_BOUND = "dpi_bound"
    ENERGY_DETECTOR_ANALYTIC = "energy_detector_analytic"
    ENERGY_DETECTOR_MONTECARLO = "energy_detector_montecarlo"


@dataclass(frozen=True)
class RocCurve:
    """Points ordered by strictly increasing Pfa, with nonincreasing Pmd."""

    points: tuple[OperatingPoint, ...]
    source: CurveSource
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "source", CurveSource(self.source))
        for prev, cur in zip(self.points, self.points[1:]):
            if not cur.pfa > prev.pfa:
                raise ValueError("RocCurve pfa values must be strictly increasing")
            if cur.pmd > prev.pmd + 1e-9:
                raise ValueError("RocCurve pmd values must be nonincreasing")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def pfa(self) -> np.ndarray:
        return np.array([p.pfa for p in self.points])

    @property
    def pmd(self) -> np.ndarray:
        return np.array([p.pmd for p in self.points])


def _bac_mi_array(alpha: float, pfa: np.ndarray, pmd: np.ndarray) -> np.ndarray:
    ab = 1.0 - alpha
    q = np.clip(alpha * (1.0 - pfa) + ab * pmd, 0.0, 1.0)
    return binary_entropy(q) - alpha * binary_entropy(pfa) - ab * binary_entropy(pmd)


def _min_pmd(prior: Prior, pfa: np.ndarray, budget: float) -> np.ndarray:
    """Bisection on ``[0, 1 - pfa]``, vectorized over the Pfa grid."""
    lo = np.zeros_like(pfa)
    hi = 1.0 - pfa
    if budget <= 0.0:
        return hi  # only the independent channel carries no information
    slack = _bac_mi_array(prior.alpha, pfa, lo) <= budget
    while True:
        active = (hi - lo > _PMD_TOL) & ~slack
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        above = _bac_mi_array(prior.alpha, pfa, mid) > budget
        lo = np.where(active & above, mid, lo)
        hi = np.where(active & ~above, mid, hi)
    return np.where(slack, 0.0, hi)


def roc_lower_bound(prior, mi: float, pfa_grid: Iterable[float]) -> RocCurve:
    """Pmd-minimal boundary of ``{(Pfa, Pmd): BAC MI <= mi}`` on a Pfa grid.

    Pmd is searched on ``[0, 1 - Pfa]``, where the channel MI decreases
    monotonically in Pmd. Grid values are sorted and de-duplicated.
    """
    prior = as_prior(prior)
    if mi < 0 or math.isnan(mi):
        raise ValueError(f"mi must be nonnegative, got {mi!r}")
    budget = min(mi, prior.entropy)
    grid = np.array(sorted(set(float(p) for p in pfa_grid)), dtype=float)
    if np.any((grid < 0.0) | (grid > 1.0)):
        raise ValueError("pfa grid values must lie in [0, 1]")
    pmd = _min_pmd(prior, grid, budget) if grid.size else grid
    pts = tuple(OperatingPoint(float(p), float(m)) for p, m in zip(grid, pmd))
    return RocCurve(pts, CurveSource.DPI_BOUND, {"alpha": prior.alpha, "mi_bits": budget})


def symmetric_gap(prior, p: float) -> float:
    """``H_b(alpha) - I`` (bits) for the symmetric channel Pfa = Pmd = p.

    Written so both pieces stay accurate when the gap is far below one ulp
    of ``H_b(alpha)``.
    """
    prior = as_prior(prior)
    a = prior.alpha
    if prior.degenerate:
        return 0.0
    q = a + p * (1.0 - 2.0 * a)  # P(xi_hat = 0)
    d = q - a
    f = a * math.log1p(d / a) + d * math.log(q)
    f += (1.0 - a) * math.log1p(-d / (1.0 - a)) - d * math.log1p(-q)
    return max(f / LN2 + binary_entropy(p), 0.0)


def equilibrium_probability(prior, mi: float | None = None, *,
                            deficit: float | None = None) -> float:
    """Pfa = Pmd point of the bound: the ``p`` in [0, 1/2] whose symmetric BAC carries ``mi``.

    Pass ``deficit = H_b(alpha) - mi`` instead of ``mi`` to keep precision
    when the information is within rounding of ``H_b(alpha)``.
    """
    prior = as_prior(prior)
    h = prior.entropy
    if (mi is None) == (deficit is None):
        raise TypeError("pass exactly one of mi or deficit")
    if deficit is None:
        if mi < 0 or math.isnan(mi):
            raise ValueError(f"mi must be nonnegative, got {mi!r}")
        if mi > h * (1.0 + 1e-12) + 1e-15:
            raise NoSolutionError(f"mi={mi!r} exceeds H_b(alpha)={h!r}")
        deficit = h - mi
    if deficit < 0:
        raise NoSolutionError(f"negative deficit {deficit!r}")
    if deficit >= h:
        return 0.5
    if deficit == 0.0:
        return 0.0
    lo, hi = _LOG_P_FLOOR, math.log(0.5)
    if symmetric_gap(prior, math.exp(lo)) >= deficit:
        return 0.0
    # gap increases with p on (0, 1/2); bisect in log p for relative accuracy
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if symmetric_gap(prior, math.exp(mid)) < deficit:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return math.exp(0.5 * (lo + hi))


def equilibrium_small_alpha_mi(alpha: float, peq: float, order: int) -> float:
    """Small-alpha expansion of the symmetric-channel MI at ``Pfa = Pmd = peq``.

    Both terms are in bits; the quadratic one comes from the natural-log
    expansion divided by ln 2, which is what the exact channel formula
    confirms.
    """
    if not 0.0 < peq < 0.5:
        raise ValueError(f"peq must lie in (0, 0.5), got {peq!r}")
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    c = 1.0 - 2.0 * peq
    out = c * math.log2((1.0 - peq) / peq) * alpha
    if order == 2:
        out -= c * c / (2.0 * peq * (1.0 - peq) * LN2) * alpha * alpha
    return out


def equilibrium_asymptotic(snr: float) -> float:
    """``exp(-snr)``: the equilibrium probability when both alpha and Peq are small."""
    if snr <= 0:
        raise ValueError(f"snr must be positive, got {snr!r}")
    return math.exp(-snr)


def equilibrium_vs_snr_curve(prior, snr_grid: Sequence[float],
                             mi_source: str | GammaMixture = "quadrature",
                             ) -> list[tuple[float, float]]:
    """``(snr, Peq)`` pairs for linear additive SNRs.

    ``mi_source`` is ``"quadrature"`` for known gains and signal, or a
    :class:`GammaMixture` whose shape is rescaled to each mean SNR.
    """
    prior = as_prior(prior)
    grid = [float(s) for s in snr_grid]
    if any(s < 0 for s in grid) or any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("snr grid must be nonnegative and ascending")
    if isinstance(mi_source, str) and mi_source != "quadrature":
        raise ValueError(f"unknown mi source {mi_source!r}")
    out = []
    for s in grid:
        if s == 0.0:
            d = prior.entropy
        elif isinstance(mi_source, GammaMixture):
            d = averaged_deficit(prior, mi_source.scaled_to_mean(s))
        else:
            d = biawgn_deficit(prior, s)
        out.append((s, equilibrium_probability(prior, deficit=d)))
    return out
