"""Seeded simulation of the K-sensor, N-sample observation model.

``Y = xi * h s^H + Z``, with ``z_k(n) ~ CN(0, sigma_k^2)`` realized as two
real Gaussians of variance ``sigma_k^2 / 2``. Rayleigh gains and random
signal energies are redrawn once per observation window (block fading).

Reproducibility: trials are split into fixed-size blocks and block ``b`` of
purpose ``tag`` always draws from ``SeedSequence(seed, spawn_key=(tag, b))``.
Blocks are reduced in index order, so results do not depend on how many
worker threads ran them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from rocbound.channel_mi import GammaMixture, additive_snr, rayleigh_gamma_mixture
from rocbound.energy_detector import decision_threshold
from rocbound.special_functions import log1p_exp_scaled

BLOCK_SIZE = 1 << 14
WILSON_Z = 1.959963984540054

_TAG_H0, _TAG_H1, _TAG_VECTOR_MI, _TAG_GAMMA = 0, 1, 2, 3


@dataclass(frozen=True)
class FixedGains:
    values: tuple[complex, ...]


@dataclass(frozen=True)
class RayleighGains:
    """Per-sensor mean-square gains ``E|h_k|^2``."""

    mean_square: tuple[float, ...]


@dataclass(frozen=True)
class FixedSignal:
    samples: tuple[complex, ...]


@dataclass(frozen=True)
class EnergyPmf:
    """``||s||^2 = S_m`` with probability ``p_m``; the energy is spread evenly over the N samples."""

    pairs: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Scenario:
    k: int
    n: int
    alpha: float
    gains: FixedGains | RayleighGains
    signal: FixedSignal | EnergyPmf
    noise_vars: tuple[float, ...]
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError("need at least one sensor and one sample")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if len(self.noise_vars) != self.k or any(v <= 0 for v in self.noise_vars):
            raise ValueError("need one positive noise variance per sensor")
        g = self.gains
        g_len = len(g.values) if isinstance(g, FixedGains) else len(g.mean_square)
        if g_len != self.k:
            raise ValueError(f"{g_len} gains for {self.k} sensors")
        if isinstance(g, RayleighGains) and any(m <= 0 for m in g.mean_square):
            raise ValueError("Rayleigh mean-square gains must be positive")
        s = self.signal
        if isinstance(s, FixedSignal):
            if len(s.samples) != self.n:
                raise ValueError(f"{len(s.samples)} signal samples for n={self.n}")
        else:
            if any(e < 0 or p < 0 for e, p in s.pairs):
                raise ValueError("energies and probabilities must be nonnegative")
            if abs(math.fsum(p for _, p in s.pairs) - 1.0) > 1e-10:
                raise ValueError("signal energy pmf does not sum to 1")

    @property
    def kn(self) -> int:
        return self.k * self.n

    @property
    def mean_signal_energy(self) -> float:
        if isinstance(self.signal, FixedSignal):
            return float(np.sum(np.abs(np.asarray(self.signal.samples)) ** 2))
        return math.fsum(e * p for e, p in self.signal.pairs)

    @property
    def mean_snrs(self) -> np.ndarray:
        """Per-sensor ``E|h_k|^2 / sigma_k^2`` (Rayleigh) or ``|h_k|^2 / sigma_k^2``."""
        g = self.gains
        ms = (np.abs(np.asarray(g.values)) ** 2 if isinstance(g, FixedGains)
              else np.asarray(g.mean_square, dtype=float))
        return ms / np.asarray(self.noise_vars, dtype=float)

    @property
    def additive_snr(self) -> float:
        """Mean of the additive SNR over fading and signal randomness."""
        if isinstance(self.gains, FixedGains) and isinstance(self.signal, FixedSignal):
            return additive_snr(self.gains.values, self.mean_signal_energy, self.noise_vars)
        return float(np.sum(self.mean_snrs)) * self.mean_signal_energy

    @property
    def is_random(self) -> bool:
        return isinstance(self.gains, RayleighGains) or isinstance(self.signal, EnergyPmf)

    def gamma_mixture(self) -> GammaMixture:
        """Law of the additive SNR (a point mass when nothing is random)."""
        pmf = (((self.mean_signal_energy, 1.0),) if isinstance(self.signal, FixedSignal)
               else self.signal.pairs)
        if isinstance(self.gains, RayleighGains):
            return rayleigh_gamma_mixture(self.mean_snrs, pmf)
        base = float(np.sum(self.mean_snrs))
        return GammaMixture((), tuple((p, base * e) for e, p in pmf))


class EstimateWithCI(NamedTuple):
    value: float
    trials: int
    ci_low: float
    ci_high: float
    successes: int


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> EstimateWithCI:
    """Empirical frequency with its Wilson score interval."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    return EstimateWithCI(p, trials, max(0.0, min(p, center - half)),
                          min(1.0, max(p, center + half)), successes)


def make_stream(seed: int, tag: int, block: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(tag, block))))


def _blocks(trials: int, block_size: int) -> list[int]:
    full, rest = divmod(trials, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _run_blocks(fn: Callable[[int, int], np.ndarray], trials: int, block_size: int,
                workers: int | None) -> np.ndarray:
    sizes = _blocks(trials, block_size)
    jobs = list(enumerate(sizes))
    if workers and workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: fn(*job), jobs))
    else:
        parts = [fn(b, size) for b, size in jobs]
    return np.concatenate(parts) if parts else np.empty(0)


def _complex_normal(rng: np.random.Generator, shape, var) -> np.ndarray:
    scale = np.sqrt(np.asarray(var, dtype=float) / 2.0)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * scale


def _draw_batch(scenario: Scenario, xi: int, count: int, rng: np.random.Generator) -> np.ndarray:
    k, n = scenario.k, scenario.n
    sig = np.asarray(scenario.noise_vars, dtype=float)[None, :, None]
    y = _complex_normal(rng, (count, k, n), sig)
    if not xi:
        return y
    g = scenario.gains
    if isinstance(g, FixedGains):
        h = np.broadcast_to(np.asarray(g.values, dtype=complex), (count, k))
    else:
        h = _complex_normal(rng, (count, k), np.asarray(g.mean_square, dtype=float)[None, :])
    s = scenario.signal
    if isinstance(s, FixedSignal):
        s_vec = np.broadcast_to(np.asarray(s.samples, dtype=complex), (count, n))
    else:
        energies = np.array([e for e, _ in s.pairs])
        probs = np.array([p for _, p in s.pairs])
        pick = rng.choice(energies.size, size=count, p=probs / probs.sum())
        s_vec = np.broadcast_to(np.sqrt(energies[pick] / n)[:, None], (count, n)).astype(complex)
    return y + h[:, :, None] * np.conj(s_vec)[:, None, :]


def draw_observation(scenario: Scenario, xi: int, stream: np.random.Generator) -> np.ndarray:
    """One K x N observation window under hypothesis ``xi``."""
    if xi not in (0, 1):
        raise ValueError("xi must be 0 or 1")
    return _draw_batch(scenario, xi, 1, stream)[0]


def whitened_energy(y: np.ndarray, noise_vars: Sequence[float]) -> np.ndarray:
    """``sum_k sum_n |y_k(n)|^2 / sigma_k^2`` over the last two axes."""
    w = np.abs(y) ** 2 / np.asarray(noise_vars, dtype=float)[:, None]
    return w.sum(axis=(-2, -1))


def simulate_energies(scenario: Scenario, xi: int, trials: int, *,
                      seed: int | None = None, block_size: int = BLOCK_SIZE,
                      workers: int | None = None) -> np.ndarray:
    """Whitened energies of ``trials`` independent windows, in deterministic order."""
    seed = scenario.seed if seed is None else seed
    tag = _TAG_H1 if xi else _TAG_H0

    def block(b, size):
        y = _draw_batch(scenario, xi, size, make_stream(seed, tag, b))
        return whitened_energy(y, scenario.noise_vars)

    return _run_blocks(block, trials, block_size, workers)


class RocEstimate(NamedTuple):
    theta: float
    pfa: EstimateWithCI
    pmd: EstimateWithCI


def estimate_detector_roc(scenario: Scenario, theta_grid: Sequence[float], trials: int, *,
                          seed: int | None = None, block_size: int = BLOCK_SIZE,
                          workers: int | None = None) -> list[RocEstimate]:
    """Empirical (Pfa, Pmd) of the energy detector at each threshold.

    The detector declares "busy" when the whitened energy exceeds
    ``theta + ln(min(alpha, alpha_bar))``. The same simulated windows are
    reused for every threshold.
    """
    if trials < 1000:
        raise ValueError("use at least 1000 trials")
    e0 = np.sort(simulate_energies(scenario, 0, trials, seed=seed,
                                   block_size=block_size, workers=workers))
    e1 = np.sort(simulate_energies(scenario, 1, trials, seed=seed,
                                   block_size=block_size, workers=workers))
    out = []
    for theta in theta_grid:
        u = decision_threshold(scenario.alpha, float(theta))
        false_alarms = trials - int(np.searchsorted(e0, u, side="right"))
        misses = int(np.searchsorted(e1, u, side="right"))
        out.append(RocEstimate(float(theta), wilson_interval(false_alarms, trials),
                               wilson_interval(misses, trials)))
    return out


class MiEstimate(NamedTuple):
    value: float
    stderr: float
    trials: int


def snr_from_vector_gain(a_vector: Sequence[float]) -> float:
    """Additive SNR of the scalar channel equivalent to ``y = X a + z``: ``2 ||a||^2``."""
    a = np.asarray(a_vector, dtype=float)
    return 2.0 * float(a @ a)


def estimate_vector_mi(alpha: float, a_vector: Sequence[float], trials: int, seed: int = 0, *,
                       block_size: int = BLOCK_SIZE, workers: int | None = None) -> MiEstimate:
    """Monte-Carlo ``I(X; y)`` in bits for ``y = X a + z``, ``P(X = -1) = alpha``.

    Averages ``-log2 P(X) - log2(1 + P(-X)/P(X) exp(-2 X a.y))`` over draws
    of ``(X, z)``; returns the mean and its standard error.
    """
    if trials < 10_000:
        raise ValueError("use at least 10^4 trials")
    if alpha in (0.0, 1.0):
        return MiEstimate(0.0, 0.0, trials)
    a = np.asarray(a_vector, dtype=float)
    log_ratio = math.log(alpha) - math.log1p(-alpha)  # ln P(-1)/P(+1)

    def block(b, size):
        rng = make_stream(seed, _TAG_VECTOR_MI, b)
        x = np.where(rng.random(size) < alpha, -1.0, 1.0)
        z = rng.standard_normal((size, a.size))
        proj = (x[:, None] * a[None, :] + z) @ a
        t = x * log_ratio - 2.0 * x * proj  # ln P(-X)/P(X) = X ln(alpha/alpha_bar)
        neg_log_px = np.where(x < 0, -math.log2(alpha), -math.log2(1.0 - alpha))
        return neg_log_px - log1p_exp_scaled(t)

    vals = _run_blocks(block, trials, block_size, workers)
    return MiEstimate(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(trials)), trials)


def sample_gamma(scenario: Scenario, trials: int, seed: int | None = None, *,
                 block_size: int = BLOCK_SIZE, workers: int | None = None) -> np.ndarray:
    """Draws of the additive SNR ``sum_k |h_k|^2 ||s||^2 / sigma_k^2``."""
    if not isinstance(scenario.gains, RayleighGains):
        raise ValueError("sample_gamma needs Rayleigh gains")
    seed = scenario.seed if seed is None else seed
    rates = scenario.mean_snrs
    sig = scenario.signal

    def block(b, size):
        rng = make_stream(seed, _TAG_GAMMA, b)
        fades = rng.exponential(1.0, size=(size, rates.size)) @ rates
        if isinstance(sig, FixedSignal):
            return fades * scenario.mean_signal_energy
        energies = np.array([e for e, _ in sig.pairs])
        probs = np.array([p for _, p in sig.pairs])
        return fades * energies[rng.choice(energies.size, size=size, p=probs / probs.sum())]

    return _run_blocks(block, trials, block_size, workers)
