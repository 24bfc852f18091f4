"""Finite-size diffraction and closed-form spectral measures.

The periodogram I_N(k) = |sum_{|n|<=N} w(n) e^{-2 pi i k n}|^2 / (2N+1) is
evaluated on the grid k = j/G by folding the window onto residues mod G and
taking one FFT; that is algebraically the direct sum, since the phase only
depends on n mod G.  Closed-form measures carry point masses on [0, 1) plus
a constant diffuse density (singular-continuous parts are not modelled).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from ._util import round12, write_json, write_table
from .combs import ModelSpec, WeightWindow, _check_window_length, generate_window, reseed

# Ensemble seeds used when a stochastic run does not name its own.
DEFAULT_SEEDS = tuple(range(1, 51))


@dataclass(eq=False)
class Periodogram:
    """Intensities on the wavenumber grid j/G, j = 0..G-1."""

    grid_size: int
    intensities: np.ndarray
    window_half_size: int

    def __post_init__(self):
        arr = np.asarray(self.intensities, dtype=np.float64)
        if arr.shape != (self.grid_size,):
            raise ValueError("intensities must have length grid_size")
        self.intensities = arr

    def wavenumbers(self) -> np.ndarray:
        return np.arange(self.grid_size) / self.grid_size

    def grid_mean(self) -> float:
        return float(self.intensities.mean())

    def to_csv(self, path, output_format: str = "csv") -> None:
        rows = zip(self.wavenumbers(), self.intensities)
        write_table(Path(path), ["k", "intensity"], rows, output_format)


def periodogram(spec: ModelSpec, N: int, G: int) -> Periodogram:
    """Scaled intensity of the window [-N, N] on the G-point wavenumber grid."""
    if N < 1:
        raise ValueError(f"window half-size N must be positive, got {N}")
    if G < 1:
        raise ValueError(f"grid size G must be positive, got {G}")
    _check_window_length(G)
    w = generate_window(spec, -N, N).weights
    residues = np.arange(-N, N + 1) % G
    folded = np.bincount(residues, weights=w, minlength=G)
    amplitudes = np.fft.fft(folded)
    return Periodogram(G, np.abs(amplitudes) ** 2 / (2 * N + 1), N)


def direct_intensity(window: WeightWindow, k: float) -> float:
    """I(k) of one window by direct summation at a single wavenumber."""
    n = window.indices()
    amplitude = np.sum(window.weights * np.exp(-2j * np.pi * k * n))
    return float(np.abs(amplitude) ** 2) / len(window)


# ── Bragg peak weight along growing windows ────────────────────────────────

def as_wavenumber(k0) -> float:
    """Parse a wavenumber in [0, 1): accepts float, Fraction, or text like '1/2'."""
    if isinstance(k0, str):
        try:
            k0 = Fraction(k0)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse wavenumber {k0!r}: {exc}") from exc
    if isinstance(k0, Fraction):
        value = float(k0)
    elif isinstance(k0, (int, float)) and not isinstance(k0, bool):
        value = float(k0)
    else:
        raise ValueError(f"wavenumber must be numeric or rational text, got {k0!r}")
    if not 0.0 <= value < 1.0:
        raise ValueError(f"wavenumber must lie in [0, 1), got {value}")
    return value


@dataclass
class BraggWeightEstimate:
    """I_N(k0) / (2N+1) along increasing window sizes, with a growth label.

    The label comes from the least-squares slope of log(weight) against
    log(2N+1): a point mass keeps the weight roughly constant (slope near 0),
    a purely continuous spectrum keeps the intensity bounded so the weight
    decays like 1/N (slope near -1).  The cut is at -1/2.
    """

    position: float
    entries: list[tuple[int, float]]
    limit: float
    growth: str
    growth_slope: float | None
    seeds: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {
            "position": round12(self.position),
            "entries": [[N, round12(w)] for N, w in self.entries],
            "limit": round12(self.limit),
            "growth": self.growth,
            "growth_slope": None if self.growth_slope is None else round12(self.growth_slope),
            "seeds": None if self.seeds is None else list(self.seeds),
        }


def bragg_weight(spec: ModelSpec, k0, N_list, seeds=None) -> BraggWeightEstimate:
    """Finite-size point-mass weight at one wavenumber, ensemble-averaged for
    stochastic models (default seeds 1..50); the extrapolated limit is the
    value at the largest window."""
    k = as_wavenumber(k0)
    sizes = [int(N) for N in N_list]
    if not sizes:
        raise ValueError("N_list must be nonempty")
    if any(N < 1 for N in sizes):
        raise ValueError("window half-sizes must be positive")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("N_list must be strictly increasing")
    seed_list: tuple[int, ...] | None = None
    if spec.is_stochastic:
        seed_list = DEFAULT_SEEDS if seeds is None else tuple(seeds)
        if not seed_list:
            raise ValueError("seed list must be nonempty for stochastic models")
    entries = []
    for N in sizes:
        if seed_list is not None:
            intensity = float(
                np.mean(
                    [direct_intensity(generate_window(reseed(spec, s), -N, N), k) for s in seed_list]
                )
            )
        else:
            intensity = direct_intensity(generate_window(spec, -N, N), k)
        entries.append((N, intensity / (2 * N + 1)))
    slope = None
    growth = "indeterminate"
    if len(entries) >= 2:
        lengths = np.log([2 * N + 1 for N, _ in entries])
        # Guard exact spectral zeros so the log stays finite.
        weights = np.log([max(w, 1e-300) for _, w in entries])
        slope = float(np.polyfit(lengths, weights, 1)[0])
        growth = "pure-point" if slope > -0.5 else "continuous"
    return BraggWeightEstimate(k, entries, entries[-1][1], growth, slope, seed_list)


# ── Binned measure ─────────────────────────────────────────────────────────

@dataclass(eq=False)
class BinnedMeasure:
    """Masses of equal bins partitioning [0, 1); bin b covers [b, b+1)/bins."""

    bins: int
    masses: np.ndarray
    grid_size: int
    window_half_size: int

    def __post_init__(self):
        arr = np.asarray(self.masses, dtype=np.float64)
        if arr.shape != (self.bins,):
            raise ValueError("masses must have length bins")
        self.masses = arr

    def edges(self) -> np.ndarray:
        return np.arange(self.bins + 1) / self.bins

    def total(self) -> float:
        return float(self.masses.sum())

    def to_csv(self, path, output_format: str = "csv") -> None:
        edges = self.edges()
        rows = zip(edges[:-1], edges[1:], self.masses)
        write_table(Path(path), ["bin_lo", "bin_hi", "mass"], rows, output_format)


def binned_measure(pg: Periodogram, bins: int) -> BinnedMeasure:
    """Integrate a periodogram over equal bins; bins must divide the grid size."""
    if bins < 1:
        raise ValueError(f"bins must be positive, got {bins}")
    if pg.grid_size % bins != 0:
        raise ValueError(f"bins={bins} does not divide grid size {pg.grid_size}")
    per_bin = pg.grid_size // bins
    masses = pg.intensities.reshape(bins, per_bin).sum(axis=1) / pg.grid_size
    return BinnedMeasure(bins, masses, pg.grid_size, pg.window_half_size)


# ── Closed-form measures ───────────────────────────────────────────────────

@dataclass
class SpectralMeasure:
    """One period [0, 1) of a closed-form diffraction: point masses plus a
    constant diffuse density; singular-continuous parts are not modelled."""

    bragg: tuple[tuple[float, float], ...]
    ac_level: float
    sc: str = "none-modelled"

    def __post_init__(self):
        positions = [pos for pos, _ in self.bragg]
        if sorted(positions) != positions or len(set(positions)) != len(positions):
            raise ValueError("point masses must be sorted by distinct positions")
        if any(not 0.0 <= pos < 1.0 for pos in positions):
            raise ValueError("point-mass positions must lie in [0, 1)")
        if any(weight <= 0.0 for _, weight in self.bragg):
            raise ValueError("point-mass weights must be positive")
        if self.ac_level < 0.0:
            raise ValueError("diffuse level must be nonnegative")

    def total(self) -> float:
        return float(sum(weight for _, weight in self.bragg) + self.ac_level)

    def bragg_at(self, position: float) -> float:
        for pos, weight in self.bragg:
            if pos == position:
                return weight
        return 0.0

    def to_json(self) -> dict:
        return {
            "bragg": [[round12(pos), round12(weight)] for pos, weight in self.bragg],
            "ac_level": round12(self.ac_level),
            "sc": self.sc,
        }


def write_spectral_measure(measure: SpectralMeasure, path) -> None:
    write_json(Path(path), measure.to_json())


def analytic_diffraction(spec: ModelSpec) -> SpectralMeasure:
    """Closed-form diffraction of a model over one period of wavenumbers."""
    if spec.model == "constant":
        weight = spec.w**2
        bragg = ((0.0, weight),) if weight > 0.0 else ()
        return SpectralMeasure(bragg, 0.0)
    if spec.model == "alternating":
        return SpectralMeasure(((0.5, 1.0),), 0.0)
    if spec.model == "periodic":
        c = np.asarray(spec.pattern)
        q = c.size
        weights = np.abs(np.fft.fft(c) / q) ** 2
        # Numerically zero Fourier amplitudes are true extinctions; drop them.
        floor = 1e-12 * max(float(np.mean(c**2)), 1e-300)
        bragg = tuple(
            (j / q, float(weights[j])) for j in range(q) if weights[j] > floor
        )
        return SpectralMeasure(bragg, 0.0)
    if spec.model == "rudin_shapiro":
        return SpectralMeasure((), 1.0)
    if spec.model == "bernoulli":
        point = (2.0 * spec.p - 1.0) ** 2
        bragg = ((0.0, point),) if point > 0.0 else ()
        return SpectralMeasure(bragg, 4.0 * spec.p * (1.0 - spec.p))
    # bernoullised: base measure damped by (2p-1)^2 plus a flat diffuse part
    base = analytic_diffraction(spec.base)
    damping = (2.0 * spec.p - 1.0) ** 2
    bragg = tuple((pos, damping * weight) for pos, weight in base.bragg) if damping > 0.0 else ()
    ac = damping * base.ac_level + 4.0 * spec.p * (1.0 - spec.p)
    return SpectralMeasure(bragg, ac)


# ── Homometry in spectral form ─────────────────────────────────────────────

def ensemble_binned_masses(
    spec: ModelSpec, N: int, G: int, bins: int, seeds=DEFAULT_SEEDS
) -> np.ndarray:
    """Binned periodogram masses; stochastic specs are averaged over seeds."""
    if not spec.is_stochastic:
        return binned_measure(periodogram(spec, N, G), bins).masses
    seed_list = tuple(seeds)
    if not seed_list:
        raise ValueError("seed list must be nonempty for stochastic models")
    acc = np.zeros(bins)
    for s in seed_list:
        acc += binned_measure(periodogram(reseed(spec, s), N, G), bins).masses
    return acc / len(seed_list)


@dataclass
class SpectralComparison:
    """Sup-distance between two binned measures."""

    bins: int
    distance: float
    tolerance: float
    passed: bool
    masses_a: list[float]
    masses_b: list[float]

    def to_json(self) -> dict:
        return {
            "bins": self.bins,
            "distance": round12(self.distance),
            "tolerance": round12(self.tolerance),
            "passed": self.passed,
            "masses_a": [round12(x) for x in self.masses_a],
            "masses_b": [round12(x) for x in self.masses_b],
        }


def spectral_homometry(
    a: ModelSpec, b: ModelSpec, N: int, G: int, bins: int, tol: float, seeds=DEFAULT_SEEDS
) -> SpectralComparison:
    """Compare binned finite-size spectra of two models (ensemble-averaged for
    stochastic specs) and report the worst bin discrepancy against tol."""
    if not tol >= 0.0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    masses_a = ensemble_binned_masses(a, N, G, bins, seeds)
    masses_b = ensemble_binned_masses(b, N, G, bins, seeds)
    distance = float(np.max(np.abs(masses_a - masses_b)))
    return SpectralComparison(
        bins, distance, float(tol), distance <= tol, masses_a.tolist(), masses_b.tolist()
    )
