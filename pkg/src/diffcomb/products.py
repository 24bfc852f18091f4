"""Separable products of two one-dimensional combs.

A product comb weights the lattice point (n1, n2) by w1(n1) * w2(n2), so both
the correlation and the diffraction factorise; the two-dimensional objects
here are assembled from their one-dimensional factors rather than recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import round12, write_json, write_table
from .combs import WeightWindow
from .correlation import Autocorrelation
from .spectra import SpectralMeasure


@dataclass(eq=False)
class ProductWindow:
    """Rectangular window of a product comb, stored by its two factors."""

    factors: tuple[WeightWindow, WeightWindow]

    def weight(self, n1: int, n2: int) -> float:
        a, b = self.factors
        return a.value(n1) * b.value(n2)

    def dense(self) -> np.ndarray:
        """Materialise the full rectangle; meant for small windows."""
        a, b = self.factors
        return np.outer(a.weights, b.weights)


@dataclass(eq=False)
class ProductAutocorrelation:
    """Correlation coefficients on the lag square [-max_lag, max_lag]^2."""

    max_lag: int
    eta: np.ndarray

    def __post_init__(self):
        size = 2 * self.max_lag + 1
        arr = np.asarray(self.eta, dtype=np.float64)
        if arr.shape != (size, size):
            raise ValueError("eta must be square with side 2 * max_lag + 1")
        self.eta = arr

    def value(self, m1: int, m2: int) -> float:
        M = self.max_lag
        if abs(m1) > M or abs(m2) > M:
            raise ValueError(f"lag ({m1}, {m2}) outside [-{M}, {M}]^2")
        return float(self.eta[m1 + M, m2 + M])

    def to_csv(self, path, output_format: str = "csv") -> None:
        M = self.max_lag
        rows = (
            (m1, m2, self.eta[m1 + M, m2 + M])
            for m1 in range(-M, M + 1)
            for m2 in range(-M, M + 1)
        )
        write_table(Path(path), ["m1", "m2", "eta"], rows, output_format)


def product_autocorrelation(a: Autocorrelation, b: Autocorrelation) -> ProductAutocorrelation:
    """Correlation of the product comb: the outer product of the factors."""
    if a.max_lag != b.max_lag:
        raise ValueError(f"factor lag ranges differ: {a.max_lag} vs {b.max_lag}")
    return ProductAutocorrelation(a.max_lag, np.outer(a.eta, b.eta))


@dataclass
class ProductSpectralMeasure:
    """Diffraction of a product comb over one period square [0, 1)^2.

    Four labelled components: point masses at position pairs, two families of
    lines (a point mass in one coordinate times the diffuse density of the
    other factor), and a constant plane density.
    """

    point_masses: tuple[tuple[tuple[float, float], float], ...]
    lines_fixed_k1: tuple[tuple[float, float], ...]
    lines_fixed_k2: tuple[tuple[float, float], ...]
    plane_level: float

    def total(self) -> float:
        return float(
            sum(w for _, w in self.point_masses)
            + sum(w for _, w in self.lines_fixed_k1)
            + sum(w for _, w in self.lines_fixed_k2)
            + self.plane_level
        )

    def to_json(self) -> dict:
        return {
            "point_masses": [
                [[round12(k1), round12(k2)], round12(w)] for (k1, k2), w in self.point_masses
            ],
            "lines_fixed_k1": [[round12(k1), round12(w)] for k1, w in self.lines_fixed_k1],
            "lines_fixed_k2": [[round12(k2), round12(w)] for k2, w in self.lines_fixed_k2],
            "plane_level": round12(self.plane_level),
            "sc": "none-modelled",
        }


def product_diffraction(a: SpectralMeasure, b: SpectralMeasure) -> ProductSpectralMeasure:
    """Diffraction of the product comb from its factors' closed forms."""
    point_masses = tuple(
        ((pos_a, pos_b), w_a * w_b) for pos_a, w_a in a.bragg for pos_b, w_b in b.bragg
    )
    lines_k1 = tuple((pos_a, w_a * b.ac_level) for pos_a, w_a in a.bragg) if b.ac_level > 0 else ()
    lines_k2 = tuple((pos_b, a.ac_level * w_b) for pos_b, w_b in b.bragg) if a.ac_level > 0 else ()
    return ProductSpectralMeasure(
        point_masses, lines_k1, lines_k2, a.ac_level * b.ac_level
    )


def write_product_measure(measure: ProductSpectralMeasure, path) -> None:
    write_json(Path(path), measure.to_json())
