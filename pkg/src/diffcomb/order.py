"""Order metrics: coin entropy, block entropy of sliding subwords, and
distinct-subword (patch) counts with a saturation diagnostic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import round12, write_json, write_table
from .combs import ModelSpec, generate_window

# Horner packing of subwords into int64 codes caps the word space.
_MAX_CODE = 1 << 62


def bernoulli_entropy(p: float) -> float:
    """Entropy -p log p - (1-p) log(1-p) in nats, with 0 log 0 = 0."""
    if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be a probability in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def exact_entropy(spec: ModelSpec) -> float:
    """Entropy per site of the model: H(p) for the coin-driven variants,
    0 for the deterministic ones."""
    if spec.is_stochastic:
        return bernoulli_entropy(spec.p)
    return 0.0


def _subword_codes(weights: np.ndarray, length: int) -> np.ndarray:
    """Pack every length-`length` subword into one integer code (Horner over
    the alphabet observed in the window)."""
    _, inverse = np.unique(weights, return_inverse=True)
    alphabet_size = int(inverse.max()) + 1
    if alphabet_size**length > _MAX_CODE:
        raise ValueError(
            f"subword space {alphabet_size}**{length} exceeds the packing limit 2**62"
        )
    count = weights.size - length + 1
    codes = np.zeros(count, dtype=np.int64)
    for j in range(length):
        codes = codes * alphabet_size + inverse[j : j + count]
    return codes


def block_entropy(spec: ModelSpec, N: int, k: int) -> float:
    """Shannon entropy per symbol of the empirical law of length-k subwords
    of the window [-N, N].

    Requires 2N+1 >= 100 * 2**k so the word space is sampled enough for the
    plug-in estimate to be meaningful.
    """
    if k < 1:
        raise ValueError(f"block length k must be positive, got {k}")
    if N < 1:
        raise ValueError(f"window half-size N must be positive, got {N}")
    size = 2 * N + 1
    if size < 100 * 2**k:
        raise ValueError(
            f"window of {size} sites is too small for k={k}; need at least {100 * 2**k}"
        )
    w = generate_window(spec, -N, N).weights
    codes = _subword_codes(w, k)
    _, counts = np.unique(codes, return_counts=True)
    probabilities = counts / codes.size
    return float(-(probabilities * np.log(probabilities)).sum() / k)


@dataclass
class PatchComplexity:
    """Distinct-subword counts p(L) for L = 1..L_max on the window [-N, N].

    saturated[L-1] records whether the count is unchanged when the window is
    doubled to [-2N, 2N]; an unsaturated count underestimates the model.
    """

    window_half_size: int
    entries: list[tuple[int, int]]
    saturated: list[bool]

    @property
    def all_saturated(self) -> bool:
        return all(self.saturated)

    def count(self, L: int) -> int:
        for length, value in self.entries:
            if length == L:
                return value
        raise ValueError(f"no count for length {L}")

    def to_csv(self, path, output_format: str = "csv") -> None:
        write_table(Path(path), ["L", "count"], self.entries, output_format)

    def to_json(self) -> dict:
        return {
            "window_half_size": self.window_half_size,
            "counts": [[L, c] for L, c in self.entries],
            "saturated": self.saturated,
        }


def patch_complexity(spec: ModelSpec, N: int, L_max: int) -> PatchComplexity:
    """Count distinct subwords of a deterministic model up to length L_max."""
    if spec.is_stochastic:
        raise ValueError("patch counting needs a deterministic model")
    if L_max < 1:
        raise ValueError(f"L_max must be positive, got {L_max}")
    if N < 1:
        raise ValueError(f"window half-size N must be positive, got {N}")
    if 2 * N + 1 < 100 * L_max:
        raise ValueError(
            f"window of {2 * N + 1} sites is too small for L_max={L_max};"
            f" need at least {100 * L_max}"
        )
    w = generate_window(spec, -N, N).weights
    w_doubled = generate_window(spec, -2 * N, 2 * N).weights
    entries = []
    saturated = []
    for L in range(1, L_max + 1):
        count = int(np.unique(_subword_codes(w, L)).size)
        doubled = int(np.unique(_subword_codes(w_doubled, L)).size)
        entries.append((L, count))
        saturated.append(count == doubled)
    return PatchComplexity(N, entries, saturated)


@dataclass
class EntropyReport:
    """Exact entropy next to its finite-window block estimate, with optional
    patch counts for deterministic models."""

    spec: ModelSpec
    exact: float
    block_length: int
    block_entropy_per_symbol: float
    window_half_size: int
    patches: PatchComplexity | None = None

    def to_json(self) -> dict:
        out = {
            "model": self.spec.to_json(),
            "exact_entropy": round12(self.exact),
            "block_length": self.block_length,
            "block_entropy_per_symbol": round12(self.block_entropy_per_symbol),
            "window_half_size": self.window_half_size,
        }
        if self.patches is not None:
            out["patch_counts"] = self.patches.to_json()
        return out


def entropy_report(spec: ModelSpec, N: int, k: int, L_max: int | None = None) -> EntropyReport:
    """Assemble the entropy picture of one model; patch counts only when a
    deterministic model asks for them (L_max set)."""
    patches = None
    if L_max is not None:
        patches = patch_complexity(spec, N, L_max)
    return EntropyReport(
        spec=spec,
        exact=exact_entropy(spec),
        block_length=k,
        block_entropy_per_symbol=block_entropy(spec, N, k),
        window_half_size=N,
        patches=patches,
    )


def write_entropy_report(report: EntropyReport, path) -> None:
    write_json(Path(path), report.to_json())
