"""Two-point correlations: windowed estimator, closed forms, exact identity check.

The empirical estimator averages w(n) w(n+m) over the centred window
[-N, N], with weights generated on the extended range [-N-M, N+M] so every
lag sum has exactly 2N+1 terms.  Coefficients are computed for m >= 0 and
mirrored, which makes the symmetry eta(-m) = eta(m) structural and keeps
eta(0) = 1 exact for +-1 sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from ._util import round12, write_json, write_table
from .combs import ModelSpec, generate_window


@dataclass(eq=False)
class Autocorrelation:
    """Correlation coefficients on the lags -max_lag..max_lag.

    window_half_size is the N of the estimating window, or None when the
    coefficients are a closed-form limit.
    """

    max_lag: int
    eta: np.ndarray
    window_half_size: int | None = None

    def __post_init__(self):
        arr = np.asarray(self.eta, dtype=np.float64)
        if arr.shape != (2 * self.max_lag + 1,):
            raise ValueError("eta must have length 2 * max_lag + 1")
        self.eta = arr

    def lags(self) -> np.ndarray:
        return np.arange(-self.max_lag, self.max_lag + 1)

    def value(self, m: int) -> float:
        if abs(m) > self.max_lag:
            raise ValueError(f"lag {m} outside [-{self.max_lag}, {self.max_lag}]")
        return float(self.eta[m + self.max_lag])

    def to_csv(self, path, output_format: str = "csv") -> None:
        rows = zip((int(m) for m in self.lags()), self.eta)
        write_table(Path(path), ["m", "eta"], rows, output_format)


def empirical_autocorrelation(spec: ModelSpec, N: int, M: int) -> Autocorrelation:
    """Windowed correlation estimate of a model at lags up to M.

    Needs indices [-N-M, N+M]; the window cap therefore applies to
    2N + 2M + 1, not 2N + 1.
    """
    if N < 1:
        raise ValueError(f"window half-size N must be positive, got {N}")
    if M < 0:
        raise ValueError(f"max lag M must be nonnegative, got {M}")
    w = generate_window(spec, -N - M, N + M).weights
    size = 2 * N + 1
    core = w[M : M + size]
    eta = np.empty(2 * M + 1)
    for m in range(M + 1):
        value = float(core @ w[M + m : M + m + size]) / size
        eta[M + m] = value
        eta[M - m] = value
    return Autocorrelation(M, eta, window_half_size=N)


def analytic_autocorrelation(spec: ModelSpec, M: int) -> Autocorrelation:
    """Limit coefficients of a model at lags up to M, from the closed form."""
    if M < 0:
        raise ValueError(f"max lag M must be nonnegative, got {M}")
    m = np.arange(-M, M + 1)
    if spec.model == "constant":
        eta = np.full(2 * M + 1, spec.w**2)
    elif spec.model == "alternating":
        eta = np.where(m % 2 == 0, 1.0, -1.0)
    elif spec.model == "periodic":
        c = np.asarray(spec.pattern)
        q = c.size
        cyclic = np.array([float(c @ np.roll(c, -k)) for k in range(q)]) / q
        eta = cyclic[m % q]
    elif spec.model == "rudin_shapiro":
        eta = np.zeros(2 * M + 1)
        eta[M] = 1.0
    elif spec.model == "bernoulli":
        eta = np.full(2 * M + 1, (2.0 * spec.p - 1.0) ** 2)
        eta[M] = 1.0
    else:  # bernoullised: base coefficients damped by (2p-1)^2 away from lag 0
        eta = (2.0 * spec.p - 1.0) ** 2 * analytic_autocorrelation(spec.base, M).eta
        eta[M] = 1.0
    return Autocorrelation(M, eta, window_half_size=None)


# ── Exact check of the Rudin-Shapiro correlation identity ──────────────────

@dataclass
class RecursionCheckReport:
    """Outcome of substituting the claimed correlation pair into the lag recursions."""

    max_index: int
    checked: int
    violations: list[dict]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "max_index": self.max_index,
            "checked": self.checked,
            "violations": self.violations,
        }


def _claimed_a(m: int) -> Fraction:
    # Claimed correlation coefficients: 1 at lag 0, else 0.
    return Fraction(1 if m == 0 else 0)


def _claimed_b(m: int) -> Fraction:
    # Claimed signed-average companion: identically 0.
    return Fraction(0)


def verify_rs_recursions(max_index: int) -> RecursionCheckReport:
    """Check, in exact rationals, that the claimed Rudin-Shapiro correlation
    pair (a = 1 at lag 0 and else 0, b = 0) satisfies the four-branch lag
    recursion system at every lag t with |t| <= max_index.

    Each t is written t = 4m + l with Euclidean remainder l in {0,1,2,3},
    and both the a- and b-equations of that branch are evaluated with
    Fraction arithmetic; any inequality is recorded as a violation.
    """
    if max_index < 1:
        raise ValueError(f"max_index must be >= 1, got {max_index}")
    quarter = Fraction(1, 4)
    half = Fraction(1, 2)
    violations: list[dict] = []
    checked = 0
    for t in range(-max_index, max_index + 1):
        l = t % 4
        m = (t - l) // 4
        s = 1 if m % 2 == 0 else -1  # (-1)**m, sign only
        a_m = _claimed_a(m)
        a_m1 = _claimed_a(m + 1)
        b_m = _claimed_b(m)
        b_m1 = _claimed_b(m + 1)
        if l == 0:
            a_rhs = Fraction(1 + s, 2) * a_m
            b_rhs = Fraction(0)
        elif l == 1:
            a_rhs = Fraction(1 - s, 4) * a_m + Fraction(s, 4) * b_m - quarter * b_m1
            b_rhs = Fraction(1 - s, 4) * a_m - Fraction(s, 4) * b_m + quarter * b_m1
        elif l == 2:
            a_rhs = Fraction(0)
            b_rhs = Fraction(s, 2) * b_m + half * b_m1
        else:
            a_rhs = Fraction(1 + s, 4) * a_m1 - Fraction(s, 4) * b_m + quarter * b_m1
            b_rhs = -Fraction(1 + s, 4) * a_m1 - Fraction(s, 4) * b_m + quarter * b_m1
        for system, lhs, rhs in (("a", _claimed_a(t), a_rhs), ("b", _claimed_b(t), b_rhs)):
            checked += 1
            if lhs != rhs:
                violations.append(
                    {"system": system, "t": t, "claimed": str(lhs), "recursion": str(rhs)}
                )
    return RecursionCheckReport(max_index, checked, violations)


def write_recursion_report(report: RecursionCheckReport, path) -> None:
    write_json(Path(path), report.to_json())


# ── Comparison (homometry in correlation form) ─────────────────────────────

@dataclass
class CorrelationComparison:
    """Sup-distance between two coefficient sets on a shared lag range."""

    max_lag: int
    distance: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "max_lag": self.max_lag,
            "distance": round12(self.distance),
            "tolerance": round12(self.tolerance),
            "passed": self.passed,
        }


def compare_autocorrelations(
    x: Autocorrelation, y: Autocorrelation, tol: float
) -> CorrelationComparison:
    """Report max_m |x(m) - y(m)| against a tolerance; lag ranges must match."""
    if x.max_lag != y.max_lag:
        raise ValueError(f"lag ranges differ: {x.max_lag} vs {y.max_lag}")
    if not tol >= 0.0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    distance = float(np.max(np.abs(x.eta - y.eta)))
    return CorrelationComparison(x.max_lag, distance, float(tol), distance <= tol)
