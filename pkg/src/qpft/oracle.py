"""Independent ground truth for the test suite.

Closed-form transforms of Gaussians and brute-force quadrature, deliberately
slow and simple: no FFTs here, and no code shared with the fast transform or
convolution paths.  Depends only on :mod:`qpft.core`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import FREQUENCY, Field, Grid, QpftParams, SPACE
from .errors import DimMismatch, QuadratureNonConvergence


@dataclass(frozen=True)
class GaussianSpec:
    """f(x) = amplitude * prod_k exp(-p_k (x_k - center_k)^2) with p_k > 0."""

    center: tuple[float, ...]
    width: tuple[float, ...]
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        center = tuple(float(v) for v in self.center)
        width = tuple(float(v) for v in self.width)
        if len(center) != len(width):
            raise DimMismatch("center and width must have equal length")
        if any(p <= 0 for p in width):
            raise ValueError(f"widths p must be positive, got {width}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @property
    def dims(self) -> int:
        return len(self.center)


def gaussian_field(spec: GaussianSpec, grid: Grid) -> Field:
    """Sample the Gaussian on a grid (space domain)."""
    if grid.dims != spec.dims:
        raise DimMismatch(f"grid dims {grid.dims} != spec dims {spec.dims}")
    vals = np.full(grid.shape, spec.amplitude, dtype=complex)
    for k, x in enumerate(grid.coords()):
        vals = vals * np.exp(-spec.width[k] * (x - spec.center[k]) ** 2)
    return Field(grid, vals, SPACE)


def _axis_closed(q: tuple[float, float, float, float, float], p: float, mu: float,
                 w: np.ndarray) -> np.ndarray:
    # integral over one axis: sqrt(b/(2 pi i)) e^{i(c w^2 + e w)}
    #   * int exp(-p (x-mu)^2 + i a x^2 + i (b w + d) x) dx
    # with the complex-Gaussian formula int e^{-q x^2 + s x} dx = sqrt(pi/q) e^{s^2/(4q)}
    a, b, c, d, e = q
    qq = p - 1j * a
    s = 2.0 * p * mu + 1j * (b * w + d)
    integral = np.sqrt(np.pi / qq) * np.exp(s * s / (4.0 * qq) - p * mu * mu)
    return np.sqrt(b / (2j * np.pi)) * np.exp(1j * (c * w * w + e * w)) * integral


def gaussian_qpft_closed(spec: GaussianSpec, params: QpftParams,
                         omega: Sequence[float]) -> complex:
    """Exact transform value of the Gaussian at a single frequency point."""
    if params.dims != spec.dims:
        raise DimMismatch("params and spec dims differ")
    omega = np.asarray(omega, dtype=float).reshape(params.dims)
    out = spec.amplitude
    for k in range(params.dims):
        out = out * complex(
            _axis_closed(params.quintuples[k], spec.width[k], spec.center[k],
                         np.asarray(omega[k]))
        )
    return complex(out)


def gaussian_qpft_spectrum(spec: GaussianSpec, params: QpftParams, grid: Grid) -> Field:
    """Exact transform of the Gaussian sampled on a frequency grid."""
    if grid.dims != spec.dims:
        raise DimMismatch("grid and spec dims differ")
    vals = np.full(grid.shape, spec.amplitude, dtype=complex)
    for k, w in enumerate(grid.coords()):
        vals = vals * _axis_closed(params.quintuples[k], spec.width[k], spec.center[k], w)
    return Field(grid, vals, FREQUENCY)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float
    evaluations: int


def brute_quadrature(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                     rule: str = "adaptive", *, samples: int = 2048,
                     tol: float = 1e-10, max_levels: int = 21) -> QuadratureResult:
    """Deterministic 1-D quadrature of a (complex) integrand on [lo, hi].

    rule "riemann": left Riemann sum with ``samples`` points.
    rule "trapezoid": composite trapezoid with ``samples`` intervals.
    rule "adaptive": Romberg with interval halving; the error estimate is the
    Richardson pair difference, and QuadratureNonConvergence is raised when it
    still exceeds ``tol`` * max(1, |value|) at ``max_levels``.
    """
    lo = float(lo)
    hi = float(hi)
    if not hi > lo:
        raise ValueError(f"need hi > lo, got [{lo}, {hi}]")

    if rule == "riemann":
        x = lo + (hi - lo) * np.arange(samples) / samples
        v = np.asarray(fn(x), dtype=complex)
        val = complex(v.sum() * (hi - lo) / samples)
        return QuadratureResult(val, float("nan"), samples)

    if rule == "trapezoid":
        x = np.linspace(lo, hi, samples + 1)
        v = np.asarray(fn(x), dtype=complex)
        val = complex(np.trapz(v, x))
        return QuadratureResult(val, float("nan"), samples + 1)

    if rule != "adaptive":
        raise ValueError(f"unknown rule {rule!r}")

    width = hi - lo
    ends = np.asarray(fn(np.array([lo, hi])), dtype=complex)
    row = [complex(0.5 * width * (ends[0] + ends[1]))]
    evals = 2
    prev_diag = row[0]
    for level in range(1, max_levels + 1):
        n = 2 ** level
        h = width / n
        mids = lo + h * (2 * np.arange(n // 2) + 1)
        vm = np.asarray(fn(mids), dtype=complex)
        evals += mids.size
        trap = 0.5 * row[0] + h * complex(vm.sum())
        new_row = [trap]
        factor = 1.0
        for m in range(1, level + 1):
            factor *= 4.0
            new_row.append(new_row[m - 1]
                           + (new_row[m - 1] - row[m - 1]) / (factor - 1.0))
        row = new_row
        diag = row[-1]
        err = abs(diag - prev_diag)
        prev_diag = diag
        if level >= 4 and err <= tol * max(1.0, abs(diag)):
            return QuadratureResult(complex(diag), float(err), evals)
    raise QuadratureNonConvergence(
        f"Romberg did not reach tol={tol:g} after {max_levels} levels "
        f"(last error {err:.3e})",
        estimate=complex(diag), error=float(err),
    )
