"""Shared vocabulary: parameter tuples, sampling grids, complex fields, chirps, kernels.

A transform is specified per axis by a real quintuple (a, b, c, d, e) with
b != 0.  The pointwise kernel on axis k is

    sqrt(b_k / (2 pi i)) * exp(i * (a_k x^2 + b_k x w + c_k w^2 + d_k x + e_k w))

and the N-dimensional kernel is the product over axes.  Everything in this
module is an immutable value; all operations are pure functions and safe to
call concurrently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimMismatch,
    EmptyParams,
    GridCoverage,
    GridMismatch,
    NegativeCouplingWarning,
    NonFiniteField,
    NonPositiveLambda,
    ZeroCoupling,
    ZeroLambda,
)

SPACE = "space"
FREQUENCY = "qpft-frequency"

#: couplings below this magnitude are rejected as zero
MIN_COUPLING = 1e-12

Quintuple = tuple[float, float, float, float, float]


def _kahan_sum(terms: Iterable[np.ndarray]):
    """Compensated (Kahan) sum of a sequence of equally shaped arrays.

    Bounds the accumulated phase error when many per-axis phase terms are
    combined; with one term it is an exact copy.
    """
    total = None
    comp = None
    for t in terms:
        t = np.asarray(t, dtype=float)
        if total is None:
            total = t.copy()
            comp = np.zeros_like(total)
            continue
        y = t - comp
        s = total + y
        comp = (s - total) - y
        total = s
    if total is None:
        raise ValueError("no terms to sum")
    return total


@dataclass(frozen=True)
class QpftParams:
    """The per-dimension parameter quintuples (a_k, b_k, c_k, d_k, e_k)."""

    quintuples: tuple[Quintuple, ...]

    def __post_init__(self):
        if len(self.quintuples) == 0:
            raise EmptyParams("at least one parameter quintuple is required")
        cleaned = []
        for k, q in enumerate(self.quintuples):
            if len(q) != 5:
                raise ValueError(f"axis {k}: expected 5 parameters, got {len(q)}")
            q = tuple(float(v) for v in q)
            if not all(np.isfinite(q)):
                raise ValueError(f"axis {k}: parameters must be finite, got {q}")
            if abs(q[1]) < MIN_COUPLING:
                raise ZeroCoupling(k, q[1])
            if q[1] < 0:
                warnings.warn(
                    f"axis {k}: b={q[1]} < 0; square roots of b/i and b*i use "
                    "the principal branch",
                    NegativeCouplingWarning,
                    stacklevel=3,
                )
            cleaned.append(q)
        object.__setattr__(self, "quintuples", tuple(cleaned))

    @property
    def dims(self) -> int:
        return len(self.quintuples)

    @cached_property
    def a(self) -> np.ndarray:
        return np.array([q[0] for q in self.quintuples])

    @cached_property
    def b(self) -> np.ndarray:
        return np.array([q[1] for q in self.quintuples])

    @cached_property
    def c(self) -> np.ndarray:
        return np.array([q[2] for q in self.quintuples])

    @cached_property
    def d(self) -> np.ndarray:
        return np.array([q[3] for q in self.quintuples])

    @cached_property
    def e(self) -> np.ndarray:
        return np.array([q[4] for q in self.quintuples])

    @cached_property
    def branch_factors(self) -> tuple[complex, ...]:
        """Principal-branch values of sqrt(b_k / i), one per axis."""
        return tuple(complex(np.sqrt(q[1] / 1j)) for q in self.quintuples)

    @cached_property
    def kernel_constant(self) -> complex:
        """The product of the per-axis branch factors sqrt(b_k / i)."""
        out = 1.0 + 0.0j
        for f in self.branch_factors:
            out *= f
        return out

    def negate(self) -> "QpftParams":
        """Flip the sign of every entry of every quintuple."""
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NegativeCouplingWarning)
            return QpftParams(tuple(tuple(-v for v in q) for q in self.quintuples))

    def scale(self, lam: float) -> "QpftParams":
        """Multiply every entry by lam**2 (lam real, nonzero)."""
        lam = float(lam)
        if abs(lam) < MIN_COUPLING:
            raise ZeroLambda("scaling parameter lambda must be nonzero")
        s = lam * lam
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NegativeCouplingWarning)
            return QpftParams(tuple(tuple(s * v for v in q) for q in self.quintuples))


def validate_params(raw: Sequence[Sequence[float]]) -> QpftParams:
    """Check a list of quintuples and return the immutable parameter value.

    Raises EmptyParams for an empty list and ZeroCoupling(k) when |b_k| falls
    below 1e-12.  The principal-branch choice for each sqrt(b_k / i) is
    recorded on the result as ``branch_factors``.
    """
    return QpftParams(tuple(tuple(q) for q in raw))


def scale_params(params: QpftParams, lam: float) -> QpftParams:
    return params.scale(lam)


@dataclass(frozen=True)
class Grid:
    """Axis-aligned uniformly sampled rectangular domain.

    Per axis: coordinates are origin_k + j * step_k for j = 0..count_k-1.
    Metadata is stored per axis, never as a dense point list.
    """

    origins: tuple[float, ...]
    steps: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        origins = tuple(float(v) for v in self.origins)
        steps = tuple(float(v) for v in self.steps)
        counts = tuple(int(v) for v in self.counts)
        if not (len(origins) == len(steps) == len(counts)):
            raise DimMismatch("origins, steps and counts must have equal length")
        if len(counts) == 0:
            raise ValueError("grid needs at least one axis")
        for k, (s, m) in enumerate(zip(steps, counts)):
            if not (np.isfinite(s) and s > 0):
                raise ValueError(f"axis {k}: step must be positive, got {s}")
            if m <= 0:
                raise ValueError(f"axis {k}: count must be positive, got {m}")
        object.__setattr__(self, "origins", origins)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_ranges(cls, ranges: Sequence[tuple[float, float, int]]) -> "Grid":
        """Build from (start, stop, count) triples; step = (stop-start)/count.

        The stop value itself is excluded, so a symmetric range like
        (-12, 12, 512) contains the origin exactly.
        """
        origins, steps, counts = [], [], []
        for start, stop, count in ranges:
            count = int(count)
            if count <= 0 or stop <= start:
                raise ValueError(f"bad range ({start}, {stop}, {count})")
            origins.append(float(start))
            steps.append((float(stop) - float(start)) / count)
            counts.append(count)
        return cls(tuple(origins), tuple(steps), tuple(counts))

    @property
    def dims(self) -> int:
        return len(self.counts)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.counts

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.steps))

    def axis(self, k: int) -> np.ndarray:
        return self.origins[k] + self.steps[k] * np.arange(self.counts[k])

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(self.axis(k) for k in range(self.dims))

    def span(self, k: int) -> tuple[float, float]:
        return self.origins[k], self.origins[k] + self.steps[k] * (self.counts[k] - 1)

    def coords(self) -> list[np.ndarray]:
        """Sparse broadcastable coordinate arrays, one per axis."""
        return list(np.meshgrid(*self.axes, indexing="ij", sparse=True))

    def same_steps(self, other: "Grid", rtol: float = 1e-9) -> bool:
        return self.dims == other.dims and all(
            abs(s - t) <= rtol * abs(s) for s, t in zip(self.steps, other.steps)
        )


@dataclass(frozen=True)
class Field:
    """Complex samples of a function over a Grid.

    ``values`` has the grid's shape in row-major axis order and is read-only;
    non-finite values are rejected at construction, so every public operation
    yields a finite field.  ``domain_tag`` is "space" or "qpft-frequency".
    """

    grid: Grid
    values: np.ndarray
    domain_tag: str = SPACE

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.size != self.grid.size:
            raise DimMismatch(
                f"values size {vals.size} does not match grid size {self.grid.size}"
            )
        vals = vals.reshape(self.grid.shape).copy()
        if not np.all(np.isfinite(vals.view(float))):
            raise NonFiniteField("field values must be finite")
        if self.domain_tag not in (SPACE, FREQUENCY):
            raise ValueError(f"unknown domain tag {self.domain_tag!r}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, grid: Grid, domain_tag: str = SPACE) -> "Field":
        return cls(grid, np.zeros(grid.shape, dtype=complex), domain_tag)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.grid.shape

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values, self.domain_tag)

    def _check_same(self, other: "Field"):
        if self.grid != other.grid:
            raise GridMismatch("fields live on different grids")

    def __add__(self, other: "Field") -> "Field":
        self._check_same(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        self._check_same(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, factor) -> "Field":
        if isinstance(factor, Field):
            self._check_same(factor)
            return self.with_values(self.values * factor.values)
        return self.with_values(self.values * factor)

    __rmul__ = __mul__


def l2_norm(field: Field) -> float:
    """Discrete L2 norm with cell-volume weights."""
    return float(np.sqrt(np.sum(np.abs(field.values) ** 2) * field.grid.cell_volume))


def lp_norm(field: Field, p: float, normalized: bool = True) -> float:
    """Discrete Lp norm; ``normalized`` applies the (2 pi)^(-N/2) measure factor
    this library uses for L1/Lp statements."""
    total = np.sum(np.abs(field.values) ** p) * field.grid.cell_volume
    if normalized:
        total /= (2.0 * np.pi) ** (field.grid.dims / 2.0)
    return float(total ** (1.0 / p))


def edge_energy(field: Field, shell: float = 0.05, side: str = "both") -> float:
    """Fraction of |f|^2 carried by samples in the outer ``shell`` of any axis.

    ``side`` selects which boundary counts: "both" (default) or "right"
    (high-coordinate end only, the part that truncates right-tail integrals).
    """
    power = np.abs(field.values) ** 2
    total = float(power.sum())
    if total == 0.0:
        return 0.0
    inner = power
    for k, m in enumerate(field.grid.counts):
        w = max(1, int(np.ceil(shell * m)))
        lo = w if side == "both" else 0
        if lo + w >= m:
            return 1.0
        sl = [slice(None)] * field.grid.dims
        sl[k] = slice(lo, m - w)
        inner = inner[tuple(sl)]
    return float(max(0.0, (total - inner.sum()) / total))


def _chirp_values(lam: float, quad: np.ndarray, lin: np.ndarray, grid: Grid) -> np.ndarray:
    """exp(i * lam * sum_k (quad_k x_k^2 + lin_k x_k)) sampled on the grid."""
    coords = grid.coords()
    terms = []
    for k in range(grid.dims):
        x = coords[k]
        terms.append(
            np.broadcast_to(quad[k] * x * x + lin[k] * x, grid.shape)
        )
    phase = _kahan_sum(terms)
    return np.exp(1j * lam * phase)


def chirp(lam: float, which: str, params: QpftParams, grid: Grid,
          domain_tag: str | None = None) -> Field:
    """Unit-modulus chirp field exp(i lam sum_k (a_k x_k^2 + d_k x_k)).

    ``which`` selects the coefficient pair: "a-d" (space-side) or "c-e"
    (frequency-side).  chirp(-lam, ...) is the pointwise complex conjugate of
    chirp(lam, ...).
    """
    if grid.dims != params.dims:
        raise DimMismatch(f"grid dims {grid.dims} != params dims {params.dims}")
    if which == "a-d":
        quad, lin = params.a, params.d
        tag = SPACE
    elif which == "c-e":
        quad, lin = params.c, params.e
        tag = FREQUENCY
    else:
        raise ValueError(f"which must be 'a-d' or 'c-e', got {which!r}")
    if domain_tag is not None:
        tag = domain_tag
    return Field(grid, _chirp_values(float(lam), quad, lin, grid), tag)


def kernel_eval(params: QpftParams, omega: Sequence[float], x: Sequence[float]) -> complex:
    """Pointwise N-dimensional kernel value at (omega, x).

    Equals prod_k sqrt(b_k/(2 pi i)) * exp(i (a_k x_k^2 + b_k x_k w_k
    + c_k w_k^2 + d_k x_k + e_k w_k)); the per-axis product over k uses
    compensated phase accumulation.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if omega.shape != (params.dims,) or x.shape != (params.dims,):
        raise DimMismatch(
            f"points must have {params.dims} coordinates, got {omega.shape} and {x.shape}"
        )
    terms = []
    for k, (a, b, c, d, e) in enumerate(params.quintuples):
        w = omega[k]
        xv = x[k]
        terms.append(np.array(a * xv * xv + b * xv * w + c * w * w + d * xv + e * w))
    phase = float(_kahan_sum(terms))
    const = params.kernel_constant / (2.0 * np.pi) ** (params.dims / 2.0)
    return complex(const * np.exp(1j * phase))


def require_same_dims(params: QpftParams, grid: Grid):
    if params.dims != grid.dims:
        raise DimMismatch(f"params dims {params.dims} != grid dims {grid.dims}")


def mollifier_width_check(params: QpftParams, lam: float, grid: Grid,
                          factor: float = 50.0) -> None:
    """Require the grid to cover |w_k| <= factor * lam / |b_k| on every axis."""
    if lam <= 0:
        raise NonPositiveLambda("mollifier width lambda must be positive")
    for k in range(grid.dims):
        need = factor * lam / abs(params.quintuples[k][1])
        lo, hi = grid.span(k)
        if lo > -need or hi < need:
            raise GridCoverage(
                f"axis {k}: grid [{lo:.3g}, {hi:.3g}] does not cover |w| <= {need:.3g}"
            )
