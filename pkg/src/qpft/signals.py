"""Test-corpus and CLI signal generators.

Gaussians are sampled directly; band signals are built by placing smooth
bumps in the transform domain and inverse-transforming, which gives exact
control over spectral support for gap, filtering and noise scenarios.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import FREQUENCY, Field, Grid, QpftParams, l2_norm, require_same_dims
from .errors import ZeroSignal
from .oracle import GaussianSpec, gaussian_field
from .transform import default_frequency_grid, iqpft


def gaussian(grid: Grid, width: Sequence[float], center: Sequence[float] | None = None,
             amplitude: complex = 1.0) -> Field:
    """Separable Gaussian prod exp(-p_k (x_k - mu_k)^2) on a space grid."""
    if center is None:
        center = (0.0,) * grid.dims
    return gaussian_field(GaussianSpec(tuple(center), tuple(width), amplitude), grid)


def spectral_bump(params: QpftParams, grid: Grid, center: Sequence[float],
                  sigma: Sequence[float], *, two_sided: bool = True,
                  amplitude: complex = 1.0, path: str = "fast") -> Field:
    """Space signal whose transform is a Gaussian bump (or a symmetric pair).

    The bump sits on the default commensurate frequency grid of ``grid``;
    the signal is its inverse transform.  With ``two_sided`` the mirrored
    bump at -center is added, keeping the support symmetric about the origin.
    """
    require_same_dims(params, grid)
    wgrid = default_frequency_grid(params, grid)
    vals = np.ones(wgrid.shape, dtype=complex)
    mirrored = np.ones(wgrid.shape, dtype=complex)
    for k, w in enumerate(wgrid.coords()):
        vals = vals * np.exp(-((w - center[k]) ** 2) / (2.0 * sigma[k] ** 2))
        mirrored = mirrored * np.exp(-((w + center[k]) ** 2) / (2.0 * sigma[k] ** 2))
    if two_sided:
        vals = vals + mirrored
    bump = Field(wgrid, amplitude * vals, FREQUENCY)
    return iqpft(bump, params, grid, path)


def noisy_mix(params: QpftParams, grid: Grid, *,
              signal_center: Sequence[float], signal_sigma: Sequence[float],
              noise_center: Sequence[float], noise_sigma: Sequence[float],
              noise_energy_ratio: float = 10.0,
              path: str = "fast") -> tuple[Field, Field, Field]:
    """(received, clean, noise) with out-of-band noise at a fixed energy ratio.

    Both components are band signals from :func:`spectral_bump`; the noise is
    rescaled so ||n||^2 = noise_energy_ratio * ||f||^2.
    """
    clean = spectral_bump(params, grid, signal_center, signal_sigma, path=path)
    noise = spectral_bump(params, grid, noise_center, noise_sigma, path=path)
    cn = l2_norm(clean)
    nn = l2_norm(noise)
    if cn == 0.0 or nn == 0.0:
        raise ZeroSignal("degenerate bump construction")
    noise = noise * (np.sqrt(noise_energy_ratio) * cn / nn)
    received = clean + noise
    return received, clean, noise
