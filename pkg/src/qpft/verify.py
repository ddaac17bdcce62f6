"""Machine-checkable verification suites.

Each suite exercises one module's headline identities at fixed tolerances and
returns a list of named check results; the CLI ``verify`` subcommand and the
acceptance test module both drive these functions.  Every expected value is
either produced by an independent oracle (closed forms, plain DFT sums,
brute-force quadrature) or is a cross-path comparison.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .applications import (
    ConvolutionEquation,
    FilterSpec,
    apply_filter,
    design_filter,
    snr_db,
    solve_convolution_equation,
)
from .boas import boas_growth, boas_transform, delta_op
from .convolution import ConvKind, conv_type1, conv_type2, conv_type3, spectral_symbol
from .core import FREQUENCY, Field, Grid, QpftParams, l2_norm, validate_params
from .errors import NoSpectralGap, SingularSymbol
from .inversion import (
    approx_identity_errors,
    mollifier_closed_at,
    mollifier_mass,
    mollifier_quadrature,
)
from .oracle import GaussianSpec, gaussian_field
from .signals import gaussian, noisy_mix, spectral_bump
from .transform import (
    default_frequency_grid,
    iqpft,
    parseval_residual,
    qpft,
    qpft_direct,
    qpft_fast,
)

DEFAULT_SEED = 20260809

SUITE_NAMES = ("transform", "convolution", "inversion", "boas", "applications")


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    bound: str
    passed: bool
    seconds: float


def _mk(name: str, value: float, t0: float, upper: float | None = None,
        lower: float | None = None) -> CheckResult:
    passed = True
    if upper is not None and not value < upper:
        passed = False
    if lower is not None and not value > lower:
        passed = False
    if lower is None:
        bound = f"< {upper:g}"
    elif upper is None:
        bound = f"> {lower:g}"
    else:
        bound = f"in ({lower:g}, {upper:g})"
    return CheckResult(name, float(value), bound, passed, time.perf_counter() - t0)


def draw_params(rng: np.random.Generator, dims: int, *, quad_max: float = 0.5,
                b_range: tuple[float, float] = (0.5, 2.0),
                lin_max: float = 1.0) -> QpftParams:
    """Random |b| in b_range, |a|,|c| <= quad_max, |d|,|e| <= lin_max."""
    quints = []
    for _ in range(dims):
        quints.append((
            rng.uniform(-quad_max, quad_max),
            rng.uniform(*b_range),
            rng.uniform(-quad_max, quad_max),
            rng.uniform(-lin_max, lin_max),
            rng.uniform(-lin_max, lin_max),
        ))
    return validate_params(quints)


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def _plain_ft_reference(f: Field) -> np.ndarray:
    """e^{-i N pi/4} fhat(-w) on the default grid of unit-b parameters,
    built from plain numpy FFTs with explicit phase bookkeeping."""
    vals = f.values
    n = f.grid.dims
    for k in range(n):
        m = f.grid.counts[k]
        dx = f.grid.steps[k]
        x0 = f.grid.origins[k]
        dw = 2.0 * np.pi / (dx * m)
        # fhat(kappa) = (2 pi)^(-1/2) dx e^{-i kappa x0} sum_j f_j e^{-2 pi i j m'/M}
        # evaluated at kappa = -w_m = (M//2 - m) dw, i.e. index (M//2 - m) mod M
        spec = np.fft.fft(vals, axis=k)
        idx = (m // 2 - np.arange(m)) % m
        spec = np.take(spec, idx, axis=k)
        kappa = -(np.arange(m) - m // 2) * dw
        shape = [1] * n
        shape[k] = m
        phase = (dx / np.sqrt(2.0 * np.pi)) * np.exp(-1j * kappa * x0)
        vals = spec * phase.reshape(shape)
    return np.exp(-1j * n * np.pi / 4.0) * vals


def transform_suite(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = []

    grid1 = Grid.from_ranges([(-12.0, 12.0, 512)])
    corpus1 = [
        gaussian(grid1, [0.5]),
        gaussian(grid1, [0.5], center=[1.0])
        + gaussian(grid1, [0.9], center=[-2.0], amplitude=0.6),
    ]
    grid2 = Grid.from_ranges([(-12.0, 12.0, 128), (-12.0, 12.0, 128)])
    corpus2 = [gaussian(grid2, [0.5, 0.8], center=[0.5, -0.3])]

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(3):
        p = draw_params(rng, 1)
        for f in corpus1:
            back = iqpft(qpft_fast(f, p), p, grid1)
            worst = max(worst, _rel(back.values, f.values))
    checks.append(_mk("roundtrip-1d", worst, t0, upper=1e-6))

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(2):
        p2 = draw_params(rng, 2)
        for f in corpus2:
            back = iqpft(qpft_fast(f, p2), p2, grid2)
            worst = max(worst, _rel(back.values, f.values))
    checks.append(_mk("roundtrip-2d", worst, t0, upper=1e-5))

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(3):
        p = draw_params(rng, 1)
        for f in corpus1:
            worst = max(worst, parseval_residual(f, p))
        p2 = draw_params(rng, 2)
        for f in corpus2:
            worst = max(worst, parseval_residual(f, p2))
    checks.append(_mk("parseval", worst, t0, upper=1e-6))

    t0 = time.perf_counter()
    g1s = Grid.from_ranges([(-12.0, 12.0, 256)])
    g2s = Grid.from_ranges([(-10.0, 10.0, 64), (-10.0, 10.0, 64)])
    f1s = gaussian(g1s, [0.6], center=[0.4])
    f2s = gaussian(g2s, [0.6, 0.9])
    worst = 0.0
    for _ in range(5):
        p = draw_params(rng, 1)
        worst = max(worst, _rel(qpft_fast(f1s, p).values, qpft_direct(f1s, p).values))
        p2 = draw_params(rng, 2)
        worst = max(worst, _rel(qpft_fast(f2s, p2).values, qpft_direct(f2s, p2).values))
    checks.append(_mk("fast-vs-direct", worst, t0, upper=1e-10))

    t0 = time.perf_counter()
    worst = 0.0
    for f, dims in ((f1s, 1), (gaussian(g2s, [0.5, 0.7], center=[0.2, -0.4]), 2)):
        p = validate_params([(0, 1, 0, 0, 0)] * dims)
        spec = qpft_fast(f, p)
        ref = _plain_ft_reference(f)
        worst = max(worst, float(np.abs(spec.values - ref).max() / np.abs(ref).max()))
    checks.append(_mk("ft-reduction", worst, t0, upper=1e-8))
    return checks


def convolution_suite(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    rng = np.random.default_rng(seed + 1)
    checks: list[CheckResult] = []
    grid = Grid.from_ranges([(-12.0, 12.0, 256)])
    f = gaussian(grid, [0.8], center=[0.3])
    g = gaussian(grid, [1.2], center=[-0.5], amplitude=0.7 + 0.2j)

    def type1_residual(p: QpftParams) -> float:
        wg = default_frequency_grid(p, grid)
        lhs = qpft_direct(conv_type1(f, g, p), p, wg).values
        rhs = (spectral_symbol("type1", p).field(wg).values
               * qpft_direct(f, p, wg).values * qpft_direct(g, p, wg).values)
        return _rel(lhs, rhs)

    def type3_residual(p: QpftParams, lam: float) -> float:
        tp = p.scale(lam)
        wg = default_frequency_grid(tp, grid)
        lhs = qpft_direct(conv_type3(f, g, p, lam), tp, wg).values
        rhs = (spectral_symbol("type3", p, lam=lam).field(wg).values
               * qpft_direct(f, tp, wg).values * qpft_direct(g, tp, wg).values)
        return _rel(lhs, rhs)

    def type2_residual(p: QpftParams, scale: float) -> float:
        wg = default_frequency_grid(p, grid)
        lhs = qpft_direct(conv_type2(f, g, p), p, wg).values
        scaled = Grid(tuple(o * scale for o in wg.origins),
                      tuple(s * scale for s in wg.steps), wg.counts)
        rhs = (spectral_symbol("type2", p).field(wg).values
               * qpft_direct(f, p, scaled).values
               * qpft_direct(g, p, scaled).values)
        return _rel(lhs, rhs)

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(5):
        p = draw_params(rng, 1)
        worst = max(worst, type1_residual(p))
    checks.append(_mk("type1-identity", worst, t0, upper=1e-6))

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(3):
        p = draw_params(rng, 1)
        for lam in (0.5, 1.0, 2.0):
            worst = max(worst, type3_residual(p, lam))
    checks.append(_mk("type3-identity", worst, t0, upper=1e-6))

    t0 = time.perf_counter()
    worst_resolved = 0.0
    best_rejected = np.inf
    for _ in range(3):
        p = draw_params(rng, 1)
        good = type2_residual(p, 1.0 / np.sqrt(2.0))
        bad = type2_residual(p, 0.5)
        worst_resolved = max(worst_resolved, good)
        best_rejected = min(best_rejected, bad / max(good, 1e-300))
    checks.append(_mk("type2-identity", worst_resolved, t0, upper=1e-5))
    t0 = time.perf_counter()
    checks.append(_mk("type2-negative-control", best_rejected, t0, lower=1e3))
    return checks


def inversion_suite(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    rng = np.random.default_rng(seed + 2)
    checks: list[CheckResult] = []

    t0 = time.perf_counter()
    p = draw_params(rng, 1)
    worst = 0.0
    for _ in range(20):
        w = rng.uniform(-3.0, 3.0, size=1)
        lam = float(rng.uniform(0.5, 1.2))
        worst = max(worst, abs(mollifier_closed_at(p, lam, w)
                               - mollifier_quadrature(p, lam, w)))
    checks.append(_mk("mollifier-closed-vs-quadrature", worst, t0, upper=1e-8))

    t0 = time.perf_counter()
    p2 = draw_params(rng, 2)
    worst = max(abs(mollifier_mass(p, 0.7) - 1.0), abs(mollifier_mass(p2, 0.7) - 1.0))
    checks.append(_mk("mollifier-unit-mass", worst, t0, upper=1e-6))

    t0 = time.perf_counter()
    worst = 0.0
    lam = 0.41
    for _ in range(12):
        w = rng.uniform(-2.0, 2.0, size=1)
        h = mollifier_closed_at(p, lam, w)
        chirp_neg = np.exp(-1j * (p.a[0] * w[0] ** 2 + p.d[0] * w[0]))
        chirp_pos = np.exp(1j * (p.a[0] * (w[0] / lam) ** 2 + p.d[0] * (w[0] / lam)))
        rhs = chirp_neg * chirp_pos / lam * mollifier_closed_at(p, 1.0, w / lam)
        worst = max(worst, abs(h - rhs))
    checks.append(_mk("mollifier-scaling-law", worst, t0, upper=1e-10))

    t0 = time.perf_counter()
    grid = Grid.from_ranges([(-64.0, 64.0, 2048)])
    pa = validate_params([(0.05, 1.0, 0.03, 0.02, 0.01)])
    fa = gaussian(grid, [0.1])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        errs = approx_identity_errors(fa, pa, [1.0, 0.5, 0.25, 0.1])
    ratio = max(errs[i + 1] / errs[i] for i in range(len(errs) - 1))
    checks.append(_mk("approx-identity-trend", ratio, t0, upper=1.1))
    t0 = time.perf_counter()
    checks.append(_mk("approx-identity-final-error", errs[-1], t0, upper=0.05))
    return checks


def boas_suite(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    checks: list[CheckResult] = []
    p = validate_params([(0.1, 1.0, 0.05, 0.2, -0.1)])

    fine = Grid.from_ranges([(-384.0, 384.0, 49152)])
    f_fine = spectral_bump(p, fine, center=[1.85], sigma=[0.024])
    wg = default_frequency_grid(p, fine)
    spec = qpft(f_fine, p, wg)
    mag = np.abs(spec.values)
    mask = mag > 1e-8 * mag.max()
    bw = 1j * p.b[0] * wg.axis(0)

    t0 = time.perf_counter()
    bf = boas_transform(f_fine, p)
    lhs = qpft(bf, p, wg).values[mask]
    rhs = spec.values[mask] / bw[mask]
    checks.append(_mk("boas-spectral-identity", _rel(lhs, rhs), t0, upper=1e-4))

    t0 = time.perf_counter()
    dbf = delta_op(bf, p)
    checks.append(_mk(
        "delta-inverts-boas",
        l2_norm(Field(fine, dbf.values - f_fine.values)) / l2_norm(f_fine),
        t0, upper=1e-4))

    coarse = Grid.from_ranges([(-384.0, 384.0, 8192)])
    t0 = time.perf_counter()
    st_a = boas_growth(spectral_bump(p, coarse, center=[1.85], sigma=[0.024]), p, 5)
    checks.append(_mk("growth-rate-location-a",
                      st_a.r_estimate * st_a.gamma_measured, t0,
                      lower=0.85, upper=1.15))
    t0 = time.perf_counter()
    st_b = boas_growth(spectral_bump(p, coarse, center=[3.7], sigma=[0.048]), p, 5)
    checks.append(_mk("growth-rate-location-b",
                      st_b.r_estimate * st_b.gamma_measured, t0,
                      lower=0.85, upper=1.15))
    t0 = time.perf_counter()
    checks.append(_mk("growth-rate-halving",
                      st_b.r_estimate / st_a.r_estimate, t0,
                      lower=0.5 / 1.15, upper=0.5 * 1.15))

    t0 = time.perf_counter()
    try:
        boas_growth(gaussian(coarse, [0.05]), p, 5)
        divergence = 0.0
    except NoSpectralGap as exc:
        ratios = [exc.norms[i + 1] / exc.norms[i] for i in range(len(exc.norms) - 1)]
        divergence = min(ratios)
    checks.append(_mk("no-gap-divergence", divergence, t0, lower=5.0))
    return checks


def applications_suite(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    rng = np.random.default_rng(seed + 4)
    checks: list[CheckResult] = []
    grid = Grid.from_ranges([(-12.0, 12.0, 512)])
    p = draw_params(rng, 1)

    phi_true = gaussian(grid, [0.5], center=[0.2])
    kern = gaussian(grid, [4.0], amplitude=0.6)
    rhs = phi_true * 1.0 + conv_type1(kern, phi_true, p)

    t0 = time.perf_counter()
    res = solve_convolution_equation(
        ConvolutionEquation(1.0, kern, rhs, ConvKind("type1"), p))
    err = l2_norm(Field(grid, res.solution.values - phi_true.values)) / l2_norm(phi_true)
    checks.append(_mk("solver-recovery", err, t0, upper=1e-5))

    t0 = time.perf_counter()
    res0 = solve_convolution_equation(
        ConvolutionEquation(2.0, Field.zeros(grid), rhs, ConvKind("type1"), p))
    exact = float(np.abs(res0.solution.values - rhs.values / 2.0).max())
    checks.append(_mk("solver-zero-kernel", exact, t0, upper=1e-14))

    t0 = time.perf_counter()
    wg = default_frequency_grid(p, grid)
    spec_k = qpft(kern, p, wg)
    omega = spectral_symbol("type1", p).field(wg)
    peak = int(np.argmax(np.abs(spec_k.values)))
    alpha = -1.0 / (omega.values[peak] * spec_k.values[peak])
    k_sing = kern * alpha
    rhs_s = phi_true * 1.0 + conv_type1(k_sing, phi_true, p)
    eq_s = ConvolutionEquation(1.0, k_sing, rhs_s, ConvKind("type1"), p)
    try:
        solve_convolution_equation(eq_s)
        refused = 0.0
    except SingularSymbol:
        reg = solve_convolution_equation(eq_s, regularization=1e-3)
        refused = 1.0 if np.isfinite(l2_norm(reg.solution)) else 0.0
    checks.append(_mk("solver-singular-handling", refused, t0, lower=0.5))

    pf = validate_params([(0.1, 1.0, 0.05, 0.0, 0.0)])
    fgrid = Grid.from_ranges([(-64.0, 64.0, 2048)])
    received, clean, _ = noisy_mix(
        pf, fgrid, signal_center=[1.0], signal_sigma=[0.12],
        noise_center=[3.0], noise_sigma=[0.15], noise_energy_ratio=10.0)
    wgf = default_frequency_grid(pf, fgrid)
    mask = design_filter(FilterSpec(((-1.8, 1.8),)), pf, wgf)

    t0 = time.perf_counter()
    out = apply_filter(received, mask, pf)
    r_in = qpft(received, pf, wgf)
    r_out = qpft(out, pf, wgf)
    band = (wgf.axis(0) >= -1.8) & (wgf.axis(0) <= 1.8)
    pres = float(np.abs(r_out.values[band] - r_in.values[band]).max()
                 / np.abs(r_in.values).max())
    checks.append(_mk("filter-passband-preservation", pres, t0, upper=1e-9))

    t0 = time.perf_counter()
    gain = snr_db(out, clean) - snr_db(received, clean)
    checks.append(_mk("filter-snr-gain-db", gain, t0, lower=10.0))

    t0 = time.perf_counter()
    out2 = apply_filter(out, mask, pf)
    idem = l2_norm(Field(fgrid, out2.values - out.values)) / l2_norm(out)
    checks.append(_mk("filter-idempotence", idem, t0, upper=1e-8))
    return checks


_SUITES = {
    "transform": transform_suite,
    "convolution": convolution_suite,
    "inversion": inversion_suite,
    "boas": boas_suite,
    "applications": applications_suite,
}


def run_suites(names=("all",), seed: int = DEFAULT_SEED) -> dict:
    """Run the named suites (or all) and assemble the JSON-able report."""
    if "all" in names:
        names = SUITE_NAMES
    unknown = [n for n in names if n not in _SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {SUITE_NAMES} or 'all'")
    report: dict = {"seed": seed, "suites": {}, "passed": True}
    total = 0.0
    for name in names:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            checks = _SUITES[name](seed)
        ok = all(c.passed for c in checks)
        secs = sum(c.seconds for c in checks)
        total += secs
        report["suites"][name] = {
            "passed": ok,
            "seconds": round(secs, 3),
            "checks": [asdict(c) for c in checks],
        }
        report["passed"] = report["passed"] and ok
    report["seconds"] = round(total, 3)
    return report
