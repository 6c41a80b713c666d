"""Exit criteria, one test per criterion, each printing a PASS/FAIL line."""

import time

import numpy as np
import pytest

from linfstab.core import FourierSignal, NormKind, RadialGrid, TorusGrid, norm, sup_grid_size, synthesize
from linfstab.experiments import ExperimentConfig, run_experiment
from linfstab.experiments.audit import envelope, linf_operator_bound, random_svd_problem, tikhonov_bound
from linfstab.multiplier import apply_precondition, regularized_propagate, triangle_filters
from linfstab.perconv import AdversarialParams, adversarial_perturbation, singular_kernel, svd_of_convolution
from linfstab.regularizers import FilterKind, FilterScheme, apply_filter, weight_schedule
from linfstab.wave3d import (
    RadialProfile,
    TransitionFamilyParams,
    bump_profile,
    evaluate_radial,
    fd_wave_oracle,
    gaussian_profile,
    make_transition_profile,
    propagate_radial,
    wave_propagator,
)

pytestmark = pytest.mark.acceptance

ALPHAS = (1e-4, 1e-3, 1e-2, 1e-1, 1.0)


def test_criterion_01_tikhonov_bound(criterion):
    t0 = time.perf_counter()
    res = tikhonov_bound({"problems": 100, "modes": 200, "alphas": ALPHAS}, np.random.default_rng(1))
    dt = time.perf_counter() - t0
    ok = res.checks == 500 and res.worst_slack >= -1e-10 and dt < 5
    criterion(1, ok, f"Tikhonov L2 bound, {res.checks} checks, worst slack {res.worst_slack:.3e}, {dt:.2f} s")


def test_criterion_02_spectral_domination(criterion):
    rng = np.random.default_rng(1)
    worst = np.inf
    for _ in range(100):
        op, y = random_svd_problem(rng, 200)
        for eta, c0 in ((1.0, 0.5), (2.0, 1.0), (4.0, 1.0), (3.0, 2.0)):
            w = weight_schedule(op, eta, c0=c0, C=c0)
            for a in ALPHAS:
                lhs = norm(apply_filter(op, FilterScheme(FilterKind.WEIGHTED, a, w), y), NormKind.L2_TORUS)
                rhs = norm(apply_filter(op, FilterScheme(FilterKind.TIKHONOV, a * c0), y), NormKind.L2_TORUS)
                worst = min(worst, (rhs - lhs) / rhs)
    criterion(2, worst >= -1e-10, f"weighted dominated by Tikhonov at alpha c0, worst slack {worst:.3e}")


def test_criterion_03_wave_adversarial_growth(criterion):
    t0 = time.perf_counter()
    centers, sups, fd_err = [], [], []
    for n in range(1, 7):
        g = make_transition_profile(TransitionFamilyParams(n))
        grid = RadialGrid.with_spacing(2.5, min(2.0**-n / 128, 2.5 / 4096))
        sups.append(norm(g.sample(grid), NormKind.SUP_RADIAL))
        exact = propagate_radial(g, 1.0, grid)
        centers.append(abs(exact.values[0]))
        fd = fd_wave_oracle(g, 1.0, grid, 0.5)
        fd_err.append(np.max(np.abs(fd.values - exact.values)) / np.max(np.abs(exact.values)))
    dt = time.perf_counter() - t0
    ratios = [b / a for a, b in zip(centers, centers[1:])]
    ok = (
        all(r > 1 for r in ratios)
        and all(1.8 <= r <= 2.1 for r in ratios[1:])
        and all(s == 1.0 for s in sups)
        and max(fd_err) < 0.01
        and dt < 30
    )
    detail = (
        f"|Bf_n(0)| = {', '.join(f'{c:.2f}' for c in centers)}; ratios n>=3 "
        f"{', '.join(f'{r:.3f}' for r in ratios[1:])}; FD rel err {max(fd_err):.2e}; {dt:.1f} s"
    )
    criterion(3, ok, detail)


def _profiles():
    out = [gaussian_profile(a, s) for a, s in ((1.0, 0.5), (1.0, 1.0), (-2.0, 0.8), (0.5, 2.0))]
    out += [bump_profile(a, R, p) for a, R, p in ((1.0, 1.5, 4), (1.0, 2.0, 2), (0.3, 3.0, 6), (-1.0, 2.5, 3))]
    out += [
        RadialProfile(lambda r: np.cos(r) * np.exp(-r * r), lambda r: -(np.sin(r) + 2 * r * np.cos(r)) * np.exp(-r * r)),
        RadialProfile(lambda r: 1.0 / (1.0 + r * r), lambda r: -2 * r / (1.0 + r * r) ** 2),
    ]
    return out


def test_criterion_04_center_formula(criterion):
    worst = 0.0
    h = 1e-5
    for g in _profiles():
        for t in (0.3, 0.7, 1.0):
            near = evaluate_radial(g, t, np.array([1e-6]))[0]
            gp = (g.value(np.asarray(t + h)) - g.value(np.asarray(t - h))) / (2 * h)
            worst = max(worst, abs(near - (g.value(np.asarray(t)) + t * gp)))
    criterion(4, worst < 1e-6, f"u(t, r->0) against g(t) + t g'(t) on 10 profiles, worst {worst:.2e}")


def test_criterion_05_filtered_approximation(criterion):
    grid = RadialGrid.with_spacing(3.0, 1e-3)
    g = bump_profile(1.0, 1.5, 4)
    f = g.sample(grid)
    Bf = propagate_radial(g, 1.0, grid)
    B = wave_propagator(1.0)
    l2, sup = [], []
    for a in (0.2, 0.1, 0.05, 0.025):
        pair = triangle_filters(a, a)
        l2.append(norm(apply_precondition(pair, f) - f, NormKind.L2_RADIAL_3D))
        sup.append(norm(regularized_propagate(B, pair, f) - Bf, NormKind.SUP_RADIAL))
    rel = sup[-1] / norm(Bf, NormKind.SUP_RADIAL)
    ok = np.all(np.diff(l2) < 0) and np.all(np.diff(sup) < 0) and rel < 0.05
    criterion(5, ok, f"L2 {', '.join(f'{e:.3g}' for e in l2)}; Linf {', '.join(f'{e:.3g}' for e in sup)}; final {rel:.2%}")


def test_criterion_06_tikhonov_artifact(criterion):
    t0 = time.perf_counter()
    alpha, rho, Ns = 0.01, 1.0 / 3.0, (32, 128, 512)
    kernel = singular_kernel(rho, max(Ns))
    op = svd_of_convolution(kernel)
    w = weight_schedule(op, 4.0)
    n = np.arange(-max(Ns), max(Ns) + 1)
    assert np.allclose(w.c, (np.abs(op.right_index) + 1.0) ** (1.0 / 3.0))
    at_zero, lower, weighted = [], [], []
    for N in Ns:
        r = adversarial_perturbation(AdversarialParams(rho, N), kernel).padded(max(Ns))
        tik = apply_filter(op, FilterScheme(FilterKind.TIKHONOV, alpha), r)
        at_zero.append(float(np.real(np.sum(tik.coeffs))))
        m = np.abs(n) <= N
        lower.append(np.sum(1.0 / (np.abs(n[m]) + 1.0)) / (op.sigmas[0] ** 2 + alpha))
        weighted.append(norm(apply_filter(op, FilterScheme(FilterKind.WEIGHTED, alpha, w), r), NormKind.SUP_GRID))
    dt = time.perf_counter() - t0
    grows = all(a >= b for a, b in zip(at_zero, lower))
    spread = max(weighted) / min(weighted)
    ok = grows and spread <= 1.1 and dt < 10
    detail = (
        f"Tikhonov (T r_N)(0) {', '.join(f'{v:.1f}' for v in at_zero)} >= {', '.join(f'{v:.1f}' for v in lower)}"
        f" [{'ok' if grows else 'violated'}]; weighted sup {', '.join(f'{v:.1f}' for v in weighted)},"
        f" spread {spread:.2f} (limit 1.10); {dt:.1f} s"
    )
    criterion(6, ok, detail)


def test_criterion_07_linf_operator_bound(criterion):
    res = linf_operator_bound({"probe_count": 200}, np.random.default_rng(3))
    detail = (
        f"alpha ||T y||_inf max {res.extra['largest_scaled_sup']:.4f} <= C' = {res.extra['constant']:.4f} "
        f"over {res.checks} probes"
    )
    criterion(7, res.passed and res.checks == 600, detail)


def test_criterion_08_rate_slopes(criterion, tmp_path):
    t0 = time.perf_counter()
    parts, ok = [], True
    for eta in (1.0, 2.0, 4.0):
        beta = 0.5 if eta <= 2 else 1.0
        cfg = ExperimentConfig.from_text("rate-study", f"eta = {eta}\nbeta = {beta}\n", 0, tmp_path / str(eta))
        res = run_experiment(cfg).results
        rate, noise_rate = min(1.0, eta / 4), min(0.5, eta / 8)
        ok &= res["l2_slope"] >= rate - 0.1
        ok &= res["linf_slope"] >= rate - 0.15
        ok &= res["noise_slope"] >= noise_rate - 0.1
        parts.append(
            f"eta={eta:g}: L2 {res['l2_slope']:.2f} (>= {rate - 0.1:.2f}), Linf {res['linf_slope']:.2f} "
            f"(>= {rate - 0.15:.2f}), noise {res['noise_slope']:.2f} (>= {noise_rate - 0.1:.3f})"
        )
    dt = time.perf_counter() - t0
    criterion(8, ok and dt < 60, "; ".join(parts) + f"; {dt:.1f} s")


def test_criterion_09_envelope(criterion):
    res = envelope({}, np.random.default_rng(0))
    ok = res.passed and res.worst_slack >= -1e-9 and res.extra["C_2"] == 0.25
    criterion(9, ok, f"envelope worst slack {res.worst_slack:.2e} over {res.checks} checks, C_2 = {res.extra['C_2']!r}")


def test_criterion_10_weighted_beats_tikhonov(criterion, tmp_path):
    from pathlib import Path

    conf = Path(__file__).resolve().parents[1] / "configs" / "perconv-recon.conf"
    cfg = ExperimentConfig.from_file("perconv-recon", conf, out_dir=tmp_path)
    t0 = time.perf_counter()
    manifest = run_experiment(cfg)
    dt = time.perf_counter() - t0
    checks = [a for a in manifest.assertions if a.name.startswith("weighted_sup_le_tikhonov")]
    reached = all(a.passed for a in manifest.assertions if a.name.startswith("target_reached"))
    bad = [
        f"{a.name[len('weighted_sup_le_tikhonov'):]} {a.detail['weighted']:.3f}>{a.detail['tikhonov']:.3f}"
        for a in checks if not a.passed
    ]
    ok = len(checks) == 9 and not bad and reached and dt < 120
    detail = f"{len(checks) - len(bad)}/{len(checks)} cases weighted <= Tikhonov, {dt:.1f} s"
    if bad:
        detail += "; failing " + ", ".join(bad)
    criterion(10, ok, detail)


def test_criterion_11_determinism(criterion, tmp_path):
    import json
    from pathlib import Path

    conf = Path(__file__).resolve().parents[1] / "configs" / "bounds-audit.conf"
    data = []
    for run in ("a", "b"):
        cfg = ExperimentConfig.from_file("bounds-audit", conf, seed=42, out_dir=tmp_path / run)
        run_experiment(cfg)
        d = json.loads((tmp_path / run / "manifest.json").read_text())
        d.pop("wall_clock_seconds")
        data.append(d)
    criterion(11, data[0] == data[1], "bounds-audit manifests identical apart from wall_clock_seconds")
