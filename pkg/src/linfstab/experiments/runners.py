"""The five experiments behind the CLI.

Every runner takes an :class:`ExperimentConfig`, writes its CSVs into
``config.out_dir`` and returns the :class:`RunManifest` (already written).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..core import FourierSignal, NormKind, RadialGrid, TorusGrid, norm, sup_grid_size, synthesize
from ..multiplier import apply_precondition, regularized_propagate, triangle_filters
from ..perconv import (
    AdversarialParams,
    TestSignalKind,
    adversarial_perturbation,
    forward_convolve,
    signal_range,
    singular_kernel,
    svd_of_convolution,
    test_signal,
)
from ..regularizers import (
    FilterKind,
    FilterScheme,
    apply_filter,
    choose_alpha,
    fourier_diagonal_operator,
    source_set_data,
    weight_schedule,
)
from ..wave3d import (
    TransitionFamilyParams,
    bump_profile,
    center_value,
    make_transition_profile,
    propagate_radial,
    wave_propagator,
)
from . import audit
from .config import ConfigError, ExperimentConfig
from .manifest import RunManifest

__all__ = [
    "run_wave_adversarial",
    "run_wave_regularized",
    "run_perconv_recon",
    "run_rate_study",
    "run_bounds_audit",
    "RUNNERS",
    "run_experiment",
    "loglog_slope",
]


def _map(fn, items, workers: int):
    """Ordered map, threaded when ``workers > 1``; results never depend on it."""
    items = list(items)
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


# wave-adversarial


def run_wave_adversarial(config: ExperimentConfig) -> RunManifest:
    n_values = config["n_values"]
    perturbed = config["perturbed_n_values"]
    t = config["time"]
    _require(all(n >= 1 for n in n_values + perturbed), "transition indices must be >= 1")
    _require(config["point_count"] >= 2, "point_count must be at least 2")
    _require(t >= 0, "time must be nonnegative")
    grid = RadialGrid(config["r_max"], config["point_count"])
    r = grid.points
    m = _Run(config)
    profiles = {n: make_transition_profile(TransitionFamilyParams(n)) for n in set(n_values + perturbed)}
    _require(
        all(grid.r_max >= p.support_radius + t - 1e-12 for p in profiles.values()),
        f"r_max must cover the transition support plus t = {t}",
    )

    initial, final, centers, sups = [], [], {}, {}
    for n in n_values:
        g = profiles[n]
        f = g.sample(grid)
        sups[n] = norm(f, NormKind.SUP_RADIAL)
        u = propagate_radial(g, t, grid)
        centers[n] = center_value(g, t)
        initial += [(n, ri, vi, sups[n]) for ri, vi in zip(r, f.values)]
        final += [(n, ri, vi, centers[n]) for ri, vi in zip(r, u.values)]
    m.manifest.add_csv("fig1_initial.csv", ["n [-]", "r [length]", "value [-]", "sup_norm [-]"], initial)
    m.manifest.add_csv("fig1_final.csv", ["n [-]", "r [length]", "value [-]", "center_value [-]"], final)

    clean = bump_profile(1.0, config["pulse_radius"], 4)
    _require(grid.r_max >= clean.support_radius + t - 1e-12, "r_max must cover the pulse support plus t")
    amp = config["perturbation_amplitude"]
    rows = []
    for n in perturbed:
        g = clean + profiles[n] * amp
        f = g.sample(grid)
        u = propagate_radial(g, t, grid)
        rows += [(n, ri, fi, ui) for ri, fi, ui in zip(r, f.values, u.values)]
    m.manifest.add_csv(
        "fig2_perturbed.csv", ["n [-]", "r [length]", "initial [-]", "final [-]"], rows
    )

    mags = [abs(centers[n]) for n in sorted(n_values)]
    m.manifest.check(
        "center_growth_monotone",
        all(b > a for a, b in zip(mags, mags[1:])),
        n=sorted(n_values),
        center_magnitudes=mags,
    )
    m.manifest.check(
        "initial_sup_norm_one",
        all(abs(s - 1.0) <= 1e-12 for s in sups.values()),
        sup_norms=[sups[n] for n in n_values],
    )
    m.manifest.results["center_values"] = {str(n): centers[n] for n in n_values}
    return m.finish()


class _Run:
    """Holds the manifest and the start time of a run."""

    def __init__(self, config: ExperimentConfig):
        self.start = time.perf_counter()
        self.manifest = RunManifest(config.echo(), config.out_dir)

    def finish(self) -> RunManifest:
        self.manifest.wall_clock_seconds = time.perf_counter() - self.start
        self.manifest.write()
        return self.manifest


# wave-regularized


def run_wave_regularized(config: ExperimentConfig) -> RunManifest:
    a, b, t = config["alpha"], config["beta"], config["time"]
    _require(a > 0 and b > 0, "filters require alpha > 0 and beta > 0")
    _require(config["step"] > 0 and config["output_stride"] >= 1, "step and output_stride must be positive")
    _require(config["perturbation_index"] >= 1, "perturbation_index must be >= 1")
    m = _Run(config)
    grid = RadialGrid.with_spacing(config["r_max"], config["step"])
    pair = triangle_filters(a, b)
    clean = bump_profile(1.0, config["pulse_radius"], 4)
    pert = make_transition_profile(TransitionFamilyParams(config["perturbation_index"]))
    pert = pert * config["perturbation_amplitude"]
    need = max(clean.support_radius, pert.support_radius) + pair.k_support + t
    _require(grid.r_max >= need - 1e-12, f"r_max must be at least {need:.6g}")

    f = clean.sample(grid)
    fr = (clean + pert).sample(grid)
    Tfr = apply_precondition(pair, fr)
    Bf = propagate_radial(clean, t, grid)
    Bfr = propagate_radial(clean + pert, t, grid)
    Babfr = regularized_propagate(wave_propagator(t), pair, fr)

    s = config["output_stride"]
    cols = [grid.points, f.values, fr.values, Tfr.values, Bf.values, Bfr.values, Babfr.values]
    m.manifest.add_csv(
        "fig3_states.csv",
        ["r [length]", "f [-]", "f_plus_r [-]", "T_f_plus_r [-]", "B_f [-]", "B_f_plus_r [-]", "B_ab_f_plus_r [-]"],
        zip(*(c[::s] for c in cols)),
    )
    rf = np.linspace(0.0, max(a * pair.k_profile.support_radius, 1.0 / b) * 1.25, 501)
    m.manifest.add_csv(
        "fig4_filters.csv",
        ["r [length]", "k_alpha [length^-3]", "h_beta [-]"],
        zip(rf, pair.k_alpha(rf), pair.h_beta(rf)),
    )

    raw = float(np.max(np.abs(Bfr.values - Bf.values)))
    filt = float(np.max(np.abs(Babfr.values - Bf.values)))
    m.manifest.check(
        "suppression", filt < raw / 2, filtered_error=filt, unfiltered_error=raw, alpha=a, beta=b
    )
    m.manifest.results.update(
        filtered_error=filt,
        unfiltered_error=raw,
        relative_filtered_error=filt / float(np.max(np.abs(Bf.values))),
    )
    return m.finish()


# perconv-recon

SCHEMES = (FilterKind.TIKHONOV, FilterKind.WEIGHTED, FilterKind.TSVD)


def bisect_alpha(err, target: float, lo: float, hi: float, steps: int):
    """Largest alpha (in log scale) with ``err(alpha) < target``, or ``None``.

    ``err`` is assumed nondecreasing in alpha.
    """
    if err(lo) >= target:
        return None
    if err(hi) < target:
        return hi
    llo, lhi = np.log(lo), np.log(hi)
    for _ in range(steps):
        mid = 0.5 * (llo + lhi)
        if err(np.exp(mid)) < target:
            llo = mid
        else:
            lhi = mid
    return float(np.exp(llo))


def run_perconv_recon(config: ExperimentConfig) -> RunManifest:
    N, rho = config["bandwidth"], config["rho"]
    _require(0 < rho < 0.5, "rho must lie in (0, 1/2)")
    _require(all(0 < x < 1 for x in config["targets"]), "error targets must lie in (0, 1)")
    _require(config["perturbation_ratio"] > 0, "perturbation_ratio must be positive")
    _require(0 < config["alpha_min"] < config["alpha_max"], "need 0 < alpha_min < alpha_max")
    try:
        kinds = [TestSignalKind(s) for s in config["signals"]]
        x_all = {k: test_signal(k, N) for k in kinds}
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    m = _Run(config)
    kernel = singular_kernel(rho, N)
    op = svd_of_convolution(kernel)
    weights = weight_schedule(op, config["eta"], C=config["weight_constant"])
    r0 = adversarial_perturbation(AdversarialParams(rho, N), kernel)
    grid = TorusGrid(sup_grid_size(N))
    P = config["output_points"]
    _require(P >= 2 and grid.point_count % P == 0, f"output_points must divide {grid.point_count}")
    stride = grid.point_count // P
    t_out = grid.points[::stride]

    def scheme(kind, a):
        return FilterScheme(kind, a, weights if kind is FilterKind.WEIGHTED else None)

    # figure 5: kernel and test signals
    k_samples = synthesize(kernel.coeffs, grid).real[::stride]
    cols = [t_out, k_samples] + [synthesize(x_all[k], grid).real[::stride] for k in kinds]
    m.manifest.add_csv(
        "fig5_kernel_signals.csv",
        ["t [period]", "kernel [-]"] + [f"{k.value} [-]" for k in kinds],
        zip(*cols),
    )

    summary = []
    figure_names = {
        TestSignalKind.SMOOTH_OSCILLATORY: "fig6_smooth.csv",
        TestSignalKind.PIECEWISE_LINEAR: "fig7_piecewise_linear.csv",
        TestSignalKind.PIECEWISE_CONSTANT: "fig8_piecewise_constant.csv",
    }
    for kind in kinds:
        x = x_all[kind]
        y = forward_convolve(kernel, x)
        ny = norm(y, NormKind.L2_TORUS)
        r = r0 * (config["perturbation_ratio"] * ny / norm(r0, NormKind.L2_TORUS))
        r_norm = norm(r, NormKind.L2_TORUS)
        x_dense = synthesize(x, grid).real
        yr = y + r

        def solve(job, y=y, x=x, ny=ny, yr=yr, x_dense=x_dense):
            fk, target = job

            def err(a):
                return norm(apply_filter(op, scheme(fk, a), y) - x, NormKind.L2_TORUS) / ny

            a = bisect_alpha(err, target, config["alpha_min"], config["alpha_max"], config["bisection_steps"])
            if a is None:
                return fk, target, None, None, None, None
            clean = synthesize(apply_filter(op, scheme(fk, a), y), grid).real
            noisy = synthesize(apply_filter(op, scheme(fk, a), yr), grid).real
            return fk, target, a, err(a), clean, noisy

        jobs = [(fk, tg) for tg in config["targets"] for fk in SCHEMES]
        out = _map(solve, jobs, config["workers"])
        header = ["t [period]", "x [-]"]
        cols = [t_out, x_dense[::stride]]
        for fk, target, a, rel, clean, noisy in out:
            row = {
                "signal": kind.value,
                "scheme": fk.value,
                "target": target,
                "alpha": a,
                "clean_relative_l2": rel,
                "y_norm": ny,
                "perturbation_norm": r_norm,
                "reached": a is not None,
            }
            if a is not None:
                row["sup_error"] = float(np.max(np.abs(noisy - x_dense)))
                row["clean_sup_error"] = float(np.max(np.abs(clean - x_dense)))
                row["gibbs_overshoot"] = _overshoot(clean, *signal_range(kind))
                header.append(f"{fk.value}_{target!r} [-]")
                cols.append(noisy[::stride])
            summary.append(row)
        m.manifest.add_csv(figure_names[kind], header, zip(*cols))

    m.manifest.add_csv(
        "recon_summary.csv",
        [
            "signal", "scheme", "target [-]", "alpha [-]", "clean_relative_l2 [-]",
            "sup_error [-]", "clean_sup_error [-]", "gibbs_overshoot [jump]",
            "y_norm [-]", "perturbation_norm [-]",
        ],
        (
            [s["signal"], s["scheme"], s["target"], _nan(s["alpha"]), _nan(s["clean_relative_l2"]),
             _nan(s.get("sup_error")), _nan(s.get("clean_sup_error")), _nan(s.get("gibbs_overshoot")),
             s["y_norm"], s["perturbation_norm"]]
            for s in summary
        ),
    )

    for s in summary:
        if not s["reached"]:
            m.manifest.check(
                f"target_reached[{s['signal']},{s['scheme']},{s['target']}]", False,
                reason="error target not reachable on the alpha bracket",
            )
    for s in summary:
        ratio = s["perturbation_norm"] / (config["perturbation_ratio"] * s["y_norm"])
        if abs(ratio - 1) > 1e-12:
            m.manifest.check(f"perturbation_norm[{s['signal']}]", False, ratio=ratio)
    by = {(s["signal"], s["scheme"], s["target"]): s for s in summary}
    for kind in kinds:
        for tg in config["targets"]:
            w = by[(kind.value, "weighted", tg)].get("sup_error")
            tk = by[(kind.value, "tikhonov", tg)].get("sup_error")
            if w is None or tk is None:
                continue
            m.manifest.check(
                f"weighted_sup_le_tikhonov[{kind.value},{tg!r}]", w <= tk, weighted=w, tikhonov=tk
            )
    if TestSignalKind.PIECEWISE_CONSTANT in kinds:
        for tg in config["targets"]:
            g = by[("piecewise_constant", "tsvd", tg)].get("gibbs_overshoot")
            if g is not None:
                m.manifest.check(f"tsvd_gibbs[{tg!r}]", g > 0.05, overshoot=g)
    m.manifest.results["summary"] = summary
    return m.finish()


def _overshoot(rec: np.ndarray, low: float, high: float) -> float:
    """Overshoot above the true maximum, in units of the signal range."""
    return float((np.max(rec) - high) / (high - low))


def _nan(v):
    return float("nan") if v is None else v


# rate-study


def _rate_operator(config):
    _require(config["modes"] >= 8, "modes must be at least 8")
    _require(config["decay"] > 0, "decay must be positive")
    sig = np.arange(1, config["modes"] + 1, dtype=float) ** (-config["decay"])
    return fourier_diagonal_operator(sig)


def run_rate_study(config: ExperimentConfig) -> RunManifest:
    eta, beta = config["eta"], config["beta"]
    _require(eta > 0 and beta >= 0, "need eta > 0 and beta >= 0")
    _require(len(config["alpha_exponents"]) >= 5, "alpha sweep needs at least 5 points")
    _require(len(config["deltas"]) >= 5, "noise sweep needs at least 5 points")
    _require(all(d > 0 for d in config["deltas"]), "noise levels must be positive")
    m = _Run(config)
    op = _rate_operator(config)
    w = weight_schedule(op, eta, c0=config["c0"], C=config["weight_constant"])
    grid = TorusGrid(sup_grid_size(op.max_index))
    y2 = source_set_data(op, eta + 2 * beta)
    yinf = source_set_data(op, 2 * eta + 2 * beta)
    x2 = op.expand_right(op.left_coefficients(y2) / op.sigmas)
    xinf = op.expand_right(op.left_coefficients(yinf) / op.sigmas)
    alphas = [2.0 ** (-k) for k in config["alpha_exponents"]]

    def point(a):
        s = FilterScheme(FilterKind.WEIGHTED, a, w)
        e2 = norm(apply_filter(op, s, y2) - x2, NormKind.L2_TORUS)
        einf = float(np.max(np.abs(synthesize(apply_filter(op, s, yinf) - xinf, grid))))
        return a, e2, einf

    rows = _map(point, alphas, config["workers"])
    m.manifest.add_csv("rate_alpha.csv", ["alpha [-]", "l2_error [-]", "linf_error [-]"], rows)

    rng = np.random.default_rng(config.seed)
    mi = op.max_index
    direction = rng.standard_normal(2 * mi + 1) + 1j * rng.standard_normal(2 * mi + 1)
    noise = FourierSignal(mi, direction / np.linalg.norm(direction))

    def noisy_point(d):
        a = choose_alpha(d)
        s = FilterScheme(FilterKind.WEIGHTED, a, w)
        e = apply_filter(op, s, yinf + noise * d) - xinf
        return d, a, float(np.max(np.abs(synthesize(e, grid))))

    noisy = _map(noisy_point, config["deltas"], config["workers"])
    m.manifest.add_csv("rate_noise.csv", ["delta [-]", "alpha [-]", "linf_error [-]"], noisy)

    a = [r[0] for r in rows]
    s2 = loglog_slope(a, [r[1] for r in rows])
    sinf = loglog_slope(a, [r[2] for r in rows])
    sd = loglog_slope([r[0] for r in noisy], [r[2] for r in noisy])
    rate = min(1.0, eta / 4.0)
    noise_rate = min(0.5, eta / 8.0)
    m.manifest.results.update(
        l2_slope=s2, linf_slope=sinf, noise_slope=sd, predicted_rate=rate, predicted_noise_rate=noise_rate
    )
    m.manifest.check("l2_slope", s2 >= rate - 0.1, slope=s2, threshold=rate - 0.1)
    m.manifest.check("linf_slope", sinf >= rate - 0.15, slope=sinf, threshold=rate - 0.15)
    m.manifest.check("noise_slope", sd >= noise_rate - 0.1, slope=sd, threshold=noise_rate - 0.1)
    return m.finish()


# bounds-audit


def run_bounds_audit(config: ExperimentConfig) -> RunManifest:
    _require(config["problems"] >= 1 and config["modes"] >= 2, "problems and modes must be positive")
    _require(config["probe_count"] >= 1 and config["radial_fields"] >= 1, "probe counts must be positive")
    _require(all(a > 0 for a in config["alphas"]), "alphas must be positive")
    m = _Run(config)
    suites = {}
    for name in audit.SUITES:
        res = audit.run_suite(name, config, config.seed)
        suites[name] = res.as_dict()
        m.manifest.check(name, res.passed, checks=res.checks, worst_slack=res.worst_slack)
    m.manifest.results["suites"] = suites
    c2 = suites["rate_envelope"]["C_2"]
    m.manifest.results["C_2"] = c2
    m.manifest.check("C_2_equals_quarter", c2 == 0.25, value=c2)
    return m.finish()


RUNNERS = {
    "wave-adversarial": run_wave_adversarial,
    "wave-regularized": run_wave_regularized,
    "perconv-recon": run_perconv_recon,
    "rate-study": run_rate_study,
    "bounds-audit": run_bounds_audit,
}


def run_experiment(config: ExperimentConfig) -> RunManifest:
    return RUNNERS[config.experiment](config)
