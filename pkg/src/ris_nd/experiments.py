"""Monte Carlo harness: scenario configs, figure presets, metric aggregation, CSV.

All architectures in a scenario see the identical channel draw per trial
(paired comparison); trials use independent substreams derived from
(seed, sweep index, trial index), so results are reproducible and the
aggregation is independent of execution order.
"""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import special

from .channel import (ChannelRealization, FadingParams, Geometry,
                      apply_correlation, corrupt_csi, sample_channels, trial_rng)
from .phase_design import (BeamformingSolution, alt_opt_miso, baseline_gains,
                           channel_gain, diag_phases_siso, nondiag_siso,
                           two_stage_mimo)
from .sdp import SdpNonConvergence

SWEEP_NAMES = ("N", "d_r", "R_D", "alpha", "sigma_h_sq", "delta_0",
               "kappa_G", "rho", "omega_th")
ARCHITECTURES = ("conventional", "nondiag", "fully", "group")
METRICS = ("gain", "rate", "outage", "ber", "sdp_gap", "iterations")
CSV_HEADER = ("scenario_id", "figure", "sweep_name", "sweep_value",
              "architecture", "metric", "mean", "stderr", "trials",
              "failures", "seed")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str
    mode: str                       # siso | miso | mimo
    geometry: Geometry
    fading: FadingParams
    K: int
    Pt: float
    sigma_n_sq: float
    architectures: tuple[str, ...]
    sweep_name: str
    sweep_grid: tuple[float, ...]
    metrics: tuple[str, ...]
    figure: str = ""
    group_size: int = 4
    trials: int = 10000
    seed: int = 0
    omega_th: float = 0.0
    R_D: float = 0.0                # > 0: redraw user placement per trial
    ber_p: float = 0.5
    ber_q: float = 1.0
    trace_iterations: bool = False
    alt_init: str = "spectral"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.mode not in ("siso", "miso", "mimo"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.sweep_name not in SWEEP_NAMES:
            raise ConfigError(f"sweep variable must be one of {SWEEP_NAMES}")
        if not self.sweep_grid:
            raise ConfigError("sweep grid must be non-empty")
        bad = set(self.architectures) - set(ARCHITECTURES)
        if bad:
            raise ConfigError(f"unknown architectures {sorted(bad)}")
        if self.mode != "siso" and (set(self.architectures) & {"fully", "group"}):
            raise ConfigError("fully/group baselines are SISO-only")
        badm = set(self.metrics) - set(METRICS)
        if badm:
            raise ConfigError(f"unknown metrics {sorted(badm)}")
        if self.mode == "siso" and (self.geometry.M != 1 or self.K != 1):
            raise ConfigError("siso mode requires M = 1 and K = 1")
        if self.mode == "miso" and self.K != 1:
            raise ConfigError("miso mode requires K = 1")
        if self.K > self.geometry.M and self.mode == "mimo":
            raise ConfigError("mimo mode requires K <= M")
        if self.Pt <= 0 or self.sigma_n_sq <= 0:
            raise ConfigError("Pt and sigma_n_sq must be > 0")


@dataclass(frozen=True)
class MetricRecord:
    scenario_id: str
    figure: str
    sweep_name: str
    sweep_value: float
    architecture: str
    metric: str
    mean: float
    stderr: float
    trials: int
    failures: int
    seed: int


def grid_dims(N: int) -> tuple[int, int]:
    """Near-square RIS grid: largest divisor of N not exceeding sqrt(N)."""
    nx = int(np.sqrt(N))
    while N % nx:
        nx -= 1
    return nx, N // nx


def achievable_rate(real: ChannelRealization, sol: BeamformingSolution,
                    Pt: float, sigma_n_sq: float, mode: str) -> float:
    """log2(1 + (Pt/s2)|hH Theta G w|^2) for siso/miso, log-det for mimo."""
    Theta = sol.phase.expand()
    snr = Pt / sigma_n_sq
    if mode in ("siso", "miso"):
        x = real.H[0] @ Theta @ real.G @ sol.W[:, 0]
        return float(np.log2(1.0 + snr * np.abs(x) ** 2))
    if mode == "mimo":
        H_equ = real.H @ Theta @ real.G
        C = sol.W @ np.diag(sol.lam) @ sol.W.conj().T
        K = H_equ.shape[0]
        Mat = np.eye(K) + snr * (H_equ @ C @ H_equ.conj().T)
        return float(np.linalg.slogdet(Mat)[1].real / np.log(2))
    raise ValueError(f"unknown mode {mode!r}")


def _apply_sweep(cfg: ScenarioConfig, value: float) -> ScenarioConfig:
    g, f = cfg.geometry, cfg.fading
    name = cfg.sweep_name
    if name == "N":
        nx, ny = grid_dims(int(value))
        g = replace(g, N_x=nx, N_y=ny)
    elif name == "d_r":
        g = replace(g, d_r=(float(value),) * max(1, cfg.K))
    elif name == "R_D":
        return replace(cfg, R_D=float(value))
    elif name == "alpha":
        f = replace(f, alpha_t=float(value), alpha_r=float(value))
    elif name == "sigma_h_sq":
        f = replace(f, sigma_h_sq=float(value))
    elif name == "delta_0":
        g = replace(g, delta_0_over_lambda=float(value))
    elif name == "kappa_G":
        f = replace(f, kappa_g=float(value))
    elif name == "rho":
        # direct-SNR scenarios: unit path loss, sigma_n_sq = 1, Pt = rho
        return replace(cfg, Pt=float(value))
    elif name == "omega_th":
        return replace(cfg, omega_th=float(value))
    return replace(cfg, geometry=g, fading=f)


def _place_users(cfg: ScenarioConfig, rng) -> Geometry:
    """Users uniform in a half-disc of radius R_D around the RIS, min 1 m;
    azimuth AoD from the placement angle, elevation drawn uniformly."""
    K = cfg.K
    r = np.maximum(cfg.R_D * np.sqrt(rng.uniform(size=K)), 1.0)
    azim = rng.uniform(0.0, np.pi, size=K)
    elev = rng.uniform(0.0, 2.0 * np.pi, size=K)
    return replace(cfg.geometry, d_r=tuple(r), phi_Dk=tuple(elev),
                   varphi_Dk=tuple(azim))


def _siso_trial(cfg: ScenarioConfig, real, est) -> dict[str, dict[str, float]]:
    g, hH = real.G[:, 0], real.H[0]
    norm = real.rho_t * float(real.rho_r[0])
    N2 = cfg.geometry.N ** 2
    snr_scale = cfg.Pt / cfg.sigma_n_sq
    gains = {}
    for arch in cfg.architectures:
        if arch == "conventional":
            gains[arch] = channel_gain(hH, diag_phases_siso(est.G[:, 0], est.H[0]), g)
        elif arch == "nondiag":
            gains[arch] = channel_gain(hH, nondiag_siso(est.G[:, 0], est.H[0]), g)
    if "fully" in cfg.architectures or "group" in cfg.architectures:
        fully, group = baseline_gains(g, hH, cfg.group_size)
        if "fully" in cfg.architectures:
            gains["fully"] = fully
        if "group" in cfg.architectures:
            gains["group"] = group
    out = {}
    for arch, gain in gains.items():
        snr = snr_scale * gain
        vals = {}
        for metric in cfg.metrics:
            if metric == "gain":
                vals[metric] = gain / (norm * N2)
            elif metric == "rate":
                vals[metric] = float(np.log2(1.0 + snr))
            elif metric == "outage":
                vals[metric] = float(snr <= cfg.omega_th)
            elif metric == "ber":
                vals[metric] = float(special.gammaincc(cfg.ber_p, cfg.ber_q * snr) / 2.0)
        out[arch] = vals
    return out


def _miso_trial(cfg: ScenarioConfig, real, est):
    scale = np.sqrt(real.rho_t * float(real.rho_r[0]))
    Gn = est.G / np.sqrt(est.rho_t)
    hn = est.H[0] / np.sqrt(float(est.rho_r[0]))
    out = {}
    traces = {}
    for arch in cfg.architectures:
        phase, w, trace = alt_opt_miso(Gn, hn, init=cfg.alt_init,
                                       sort_perms=(arch == "nondiag"))
        sol = BeamformingSolution(W=w[:, None], lam=np.ones(1), phase=phase)
        vals = {}
        if "rate" in cfg.metrics:
            vals["rate"] = achievable_rate(real, sol, cfg.Pt, cfg.sigma_n_sq, "miso")
        if "iterations" in cfg.metrics:
            vals["iterations"] = float(len(trace))
        out[arch] = vals
        if cfg.trace_iterations:
            # trace is the gain on unit-path-loss channels; rescale to truth
            snr = cfg.Pt / cfg.sigma_n_sq * scale ** 2
            traces[arch] = [float(np.log2(1.0 + snr * t)) for t in trace]
    return (out, traces) if cfg.trace_iterations else (out, None)


def _mimo_trial(cfg: ScenarioConfig, real, est):
    out = {}
    for arch in cfg.architectures:
        res = two_stage_mimo(est.G, est.H, cfg.Pt, cfg.sigma_n_sq,
                             sort_perms=(arch == "nondiag"))
        vals = {}
        if "rate" in cfg.metrics:
            vals["rate"] = achievable_rate(real, res.solution, cfg.Pt,
                                           cfg.sigma_n_sq, "mimo")
        if "sdp_gap" in cfg.metrics:
            vals["sdp_gap"] = res.sdp_gap
        out[arch] = vals
    return out, None


def _run_sweep_point(cfg: ScenarioConfig, sweep_index: int, trial_lo: int, trial_hi: int):
    """Per-trial metric values for trials in [trial_lo, trial_hi)."""
    point = _apply_sweep(cfg, cfg.sweep_grid[sweep_index])
    values = {a: {m: [] for m in cfg.metrics} for a in cfg.architectures}
    failures = {a: 0 for a in cfg.architectures}
    traces = {a: [] for a in cfg.architectures}
    for trial in range(trial_lo, trial_hi):
        rng = trial_rng(cfg.seed, sweep_index, trial)
        geom = _place_users(point, rng) if point.R_D > 0 else point.geometry
        real = sample_channels(geom, point.fading, point.K, rng)
        if point.fading.d_ref_over_lambda > 0:
            real = apply_correlation(real, geom, point.fading)
        est = corrupt_csi(real, point.fading.sigma_h_sq, rng)
        try:
            if point.mode == "siso":
                per_arch, tr = _siso_trial(point, real, est), None
            elif point.mode == "miso":
                per_arch, tr = _miso_trial(point, real, est)
            else:
                per_arch, tr = _mimo_trial(point, real, est)
        except SdpNonConvergence:
            for a in cfg.architectures:
                failures[a] += 1
            continue
        for a, vals in per_arch.items():
            for m, v in vals.items():
                values[a][m].append(v)
        if tr:
            for a, t in tr.items():
                traces[a].append(t)
    return values, failures, traces


def _merge(parts):
    values, failures, traces = parts[0]
    for v, f, t in parts[1:]:
        for a in values:
            failures[a] += f[a]
            traces[a].extend(t[a])
            for m in values[a]:
                values[a][m].extend(v[a][m])
    return values, failures, traces


def run_scenario(cfg: ScenarioConfig, jobs: int = 1) -> list[MetricRecord]:
    """Paired Monte Carlo over the sweep grid; one record per
    (sweep value, architecture, metric)."""
    records: list[MetricRecord] = []
    for si, sval in enumerate(cfg.sweep_grid):
        if jobs > 1 and cfg.trials >= 4 * jobs:
            bounds = np.linspace(0, cfg.trials, jobs + 1).astype(int)
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                parts = list(ex.map(_run_sweep_point, [cfg] * jobs, [si] * jobs,
                                    bounds[:-1], bounds[1:]))
            values, failures, traces = _merge(parts)
        else:
            values, failures, traces = _run_sweep_point(cfg, si, 0, cfg.trials)
        for arch in cfg.architectures:
            for metric in cfg.metrics:
                xs = np.asarray(values[arch][metric], float)
                n = xs.size
                mean = float(xs.mean()) if n else float("nan")
                stderr = float(xs.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
                records.append(MetricRecord(
                    scenario_id=cfg.scenario_id, figure=cfg.figure,
                    sweep_name=cfg.sweep_name, sweep_value=float(sval),
                    architecture=arch, metric=metric, mean=mean, stderr=stderr,
                    trials=n, failures=failures[arch], seed=cfg.seed))
            if cfg.trace_iterations and traces[arch]:
                tmat = np.asarray([t + [t[-1]] * (max(map(len, traces[arch])) - len(t))
                                   for t in traces[arch]])
                for it in range(tmat.shape[1]):
                    col = tmat[:, it]
                    records.append(MetricRecord(
                        scenario_id=cfg.scenario_id, figure=cfg.figure,
                        sweep_name="iteration", sweep_value=float(it + 1),
                        architecture=arch, metric="rate", mean=float(col.mean()),
                        stderr=float(col.std(ddof=1) / np.sqrt(col.size)) if col.size > 1 else 0.0,
                        trials=col.size, failures=failures[arch], seed=cfg.seed))
    return records


def records_to_csv(records: list[MetricRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.scenario_id, r.figure, r.sweep_name, repr(r.sweep_value),
                    r.architecture, r.metric, repr(r.mean), repr(r.stderr),
                    r.trials, r.failures, r.seed])
    return buf.getvalue()


def write_csv(records: list[MetricRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))


# ----------------------------------------------------------------------------
# figure presets (desk-scale reproductions of the published figures)
# ----------------------------------------------------------------------------

DB = lambda x: 10.0 ** (x / 10.0)  # noqa: E731

# measured constants: M=4, d_t=50 m, C0=-30 dB, Pt=50 mW, noise -90 dBm,
# kappa=-10 dB, alpha=2.2, omega_th=25 dB, R_D=30 m, K=2
_PT = 0.05
_SIGMA = DB(-90.0) * 1e-3
_KAPPA = DB(-10.0)
_C0 = DB(-30.0)


def _geom(N: int, M: int = 4, d_r: float = 30.0, K: int = 1) -> Geometry:
    nx, ny = grid_dims(N)
    return Geometry(M=M, N_x=nx, N_y=ny, d_t=50.0, d_r=(d_r,) * K)


def _unit_fading(kappa: float = 0.0) -> FadingParams:
    return FadingParams(kappa_g=kappa, kappa_h=(kappa,), C0=1.0,
                        alpha_t=2.2, alpha_r=2.2)


def figure_presets(fig_id: str, trials: int | None = None, seed: int = 0) -> list[ScenarioConfig]:
    """Scenario configs reproducing the published figure at desk scale."""
    fid = str(fig_id).lower()
    t = trials

    def base(sid, **kw):
        kw.setdefault("figure", fid)
        kw.setdefault("seed", seed)
        if t is not None:
            kw["trials"] = t
        return ScenarioConfig(scenario_id=sid, **kw)

    if fid == "5":
        # normalized gain vs N, Rayleigh fading, all four architectures
        return [base("fig5", mode="siso", geometry=_geom(4, M=1),
                     fading=_unit_fading(0.0), K=1, Pt=1.0, sigma_n_sq=1.0,
                     architectures=("conventional", "nondiag", "fully", "group"),
                     group_size=4, sweep_name="N", sweep_grid=(4, 16, 64),
                     metrics=("gain",), trials=t or 10000)]
    if fid == "6":
        # normalized gain vs BS-RIS Rician factor at large N; the published
        # surface over (kappa_g, kappa_h) is sliced at two kappa_h values
        grid = tuple(DB(x) for x in (-20, -10, -3, 0, 3, 10, 20))
        cfgs = []
        for tag, kh_db in (("khm10", -10.0), ("kh10", 10.0)):
            fading = FadingParams(kappa_g=0.0, kappa_h=(DB(kh_db),), C0=1.0,
                                  alpha_t=2.2, alpha_r=2.2)
            cfgs.append(base(f"fig6-{tag}", mode="siso", geometry=_geom(64, M=1),
                             fading=fading, K=1, Pt=1.0, sigma_n_sq=1.0,
                             architectures=("conventional", "nondiag"),
                             sweep_name="kappa_G", sweep_grid=grid,
                             metrics=("gain",), trials=t or 5000))
        return cfgs
    if fid == "7":
        raise ConfigError("figure 7 is a closed-form complexity table; "
                          "use the theory command (--expr complexity)")
    if fid == "8a":
        # direct-SNR scenario: unit path loss, sigma_n_sq = 1, Pt = rho
        geom = Geometry(M=1, N_x=2, N_y=4, d_t=1.0, d_r=(1.0,))
        return [base("fig8a", mode="siso", geometry=geom,
                     fading=_unit_fading(0.0), K=1, Pt=DB(-3.0), sigma_n_sq=1.0,
                     architectures=("conventional", "nondiag", "fully"),
                     sweep_name="N", sweep_grid=(8, 16, 32, 64),
                     metrics=("outage",), omega_th=DB(25.0), trials=t or 20000)]
    if fid == "8b":
        grid = tuple(DB(x) for x in np.linspace(-12.0, 8.0, 11))
        geom = Geometry(M=1, N_x=2, N_y=2, d_t=1.0, d_r=(1.0,))
        return [base("fig8b", mode="siso", geometry=geom,
                     fading=_unit_fading(0.0), K=1, Pt=1.0, sigma_n_sq=1.0,
                     architectures=("conventional", "nondiag", "fully"),
                     sweep_name="rho", sweep_grid=grid, metrics=("ber",),
                     trials=t or 20000)]
    if fid == "9a":
        return [base("fig9a", mode="miso", geometry=_geom(64, d_r=30.0),
                     fading=FadingParams(kappa_g=_KAPPA, kappa_h=(_KAPPA,), C0=_C0),
                     K=1, Pt=_PT, sigma_n_sq=_SIGMA,
                     architectures=("conventional", "nondiag"),
                     sweep_name="d_r", sweep_grid=(20, 30, 40, 50, 60),
                     metrics=("rate",), trials=t or 200)]
    if fid == "9b":
        return [base("fig9b", mode="miso", geometry=_geom(16, d_r=30.0),
                     fading=FadingParams(kappa_g=_KAPPA, kappa_h=(_KAPPA,), C0=_C0),
                     K=1, Pt=_PT, sigma_n_sq=_SIGMA,
                     architectures=("conventional", "nondiag"),
                     sweep_name="N", sweep_grid=(16, 32, 64, 128),
                     metrics=("rate",), trials=t or 200)]
    if fid == "9c":
        return [base("fig9c", mode="miso", geometry=_geom(64, d_r=30.0),
                     fading=FadingParams(kappa_g=_KAPPA, kappa_h=(_KAPPA,), C0=_C0),
                     K=1, Pt=_PT, sigma_n_sq=_SIGMA,
                     architectures=("conventional", "nondiag"),
                     sweep_name="N", sweep_grid=(64,),
                     metrics=("rate", "iterations"), trace_iterations=True,
                     trials=t or 200)]
    if fid.startswith("10"):
        variants = {
            "10a": ("R_D", [("RD20", dict(R_D=20.0)), ("RD30", dict(R_D=30.0)),
                            ("RD40", dict(R_D=40.0))]),
            "10b": ("K", [("K1", dict(K=1)), ("K2", dict(K=2)), ("K4", dict(K=4))]),
            "10c": ("alpha", [("a2.2", dict(alpha=2.2)), ("a2.4", dict(alpha=2.4)),
                              ("a2.6", dict(alpha=2.6))]),
            "10d": ("sigma_h_sq", [("s0", dict(sig=0.0)), ("s0.1", dict(sig=0.1)),
                                   ("s0.2", dict(sig=0.2)), ("s0.4", dict(sig=0.4))]),
            "10e": ("delta_0", [("d4", dict(delta=4.0)), ("d0.25", dict(delta=0.25)),
                                ("d1_64", dict(delta=1.0 / 64.0))]),
            "10f": ("kappa_G", [("km10", dict(kg=DB(-10.0))), ("km3", dict(kg=DB(-3.0))),
                                ("k0", dict(kg=DB(0.0))), ("k10", dict(kg=DB(10.0)))]),
        }
        if fid not in variants:
            raise ConfigError(f"unknown figure id {fig_id!r}")
        _, var_list = variants[fid]
        cfgs = []
        for tag, kw in var_list:
            K = kw.get("K", 2)
            alpha = kw.get("alpha", 2.2)
            kg = kw.get("kg", _KAPPA)
            kh = DB(-20.0) if fid == "10f" else _KAPPA
            fading = FadingParams(kappa_g=kg, kappa_h=(kh,) * K, C0=_C0,
                                  alpha_t=alpha, alpha_r=alpha,
                                  sigma_h_sq=kw.get("sig", 0.0),
                                  d_ref_over_lambda=1.0 if fid == "10e" else 0.0)
            geom = _geom(16, d_r=30.0, K=K)
            if "delta" in kw:
                geom = replace(geom, delta_0_over_lambda=kw["delta"])
            cfgs.append(base(f"fig{fid}-{tag}", mode="mimo", geometry=geom,
                             fading=fading, K=K, Pt=_PT, sigma_n_sq=_SIGMA,
                             architectures=("conventional", "nondiag"),
                             sweep_name="N", sweep_grid=(16, 32, 64),
                             metrics=("rate", "sdp_gap"),
                             R_D=kw.get("R_D", 30.0), trials=t or 100))
        return cfgs
    raise ConfigError(f"unknown figure id {fig_id!r}")


# ----------------------------------------------------------------------------
# config-file parsing ([geometry] / [fading] / [run] key-value sections)
# ----------------------------------------------------------------------------

_GEOM_KEYS = ("M", "N_x", "N_y", "delta_a_over_lambda", "delta_0_over_lambda",
              "d_t", "d_r", "psi_D", "phi_A", "varphi_A", "phi_Dk", "varphi_Dk")
_FADING_KEYS = ("kappa_g", "kappa_h", "C0", "alpha_t", "alpha_r", "sigma_h_sq",
                "d_ref_over_lambda", "corr_base")
_RUN_KEYS = ("scenario_id", "figure", "mode", "K", "Pt", "sigma_n_sq",
             "architectures", "group_size", "trials", "seed", "sweep", "grid",
             "metrics", "omega_th", "R_D", "ber_p", "ber_q", "alt_init")


def parse_quantity(text: str) -> float:
    """Linear float, or '<x> dB' (power ratio) / '<x> dBm' (absolute watts)."""
    s = text.strip()
    low = s.lower()
    if low.endswith("dbm"):
        return DB(float(s[:-3])) * 1e-3
    if low.endswith("db"):
        return DB(float(s[:-2]))
    return float(s)


def parse_grid(text: str) -> tuple[float, ...]:
    """Comma list of quantities, or an inclusive integer range 'a..b'."""
    s = text.strip()
    if ".." in s and "," not in s:
        lo, hi = s.split("..")
        return tuple(float(v) for v in range(int(lo), int(hi) + 1))
    return tuple(parse_quantity(v) for v in s.split(","))


def _find_line(lines: list[str], key: str) -> int:
    for i, line in enumerate(lines, 1):
        if line.split("=")[0].split(":")[0].strip() == key:
            return i
    return 0


def parse_config(path: str) -> ScenarioConfig:
    """Parse the sectioned key-value scenario file; unknown keys are errors."""
    import configparser

    if not os.path.exists(path):
        raise ConfigError(f"config not found: {path}")
    cp = configparser.ConfigParser()
    cp.optionxform = str  # case-sensitive keys
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        cp.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    lines = text.splitlines()

    for section, allowed in (("geometry", _GEOM_KEYS), ("fading", _FADING_KEYS),
                             ("run", _RUN_KEYS)):
        if not cp.has_section(section):
            raise ConfigError(f"missing [{section}] section")
        for key in cp[section]:
            if key not in allowed:
                raise ConfigError(
                    f"unknown key {key!r} in [{section}] "
                    f"(line {_find_line(lines, key)})")

    gs, fs, rs = cp["geometry"], cp["fading"], cp["run"]
    K = int(rs.get("K", "1"))

    def floats(section, key, default):
        if key not in section:
            return default
        return tuple(parse_quantity(v) for v in section[key].split(","))

    geom = Geometry(
        M=int(gs.get("M", "1")),
        N_x=int(gs.get("N_x", "4")), N_y=int(gs.get("N_y", "4")),
        delta_a_over_lambda=parse_quantity(gs.get("delta_a_over_lambda", "0.5")),
        delta_0_over_lambda=parse_quantity(gs.get("delta_0_over_lambda", "0.5")),
        d_t=parse_quantity(gs.get("d_t", "50")),
        d_r=floats(gs, "d_r", (30.0,) * K),
        psi_D=parse_quantity(gs.get("psi_D", "0")),
        phi_A=parse_quantity(gs.get("phi_A", "0")),
        varphi_A=parse_quantity(gs.get("varphi_A", "0")),
        phi_Dk=floats(gs, "phi_Dk", (0.0,) * K),
        varphi_Dk=floats(gs, "varphi_Dk", (0.0,) * K),
    )
    fading = FadingParams(
        kappa_g=parse_quantity(fs.get("kappa_g", "0")),
        kappa_h=floats(fs, "kappa_h", (0.0,) * K),
        C0=parse_quantity(fs.get("C0", "1")),
        alpha_t=parse_quantity(fs.get("alpha_t", "2.2")),
        alpha_r=parse_quantity(fs.get("alpha_r", "2.2")),
        sigma_h_sq=parse_quantity(fs.get("sigma_h_sq", "0")),
        d_ref_over_lambda=parse_quantity(fs.get("d_ref_over_lambda", "0")),
        corr_base=parse_quantity(fs.get("corr_base", "0.7")),
    )
    try:
        return ScenarioConfig(
            scenario_id=rs.get("scenario_id", "scenario"),
            figure=rs.get("figure", ""),
            mode=rs.get("mode", "siso"),
            geometry=geom, fading=fading, K=K,
            Pt=parse_quantity(rs.get("Pt", "1")),
            sigma_n_sq=parse_quantity(rs.get("sigma_n_sq", "1")),
            architectures=tuple(a.strip() for a in
                                rs.get("architectures", "conventional,nondiag").split(",")),
            group_size=int(rs.get("group_size", "4")),
            trials=int(rs.get("trials", "10000")),
            seed=int(rs.get("seed", "0")),
            sweep_name=rs.get("sweep", "N"),
            sweep_grid=parse_grid(rs.get("grid", "16")),
            metrics=tuple(m.strip() for m in rs.get("metrics", "gain").split(",")),
            omega_th=parse_quantity(rs.get("omega_th", "0")),
            R_D=parse_quantity(rs.get("R_D", "0")),
            ber_p=parse_quantity(rs.get("ber_p", "0.5")),
            ber_q=parse_quantity(rs.get("ber_q", "1")),
            alt_init=rs.get("alt_init", "spectral"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
