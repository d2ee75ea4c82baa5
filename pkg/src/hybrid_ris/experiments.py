"""Scenario files, Monte-Carlo sweeps and CSV export.

A scenario is a JSON document (see ``scenarios/default.json``).  Powers are
given in dBW/dBm under keys ending in ``_dbw``/``_dbm`` and converted to
watts once, at load time: ``P[dBW] -> 10**(P/10)``, ``P[dBm] ->
10**((P-30)/10)``.

Architecture labels used in sweeps:

    fc_passive, sc_passive, fc_sc, sc_sc, fc_fc, passive_passive
        hybrid RIS with the two surfaces named in order
    fc, sc, passive
        single-surface RIS built from all ``N`` elements
    zf:<label>
        zero-forcing precoding with random RIS phases on that architecture

``scenario`` stands for the architecture given by ``arch1``/``arch2``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from .channel import ChannelSet, FadingSpec, Geometry, drop_users, generate_channels
from .errors import HybridRisError, InvariantViolation, ParseError, ScenarioError, UnitError
from .metrics import PowerParams, SystemParams, constraint_report, sum_rate_and_ee
from .optimizer import SolverConfig, bca_solve, zf_heuristic
from .ris_model import HybridRisConfig, RsArchitecture
from .units import db_to_lin, dbm_to_watt, dbw_to_watt, lin_to_db

SWEEP_VARIABLES = ("D", "a", "L", "N", "P_RIS_max_dbw", "P_BS_max_dbw", "M")
HYBRID_LABELS = ("fc_passive", "sc_passive", "fc_sc", "sc_sc", "fc_fc", "passive_passive")
SINGLE_LABELS = ("fc", "sc", "passive")
CSV_COLUMNS = ("sweep_variable", "sweep_value", "architecture", "trials", "ee_mean", "ee_stderr",
               "sr_mean", "sr_stderr", "iterations_mean", "violations")
ASYMPTOTIC_COLUMNS = ("architecture", "N", "a_or_S", "snr_db", "regime")
FEASIBILITY_TOL = 1e-6


# --------------------------------------------------------------------------
# scenario


@dataclass(frozen=True)
class Scenario:
    name: str
    N: int
    a: float
    arch1: str
    arch2: str
    L1: int
    L2: int
    beta_max: float
    M: int
    K: int
    geometry: Geometry
    fading: FadingSpec
    sigma_sq: float
    delta_sq: float
    W_BS: float
    P_PS: float
    P_DC: float
    P_BS_max: float
    P_RIS_max: float
    xi: float
    zeta: float
    solver: SolverConfig
    trials: int
    seed: int
    sweep_variable: str | None = None
    sweep_values: tuple = ()
    architectures: tuple = ("scenario",)
    source: str = ""

    def points(self):
        """Sweep values, or a single ``None`` point for an unswept scenario."""
        return self.sweep_values if self.sweep_variable else (None,)

    def at(self, value):
        """Copy with the sweep variable set to ``value``."""
        var = self.sweep_variable
        if var is None or value is None:
            return self
        if var == "D":
            return replace(self, geometry=replace(self.geometry, D=float(value)))
        if var == "a":
            return replace(self, a=float(value))
        if var == "L":
            return replace(self, L1=int(value), L2=int(value))
        if var == "N":
            return replace(self, N=int(value))
        if var == "M":
            return replace(self, M=int(value))
        if var == "P_RIS_max_dbw":
            return replace(self, P_RIS_max=dbw_to_watt(float(value)))
        if var == "P_BS_max_dbw":
            return replace(self, P_BS_max=dbw_to_watt(float(value)))
        raise InvariantViolation(f"unknown sweep variable {var!r}", "sweep.variable")

    def system(self, label):
        """``SystemParams`` of architecture ``label`` at this scenario's values."""
        base = label.split(":", 1)[1] if label.startswith("zf:") else label
        if base == "scenario":
            base = f"{self.arch1}_{self.arch2}"
        if base in SINGLE_LABELS:
            kinds, a = (base, "passive"), 1.0
        elif base in HYBRID_LABELS:
            kinds, a = tuple(base.split("_")), self.a
        else:
            raise InvariantViolation(f"unknown architecture {label!r}", "architectures")
        archs = [_arch(k, L, self.beta_max) for k, L in zip(kinds, (self.L1, self.L2))]
        ris = HybridRisConfig(self.N, a, archs[0], archs[1], delta_sq=self.delta_sq, zeta=self.zeta,
                              P_PS=self.P_PS, P_DC=self.P_DC, P_max=self.P_RIS_max)
        try:
            power = PowerParams(self.xi, self.W_BS, self.P_BS_max)
        except ValueError as exc:
            raise InvariantViolation(str(exc), "power.P_BS_max_dbw") from None
        return SystemParams(ris, power, self.sigma_sq)


def _arch(kind, L, beta_max):
    if kind == "passive":
        return RsArchitecture.passive()
    if kind == "fc":
        return RsArchitecture.fc_active(beta_max)
    if kind == "sc":
        return RsArchitecture.sc_active(L, beta_max)
    raise InvariantViolation(f"unknown surface kind {kind!r}", "arch")


_UNITS = {"_dbw": ("dbw", dbw_to_watt), "_dbm": ("dbm", dbm_to_watt), "_db": ("db", db_to_lin)}


def _number(raw, key):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ParseError(f"expected a number, got {raw!r}", key)
    if not math.isfinite(raw):
        raise ParseError("value must be finite", key)
    return raw


def _power(section, name, key_prefix, default):
    """Read ``name`` (which carries its unit suffix) and return watts/linear.

    Strings such as ``"10 dBm"`` are accepted if the unit matches the suffix.
    """
    key = f"{key_prefix}{name}"
    raw = section.get(name, default)
    suffix = next(s for s in _UNITS if name.endswith(s))
    unit, conv = _UNITS[suffix]
    if isinstance(raw, str):
        parts = raw.split()
        if len(parts) != 2:
            raise UnitError(f"cannot read {raw!r} as '<value> <unit>'", key)
        if parts[1].lower() != unit:
            raise UnitError(f"unit {parts[1]!r} does not match the {unit} key", key)
        try:
            raw = float(parts[0])
        except ValueError:
            raise ParseError(f"bad number {parts[0]!r}", key) from None
    return conv(_number(raw, key))


def _int(raw, key, minimum=1):
    raw = _number(raw, key)
    if int(raw) != raw:
        raise ParseError("expected an integer", key)
    if raw < minimum:
        raise InvariantViolation(f"must be at least {minimum}", key)
    return int(raw)


_SOLVER_KEYS = {f for f in SolverConfig.__dataclass_fields__}


def scenario_from_dict(doc, source=""):
    """Parse, convert and check a scenario document (see module docstring)."""
    if not isinstance(doc, dict):
        raise ParseError("scenario must be a JSON object", "<root>")
    for key in ("N", "a", "M", "K"):
        if key not in doc:
            raise ParseError("missing required key", key)
    geo = doc.get("geometry", {})
    fad = doc.get("fading", {})
    noise = doc.get("noise", {})
    pw = doc.get("power", {})
    for sec, key in ((geo, "geometry"), (fad, "fading"), (noise, "noise"), (pw, "power")):
        if not isinstance(sec, dict):
            raise ParseError("section must be an object", key)
    try:
        geometry = Geometry(tuple(float(v) for v in geo.get("bs", (0.0, -60.0))),
                            tuple(float(v) for v in geo.get("ris", (300.0, 10.0))),
                            float(_number(geo.get("D", 300.0), "geometry.D")),
                            float(_number(geo.get("r", 5.0), "geometry.r")),
                            _int(doc["K"], "K"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise InvariantViolation(str(exc), "geometry") from None
    kind = fad.get("kind", "rician")
    if kind == "rician":
        fading = FadingSpec.rician(_power(fad, "kappa_db", "fading.", 0.0))
    elif kind == "rayleigh":
        fading = FadingSpec.rayleigh()
    elif kind == "los":
        fading = FadingSpec.pure_los()
    else:
        raise ParseError(f"unknown fading kind {kind!r}", "fading.kind")
    solver_doc = doc.get("solver", {})
    unknown = set(solver_doc) - _SOLVER_KEYS
    if unknown:
        raise ParseError(f"unknown solver settings {sorted(unknown)}", "solver")
    try:
        solver = SolverConfig(**solver_doc)
    except (TypeError, ValueError) as exc:
        raise InvariantViolation(str(exc), "solver") from None
    sweep = doc.get("sweep")
    var, values = None, ()
    if sweep:
        var = sweep.get("variable")
        if var not in SWEEP_VARIABLES:
            raise InvariantViolation(f"sweep variable must be one of {SWEEP_VARIABLES}", "sweep.variable")
        values = tuple(_number(v, "sweep.values") for v in sweep.get("values", ()))
        if not values:
            raise InvariantViolation("sweep needs at least one value", "sweep.values")
    archs = doc.get("architectures", ["scenario"])
    if isinstance(archs, str):
        archs = [archs]
    beta_max = doc.get("beta_max")
    beta_max = math.inf if beta_max is None else float(_number(beta_max, "beta_max"))
    a = float(_number(doc["a"], "a"))
    sc = Scenario(
        name=str(doc.get("name", Path(source).stem if source else "scenario")),
        N=_int(doc["N"], "N"), a=a,
        arch1=str(doc.get("arch1", "sc")), arch2=str(doc.get("arch2", "passive")),
        L1=_int(doc.get("L1", 1), "L1"), L2=_int(doc.get("L2", 1), "L2"),
        beta_max=beta_max, M=_int(doc["M"], "M"), K=geometry.K,
        geometry=geometry, fading=fading,
        sigma_sq=_power(noise, "sigma_sq_dbm", "noise.", -80.0),
        delta_sq=_power(noise, "delta_sq_dbm", "noise.", -80.0),
        W_BS=_power(pw, "W_BS_dbw", "power.", 6.0),
        P_PS=_power(pw, "P_PS_dbm", "power.", 10.0),
        P_DC=_power(pw, "P_DC_dbm", "power.", 10.0),
        P_BS_max=_power(pw, "P_BS_max_dbw", "power.", 9.0),
        P_RIS_max=_power(pw, "P_RIS_max_dbw", "power.", 9.0),
        xi=float(_number(pw.get("xi", 0.909), "power.xi")),
        zeta=float(_number(pw.get("zeta", 0.909), "power.zeta")),
        solver=solver,
        trials=_int(doc.get("trials", 100), "trials"),
        seed=_int(doc.get("seed", 0), "seed", minimum=0),
        sweep_variable=var, sweep_values=values,
        architectures=tuple(str(x) for x in archs),
        source=str(source),
    )
    _check(sc)
    return sc


def _check(sc):
    if sc.P_BS_max <= sc.W_BS:
        raise InvariantViolation("BS power budget must exceed its static power W_BS", "power.P_BS_max_dbw")
    if not 0.0 < sc.xi <= 1.0:
        raise InvariantViolation("BS amplifier efficiency must lie in (0, 1]", "power.xi")
    if sc.seed >= 2 ** 64:
        raise InvariantViolation("seed must fit in 64 bits", "seed")
    for value in sc.points():
        at = sc.at(value)
        where = f" at {sc.sweep_variable}={value:g}" if value is not None else ""
        for label in at.architectures:
            try:
                at.system(label)
            except ScenarioError as exc:
                raise type(exc)(f"{exc.message}{where}", exc.key) from None
            if label.startswith("zf:") and at.K > at.M:
                raise InvariantViolation("zero forcing needs K <= M", "architectures")


def resolve_scenario_path(name_or_path):
    """A file path, or the name of a shipped scenario (``default``, ``fig5_left`` ...)."""
    path = Path(name_or_path)
    if path.exists():
        return path
    shipped = resources.files("hybrid_ris") / "scenarios" / f"{name_or_path}.json"
    if shipped.is_file():
        return Path(str(shipped))
    raise ParseError(f"no such scenario file or shipped scenario: {name_or_path}", "scenario")


def shipped_scenarios():
    root = resources.files("hybrid_ris") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def validate_scenario(path):
    """Load, convert and check the scenario at ``path`` (or a shipped name)."""
    path = resolve_scenario_path(path)
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg} at line {exc.lineno})", "<file>") from None
    return scenario_from_dict(doc, source=str(path))


# --------------------------------------------------------------------------
# statistics


class RunningStats:
    """Single-pass mean / variance (Welford)."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self._m2 = 0.0

    def push(self, x):
        self.n += 1
        d = x - self.mean
        self.mean += d / self.n
        self._m2 += d * (x - self.mean)

    @property
    def variance(self):
        return self._m2 / (self.n - 1) if self.n > 1 else 0.0

    @property
    def stderr(self):
        return math.sqrt(self.variance / self.n) if self.n > 1 else 0.0


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class TrialResult:
    sweep_index: int
    trial: int
    architecture: str
    ee: float
    sr: float
    iterations: int
    ok: bool
    error: str = ""


@dataclass(frozen=True)
class ResultRow:
    sweep_variable: str
    sweep_value: float
    architecture: str
    trials: int
    ee_mean: float
    ee_stderr: float
    sr_mean: float
    sr_stderr: float
    iterations_mean: float
    violations: int

    def as_tuple(self):
        return tuple(getattr(self, c) for c in CSV_COLUMNS)


def trial_seed(root, sweep_index, trial):
    """Independent per-trial stream keyed by (sweep index, trial index)."""
    return np.random.SeedSequence(root, spawn_key=(sweep_index, trial))


def _label_key(label):
    return zlib.crc32(label.encode())


def trial_problems(scenario, sweep_index, trial, architectures=None):
    """Yield ``(label, channels, system, init_rng)`` for one channel realization.

    All architectures see the same user drop and the same full-array
    channels; solver initializations use streams keyed by the label.
    """
    sc = scenario.at(scenario.points()[sweep_index])
    labels = sc.architectures if architectures is None else tuple(architectures)
    seq = trial_seed(scenario.seed, sweep_index, trial)
    rng = np.random.default_rng(seq)
    users = drop_users(sc.geometry, rng)
    fade_seq = seq.spawn(1)[0]
    cache = {}
    for label in labels:
        system = sc.system(label)
        sizes = system.ris.sizes
        if sizes not in cache:
            # same realization for all splits: channels are drawn for the full array
            full = generate_channels(sc.geometry, users, (sc.N,), sc.M, sc.fading,
                                     np.random.default_rng(fade_seq))
            cache[sizes] = ChannelSet.from_full(full.g, full.G[0], full.f[0], sizes)
        init_rng = np.random.default_rng([scenario.seed, sweep_index, trial, _label_key(label)])
        yield label, cache[sizes], system, init_rng


def run_trial(scenario, sweep_index, trial, architectures=None):
    """Solve one channel realization for every architecture."""
    sc = scenario.at(scenario.points()[sweep_index])
    out = []
    for label, channels, system, init_rng in trial_problems(scenario, sweep_index, trial, architectures):
        try:
            if label.startswith("zf:"):
                w, phis = zf_heuristic(channels, system, init_rng)
                iters = 0
            else:
                state = bca_solve(channels, system, sc.solver, init_rng)
                w, phis, iters = state.w, state.phis, len(state.trace)
            R, ee = sum_rate_and_ee(w, channels, phis, system)
            rep = constraint_report(w, channels, phis, system)
            ok = max(v for k, v in rep.items() if k != "umc") <= FEASIBILITY_TOL and rep["umc"] <= 1e-9
            out.append(TrialResult(sweep_index, trial, label, ee, R, iters, ok,
                                   "" if ok else "constraint violation"))
        except HybridRisError as exc:
            out.append(TrialResult(sweep_index, trial, label, math.nan, math.nan, 0, False,
                                   f"{type(exc).__name__}: {exc}"))
    return out


def _run_task(args):
    scenario, sweep_index, trial, labels = args
    return run_trial(scenario, sweep_index, trial, labels)


def run_sweep(scenario, architectures=None, trials=None, workers=1, progress=None):
    """Run every (sweep value, trial) and aggregate per architecture.

    Results are ordered by sweep value, then architecture in the requested
    order, independent of ``workers``.  Failed or infeasible trials count as
    violations and are excluded from the means.  Returns
    ``(rows, trial_results)``.
    """
    if trials is not None:
        scenario = replace(scenario, trials=int(trials))
    labels = scenario.architectures if architectures is None else tuple(architectures)
    scenario = replace(scenario, architectures=labels)
    _check(scenario)
    tasks = [(scenario, i, t, labels) for i in range(len(scenario.points()))
             for t in range(scenario.trials)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = []
        for task in tasks:
            results.append(_run_task(task))
            if progress is not None:
                progress(len(results), len(tasks))
    flat = [r for batch in results for r in batch]
    rows = []
    for i, value in enumerate(scenario.points()):
        for label in labels:
            ee, sr, it = RunningStats(), RunningStats(), RunningStats()
            bad = 0
            for r in flat:
                if r.sweep_index != i or r.architecture != label:
                    continue
                if not r.ok:
                    bad += 1
                    continue
                ee.push(r.ee)
                sr.push(r.sr)
                it.push(r.iterations)
            nan = math.nan
            rows.append(ResultRow(scenario.sweep_variable or "", nan if value is None else float(value),
                                  label, scenario.trials,
                                  ee.mean if ee.n else nan, ee.stderr, sr.mean if sr.n else nan,
                                  sr.stderr, it.mean if it.n else nan, bad))
    return rows, flat


def _fmt(x):
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def rows_to_csv(rows, columns=CSV_COLUMNS):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        values = row.as_tuple() if hasattr(row, "as_tuple") else row
        writer.writerow([_fmt(v) for v in values])
    return buf.getvalue()


def git_describe():
    try:
        here = Path(__file__).resolve().parent
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"], cwd=here,
                             capture_output=True, text=True, timeout=5)
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def write_outputs(csv_text, out, meta):
    """Write the CSV and a ``<out>.json`` metadata sidecar."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(csv_text)
    sidecar = out.with_suffix(out.suffix + ".json")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return sidecar


def sweep_metadata(scenario, wall_time, rows):
    return {
        "scenario": scenario.name,
        "source": scenario.source,
        "seed": scenario.seed,
        "trials": scenario.trials,
        "sweep_variable": scenario.sweep_variable,
        "architectures": list(scenario.architectures),
        "git_describe": git_describe(),
        "wall_time_s": round(wall_time, 3),
        "violations": int(sum(r.violations for r in rows)),
        "columns": list(CSV_COLUMNS),
    }


# --------------------------------------------------------------------------
# asymptotic figures

FIGURES = ("snr_vs_a", "snr_vs_S", "snr_vs_N")


def _db(x):
    return float(lin_to_db(x))


def run_asymptotics_figure(fig, params=None, mc=False, mc_trials=10, mc_N=2 ** 12, seed=0):
    """Closed-form SNR curves as rows ``(architecture, N, a_or_S, snr_db, regime)``.

    ``snr_vs_a``: active/passive vs the split fraction with its decomposition
    (regimes ``standard`` N=256, ``large_N`` N=2e7, ``large_transmit``).
    ``snr_vs_S``: active/active vs the number of surfaces (``standard``,
    ``large_transmit``, ``large_reflect``).  ``snr_vs_N``: all laws on a
    logarithmic element grid.  ``mc`` adds Monte-Carlo rows (regime ``mc``)
    at ``mc_N`` elements.
    """
    p = asy.AsymptoticParams.running_example() if params is None else params
    P_t, P_r = p.equal_split()
    rows = []
    if fig == "snr_vs_a":
        grid = [k / 8 for k in range(1, 8)]
        for regime, N in (("standard", 256), ("large_N", 20_000_000)):
            ga = asy.gamma_active(N, P_t, P_r, p)
            gp = asy.gamma_passive(N, p.P_max, p)
            for a in grid:
                d = asy.gamma_active_passive(N, a, p)
                rows += [("active_passive", N, a, _db(d.total), regime),
                         ("active_passive:active_term", N, a, _db(d.active), regime),
                         ("active_passive:passive_term", N, a, _db(d.passive), regime),
                         ("active", N, a, _db(ga), regime),
                         ("passive", N, a, _db(gp), regime)]
        N = 256
        for a in grid:
            lim = asy.limit_snrs("active_passive_large_transmit", N, p, a=a)
            rows += [("active_passive", N, a, _db(lim), "large_transmit"),
                     ("active", N, a, _db(asy.limit_snrs("active_large_transmit", N, p)), "large_transmit"),
                     ("passive", N, a, _db(asy.gamma_passive(N, p.P_max, p)), "large_transmit")]
        if mc:
            rng = np.random.default_rng(seed)
            for a in grid:
                n1 = a * mc_N
                if n1 != int(n1):
                    continue
                m = asy.mc_siso_snr("active_passive", mc_N, p, mc_trials, rng, a=a)
                rows.append(("active_passive", mc_N, a, _db(m.mean), "mc"))
    elif fig == "snr_vs_S":
        N = 256
        for S in (1, 2, 4, 8):
            rows += [("active_active", N, S, _db(asy.gamma_active_active(N, S, p)), "standard"),
                     ("active_active", N, S, _db(asy.limit_snrs("active_active_large_transmit", N, p, S=S)),
                      "large_transmit"),
                     ("active_active", N, S, _db(asy.limit_snrs("active_active_large_reflect", N, p, S=S)),
                      "large_reflect"),
                     ("active", N, S, _db(asy.gamma_active(N, P_t, P_r, p)), "standard")]
        if mc:
            rng = np.random.default_rng(seed)
            for S in (1, 2, 4, 8):
                m = asy.mc_siso_snr("active_active", mc_N, p, mc_trials, rng, S=S)
                rows.append(("active_active", mc_N, S, _db(m.mean), "mc"))
    elif fig == "snr_vs_N":
        for N in np.unique(np.round(np.logspace(2, 8, 61))).astype(int):
            N = int(N)
            rows.append(("passive", N, 0, _db(asy.gamma_passive(N, p.P_max, p)), "standard"))
            rows.append(("active", N, 1, _db(asy.gamma_active(N, P_t, P_r, p)), "standard"))
            for a in (0.25, 0.5, 0.75):
                rows.append(("active_passive", N, a, _db(asy.gamma_active_passive(N, a, p).total), "standard"))
            for S in (2, 4):
                rows.append(("active_active", N, S, _db(asy.gamma_active_active(N, S, p)), "standard"))
        if mc:
            rng = np.random.default_rng(seed)
            for N in (2 ** 8, 2 ** 10, 2 ** 12):
                rows.append(("passive", N, 0, _db(asy.mc_siso_snr("passive", N, p, mc_trials, rng).mean), "mc"))
                rows.append(("active", N, 1, _db(asy.mc_siso_snr("active_active", N, p, mc_trials, rng, S=1).mean),
                             "mc"))
    else:
        raise asy.InvalidRegime(f"unknown figure {fig!r}; expected one of {FIGURES}")
    return rows


def threshold_table(lemma, params=None):
    """Rows ``(quantity, parameter, value)`` for the size-threshold results."""
    p = asy.AsymptoticParams.running_example() if params is None else params
    if lemma == 3:
        rows = [("N_min", "active", asy.size_thresholds("passive_vs_active", p))]
        rows += [("N_min", f"a={a}", asy.size_thresholds("passive_vs_active_passive", p, a=a))
                 for a in (0.25, 0.5, 0.75)]
    elif lemma == 4:
        rows = [("N_min", f"S={S}", asy.size_thresholds("passive_vs_active_active", p, S=S)) for S in (2, 4, 8)]
    elif lemma == 5:
        rows = [("N_min", f"a={a}", asy.size_thresholds("active_passive_vs_active", p, a=a))
                for a in (0.25, 0.5, 0.75)]
    elif lemma == 6:
        rows = [("N_over_N_a", f"S={S}", asy.size_thresholds("active_active_vs_active", p, S=S))
                for S in (2, 4, 8)]
    else:
        raise asy.InvalidRegime(f"no threshold result for lemma {lemma}")
    return rows
