"""Experiment harness: scenarios, trials, result rows, CSV output.

A scenario describes one experiment grid: a network layout, a list of
element-count and transmit-power values, and a list of methods.  ``run``
executes every (element count, power, method, trial) cell and returns flat
result rows plus aggregate rows.  Reruns with the same scenario and seed are
byte-identical.

Seed layout, all derived from ``SeedSequence(scenario.seed, spawn_key=...)``:

    (t, 0)                 receiver placement for trial t (when rx is None)
    (t, 1)                 channel generation and CSI corruption, shared by
                           every arm so direct links pair across arms
    (t, 2, arm, m)         shared random start configuration
    (t, 3, arm, m, i)      method-private randomness (GA, SES, random)
    (t, 4)                 shared-surface placement for the random arm

Per-transmitter search in a distributed arm appends the transmitter index to
the method key.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .baselines import (
    BruteForceTooLarge,
    brute_force,
    genetic,
    modified_sr,
    random_config,
    simplified_exhaustive,
    successive_refinement,
)
from .channel import (
    ChannelSet,
    CsiView,
    FadingSpec,
    child_seed,
    corrupt,
    generate,
    perfect_view,
    restrict,
    substream,
)
from .metrics import effective_centralized, effective_distributed, outage_capacity, rates, score
from .model import PhaseConfig, Position, RadioParams, SurfaceSpec, Topology
from .search import (
    SearchBudget,
    global_search,
    max_min_objective,
    score_objective,
    sum_rate_objective,
)

AGG_TRIAL = "agg"
CSV_HEADER = ("scenario", "trial", "seed", "method", "K", "M", "N", "P_dbm", "metric_name", "value")

ALGOS = ("filled", "sr", "msr", "ga", "ses", "random", "brute", "no-ris")


@dataclass(frozen=True)
class Layout:
    """Full arm override: mode and surfaces, optionally its own tx/rx."""

    mode: str
    surface_centers: tuple
    tx: tuple | None = None
    rx: tuple | None = None


@dataclass(frozen=True)
class MethodSpec:
    """One optimization method plus the surface arm it runs on.

    surface selects the layout the method sees:
      "scenario"                   the scenario's own surface layout
      ("centralized", x, y)        a single shared surface at (x, y)
      "centralized-random"         a single shared surface placed uniformly
                                   in the room, one draw per trial
      Layout(...)                  explicit mode/surfaces/tx/rx
    """

    name: str
    algo: str
    surface: object = "scenario"
    tau: int = 10
    objective: str | None = None

    def __post_init__(self):
        if self.algo not in ALGOS:
            raise ValueError(f"unknown algo {self.algo!r}")


@dataclass(frozen=True)
class Scenario:
    name: str
    k: int
    n_levels: int
    tx: tuple
    rx: tuple | None
    surface_centers: tuple
    mode: str
    m_values: tuple
    p_values_dbm: tuple
    methods: tuple
    trials: int
    seed: int
    fading: FadingSpec = field(default_factory=lambda: FadingSpec(kind="los_rayleigh"))
    csi_db: float = math.inf
    objective: str = "sum_rate"
    m_is_total: bool = True
    noise_dbm: float = -80.0
    carrier_hz: float = 1.8e9
    c0_db: float = -30.0
    alpha_direct: float = 3.5
    alpha_tx_ris: float = 2.0
    alpha_ris_rx: float = 2.1
    room: tuple = (30.0, 30.0)
    outage_gamma: float = 0.1
    corrupt_los: bool = True
    bound_target_sinr: float | None = None

    def __post_init__(self):
        if self.mode not in ("centralized", "distributed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.objective not in ("sum_rate", "max_min"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if len(self.tx) != self.k:
            raise ValueError("need one transmitter position per user")
        if self.rx is not None and len(self.rx) != self.k:
            raise ValueError("need one receiver position per user")
        want = 1 if self.mode == "centralized" else self.k
        if len(self.surface_centers) != want:
            raise ValueError(f"{self.mode} layout needs {want} surface centers")

    def radio(self, p_dbm: float) -> RadioParams:
        return RadioParams(
            tx_powers_dbm=(float(p_dbm),) * self.k,
            noise_dbm=self.noise_dbm,
            carrier_hz=self.carrier_hz,
            c0_db=self.c0_db,
            alpha_direct=self.alpha_direct,
            alpha_tx_ris=self.alpha_tx_ris,
            alpha_ris_rx=self.alpha_ris_rx,
        )


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    trial: str
    seed: str
    method: str
    k: int
    m: int
    n: int
    p_dbm: float
    metric_name: str
    value: float

    def as_csv(self) -> tuple:
        return (
            self.scenario,
            self.trial,
            self.seed,
            self.method,
            str(self.k),
            str(self.m),
            str(self.n),
            _fmt(self.p_dbm),
            self.metric_name,
            _fmt(self.value),
        )


def _fmt(x: float) -> str:
    return f"{float(x):.9g}"


def _positions(points) -> tuple:
    return tuple(Position(float(p[0]), float(p[1])) for p in points)


def _arm_key(surface):
    if isinstance(surface, Layout):
        return surface
    if isinstance(surface, str):
        if surface not in ("scenario", "centralized-random"):
            raise ValueError(f"unknown surface arm {surface!r}")
        return (surface,)
    tag, x, y = surface
    if tag != "centralized":
        raise ValueError(f"unknown surface arm {surface!r}")
    return ("centralized", float(x), float(y))


@dataclass(frozen=True)
class _Arm:
    topology: Topology
    truth: ChannelSet
    view: CsiView
    m_value: int


def _per_surface(scenario: Scenario, mode: str, m_value: int) -> int:
    if mode == "centralized" or not scenario.m_is_total:
        return m_value
    if m_value % scenario.k != 0:
        raise ValueError(f"total element count {m_value} not divisible by K={scenario.k}")
    return m_value // scenario.k


def _build_arm(scenario: Scenario, key, m_value: int, rx, trial_base) -> _Arm:
    tx = scenario.tx
    if isinstance(key, Layout):
        mode = key.mode
        centers = key.surface_centers
        tx = key.tx if key.tx is not None else tx
        rx = key.rx if key.rx is not None else rx
    elif key[0] == "scenario":
        mode = scenario.mode
        centers = scenario.surface_centers
    elif key[0] == "centralized-random":
        mode = "centralized"
        rng = substream(trial_base, 4)
        centers = ((rng.uniform(0.0, scenario.room[0]), rng.uniform(0.0, scenario.room[1])),)
    else:
        mode = "centralized"
        centers = (key[1:],)
    m_elem = _per_surface(scenario, mode, m_value)
    surfaces = tuple(SurfaceSpec(center=Position(float(c[0]), float(c[1])), element_count=m_elem) for c in centers)
    topology = Topology(tx=_positions(tx), rx=_positions(rx), surfaces=surfaces, mode=mode)
    truth = generate(topology, scenario.radio(scenario.p_values_dbm[0]), scenario.fading, child_seed(trial_base, 1))
    view = corrupt(truth, scenario.csi_db, child_seed(trial_base, 1), corrupt_los=scenario.corrupt_los)
    return _Arm(topology=topology, truth=truth, view=view, m_value=m_value)


def _draw_starts(arm: _Arm, n_levels: int, seed) -> list:
    rng = np.random.default_rng(seed)
    n_surf = len(arm.topology.surfaces)
    m = arm.topology.surfaces[0].element_count
    return [rng.integers(0, n_levels, size=m) for _ in range(n_surf)]


def _run_method(
    scenario: Scenario,
    spec: MethodSpec,
    arm: _Arm,
    radio: RadioParams,
    starts: list,
    method_seed,
):
    """Return (configs per surface, eval count) for one method on one arm."""
    n = scenario.n_levels
    if arm.topology.mode == "centralized":
        kind = spec.objective or scenario.objective
        make = sum_rate_objective if kind == "sum_rate" else max_min_objective
        objective = make(arm.view, radio, n)
        start = PhaseConfig.from_array(starts[0], n)
        res = _dispatch(spec, objective, start, method_seed)
        return [res.best_config], res.evals

    configs = []
    total = 0
    for i in range(scenario.k):
        local = restrict(arm.view, i)
        objective = score_objective(local, radio, i, n)
        start = PhaseConfig.from_array(starts[i], n)
        res = _dispatch(spec, objective, start, child_seed(method_seed, i))
        configs.append(res.best_config)
        total += res.evals
    return configs, total


def _dispatch(spec: MethodSpec, objective, start: PhaseConfig, seed):
    if spec.algo == "filled":
        return global_search(objective, start, SearchBudget(tau=spec.tau))
    if spec.algo == "sr":
        return successive_refinement(objective, start)
    if spec.algo == "msr":
        return modified_sr(objective, start)
    if spec.algo == "ga":
        return genetic(objective, seed)
    if spec.algo == "ses":
        return simplified_exhaustive(objective, seed)
    if spec.algo == "random":
        return random_config(objective, seed)
    if spec.algo == "brute":
        return brute_force(objective)
    raise ValueError(f"unknown algo {spec.algo!r}")


def _realized_rows(scenario, spec, arm, radio, configs, evals, m_value, p_dbm, trial, seed_text):
    def row(metric, value):
        return ResultRow(
            scenario=scenario.name,
            trial=str(trial),
            seed=seed_text,
            method=spec.name,
            k=scenario.k,
            m=m_value,
            n=scenario.n_levels,
            p_dbm=p_dbm,
            metric_name=metric,
            value=value,
        )

    if spec.algo == "no-ris":
        report = no_ris_report(arm.truth, radio)
        return [row("sum_rate", report.sum_rate), row("min_rate", report.min_rate), row("evals", 0.0)]

    if arm.topology.mode == "centralized":
        gains = effective_centralized(arm.truth, configs[0])
    else:
        gains = effective_distributed(arm.truth, configs)
    report = rates(gains, radio)
    rows = [
        row("sum_rate", report.sum_rate),
        row("min_rate", report.min_rate),
        row("evals", float(evals)),
    ]
    if arm.topology.mode == "distributed":
        truth_view = perfect_view(arm.truth)
        vals = [score(truth_view, radio, i, configs[i]) for i in range(scenario.k)]
        rows.append(row("score", float(np.mean(vals))))
    return rows


def no_ris_report(channels: ChannelSet, radio: RadioParams):
    """Rates over the direct links alone, interference suppressed."""
    from .metrics import RateReport

    p = np.asarray(radio.tx_powers_watts)
    signal = np.abs(np.diagonal(channels.direct)) ** 2
    sinr = p * signal / radio.noise_watts
    return RateReport(sinr=sinr, rates=np.log2(1.0 + sinr))


def _trial_seed_text(master: int, trial: int) -> str:
    ss = np.random.SeedSequence(entropy=master, spawn_key=(trial,))
    return str(int(ss.generate_state(1, np.uint64)[0]))


def run_cell(scenario: Scenario, m_value: int, trial: int) -> list:
    """All rows for one (element count, trial) pair across the power grid."""
    trial_base = np.random.SeedSequence(entropy=scenario.seed, spawn_key=(trial,))
    seed_text = _trial_seed_text(scenario.seed, trial)

    rx = scenario.rx
    if rx is None:
        rng = substream(trial_base, 0)
        rx = tuple((rng.uniform(0.0, scenario.room[0]), rng.uniform(0.0, scenario.room[1])) for _ in range(scenario.k))

    arms: dict = {}
    arm_index: dict = {}
    for spec in scenario.methods:
        key = _arm_key(spec.surface)
        if key not in arms:
            arm_index[key] = len(arms)
            arms[key] = _build_arm(scenario, key, m_value, rx, trial_base)

    rows = []
    for p_dbm in scenario.p_values_dbm:
        radio = scenario.radio(p_dbm)
        for mi, spec in enumerate(scenario.methods):
            key = _arm_key(spec.surface)
            arm = arms[key]
            ai = arm_index[key]
            if spec.algo == "no-ris":
                rows.extend(_realized_rows(scenario, spec, arm, radio, [], 0, m_value, p_dbm, trial, seed_text))
                continue
            starts = _draw_starts(arm, scenario.n_levels, child_seed(trial_base, 2, ai, m_value))
            method_seed = child_seed(trial_base, 3, ai, m_value, mi)
            try:
                configs, evals = _run_method(scenario, spec, arm, radio, starts, method_seed)
            except BruteForceTooLarge:
                rows.append(
                    ResultRow(
                        scenario=scenario.name,
                        trial=str(trial),
                        seed=seed_text,
                        method=spec.name,
                        k=scenario.k,
                        m=m_value,
                        n=scenario.n_levels,
                        p_dbm=p_dbm,
                        metric_name="error",
                        value=math.nan,
                    )
                )
                continue
            rows.extend(_realized_rows(scenario, spec, arm, radio, configs, evals, m_value, p_dbm, trial, seed_text))
    return rows


def _worker(args) -> list:
    scenario, m_value, trial = args
    return run_cell(scenario, m_value, trial)


def max_workers() -> int:
    cap = os.environ.get("RIS_LAB_THREADS", "")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def run(scenario: Scenario, parallel: bool = False) -> list:
    """Execute the whole grid and return sorted per-trial plus aggregate rows."""
    cells = [(scenario, m, t) for m in scenario.m_values for t in range(scenario.trials)]
    if parallel and len(cells) > 1 and max_workers() > 1:
        with ProcessPoolExecutor(max_workers=max_workers()) as pool:
            chunks = list(pool.map(_worker, cells))
    else:
        chunks = [_worker(c) for c in cells]
    rows = [row for chunk in chunks for row in chunk]
    rows.extend(aggregate(scenario, rows))
    rows.extend(_bound_rows(scenario))
    return sort_rows(rows)


def aggregate(scenario: Scenario, rows: list) -> list:
    """Mean rows per (method, M, P, metric) plus outage over sum-rate samples."""
    groups: dict = {}
    for row in rows:
        if row.trial == AGG_TRIAL or row.metric_name == "error":
            continue
        key = (row.method, row.m, row.p_dbm, row.metric_name)
        groups.setdefault(key, []).append(row.value)

    out = []

    def agg_row(method, m, p_dbm, metric, value):
        return ResultRow(
            scenario=scenario.name,
            trial=AGG_TRIAL,
            seed="",
            method=method,
            k=scenario.k,
            m=m,
            n=scenario.n_levels,
            p_dbm=p_dbm,
            metric_name=metric,
            value=value,
        )

    for (method, m, p_dbm, metric), values in groups.items():
        out.append(agg_row(method, m, p_dbm, metric, float(np.mean(values))))
        if metric == "sum_rate":
            out.append(agg_row(method, m, p_dbm, "outage", outage_capacity(values, scenario.outage_gamma)))
    return out


def _bound_rows(scenario: Scenario) -> list:
    if scenario.bound_target_sinr is None:
        return []
    from .bounds import SymmetricScenario, min_elements_centralized, min_elements_distributed

    rows = []
    for p_dbm in scenario.p_values_dbm:
        radio = scenario.radio(p_dbm)
        sym = symmetric_stats(scenario, radio)
        if scenario.mode == "centralized":
            res = min_elements_centralized(sym, scenario.bound_target_sinr)
        else:
            res = min_elements_distributed(sym, scenario.bound_target_sinr)
        value = float(res.m_min) if res.feasible else math.inf
        for m in scenario.m_values:
            rows.append(
                ResultRow(
                    scenario=scenario.name,
                    trial=AGG_TRIAL,
                    seed="",
                    method="theory",
                    k=scenario.k,
                    m=m,
                    n=scenario.n_levels,
                    p_dbm=p_dbm,
                    metric_name="bound",
                    value=value,
                )
            )
    return rows


def symmetric_stats(scenario: Scenario, radio: RadioParams):
    """Channel statistics of a symmetric scenario, for the element-count bounds.

    Uses the first transmitter/receiver pair and the first surface; the
    constructor rejects geometries whose link statistics actually differ.
    """
    from .bounds import SymmetricScenario

    tx = Position(*map(float, scenario.tx[0]))
    rxs = scenario.rx
    if rxs is None:
        raise ValueError("symmetric bounds need fixed receiver positions")
    rx = Position(*map(float, rxs[0]))
    surface = Position(*map(float, scenario.surface_centers[0]))
    gain = lambda d, a: 10.0 ** (scenario.c0_db / 10.0) * d ** (-a)
    d_hd = tx.distance_to(rx)
    d_h = tx.distance_to(surface)
    d_g = surface.distance_to(rx)
    sigma_hd_sq = gain(d_hd, scenario.alpha_direct)
    sigma_g_sq = gain(d_g, scenario.alpha_ris_rx)
    gain_h = gain(d_h, scenario.alpha_tx_ris)
    kwargs = dict(
        k=scenario.k,
        n_levels=scenario.n_levels,
        p_watts=radio.tx_powers_watts[0],
        noise_watts=radio.noise_watts,
        sigma_hd_sq=sigma_hd_sq,
        sigma_g_sq=sigma_g_sq,
    )
    if scenario.mode == "centralized":
        kwargs["m_h"] = math.sqrt(gain_h)
    else:
        kwargs["sigma_h_tilde_sq"] = gain_h
    return SymmetricScenario(**kwargs)


def sort_rows(rows: list) -> list:
    def key(row: ResultRow):
        trial_rank = (1, 0) if row.trial == AGG_TRIAL else (0, int(row.trial))
        return (row.scenario, row.m, row.p_dbm, row.method, trial_rank, row.metric_name)

    return sorted(rows, key=key)


def write_csv(rows: list, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_csv())


def read_csv(path: str) -> list:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(
                ResultRow(
                    scenario=rec["scenario"],
                    trial=rec["trial"],
                    seed=rec["seed"],
                    method=rec["method"],
                    k=int(rec["K"]),
                    m=int(rec["M"]),
                    n=int(rec["N"]),
                    p_dbm=float(rec["P_dbm"]),
                    metric_name=rec["metric_name"],
                    value=float(rec["value"]),
                )
            )
    return rows


def mean_sum_rate(scenario: Scenario, m_value: int, method_name: str) -> float:
    """Mean realized sum rate of one method at one element count."""
    total = 0.0
    count = 0
    for t in range(scenario.trials):
        for row in run_cell(scenario, m_value, t):
            if row.method == method_name and row.metric_name == "sum_rate":
                total += row.value
                count += 1
    if count == 0:
        raise ValueError(f"method {method_name!r} produced no sum-rate rows")
    return total / count


def required_elements(scenario: Scenario, method_name: str, target: float, m_cap: int = 64) -> float:
    """Smallest even element count whose mean sum rate meets the target.

    Assumes the mean sum rate grows with the element count; returns inf when
    even m_cap falls short.
    """
    if m_cap % 2 != 0 or m_cap < 2:
        raise ValueError("m_cap must be an even count of at least 2")
    if mean_sum_rate(scenario, m_cap, method_name) < target:
        return math.inf
    lo, hi = 2, m_cap
    while lo < hi:
        mid = (lo + hi) // 2
        if mid % 2 != 0:
            mid += 1
        if mid >= hi:
            mid = hi - 2 if hi - 2 >= lo else lo
        if mean_sum_rate(scenario, mid, method_name) >= target:
            hi = mid
        else:
            lo = mid + 2
    return float(lo)


def placement_sweep(scenario: Scenario, x0_values, target: float, m_cap: int = 64, methods=("filled", "sr")) -> list:
    """Required element count per surface position along a line, per method.

    Each entry of x0_values moves the scenario's single surface to (x0, y0)
    with y0 taken from the scenario's first surface center.
    """
    if scenario.mode != "centralized":
        raise ValueError("placement sweep expects a centralized scenario")
    y0 = float(scenario.surface_centers[0][1])
    wanted = [spec for spec in scenario.methods if spec.name in methods]
    if len(wanted) != len(methods):
        known = [spec.name for spec in scenario.methods]
        raise ValueError(f"scenario methods {known} missing one of {list(methods)}")
    out = []
    for x0 in x0_values:
        entry = {"x0": float(x0)}
        for spec in wanted:
            moved = replace(
                scenario,
                surface_centers=((float(x0), y0),),
                methods=(spec,),
            )
            entry[spec.name] = required_elements(moved, spec.name, target, m_cap)
        out.append(entry)
    return out


def write_placement_csv(entries: list, path: str, methods=("filled", "sr")) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x0"] + [f"m_{name}" for name in methods])
        for entry in entries:
            writer.writerow([_fmt(entry["x0"])] + [_fmt(entry[name]) for name in methods])
