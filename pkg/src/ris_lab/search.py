"""Discrete phase optimization: local search, filled-function global search.

Objectives are minimized.  Network objectives negate the quantity of
interest (sum rate, min rate, or a transmitter's score), so best_metric
on an OptResult is always -best_value.

Every true-objective evaluation increments the objective's counter by
exactly one; batch helpers count one per candidate.  The auxiliary
(filled) objective charges one true evaluation per point it looks at and
reuses the cached anchor value q(theta*).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import CsiView
from .metrics import EffectiveGains, ScoreWorkspace, rates_batch, rates_from_e
from .model import PhaseConfig, RadioParams


def _key(levels: np.ndarray) -> bytes:
    return np.asarray(levels, dtype=np.int64).tobytes()


class Objective:
    """Base class: counted, minimized objective over level vectors."""

    def __init__(self, m: int, n_levels: int):
        self.m = m
        self.n_levels = n_levels
        self.eval_count = 0

    def _raw(self, levels: np.ndarray) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def value(self, levels) -> float:
        self.eval_count += 1
        return self._raw(np.asarray(levels, dtype=np.int64))

    def single_moves(self, levels, moves) -> np.ndarray:
        """Values of single-element variants of `levels`; counts len(moves)."""
        out = np.empty(len(moves))
        base = np.asarray(levels, dtype=np.int64)
        for c, (m, lvl) in enumerate(moves):
            cand = base.copy()
            cand[m] = lvl
            out[c] = self._raw(cand)
        self.eval_count += len(moves)
        return out

    def value_many(self, level_rows) -> np.ndarray:
        rows = np.asarray(level_rows, dtype=np.int64)
        out = np.empty(rows.shape[0])
        for c in range(rows.shape[0]):
            out[c] = self._raw(rows[c])
        self.eval_count += rows.shape[0]
        return out


class FunctionObjective(Objective):
    """Wrap a plain callable f(levels) -> float (tests, toy problems)."""

    def __init__(self, fn, m: int, n_levels: int):
        super().__init__(m, n_levels)
        self.fn = fn

    def _raw(self, levels: np.ndarray) -> float:
        return float(self.fn(levels))


class NetworkObjective(Objective):
    """Negated sum-rate or min-rate of a centralized single-surface network."""

    def __init__(self, view: CsiView, radio: RadioParams, kind: str = "sum_rate"):
        ch = view.channels
        if ch.topology.mode != "centralized":
            raise ValueError("network objectives drive the shared-surface search")
        if kind not in ("sum_rate", "max_min"):
            raise ValueError(f"unknown objective kind {kind!r}")
        m = ch.m_per_surface[0]
        # n_levels is bound later via the configs the search supplies; the
        # workspace is created lazily on first evaluation.
        self.kind = kind
        self.view = view
        self.radio = radio
        self._gains: EffectiveGains | None = None
        super().__init__(m, 0)

    def bind(self, n_levels: int) -> "NetworkObjective":
        self.n_levels = n_levels
        ch = self.view.channels
        cfg = PhaseConfig.zeros(self.m, n_levels)
        self._gains = EffectiveGains(ch.direct, [ch.incident[0]], [ch.reflective[0]], [cfg])
        return self

    def _sync(self, levels: np.ndarray) -> None:
        if self._gains is None:
            raise RuntimeError("objective not bound to a phase resolution")
        if not np.array_equal(self._gains.levels[0], levels):
            self._gains.set_levels(0, levels)

    def _metric_of(self, sum_r: float, min_r: float) -> float:
        return -sum_r if self.kind == "sum_rate" else -min_r

    def _raw(self, levels: np.ndarray) -> float:
        self._sync(levels)
        rep = rates_from_e(self._gains.e, self.radio)
        return self._metric_of(rep.sum_rate, rep.min_rate)

    def single_moves(self, levels, moves) -> np.ndarray:
        self._sync(np.asarray(levels, dtype=np.int64))
        e_batch = self._gains.moved_e_batch(0, moves)
        sum_r, min_r = rates_batch(e_batch, self.radio)
        self.eval_count += len(moves)
        return -sum_r if self.kind == "sum_rate" else -min_r

    def value_many(self, level_rows) -> np.ndarray:
        rows = np.asarray(level_rows, dtype=np.int64)
        e_batch = self._gains.config_e_batch(0, rows)
        sum_r, min_r = rates_batch(e_batch, self.radio)
        self.eval_count += rows.shape[0]
        return -sum_r if self.kind == "sum_rate" else -min_r


class ScoreObjective(Objective):
    """Negated local score of one transmitter (distributed optimization)."""

    def __init__(self, view: CsiView, radio: RadioParams, tx: int, mode: str = "score"):
        m = view.m_per_surface[tx]
        self.view = view
        self.radio = radio
        self.tx = tx
        self.mode = mode
        self._ws: ScoreWorkspace | None = None
        super().__init__(m, 0)

    def bind(self, n_levels: int) -> "ScoreObjective":
        self.n_levels = n_levels
        cfg = PhaseConfig.zeros(self.m, n_levels)
        self._ws = ScoreWorkspace(self.view, self.radio, self.tx, cfg)
        return self

    def _sync(self, levels: np.ndarray) -> None:
        if self._ws is None:
            raise RuntimeError("objective not bound to a phase resolution")
        if not np.array_equal(self._ws.levels, levels):
            self._ws.set_levels(levels)

    def _raw(self, levels: np.ndarray) -> float:
        self._sync(levels)
        return -self._ws.value(self.mode)

    def single_moves(self, levels, moves) -> np.ndarray:
        self._sync(np.asarray(levels, dtype=np.int64))
        b_batch = self._ws.moved_b_batch(moves)
        self.eval_count += len(moves)
        return -self._ws.score_of_b(b_batch, self.mode)

    def value_many(self, level_rows) -> np.ndarray:
        rows = np.asarray(level_rows, dtype=np.int64)
        b_batch = self._ws.config_b_batch(rows)
        self.eval_count += rows.shape[0]
        return -self._ws.score_of_b(b_batch, self.mode)


def sum_rate_objective(view: CsiView, radio: RadioParams, n_levels: int) -> NetworkObjective:
    return NetworkObjective(view, radio, "sum_rate").bind(n_levels)


def max_min_objective(view: CsiView, radio: RadioParams, n_levels: int) -> NetworkObjective:
    return NetworkObjective(view, radio, "max_min").bind(n_levels)


def score_objective(view: CsiView, radio: RadioParams, tx: int, n_levels: int,
                    mode: str = "score") -> ScoreObjective:
    return ScoreObjective(view, radio, tx, mode).bind(n_levels)


def neighbor_moves(levels: np.ndarray, n_levels: int) -> list[tuple[int, int]]:
    """Single-element moves in element-major, target-level-ascending order."""
    out = []
    for m in range(len(levels)):
        for lvl in range(n_levels):
            if lvl != levels[m]:
                out.append((m, lvl))
    return out


def neighbors(config: PhaseConfig):
    """The configuration itself plus all M*(N-1) single-element variants."""
    yield config
    levels = list(config.levels)
    for m, lvl in neighbor_moves(np.array(levels), config.n_levels):
        cand = levels.copy()
        cand[m] = lvl
        yield PhaseConfig(levels=tuple(cand), n_levels=config.n_levels)


@dataclass
class SearchBudget:
    """Knobs of the global search.

    tau=1 polishes with the true-objective local search every round (the
    original schedule); larger tau runs it every tau rounds.  Unset caps
    are resolved against the problem size when the search starts.
    """

    r0: float = 10.0
    epsilon: float = 0.01
    tau: int = 10
    i_max_loc: int | None = None
    i_max_filled: int | None = None
    circular_distance: bool = False

    def resolved_i_max_loc(self, m: int) -> int:
        return self.i_max_loc if self.i_max_loc is not None else m

    def resolved_i_max_filled(self, m: int, n_levels: int) -> int:
        if self.i_max_filled is not None:
            return self.i_max_filled
        shrinks = math.log10(self.r0 / self.epsilon) + 1.0
        return math.ceil(n_levels * ((n_levels - 1) * m + 1) * shrinks)


@dataclass
class OptResult:
    best_config: PhaseConfig
    best_value: float
    evals: int
    trace: list[tuple[int, float]] = field(default_factory=list)

    @property
    def best_metric(self) -> float:
        return -self.best_value


def complexity_bound(n_levels: int, m: int, tau: int, r0: float, epsilon: float,
                     i_max_loc: int) -> int:
    """Worst-case evaluation count of the global search (ceiling)."""
    nm1 = (n_levels - 1) * m
    shrinks = math.log10(r0 / epsilon) + 1.0
    total = nm1 * i_max_loc + ((tau + 1.0) / tau) * n_levels * nm1 * (nm1 + 1.0) * shrinks * i_max_loc
    return math.ceil(total)


def _descend(objective, levels: np.ndarray, i_max_loc: int,
             start_value: float | None = None, eval_cap: int | None = None):
    """Algorithm-1 descent on `objective` from `levels`.

    Scans the full single-move neighborhood each round and takes the best
    candidate whose value is <= the incumbent's (first-found tie-break;
    an equal-valued move is taken only if that point was not already an
    incumbent, which blocks plateau cycling).  Stops when the incumbent
    survives a scan, after i_max_loc rounds, or when eval_cap would be
    crossed.  Returns (levels, value, rounds).
    """
    cur = np.asarray(levels, dtype=np.int64).copy()
    cur_val = objective.value(cur) if start_value is None else start_value
    n = objective.n_levels
    n_moves = (n - 1) * len(cur)
    visited = {_key(cur)}
    rounds = 0
    while rounds < i_max_loc:
        if eval_cap is not None and objective.eval_count + n_moves > eval_cap:
            break
        moves = neighbor_moves(cur, n)
        vals = objective.single_moves(cur, moves)
        best = int(np.argmin(vals))  # argmin keeps the first among ties
        best_val = float(vals[best])
        if best_val > cur_val:
            break
        m_idx, lvl = moves[best]
        nxt = cur.copy()
        nxt[m_idx] = lvl
        if best_val == cur_val and _key(nxt) in visited:
            # look for a strictly better or unvisited equal candidate
            order = np.argsort(vals, kind="stable")
            chosen = None
            for c in order:
                if vals[c] > cur_val:
                    break
                m2, l2 = moves[c]
                cand = cur.copy()
                cand[m2] = l2
                if vals[c] < cur_val or _key(cand) not in visited:
                    chosen = (cand, float(vals[c]))
                    break
            if chosen is None:
                break
            nxt, best_val = chosen
        cur = nxt
        cur_val = best_val
        visited.add(_key(cur))
        rounds += 1
    return cur, cur_val, rounds


def local_search(objective, start: PhaseConfig, i_max_loc: int | None = None) -> OptResult:
    """Best-single-move descent from `start` (Algorithm-1 behaviour)."""
    if i_max_loc is None:
        i_max_loc = objective.m
    before = objective.eval_count
    levels, val, _ = _descend(objective, np.array(start.levels), i_max_loc)
    return OptResult(
        best_config=PhaseConfig.from_array(levels, objective.n_levels),
        best_value=val,
        evals=objective.eval_count - before,
    )


def sigmoid_ramp(delta_q: float, r: float) -> float:
    """Piecewise ramp f_r: linear below -r, sigmoid on (-r, 0), one above."""
    if delta_q <= -r:
        return delta_q + r
    if delta_q < 0.0:
        return 1.0 / (1.0 + math.exp((-6.0 / r) * (delta_q + r / 2.0)))
    return 1.0


def _phase_dist_sq(theta: np.ndarray, theta_star: np.ndarray, circular: bool) -> float:
    d = theta - theta_star
    if circular:
        d = np.abs(d)
        d = np.minimum(d, 2.0 * np.pi - d)
    return float(np.dot(d, d))


def filled_value(delta_q: float, theta, theta_star, r: float,
                 circular: bool = False) -> float:
    """Auxiliary objective Q_r(theta, theta*).

    theta / theta_star are radian phase vectors.  The distance weight
    1 + 1/(1 + beta*||theta-theta*||^2) uses beta = 0 exactly when
    delta_q <= -r, and raw (non-wrapped) phase differences unless
    `circular` is set.
    """
    theta = np.asarray(theta, dtype=float)
    theta_star = np.asarray(theta_star, dtype=float)
    beta = 0.0 if delta_q <= -r else 1.0
    dist = _phase_dist_sq(theta, theta_star, circular)
    return (1.0 + 1.0 / (1.0 + beta * dist)) * sigmoid_ramp(delta_q, r)


class _AuxObjective:
    """Counted view of Q_r(., anchor) on top of a true objective.

    Each evaluation costs exactly one true-objective call except the
    anchor itself, whose q value is supplied once.  q values seen during
    a search are recorded so the caller can read q at the returned point
    without a second (counted) evaluation.
    """

    def __init__(self, base, anchor_levels: np.ndarray, anchor_q: float, r: float,
                 circular: bool):
        self.base = base
        self.m = base.m
        self.n_levels = base.n_levels
        self.anchor = np.asarray(anchor_levels, dtype=np.int64).copy()
        self.anchor_key = _key(self.anchor)
        self.anchor_q = anchor_q
        self.anchor_theta = 2.0 * np.pi * self.anchor / self.n_levels
        self.r = r
        self.circular = circular
        self.q_seen: dict[bytes, float] = {self.anchor_key: anchor_q}

    @property
    def eval_count(self) -> int:
        return self.base.eval_count

    def _transform(self, q: float, levels: np.ndarray) -> float:
        theta = 2.0 * np.pi * np.asarray(levels, dtype=np.int64) / self.n_levels
        return filled_value(q - self.anchor_q, theta, self.anchor_theta, self.r, self.circular)

    def value(self, levels) -> float:
        levels = np.asarray(levels, dtype=np.int64)
        k = _key(levels)
        if k == self.anchor_key:
            return 2.0  # Q_r at its own anchor, no true evaluation needed
        q = self.base.value(levels)
        self.q_seen[k] = q
        return self._transform(q, levels)

    def single_moves(self, levels, moves) -> np.ndarray:
        base_levels = np.asarray(levels, dtype=np.int64)
        q_vals = self.base.single_moves(base_levels, moves)
        theta_base = 2.0 * np.pi * base_levels / self.n_levels
        d = theta_base - self.anchor_theta
        if self.circular:
            da = np.abs(d)
            d_eff = np.minimum(da, 2.0 * np.pi - da)
        else:
            d_eff = d
        dist_base = float(np.dot(d_eff, d_eff))
        out = np.empty(len(moves))
        for c, (m, lvl) in enumerate(moves):
            cand = base_levels.copy()
            cand[m] = lvl
            self.q_seen[_key(cand)] = float(q_vals[c])
            new_d = 2.0 * np.pi * lvl / self.n_levels - self.anchor_theta[m]
            if self.circular:
                a = abs(new_d)
                new_d = min(a, 2.0 * np.pi - a)
                old = d_eff[m]
            else:
                old = d[m]
            dist = dist_base - old * old + new_d * new_d
            dq = float(q_vals[c]) - self.anchor_q
            beta = 0.0 if dq <= -self.r else 1.0
            out[c] = (1.0 + 1.0 / (1.0 + beta * dist)) * sigmoid_ramp(dq, self.r)
        return out


def global_search(objective, start: PhaseConfig, budget: SearchBudget | None = None) -> OptResult:
    """Filled-function global search (Algorithm-2 behaviour).

    Keeps an incumbent theta**; every tau rounds (and on the first round)
    polishes with the true-objective local search; on incumbent
    improvement it re-anchors the auxiliary problem and resets r; on
    failure it walks all (N-1)M single-element perturbations of the last
    minimizer, then shrinks r by 10 until r < epsilon or the filled-run
    budget is spent.  A hard evaluation cap (the complexity bound) is
    enforced so reported evals never exceed it.
    """
    if budget is None:
        budget = SearchBudget()
    m = objective.m
    n = objective.n_levels
    i_max_loc = budget.resolved_i_max_loc(m)
    i_max_filled = budget.resolved_i_max_filled(m, n)
    eval_cap = complexity_bound(n, m, budget.tau, budget.r0, budget.epsilon, i_max_loc)
    nm1 = (n - 1) * m
    start_count = objective.eval_count
    cap_left = lambda: start_count + eval_cap - objective.eval_count

    def run_aux(anchor_levels, anchor_q, start_levels, r):
        aux = _AuxObjective(objective, anchor_levels, anchor_q, r, budget.circular_distance)
        start_val = aux.value(start_levels)
        levels, _, _ = _descend(aux, start_levels, i_max_loc, start_value=start_val,
                                eval_cap=start_count + eval_cap - nm1)
        return levels, aux.q_seen[_key(levels)]

    trace: list[tuple[int, float]] = []
    r = budget.r0
    tau_bar = budget.tau
    ell = 0
    filled_total = 0
    perturb_m = 1

    cur = np.array(start.levels, dtype=np.int64)
    cur_q: float | None = None
    best: np.ndarray | None = None
    best_q = math.inf
    anchor: np.ndarray | None = None  # theta*_{ell-1}: minimizer under perturbation
    anchor_q = math.inf

    def done() -> OptResult:
        return OptResult(
            best_config=PhaseConfig.from_array(best, n),
            best_value=best_q,
            evals=objective.eval_count - start_count,
            trace=trace,
        )

    while True:
        if cap_left() <= nm1 + 2:
            if best is None:
                best = cur.copy()
                best_q = objective.value(cur) if cur_q is None else cur_q
                trace.append((objective.eval_count - start_count, best_q))
            return done()

        # scheduled true-objective polish; the first round always polishes
        if ell == 0 or ell + 1 >= tau_bar:
            if ell + 1 >= tau_bar:
                tau_bar += budget.tau
            star, star_q, _ = _descend(objective, cur, i_max_loc,
                                       start_value=None,
                                       eval_cap=start_count + eval_cap - 2)
        else:
            star, star_q = cur, cur_q

        if star_q < best_q or ell == 0:
            best, best_q = star.copy(), star_q
            trace.append((objective.eval_count - start_count, best_q))
            r = budget.r0
            perturb_m = 1
            if filled_total >= i_max_filled or cap_left() <= nm1 + 2:
                return done()
            bar, bar_q = run_aux(star, star_q, star, r)
            filled_total += 1
            ell += 1
            anchor, anchor_q = star, star_q
            cur, cur_q = bar, bar_q
            continue

        if perturb_m <= nm1:
            # m-th single-element perturbation of the last minimizer,
            # nonzero level offsets ascending per element
            elem = (perturb_m - 1) // (n - 1)
            off = (perturb_m - 1) % (n - 1) + 1
            pert = anchor.copy()
            pert[elem] = (pert[elem] + off) % n
            perturb_m += 1
            if filled_total >= i_max_filled or cap_left() <= nm1 + 2:
                return done()
            pert_q = objective.value(pert)
            bar, bar_q = run_aux(pert, pert_q, pert, r)
            filled_total += 1
            cur, cur_q = bar, bar_q
            continue

        if r < budget.epsilon or filled_total > i_max_filled:
            return done()
        r = r / 10.0
        perturb_m = 1
        if filled_total >= i_max_filled or cap_left() <= nm1 + 2:
            return done()
        bar, bar_q = run_aux(anchor, anchor_q, anchor, r)
        filled_total += 1
        cur, cur_q = bar, bar_q


def optimize_distributed(view: CsiView, radio: RadioParams, n_levels: int,
                         budget: SearchBudget | None = None,
                         starts: list[PhaseConfig] | None = None,
                         mode: str = "score") -> list[OptResult]:
    """Per-transmitter global search on the local score objectives.

    Each transmitter sees only its own links (CsiView restricted to it)
    and optimizes its own surface; returns one OptResult per transmitter.
    """
    from .channel import restrict

    k = view.k
    results = []
    for i in range(k):
        local = restrict(view, i)
        obj = score_objective(local, radio, i, n_levels, mode)
        theta0 = starts[i] if starts is not None else PhaseConfig.zeros(obj.m, n_levels)
        results.append(global_search(obj, theta0, budget))
    return results
