"""Reference optimizers: exhaustive, sweep-based, evolutionary, multi-start.

All of them consume the same counted objectives as the global search and
report exact evaluation tallies.  Results always lie on the phase
lattice.
"""

from __future__ import annotations

import math

import numpy as np

from .channel import substream
from .model import PhaseConfig
from .search import OptResult, local_search

BRUTE_FORCE_CAP = 2 ** 24
_CHUNK = 8192


class BruteForceTooLarge(ValueError):
    """The N^M enumeration exceeds the safety cap."""


def brute_force(objective, cap: int = BRUTE_FORCE_CAP) -> OptResult:
    """Exhaustive lattice enumeration; refuses when N^M exceeds `cap`."""
    m, n = objective.m, objective.n_levels
    total = n ** m
    if total > cap:
        raise BruteForceTooLarge(f"N^M = {total} exceeds cap {cap}")
    before = objective.eval_count
    best_val = math.inf
    best_rows = None
    # lexicographic enumeration, chunked; first-found minimum wins
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        codes = np.arange(lo, hi, dtype=np.int64)
        rows = np.empty((hi - lo, m), dtype=np.int64)
        rem = codes
        for col in range(m - 1, -1, -1):
            rows[:, col] = rem % n
            rem = rem // n
        vals = objective.value_many(rows)
        idx = int(np.argmin(vals))
        if vals[idx] < best_val:
            best_val = float(vals[idx])
            best_rows = rows[idx].copy()
    return OptResult(
        best_config=PhaseConfig.from_array(best_rows, n),
        best_value=best_val,
        evals=objective.eval_count - before,
    )


def successive_refinement(objective, start: PhaseConfig, max_sweeps: int = 100) -> OptResult:
    """Element-by-element full sweeps; stops when a sweep brings no strict gain.

    Each element evaluates all N levels (the current one included), so a
    sweep costs exactly N*M evaluations.
    """
    before = objective.eval_count
    n = objective.n_levels
    cur = np.array(start.levels, dtype=np.int64)
    cur_val = objective.value(cur)
    for _ in range(max_sweeps):
        sweep_start_val = cur_val
        for m in range(objective.m):
            moves = [(m, lvl) for lvl in range(n)]
            vals = objective.single_moves(cur, moves)
            idx = int(np.argmin(vals))
            cur[m] = idx
            cur_val = float(vals[idx])
        if not cur_val < sweep_start_val:
            break
    return OptResult(
        best_config=PhaseConfig.from_array(cur, n),
        best_value=cur_val,
        evals=objective.eval_count - before,
    )


def modified_sr(objective, start: PhaseConfig, sweeps: int = 100) -> OptResult:
    """Fixed-sweep variant: always runs `sweeps` full sweeps (sweeps*N*M evals)."""
    before = objective.eval_count
    n = objective.n_levels
    cur = np.array(start.levels, dtype=np.int64)
    cur_val = math.inf
    for _ in range(sweeps):
        for m in range(objective.m):
            moves = [(m, lvl) for lvl in range(n)]
            vals = objective.single_moves(cur, moves)
            idx = int(np.argmin(vals))
            cur[m] = idx
            cur_val = float(vals[idx])
    return OptResult(
        best_config=PhaseConfig.from_array(cur, n),
        best_value=cur_val,
        evals=objective.eval_count - before,
    )


def genetic(objective, seed, population: int = 100, generations: int = 200,
            mutation_rate: float | None = None, tournament_k: int = 2,
            elitism: int = 1) -> OptResult:
    """Tournament GA on the level lattice.

    Uniform crossover, per-gene mutation (default rate 1/M), elite carried
    over without re-evaluation: total evals = population*(generations+1).
    """
    if population % 2 != 0:
        raise ValueError("population must be even")
    m, n = objective.m, objective.n_levels
    if mutation_rate is None:
        mutation_rate = 1.0 / m
    rng = substream(seed, 0)
    before = objective.eval_count

    pop = rng.integers(0, n, size=(population, m), dtype=np.int64)
    fit = objective.value_many(pop)
    best_idx = int(np.argmin(fit))
    best, best_val = pop[best_idx].copy(), float(fit[best_idx])

    for _ in range(generations):
        children = np.empty_like(pop)
        for c in range(population):
            # tournament selection of two parents
            cand = rng.integers(0, population, size=tournament_k)
            p1 = cand[np.argmin(fit[cand])]
            cand = rng.integers(0, population, size=tournament_k)
            p2 = cand[np.argmin(fit[cand])]
            mask = rng.random(m) < 0.5
            child = np.where(mask, pop[p1], pop[p2])
            mut = rng.random(m) < mutation_rate
            if mut.any():
                child = child.copy()
                child[mut] = rng.integers(0, n, size=int(mut.sum()))
            children[c] = child
        child_fit = objective.value_many(children)
        if elitism > 0:
            worst = int(np.argmax(child_fit))
            children[worst] = best
            child_fit[worst] = best_val
        pop, fit = children, child_fit
        gen_best = int(np.argmin(fit))
        if fit[gen_best] < best_val:
            best, best_val = pop[gen_best].copy(), float(fit[gen_best])

    return OptResult(
        best_config=PhaseConfig.from_array(best, n),
        best_value=best_val,
        evals=objective.eval_count - before,
    )


def simplified_exhaustive(objective, seed, restarts: int = 100,
                          i_max_loc: int | None = None) -> OptResult:
    """Multi-start local descent: best of `restarts` random starting points.

    Restart t draws its start from substream (seed, t), so a longer run
    extends a shorter one and the best value is nonincreasing in restarts.
    """
    m, n = objective.m, objective.n_levels
    before = objective.eval_count
    best = None
    best_val = math.inf
    for t in range(restarts):
        rng = substream(seed, t)
        start = PhaseConfig.from_array(rng.integers(0, n, size=m, dtype=np.int64), n)
        res = local_search(objective, start, i_max_loc)
        if res.best_value < best_val:
            best, best_val = res.best_config, res.best_value
    return OptResult(
        best_config=best,
        best_value=best_val,
        evals=objective.eval_count - before,
    )


def random_config(objective, seed) -> OptResult:
    """A single uniformly drawn configuration (one evaluation)."""
    m, n = objective.m, objective.n_levels
    rng = substream(seed, 0)
    before = objective.eval_count
    levels = rng.integers(0, n, size=m, dtype=np.int64)
    val = objective.value(levels)
    return OptResult(
        best_config=PhaseConfig.from_array(levels, n),
        best_value=val,
        evals=objective.eval_count - before,
    )
