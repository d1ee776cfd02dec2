"""Element-count lower bounds for symmetric networks.

The brackets minimized over the trade-off variable `a` come from a
random-configuration counting argument: a instruments how much of the
lattice is spent boosting the desired link versus suppressing
interference.  Since a is itself constrained to [0, M], the reported
minimum element count solves M >= max(a, bracket(a)) at the best a,
which also keeps a_star <= m_min.

Validity window: the closed forms freeze the element count at M- (10)
and M+ (512) inside the bracket, so results are meaningful for
M- < M < M+ and the reported count never drops below M- + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

M_MINUS = 10
M_PLUS = 512

_SQRT2 = math.sqrt(2.0)


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = P(Z > x), Z ~ N(0, 1)."""
    return 0.5 * math.erfc(x / _SQRT2)


def _phi(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def q_inverse(p: float) -> float:
    """Inverse of q_function on (0, 1); safeguarded bisection + Newton."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    lo, hi = -40.0, 40.0  # Q(40) underflows to 0, Q(-40) = 1 in doubles
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if q_function(mid) > p:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(4):  # Newton polish: Q'(x) = -phi(x)
        d = _phi(x)
        if d == 0.0:
            break
        step = (q_function(x) - p) / d
        x_new = x + step
        if lo <= x_new <= hi:
            x = x_new
        if abs(step) < 1e-14 * max(1.0, abs(x)):
            break
    return x


def cascaded_variance(m: int, sigma_g_sq: float, m_h: float) -> float:
    """Variance of g Theta h for a random uniform lattice configuration."""
    return m * sigma_g_sq * m_h * m_h


def small_gain_probability(delta: float, nu: float) -> float:
    """Approximate lower bound on Pr(|g Theta h| < delta/2 | Theta)."""
    return (delta / math.sqrt(2.0 * math.pi * nu)) ** 2


def direct_small_probability(delta: float, sigma_hd: float) -> float:
    """Approximate lower bound on Pr(|h_d| < delta/2)."""
    return (delta / (sigma_hd * math.sqrt(2.0 * math.pi))) ** 2


def direct_large_probability(threshold: float, sigma_hd: float) -> float:
    """Lower bound on Pr(|h_d| > threshold)."""
    return (2.0 * q_function(threshold / sigma_hd)) ** 2


@dataclass(frozen=True)
class SymmetricScenario:
    """Per-user-identical network parameters for the bound formulas.

    m_h is the per-element LoS amplitude of the Tx->RIS link (shared
    surface); sigma_h_tilde_sq is the Rayleigh Tx->RIS power used when
    each transmitter owns a surface.  The equal_* flags record the
    symmetry assumptions the formulas rely on.
    """

    k: int
    n_levels: int
    p_watts: float
    noise_watts: float
    sigma_hd_sq: float
    sigma_g_sq: float
    m_h: float | None = None
    sigma_h_tilde_sq: float | None = None
    equal_powers: bool = True
    equal_tx_rx_distances: bool = True
    equal_tx_ris_distances: bool = True
    equal_ris_rx_distances: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.n_levels < 2:
            raise ValueError("bounds need at least two phase levels")
        for name in ("p_watts", "noise_watts", "sigma_hd_sq", "sigma_g_sq"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def sigma_hd(self) -> float:
        return math.sqrt(self.sigma_hd_sq)

    @property
    def nu_prime_centralized(self) -> float:
        if self.m_h is None:
            raise ValueError("m_h required for the shared-surface bound")
        return self.sigma_g_sq * self.m_h ** 2

    @property
    def nu_prime_distributed(self) -> float:
        if self.sigma_h_tilde_sq is None:
            raise ValueError("sigma_h_tilde_sq required for the per-transmitter bound")
        return self.sigma_g_sq * self.sigma_h_tilde_sq

    def assert_symmetric(self) -> None:
        if not (self.equal_powers and self.equal_tx_rx_distances
                and self.equal_tx_ris_distances and self.equal_ris_rx_distances):
            raise ValueError("bound formulas require the symmetric scenario")


@dataclass(frozen=True)
class BoundResult:
    m_min: int | None
    a_star: float | None
    feasible: bool
    raw_bound: float | None
    clamped: bool
    grid: list = field(default_factory=list)  # (a, max(a, bracket)) rows, inf if infeasible


def _centralized_bracket(a: float, s: SymmetricScenario, target: float,
                         m_minus: int, m_plus: int) -> float:
    """K^2 log_N [...] + a, or +inf where the derivation breaks down."""
    k, n = s.k, s.n_levels
    nu_p = s.nu_prime_centralized
    qi = q_inverse(1.0 / (2.0 * n ** (a / (2.0 * k))))
    delta_thr = s.sigma_hd * qi - n ** (-(m_minus - a) / (2.0 * k * k)) * math.sqrt(
        (math.pi / 2.0) * m_plus * nu_p)
    if delta_thr <= 0.0:
        return math.inf  # needs a positive direct-signal threshold
    den = delta_thr ** 2 - target * s.noise_watts / s.p_watts
    if den <= 0.0:
        return math.inf
    num = target * 2.0 * math.pi * (k - 1) * m_plus * nu_p
    if num <= 0.0:
        return -math.inf if k == 1 else math.inf
    return k * k * math.log(num / den, n) + a


def _distributed_bracket(a: float, s: SymmetricScenario, target: float,
                         m_minus: int, m_plus: int) -> float:
    k, n = s.k, s.n_levels
    if k == 1:
        return a  # the log term carries a zero coefficient
    nu_p = s.nu_prime_distributed
    qi = q_inverse(1.0 / (2.0 * n ** (a / 2.0)))
    den = (s.sigma_hd_sq + m_minus * nu_p) * qi ** 2 - (s.noise_watts / s.p_watts) * target
    if den <= 0.0:
        return math.inf
    num = target * (math.pi / 2.0) * (k - 1) * (s.sigma_hd_sq + m_plus * nu_p)
    return (k - 1) * math.log(num / den, n) + a


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_refine(fn, lo: float, hi: float, tol: float = 1e-3) -> tuple[float, float]:
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _minimize(bracket_fn, s: SymmetricScenario, target: float,
              a_grid, m_minus: int, m_plus: int) -> BoundResult:
    if target <= 0.0:
        raise ValueError("target must be positive")
    s.assert_symmetric()
    if a_grid is None:
        a_grid = np.arange(0.0, m_plus + 0.25, 0.25)

    def g(a: float) -> float:
        v = bracket_fn(a, s, target, m_minus, m_plus)
        if math.isinf(v) and v > 0:
            return math.inf
        return max(a, v)  # a itself can be at most M

    grid_rows = [(float(a), g(float(a))) for a in a_grid]
    finite = [(a, v) for a, v in grid_rows if math.isfinite(v)]
    if not finite:
        return BoundResult(m_min=None, a_star=None, feasible=False,
                           raw_bound=None, clamped=False, grid=grid_rows)

    best_i = min(range(len(grid_rows)), key=lambda i: grid_rows[i][1])
    step = float(a_grid[1] - a_grid[0]) if len(a_grid) > 1 else 0.25
    lo = max(float(a_grid[0]), grid_rows[best_i][0] - step)
    hi = min(float(a_grid[-1]), grid_rows[best_i][0] + step)
    a_star, refined = _golden_refine(g, lo, hi)
    if grid_rows[best_i][1] < refined:
        a_star, refined = grid_rows[best_i]

    m_raw = math.ceil(refined)
    clamped = m_raw < m_minus + 1
    m_min = max(m_raw, m_minus + 1)
    return BoundResult(m_min=m_min, a_star=a_star, feasible=True,
                       raw_bound=refined, clamped=clamped, grid=grid_rows)


def min_elements_centralized(s: SymmetricScenario, sinr_target: float,
                             a_grid=None, m_minus: int = M_MINUS,
                             m_plus: int = M_PLUS) -> BoundResult:
    """Smallest element count of a shared surface meeting a per-user SINR."""
    return _minimize(_centralized_bracket, s, sinr_target, a_grid, m_minus, m_plus)


def min_elements_distributed(s: SymmetricScenario, score_target: float,
                             a_grid=None, m_minus: int = M_MINUS,
                             m_plus: int = M_PLUS) -> BoundResult:
    """Smallest per-surface element count meeting a per-transmitter score."""
    return _minimize(_distributed_bracket, s, score_target, a_grid, m_minus, m_plus)
