"""Reference pricers used to validate the transport solver.

Closed forms: the geometric-average Asian option (exact under continuous
geometric averaging) and the vanilla European option.  Monte Carlo: exact
log-normal path stepping with counter-based per-path random streams, so the
estimate is reproducible bit for bit regardless of evaluation order or
worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .pricing import InstrumentSpec

_PATH_BLOCK = 4096  # paths vectorised per block; pure memory/speed trade-off


@dataclass(frozen=True)
class McConfig:
    n_paths: int
    n_steps: int
    seed: int = 0

    def __post_init__(self):
        if self.n_paths < 1:
            raise ConfigurationError(f"n_paths must be >= 1, got {self.n_paths}")
        if self.n_steps < 1:
            raise ConfigurationError(f"n_steps must be >= 1, got {self.n_steps}")


@dataclass(frozen=True)
class McResult:
    price: float
    std_error: float
    n_paths: int


def norm_cdf(z: float) -> float:
    """Standard normal CDF via erfc; absolute error below 1e-15."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def geometric_asian_price(inst: InstrumentSpec) -> float:
    """Closed-form price under continuous geometric averaging.

    Volatility of the log average is sigma * sqrt(T/3); sigma = 0 degenerates
    to the discounted payoff of the deterministic path's geometric mean.
    """
    s, k, t, r, sigma = inst.spot, inst.strike, inst.maturity, inst.rate, inst.sigma
    growth = math.exp(-(t / 2.0) * (r + sigma**2 / 6.0))
    if sigma * math.sqrt(t) < 1e-12:
        mean = s * math.exp((r - sigma**2 / 2.0) * t / 2.0)
        return math.exp(-r * t) * _payoff(mean, k, inst.kind)
    sig_avg = sigma * math.sqrt(t / 3.0)
    d1 = (math.log(s / k) + (t / 2.0) * (r + sigma**2 / 6.0)) / sig_avg
    d2 = d1 - sig_avg
    if inst.kind == "call":
        return s * growth * norm_cdf(d1) - k * math.exp(-r * t) * norm_cdf(d2)
    return k * math.exp(-r * t) * norm_cdf(-d2) - s * growth * norm_cdf(-d1)


def european_bs_price(inst: InstrumentSpec) -> float:
    """Standard European call/put value (plotted alongside the Asian transect)."""
    s, k, t, r, sigma = inst.spot, inst.strike, inst.maturity, inst.rate, inst.sigma
    if sigma * math.sqrt(t) < 1e-12:
        return math.exp(-r * t) * _payoff(s * math.exp(r * t), k, inst.kind)
    sig_t = sigma * math.sqrt(t)
    d1 = (math.log(s / k) + (r + sigma**2 / 2.0) * t) / sig_t
    d2 = d1 - sig_t
    if inst.kind == "call":
        return s * norm_cdf(d1) - k * math.exp(-r * t) * norm_cdf(d2)
    return k * math.exp(-r * t) * norm_cdf(-d2) - s * norm_cdf(-d1)


def _payoff(average: float, strike: float, kind: str) -> float:
    if kind == "call":
        return max(average - strike, 0.0)
    return max(strike - average, 0.0)


def _path_key(seed: int, path_index: int) -> np.ndarray:
    return np.array([seed & 0xFFFFFFFFFFFFFFFF, path_index], dtype=np.uint64)


def _rekey(bit_gen: np.random.Philox, seed: int, path_index: int) -> None:
    # resetting key/counter through the state dict skips object construction
    # but yields the same stream as Philox(key=(seed, path_index))
    state = bit_gen.state
    state["state"]["counter"][:] = 0
    state["state"]["key"][:] = _path_key(seed, path_index)
    state["buffer_pos"] = 4
    state["has_uint32"] = 0
    state["uinteger"] = 0
    bit_gen.state = state


def gbm_path(inst: InstrumentSpec, cfg: McConfig, path_index: int) -> np.ndarray:
    """Exact log-normal path: the M samples after the spot, S_1 .. S_M.

    Normals come from a counter-based stream keyed by (seed, path_index), so
    the path is reproducible bit for bit and independent of any other path.
    """
    gen = np.random.Generator(np.random.Philox(key=_path_key(cfg.seed, path_index)))
    z = gen.standard_normal(cfg.n_steps)
    d_tau = inst.maturity / cfg.n_steps
    log_steps = (inst.rate - 0.5 * inst.sigma**2) * d_tau + inst.sigma * math.sqrt(d_tau) * z
    return inst.spot * np.exp(np.cumsum(log_steps))


def _unit_path_averages(rate: float, sigma: float, maturity: float, cfg: McConfig) -> np.ndarray:
    """Per-path trapezoidal average of S/S0 over the M+1 samples incl. both endpoints."""
    m = cfg.n_steps
    d_tau = maturity / m
    drift = (rate - 0.5 * sigma**2) * d_tau
    vol = sigma * math.sqrt(d_tau)
    bit_gen = np.random.Philox(key=_path_key(cfg.seed, 0))
    gen = np.random.Generator(bit_gen)
    out = np.empty(cfg.n_paths)
    block = np.empty((min(_PATH_BLOCK, cfg.n_paths), m))
    for start in range(0, cfg.n_paths, _PATH_BLOCK):
        stop = min(start + _PATH_BLOCK, cfg.n_paths)
        for k in range(stop - start):
            _rekey(bit_gen, cfg.seed, start + k)
            block[k] = gen.standard_normal(m)
        rel = np.exp(np.cumsum(drift + vol * block[: stop - start], axis=1))
        out[start:stop] = (0.5 + rel[:, :-1].sum(axis=1) + 0.5 * rel[:, -1]) / m
    return out


def mc_path_averages(inst: InstrumentSpec, cfg: McConfig) -> np.ndarray:
    """Per-path arithmetic average of the asset price (trapezoidal in time).

    Independent of strike and kind, so one set of averages prices every
    payoff on the same (spot, rate, sigma, maturity, seed) configuration
    with bit-identical results.
    """
    return inst.spot * _unit_path_averages(inst.rate, inst.sigma, inst.maturity, cfg)


def mc_result_from_averages(averages: np.ndarray, inst: InstrumentSpec) -> McResult:
    """Discounted payoff statistics for pre-computed path averages."""
    if inst.kind == "call":
        payoffs = np.maximum(averages - inst.strike, 0.0)
    else:
        payoffs = np.maximum(inst.strike - averages, 0.0)
    discount = math.exp(-inst.rate * inst.maturity)
    n = payoffs.size
    price = discount * float(np.mean(payoffs))
    if n > 1:
        std_error = discount * float(np.std(payoffs, ddof=1)) / math.sqrt(n)
    else:
        std_error = 0.0
    return McResult(price=price, std_error=std_error, n_paths=n)


def mc_asian_price(inst: InstrumentSpec, cfg: McConfig) -> McResult:
    """Monte Carlo value of the arithmetic-average instrument.

    Prices are discounted means of per-path payoffs on the trapezoidal
    average including both endpoints; identical (inst, cfg) inputs produce
    bit-identical results.
    """
    return mc_result_from_averages(mc_path_averages(inst, cfg), inst)
