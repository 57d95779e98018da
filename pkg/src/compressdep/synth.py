"""Seeded generators for the synthetic processes used to validate the test.

Every generator is a pure function of its parameters and seed. Normal
variates come from numpy's PCG64 + ziggurat, which is stable across runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .discretize import RealSeries, SymbolSeries
from .info import MarkovModel, Pmf, cr_from_entropy_rate, entropy, markov_entropy_rate

HIDDEN_THRESHOLD = 1.19


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _bits_for(n_symbols: int) -> int:
    return max(1, (n_symbols - 1).bit_length())


def skewed_pmf(seed: int) -> Pmf:
    """Random 256-point pmf: 128 weights from U[0, 1/3] then 128 from U[0, 1]."""
    rng = _rng(seed)
    w = np.concatenate([rng.uniform(0, 1 / 3, 128), rng.uniform(0, 1, 128)])
    return Pmf.from_weights(w)


def gen_iid_categorical(p: Pmf, n: int, seed: int) -> SymbolSeries:
    if p.size > 1 << 16:
        raise ValueError("alphabet larger than 2**16")
    draws = _rng(seed).choice(p.size, size=n, p=p.probs)
    return SymbolSeries(draws, _bits_for(p.size))


def gen_iid_uniform_bytes(n: int, seed: int) -> SymbolSeries:
    return SymbolSeries(_rng(seed).integers(0, 256, size=n, dtype=np.uint8), 8)


def gen_iid_gaussian(n: int, seed: int, sigma: float = 1.0) -> RealSeries:
    return RealSeries(sigma * _rng(seed).standard_normal(n))


def gen_random_walk_returns(n: int, seed: int, sigma: float = 1.0) -> RealSeries:
    """Increments of a Gaussian random walk, i.e. iid N(0, sigma^2) returns."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return gen_iid_gaussian(n, seed, sigma)


def gen_hidden_dependence(n: int, seed: int, threshold: float = HIDDEN_THRESHOLD) -> RealSeries:
    """Pairwise fully dependent process with near-zero autocorrelation.

    Odd positions (1-based) hold ``e_i ~ N(0, 1)``; the following even position
    holds ``|e_i|`` when ``|e_i| > threshold`` and ``-|e_i|`` otherwise.
    """
    if n % 2:
        raise ValueError("hidden-dependence series needs an even length")
    e = _rng(seed).standard_normal(n // 2)
    x = np.empty(n)
    x[0::2] = e
    x[1::2] = np.abs(e) * np.where(np.abs(e) > threshold, 1.0, -1.0)
    return RealSeries(x)


def gen_markov(m: MarkovModel, n: int, seed: int) -> SymbolSeries:
    """Chain started from its stationary law."""
    rng = _rng(seed)
    cdf = np.cumsum(m.transition, axis=1)
    cdf[:, -1] = 1.0
    u = rng.random(n)
    out = np.empty(n, dtype=np.int64)
    state = int(np.searchsorted(np.cumsum(m.stationary.probs), u[0], side="right"))
    state = min(state, m.size - 1)
    out[0] = state
    for t in range(1, n):
        state = int(np.searchsorted(cdf[state], u[t], side="right"))
        out[t] = state
    return SymbolSeries(out, _bits_for(m.size))


@dataclass(frozen=True)
class GarchPath:
    returns: np.ndarray
    sigma: np.ndarray
    innovations: np.ndarray


def simulate_garch11(omega: float, alpha: float, beta: float, n: int, seed: int,
                     burn_in: int = 1000) -> GarchPath:
    """``r_t = sigma_t z_t`` with ``sigma_t^2 = omega + alpha r_{t-1}^2 + beta sigma_{t-1}^2``.

    Started at the unconditional variance; the first ``burn_in`` draws are
    discarded.
    """
    if omega <= 0 or alpha < 0 or beta < 0 or alpha + beta >= 1:
        raise ValueError("need omega > 0, alpha >= 0, beta >= 0 and alpha + beta < 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    total = n + burn_in
    z = _rng(seed).standard_normal(total)
    r = np.empty(total)
    var = np.empty(total)
    var[0] = omega / (1 - alpha - beta)
    r[0] = np.sqrt(var[0]) * z[0]
    for t in range(1, total):
        var[t] = omega + alpha * r[t - 1] ** 2 + beta * var[t - 1]
        r[t] = np.sqrt(var[t]) * z[t]
    s = slice(burn_in, None)
    return GarchPath(r[s], np.sqrt(var[s]), z[s])


def gen_garch11(omega: float, alpha: float, beta: float, n: int, seed: int,
                burn_in: int = 1000) -> RealSeries:
    return RealSeries(simulate_garch11(omega, alpha, beta, n, seed, burn_in).returns)


@dataclass(frozen=True)
class GeneratorSpec:
    """A named family with its parameters, length and seed."""

    family: str
    n: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def generate(self):
        return FAMILIES[self.family].generate(self.n, self.seed, **self.params)

    def optimal_cr(self, bits: int = 8) -> float | None:
        """Analytic optimal compression ratio, when the family has one."""
        oracle = FAMILIES[self.family].oracle
        return None if oracle is None else oracle(bits, **self.params)


@dataclass(frozen=True)
class Family:
    generate: callable
    # (bits, **params) -> optimal compression ratio of the symbols the tests see
    oracle: callable = None


def _categorical(n, seed, pmf=None, pmf_seed=0):
    p = Pmf(pmf) if pmf is not None else skewed_pmf(pmf_seed)
    return gen_iid_categorical(p, n, seed)


def _categorical_oracle(bits, pmf=None, pmf_seed=0):
    p = Pmf(pmf) if pmf is not None else skewed_pmf(pmf_seed)
    return cr_from_entropy_rate(entropy(p), 1 << _bits_for(p.size)).optimal_cr


def _markov(n, seed, transition=None, n_states=256, stay=0.9):
    m = MarkovModel(transition) if transition is not None else MarkovModel.sticky(n_states, stay)
    return gen_markov(m, n, seed)


def _markov_oracle(bits, transition=None, n_states=256, stay=0.9):
    m = MarkovModel(transition) if transition is not None else MarkovModel.sticky(n_states, stay)
    return cr_from_entropy_rate(markov_entropy_rate(m), 1 << _bits_for(m.size)).optimal_cr


def _garch(n, seed, omega=1e-5, alpha=0.1, beta=0.85, burn_in=1000):
    return gen_garch11(omega, alpha, beta, n, seed, burn_in)


FAMILIES: dict[str, Family] = {
    "iid-categorical": Family(_categorical, _categorical_oracle),
    "iid-uniform-bytes": Family(lambda n, seed: gen_iid_uniform_bytes(n, seed), lambda bits: 0.0),
    # rank discretisation of an iid sample leaves a uniform, independent sequence
    "iid-gaussian": Family(lambda n, seed, sigma=1.0: gen_iid_gaussian(n, seed, sigma), lambda bits, sigma=1.0: 0.0),
    "random-walk-returns": Family(lambda n, seed, sigma=1.0: gen_random_walk_returns(n, seed, sigma),
                                  lambda bits, sigma=1.0: 0.0),
    "markov": Family(_markov, _markov_oracle),
    # even symbols are a function of the preceding odd one: b bits per pair
    "hidden-dependence": Family(
        lambda n, seed, threshold=HIDDEN_THRESHOLD: gen_hidden_dependence(n, seed, threshold),
        lambda bits, threshold=HIDDEN_THRESHOLD: 0.5),
    "garch11": Family(_garch),
}
