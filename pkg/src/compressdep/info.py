"""Exact information-theoretic quantities.

These serve two roles: analytic oracles for the compression estimator, and
conversion between compression ratios and entropy rates. All logarithms are
base 2, so entropies are in bits.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PMF_SUM_TOL = 1e-9
STOCHASTIC_TOL = 1e-12
POWER_ITER_TOL = 1e-12
POWER_ITER_BUDGET = 10**6


class ConvergenceError(RuntimeError):
    """Power iteration did not reach a stationary distribution."""


def _plogp(p: np.ndarray) -> np.ndarray:
    # 0 log 0 := 0
    out = np.zeros_like(p, dtype=float)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over an alphabet of size ``N``.

    Inputs whose sum is within 1e-9 of one are renormalised; anything further
    off, or any negative weight, is rejected.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("a pmf needs at least one symbol")
        if not np.all(np.isfinite(p)):
            raise ValueError("pmf weights must be finite")
        if np.any(p < 0):
            raise ValueError("pmf weights must be non-negative")
        total = p.sum()
        if abs(total - 1.0) > PMF_SUM_TOL:
            raise ValueError(f"pmf weights sum to {total!r}, not 1")
        p = p / total
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def size(self) -> int:
        return self.probs.size

    @classmethod
    def from_weights(cls, weights) -> "Pmf":
        """Normalise arbitrary non-negative weights into a pmf."""
        w = np.asarray(weights, dtype=float).ravel()
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and non-negative")
        if w.sum() <= 0:
            raise ValueError("weights must not all be zero")
        return cls(w / w.sum())

    @classmethod
    def uniform(cls, n: int) -> "Pmf":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def from_file(cls, path) -> "Pmf":
        """Read whitespace-separated weights (any number per line)."""
        return cls(_read_matrix(path).ravel())


def entropy(p: Pmf) -> float:
    """Shannon entropy in bits."""
    return float(-_plogp(p.probs).sum())


@dataclass(frozen=True)
class RateQuote:
    entropy_rate: float
    optimal_cr: float
    alphabet_bits: float


def cr_from_entropy_rate(h: float, n_symbols: int) -> RateQuote:
    """Optimal compression ratio ``1 - h / log2 N`` for an entropy rate ``h``."""
    if n_symbols < 2:
        raise ValueError("alphabet must contain at least two symbols")
    bits = float(np.log2(n_symbols))
    if not 0.0 <= h <= bits:
        raise ValueError(f"entropy rate {h} outside [0, {bits}]")
    return RateQuote(entropy_rate=float(h), optimal_cr=1.0 - h / bits, alphabet_bits=bits)


def entropy_rate_from_cr(cr: float, n_symbols: int) -> float:
    """Inverse of :func:`cr_from_entropy_rate`."""
    return (1.0 - cr) * float(np.log2(n_symbols))


def stationary_distribution(transition, tol: float = POWER_ITER_TOL,
                            max_iter: int = POWER_ITER_BUDGET) -> np.ndarray:
    """Left fixed point of a row-stochastic matrix by power iteration.

    Starts from the uniform vector; converged when the L1 change per step
    drops below ``tol``. Periodic or reducible chains typically exhaust the
    budget and raise :class:`ConvergenceError`.
    """
    P = np.asarray(transition, dtype=float)
    mu = np.full(P.shape[0], 1.0 / P.shape[0])
    for _ in range(max_iter):
        nxt = mu @ P
        if np.abs(nxt - mu).sum() < tol:
            return nxt / nxt.sum()
        mu = nxt
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


@dataclass(frozen=True)
class MarkovModel:
    """One-step Markov chain; the stationary law is computed on construction."""

    transition: np.ndarray
    stationary: Pmf = field(init=False)
    max_iter: int = POWER_ITER_BUDGET

    def __post_init__(self):
        P = np.array(self.transition, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
            raise ValueError("transition matrix must be square and non-empty")
        if np.any(P < 0) or not np.all(np.isfinite(P)):
            raise ValueError("transition entries must be finite and non-negative")
        if np.any(np.abs(P.sum(axis=1) - 1.0) > STOCHASTIC_TOL):
            raise ValueError("transition rows must sum to 1")
        P.setflags(write=False)
        object.__setattr__(self, "transition", P)
        mu = stationary_distribution(P, max_iter=self.max_iter)
        object.__setattr__(self, "stationary", Pmf(mu))

    @property
    def size(self) -> int:
        return self.transition.shape[0]

    @classmethod
    def from_file(cls, path) -> "MarkovModel":
        return cls(_read_matrix(path))

    @classmethod
    def sticky(cls, n_states: int, stay: float) -> "MarkovModel":
        """Stay put with probability ``stay``, else jump uniformly elsewhere."""
        off = (1.0 - stay) / (n_states - 1)
        P = np.full((n_states, n_states), off)
        np.fill_diagonal(P, stay)
        return cls(P)


def markov_entropy_rate(m: MarkovModel) -> float:
    """Stationary-weighted average of the per-row entropies, in bits/step."""
    row_h = -_plogp(m.transition).sum(axis=1)
    return float(m.stationary.probs @ row_h)


@dataclass(frozen=True)
class SubadditivityWitness:
    joint_entropy: float
    marginal_entropy_sum: float
    bound_holds: bool
    equality: bool


def joint_entropy_bound_check(marginals, joint: Pmf, tol: float = 1e-9) -> SubadditivityWitness:
    """Check ``H(X1..Xn) <= sum H(Xi)`` and whether equality holds.

    ``joint.probs`` is laid out in C order over the product alphabet, i.e.
    reshaped to ``[m.size for m in marginals]``. Each supplied marginal must
    match the corresponding marginalisation of the joint.
    """
    shape = tuple(m.size for m in marginals)
    if int(np.prod(shape)) != joint.size:
        raise ValueError(f"joint has {joint.size} cells, product alphabet has {np.prod(shape)}")
    J = joint.probs.reshape(shape)
    for axis, m in enumerate(marginals):
        others = tuple(i for i in range(len(shape)) if i != axis)
        if not np.allclose(J.sum(axis=others), m.probs, atol=1e-9, rtol=0):
            raise ValueError(f"marginal {axis} is inconsistent with the joint")
    hj = entropy(joint)
    hs = sum(entropy(m) for m in marginals)
    return SubadditivityWitness(hj, hs, hj <= hs + tol, abs(hj - hs) <= tol)


def _read_matrix(path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.split()])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no numeric rows")
    if len({len(r) for r in rows}) != 1:
        return np.array([v for r in rows for v in r])
    return np.array(rows)
