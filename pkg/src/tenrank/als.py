"""Alternating least squares over complex floats: the numeric rank-search
backend.

This is the one deliberately inexact corner of the package: factors are
complex128 numpy arrays and results are promoted to exact witnesses only
through the rationalization pass in `tenrank.decomp`.  Restarts are
independent given (seed, restart index), so they can run in any order or
concurrently; the merged outcome is deterministic because ties are broken
by restart index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class AlsConfig:
    restarts: int = 20
    max_sweeps: int = 2000
    tol: float = 1e-8
    seed: int = 0
    ridge: float = 1e-12
    #: a sweep improving the relative residual by less than this counts as
    #: converged-or-stalled and stops the restart
    stall_improvement: float = 1e-12
    #: border-rank symptom threshold: max rank-1 term norm relative to the
    #: tensor norm (diverging, mutually cancelling terms grow past this
    #: while bounded optima stay well below 1)
    border_term_ratio: float = 2.0

    def validate(self) -> None:
        if self.restarts < 1 or self.max_sweeps < 1:
            raise InputError("restarts and max_sweeps must be positive")
        if not (self.tol > 0):
            raise InputError("tol must be positive")
        if self.ridge < 0:
            raise InputError("ridge must be nonnegative")


@dataclass
class AlsResult:
    found: bool
    residual: float
    border_flag: bool
    factors: list = field(repr=False)  # [A (dA,r), B (dB,r), C (dC,r)]
    restart: int = 0
    sweeps: int = 0

    @property
    def rank(self) -> int:
        return self.factors[0].shape[1]


def _khatri_rao(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    r = x.shape[1]
    return (x[:, None, :] * y[None, :, :]).reshape(-1, r)


def _reconstruct(factors) -> np.ndarray:
    a, b, c = factors
    return np.einsum("ir,jr,kr->ijk", a, b, c)


def _max_term_norm(factors) -> float:
    norms = [np.linalg.norm(f, axis=0) for f in factors]
    return float(np.max(norms[0] * norms[1] * norms[2]))


def _single_restart(arr: np.ndarray, r: int, cfg: AlsConfig, restart: int):
    rng = np.random.default_rng([cfg.seed, restart])
    dims = arr.shape
    factors = [
        rng.uniform(-1.0, 1.0, (d, r)) + 1j * rng.uniform(-1.0, 1.0, (d, r))
        for d in dims
    ]
    norm_t = np.linalg.norm(arr)
    if norm_t == 0.0:
        return 0.0, factors, 0, True
    unfoldings = [np.moveaxis(arr, m, 0).reshape(dims[m], -1) for m in range(3)]
    eye = np.eye(r)
    prev = np.inf
    stalled = False
    sweeps = 0
    residual = np.inf
    for sweep in range(cfg.max_sweeps):
        for mode in range(3):
            others = [factors[m] for m in range(3) if m != mode]
            k = _khatri_rao(others[0], others[1])
            gram = (others[0].conj().T @ others[0]) * (others[1].conj().T @ others[1])
            rhs = unfoldings[mode] @ np.conj(k)
            try:
                factors[mode] = np.linalg.solve(gram + cfg.ridge * eye, rhs.T).T
            except np.linalg.LinAlgError:
                factors[mode] = np.linalg.lstsq(gram + cfg.ridge * eye, rhs.T,
                                                rcond=None)[0].T
        residual = float(np.linalg.norm(_reconstruct(factors) - arr) / norm_t)
        sweeps = sweep + 1
        if residual <= cfg.tol:
            break
        if prev - residual < cfg.stall_improvement:
            stalled = True
            break
        prev = residual
    return residual, factors, sweeps, stalled


def als_decompose(arr: np.ndarray, r: int, cfg: AlsConfig | None = None) -> AlsResult:
    """Search for a rank-r float decomposition of a dense complex array.

    Runs all cfg.restarts independent ALS restarts and keeps the smallest
    residual (ties: lowest restart index).  `found` means relative residual
    <= cfg.tol.  When the search fails, `border_flag` reports the classic
    border-rank symptom: the best restart exhausted its sweeps with the
    residual still improving while rank-1 terms grew far beyond the tensor
    norm (mutually cancelling diverging terms).
    """
    cfg = cfg or AlsConfig()
    cfg.validate()
    if r < 1:
        raise InputError("rank must be >= 1")
    if arr.ndim != 3:
        raise InputError("als_decompose expects an order-3 array")
    if not np.all(np.isfinite(arr)):
        raise InputError("tensor contains non-finite values")

    # every restart runs; merging by (residual, restart index) keeps the
    # outcome independent of execution order, so restarts can parallelize
    best = None
    for restart in range(cfg.restarts):
        residual, factors, sweeps, stalled = _single_restart(arr, r, cfg, restart)
        if best is None or residual < best[0]:
            best = (residual, factors, sweeps, stalled, restart)
    residual, factors, sweeps, stalled, restart = best
    found = residual <= cfg.tol
    border = False
    if not found:
        norm_t = float(np.linalg.norm(arr))
        diverging = norm_t > 0 and (
            _max_term_norm(factors) > cfg.border_term_ratio * norm_t
        )
        border = (not stalled) and diverging
    return AlsResult(
        found=found,
        residual=residual,
        border_flag=border,
        factors=factors,
        restart=restart,
        sweeps=sweeps,
    )
