"""Multiplicative-update NMF solvers.

Three variants of the X ~ W @ H model with W (m, k) basis columns and
H (k, n) per-sample coefficients:

* ``solve_l2``  minimizes the squared Frobenius reconstruction error.
* ``solve_l21`` minimizes the sum of per-sample residual norms; every
  iteration reweights samples by the inverse of their current residual,
  so badly-fit columns pull less on the basis than under the squared
  loss.
* ``solve_l1``  additionally estimates a signed noise matrix E = Ep - En
  (both parts non-negative) with a sparsity penalty on the per-column
  noise mass, keeping X - E entrywise non-negative so that W @ H tracks
  the clean part of the data.

All solvers run a fixed number of iterations, guard every denominator
with a small epsilon, and are deterministic for a fixed seed.  An
optional ``iteration_hook(iteration=..., step=..., **state)`` is invoked
after each update step with live (uncopied) arrays for inspection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

IterationHook = Callable[..., None]

_INIT_FLOOR = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 200
    epsilon: float = 1e-9
    seed: int = 0
    record_objective_every: int = 1

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.record_objective_every < 1:
            raise ValueError("record_objective_every must be >= 1")


@dataclass
class FactorizationResult:
    """Factors plus bookkeeping from one solver run.

    E is the estimated corruption (L1 solver only, None otherwise).
    objective_history starts with the objective of the initial factors
    and then holds one value per recorded iteration.
    """

    W: np.ndarray
    H: np.ndarray
    E: Optional[np.ndarray]
    objective_history: list[float]
    iterations_run: int


def _positive_uniform(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return _INIT_FLOOR + (1.0 - _INIT_FLOOR) * rng.random(shape)


def init_factors(m: int, n: int, k: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded strictly-positive uniform starting factors W (m,k), H (k,n)."""
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k={k} out of range for a {m}x{n} matrix")
    rng = np.random.default_rng(seed)
    W = _positive_uniform(rng, (m, k))
    H = _positive_uniform(rng, (k, n))
    return W, H


def _validated(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix")
    if not np.isfinite(X).all():
        raise ValueError("X contains non-finite entries")
    if X.size and X.min() < 0.0:
        raise ValueError("X must be entrywise non-negative")
    return X


def _notify(hook: Optional[IterationHook], iteration: int, step: str, **state) -> None:
    if hook is not None:
        hook(iteration=iteration, step=step, **state)


def reconstruct(result: FactorizationResult) -> np.ndarray:
    """Clean-data reconstruction W @ H (the noise estimate E is excluded)."""
    return result.W @ result.H


def solve_l2(
    X: np.ndarray,
    k: int,
    cfg: SolverConfig = SolverConfig(),
    iteration_hook: Optional[IterationHook] = None,
) -> FactorizationResult:
    """Classic alternating multiplicative updates for min ||X - WH||_F^2.

    Per iteration: W <- W * (X Ht) / (W H Ht + eps), then
    H <- H * (Wt X) / (Wt W H + eps).  The recorded objective is the
    squared Frobenius reconstruction error.
    """
    X = _validated(X)
    m, n = X.shape
    W, H = init_factors(m, n, k, cfg.seed)
    eps = cfg.epsilon

    def objective() -> float:
        R = X - W @ H
        return float((R * R).sum())

    history = [objective()]
    for it in range(1, cfg.max_iters + 1):
        W *= (X @ H.T) / (W @ (H @ H.T) + eps)
        _notify(iteration_hook, it, "w", W=W, H=H)
        H *= (W.T @ X) / ((W.T @ W) @ H + eps)
        _notify(iteration_hook, it, "h", W=W, H=H)
        if it % cfg.record_objective_every == 0 or it == cfg.max_iters:
            history.append(objective())
    return FactorizationResult(W=W, H=H, E=None, objective_history=history,
                               iterations_run=cfg.max_iters)


def solve_l21(
    X: np.ndarray,
    k: int,
    cfg: SolverConfig = SolverConfig(),
    iteration_hook: Optional[IterationHook] = None,
) -> FactorizationResult:
    """Column-robust multiplicative updates for min sum_i ||x_i - W h_i||.

    Each iteration first forms the diagonal sample weights
    omega_i = 1 / max(||x_i - W h_i||, eps) from the current residuals,
    then applies W <- W * (X Om Ht) / (W H Om Ht + eps) and
    H <- H * (Wt X Om) / (Wt W H Om + eps).  The recorded objective is the
    sum of per-column residual norms (the L2,1 norm of the residual).
    """
    X = _validated(X)
    m, n = X.shape
    W, H = init_factors(m, n, k, cfg.seed)
    eps = cfg.epsilon

    def objective() -> float:
        R = X - W @ H
        return float(np.sqrt((R * R).sum(axis=0)).sum())

    history = [objective()]
    for it in range(1, cfg.max_iters + 1):
        residual_norms = np.sqrt(((X - W @ H) ** 2).sum(axis=0))
        omega = 1.0 / np.maximum(residual_norms, eps)
        _notify(iteration_hook, it, "omega", W=W, H=H, omega=omega)
        W *= ((X * omega) @ H.T) / (W @ ((H * omega) @ H.T) + eps)
        _notify(iteration_hook, it, "w", W=W, H=H, omega=omega)
        H *= ((W.T @ X) * omega) / (((W.T @ W) @ H) * omega + eps)
        _notify(iteration_hook, it, "h", W=W, H=H, omega=omega)
        if it % cfg.record_objective_every == 0 or it == cfg.max_iters:
            history.append(objective())
    return FactorizationResult(W=W, H=H, E=None, objective_history=history,
                               iterations_run=cfg.max_iters)


def solve_l1(
    X: np.ndarray,
    k: int,
    lam: float = 0.1,
    cfg: SolverConfig = SolverConfig(),
    iteration_hook: Optional[IterationHook] = None,
) -> FactorizationResult:
    """Robust factorization X ~ W @ H + E with a penalized noise estimate.

    The noise is kept as E = Ep - En with Ep, En >= 0.  One iteration:

    1. update W against the noise-corrected data
       W <- W * (max(X - E, 0) Ht) / (W H Ht + eps);
    2. update H, Ep and En simultaneously through the augmented system
       built from U~ = [[W, I, -I], [0, sqrt(lam) 1, sqrt(lam) 1]],
       X~ = [X; 0] and S = |U~t U~|:
       V~ <- max(0, V~ - V~ (U~t U~ V~)/(S V~ + eps)
                      + V~ (U~t X~)/(S V~ + eps))
       for the stacked V~ = [H; Ep; En];
    3. clamp E so X - E stays entrywise non-negative (at violating
       entries Ep := X and En := 0, which sets E = X there exactly).

    The augmented products are evaluated blockwise; the (m+1) x (k+2m)
    matrices are never materialized.  S folds the penalty
    lam * sum_j (||Ep_j||_1 + ||En_j||_1)^2 into rank-one column-sum
    terms, which is what the lam * s broadcasts below implement.  The
    recorded objective is ||X - WH - E||_F^2 plus that penalty.
    """
    if lam <= 0.0:
        raise ValueError("lambda must be positive")
    X = _validated(X)
    m, n = X.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k={k} out of range for a {m}x{n} matrix")
    rng = np.random.default_rng(cfg.seed)
    # same draw order as init_factors, so W and H match the other solvers
    W = _positive_uniform(rng, (m, k))
    H = _positive_uniform(rng, (k, n))
    Ep = _positive_uniform(rng, (m, n))
    En = _positive_uniform(rng, (m, n))
    eps = cfg.epsilon
    # |.| of the off-diagonal identity blocks of U~t U~: diag |lam-1|, rest lam
    cross_diag = abs(lam - 1.0) - lam

    def clamp_noise(Ep: np.ndarray, En: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        E = Ep - En
        viol = E > X
        if viol.any():
            Ep = np.where(viol, X, Ep)
            En = np.where(viol, 0.0, En)
            E = Ep - En
        return Ep, En, E

    Ep, En, E = clamp_noise(Ep, En)

    def objective() -> float:
        s = Ep.sum(axis=0) + En.sum(axis=0)
        R = X - W @ H - E
        return float((R * R).sum()) + lam * float((s * s).sum())

    history = [objective()]
    for it in range(1, cfg.max_iters + 1):
        Xhat = np.maximum(X - E, 0.0)
        W *= (Xhat @ H.T) / (W @ (H @ H.T) + eps)
        _notify(iteration_hook, it, "w", W=W, H=H, Ep=Ep, En=En, E=E)

        WH = W @ H
        WtW = W.T @ W
        lam_s = lam * (Ep.sum(axis=0) + En.sum(axis=0))  # broadcasts over rows
        num_h = WtW @ H + W.T @ E
        num_p = WH + E + lam_s
        num_n = lam_s - WH - E
        den_h = WtW @ H + W.T @ (Ep + En) + eps
        den_p = WH + Ep + cross_diag * En + lam_s + eps
        den_n = WH + cross_diag * Ep + En + lam_s + eps
        H = np.maximum(0.0, H - H * num_h / den_h + H * (W.T @ X) / den_h)
        Ep_new = np.maximum(0.0, Ep - Ep * num_p / den_p + Ep * X / den_p)
        En_new = np.maximum(0.0, En - En * num_n / den_n + En * (-X) / den_n)
        Ep, En = Ep_new, En_new
        _notify(iteration_hook, it, "v", W=W, H=H, Ep=Ep, En=En, E=Ep - En)

        Ep, En, E = clamp_noise(Ep, En)
        _notify(iteration_hook, it, "project", W=W, H=H, Ep=Ep, En=En, E=E)

        if it % cfg.record_objective_every == 0 or it == cfg.max_iters:
            history.append(objective())
    return FactorizationResult(W=W, H=H, E=E, objective_history=history,
                               iterations_run=cfg.max_iters)
