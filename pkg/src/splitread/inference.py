"""Bayesian logistic preference model fitted with Hamiltonian Monte Carlo.

The outcome of each design-matrix row is Bernoulli with
logit(lambda) = beta_0 + sum_i beta_i x_i, and every coefficient
(intercept included) carries an independent Normal(0, sd) prior. Sampling
uses plain HMC with leapfrog integration and dual-averaging step-size
adaptation during warmup (Hoffman & Gelman 2014, Algorithms 4-5);
convergence is checked with the Gelman-Rubin potential scale reduction
factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.special import expit

from .dataset import DesignMatrix
from .errors import ValidationError

_LOG_2PI = math.log(2.0 * math.pi)
_DIVERGENCE_ENERGY = 1000.0

# Dual-averaging constants.
_DA_GAMMA = 0.05
_DA_T0 = 10.0
_DA_KAPPA = 0.75


@dataclass(frozen=True)
class ModelSpec:
    """Named predictors plus the prior scale of every coefficient.

    ``prior_sd`` is either one scale shared by all coefficients or a
    mapping from coefficient name ('intercept' or a predictor) to its
    scale; unnamed coefficients fall back to 2.5.
    """

    predictors: tuple[str, ...]
    prior_sd: float | Mapping[str, float] = 2.5

    def __post_init__(self) -> None:
        if len(set(self.predictors)) != len(self.predictors):
            raise ValidationError("duplicate predictor names")
        for sd in self._sd_items():
            if sd <= 0:
                raise ValidationError("prior sds must be strictly positive")

    def _sd_items(self) -> list[float]:
        if isinstance(self.prior_sd, Mapping):
            return [self.prior_sd.get(n, 2.5) for n in self.coefficient_names()]
        return [float(self.prior_sd)] * (len(self.predictors) + 1)

    def coefficient_names(self) -> tuple[str, ...]:
        return ("intercept", *self.predictors)

    def sd_vector(self) -> np.ndarray:
        return np.asarray(self._sd_items(), dtype=float)

    def without(self, predictor: str) -> "ModelSpec":
        if predictor not in self.predictors:
            raise ValidationError(f"no such predictor {predictor!r}")
        return ModelSpec(
            predictors=tuple(p for p in self.predictors if p != predictor),
            prior_sd=self.prior_sd,
        )


@dataclass(frozen=True)
class SamplerConfig:
    chains: int = 4
    warmup: int = 1000
    draws: int = 1000
    seed: int = 0
    target_accept: float = 0.8
    num_steps: int = 32  # leapfrog path length, jittered +-20% per iteration

    def __post_init__(self) -> None:
        if self.chains < 2:
            raise ValidationError("at least 2 chains are required for R-hat")
        if self.warmup < 1 or self.draws < 2:
            raise ValidationError("need warmup >= 1 and draws >= 2")
        if not 0.0 < self.target_accept < 1.0:
            raise ValidationError("target_accept must lie in (0, 1)")
        if self.num_steps < 1:
            raise ValidationError("num_steps must be >= 1")


@dataclass
class PosteriorDraws:
    names: tuple[str, ...]
    draws: np.ndarray  # shape (chains, draws, coefficients)
    logp: np.ndarray  # shape (chains, draws)
    accept_rate: np.ndarray  # per chain, sampling phase
    divergences: int  # post-warmup count
    seed: int = 0

    @property
    def n_chains(self) -> int:
        return self.draws.shape[0]

    @property
    def n_draws(self) -> int:
        return self.draws.shape[1]

    def pooled(self) -> np.ndarray:
        return self.draws.reshape(-1, self.draws.shape[2])

    @property
    def divergence_warning(self) -> bool:
        kept = self.n_chains * self.n_draws
        return self.divergences > 0.01 * kept


def _logpost_arrays(
    beta: np.ndarray, X: np.ndarray, y: np.ndarray, prior_sd: np.ndarray
) -> tuple[float, np.ndarray]:
    t = beta[0] + X @ beta[1:]
    # log lik = sum y*t - log(1 + e^t), computed stably.
    loglik = float(y @ t - np.logaddexp(0.0, t).sum())
    z = beta / prior_sd
    logprior = float(
        -0.5 * (z @ z) - np.log(prior_sd).sum() - 0.5 * _LOG_2PI * beta.size
    )
    lam = expit(t)
    resid = y - lam
    grad = np.empty_like(beta)
    grad[0] = resid.sum()
    grad[1:] = X.T @ resid
    grad -= beta / prior_sd**2
    return loglik + logprior, grad


def log_posterior(
    beta: Sequence[float], matrix: DesignMatrix, spec: ModelSpec
) -> tuple[float, np.ndarray]:
    """Log joint density of the coefficients (up to no constant: the
    Normal and Bernoulli normalizers are included) and its gradient.

    ``beta`` holds the intercept followed by one coefficient per
    predictor of ``spec``, in order.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (len(spec.predictors) + 1,):
        raise ValidationError(
            f"beta must have length {len(spec.predictors) + 1}, got {beta.shape}"
        )
    if not np.all(np.isfinite(beta)):
        raise ValidationError("beta contains non-finite values")
    X = matrix.predictor_matrix(spec.predictors)
    return _logpost_arrays(beta, X, matrix.y, spec.sd_vector())


def _leapfrog(
    q: np.ndarray,
    p: np.ndarray,
    grad: np.ndarray,
    eps: float,
    n_steps: int,
    logpost: Callable[[np.ndarray], tuple[float, np.ndarray]],
) -> tuple[np.ndarray, np.ndarray, float, np.ndarray, bool]:
    q = q.copy()
    p = p + 0.5 * eps * grad
    lp = -math.inf
    for step in range(n_steps):
        q += eps * p
        lp, grad = logpost(q)
        if not np.all(np.isfinite(grad)) or not math.isfinite(lp):
            return q, p, -math.inf, grad, False
        if step < n_steps - 1:
            p += eps * grad
    p += 0.5 * eps * grad
    return q, p, lp, grad, True


def _find_reasonable_epsilon(
    q: np.ndarray,
    lp: float,
    grad: np.ndarray,
    logpost: Callable,
    rng: np.random.Generator,
) -> float:
    eps = 1.0
    p = rng.standard_normal(q.size)
    h0 = -lp + 0.5 * float(p @ p)

    def accept_ratio(eps: float) -> float:
        q1, p1, lp1, _, ok = _leapfrog(q, p, grad, eps, 1, logpost)
        if not ok:
            return 0.0
        h1 = -lp1 + 0.5 * float(p1 @ p1)
        return math.exp(min(0.0, h0 - h1))

    ratio = accept_ratio(eps)
    direction = 1.0 if ratio > 0.5 else -1.0
    for _ in range(50):
        if direction > 0 and ratio <= 0.5:
            break
        if direction < 0 and ratio >= 0.5:
            break
        eps *= 2.0**direction
        if not 1e-8 < eps < 1e4:
            break
        ratio = accept_ratio(eps)
    return eps


def sample_posterior(
    matrix: DesignMatrix, spec: ModelSpec, config: SamplerConfig
) -> PosteriorDraws:
    """Draw from the coefficient posterior with plain HMC.

    Chains run independently, each seeded with ``config.seed + chain``;
    results are deterministic for a fixed configuration. Warmup draws are
    discarded. Divergent transitions after warmup are counted and exposed
    on the result.
    """
    X = matrix.predictor_matrix(spec.predictors)
    y = matrix.y
    for name in spec.predictors:
        if np.ptp(matrix.column(name)) == 0.0:
            raise ValidationError(f"predictor {name!r} has zero variance")
    prior_sd = spec.sd_vector()
    dim = len(spec.predictors) + 1

    def logpost(beta: np.ndarray) -> tuple[float, np.ndarray]:
        return _logpost_arrays(beta, X, y, prior_sd)

    all_draws = np.empty((config.chains, config.draws, dim))
    all_logp = np.empty((config.chains, config.draws))
    accept_rates = np.empty(config.chains)
    divergences = 0

    for chain in range(config.chains):
        rng = np.random.default_rng(config.seed + chain)
        q = 0.1 * rng.standard_normal(dim)
        lp, grad = logpost(q)
        if not math.isfinite(lp):
            raise ValidationError("log posterior is not finite at initialization")
        eps = _find_reasonable_epsilon(q, lp, grad, logpost, rng)
        mu = math.log(10.0 * eps)
        h_bar = 0.0
        log_eps_bar = 0.0
        accepted_probs = []

        for it in range(config.warmup + config.draws):
            sampling = it >= config.warmup
            jitter = rng.uniform(0.8, 1.2)
            n_steps = max(1, round(config.num_steps * jitter))
            p0 = rng.standard_normal(dim)
            h0 = -lp + 0.5 * float(p0 @ p0)
            q1, p1, lp1, grad1, ok = _leapfrog(q, p0, grad, eps, n_steps, logpost)
            if ok:
                h1 = -lp1 + 0.5 * float(p1 @ p1)
                divergent = (h1 - h0) > _DIVERGENCE_ENERGY or not math.isfinite(h1)
                accept_prob = 0.0 if divergent else math.exp(min(0.0, h0 - h1))
            else:
                divergent = True
                accept_prob = 0.0
            if rng.uniform() < accept_prob:
                q, lp, grad = q1, lp1, grad1
            if sampling:
                idx = it - config.warmup
                all_draws[chain, idx] = q
                all_logp[chain, idx] = lp
                accepted_probs.append(accept_prob)
                divergences += int(divergent)
            else:
                t = it + 1
                h_bar = (1.0 - 1.0 / (t + _DA_T0)) * h_bar + (
                    config.target_accept - accept_prob
                ) / (t + _DA_T0)
                log_eps = mu - math.sqrt(t) / _DA_GAMMA * h_bar
                eta = t**-_DA_KAPPA
                log_eps_bar = eta * log_eps + (1.0 - eta) * log_eps_bar
                eps = math.exp(log_eps)
                if it == config.warmup - 1:
                    eps = math.exp(log_eps_bar)
        accept_rates[chain] = float(np.mean(accepted_probs))

    return PosteriorDraws(
        names=spec.coefficient_names(),
        draws=all_draws,
        logp=all_logp,
        accept_rate=accept_rates,
        divergences=divergences,
        seed=config.seed,
    )


def rhat(chains: np.ndarray) -> float:
    """Gelman-Rubin potential scale reduction factor.

    ``chains`` is an (m, n) array of one scalar sequence per chain. With
    between-chain variance B and mean within-chain variance W the factor
    is sqrt(((n-1)/n W + B/n) / W). Returns NaN (a diagnostic flag, not a
    value) when every chain has zero within variance.
    """
    x = np.asarray(chains, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise ValidationError("rhat needs >= 2 chains with >= 2 draws each")
    m, n = x.shape
    w = float(x.var(axis=1, ddof=1).mean())
    b = n * float(x.mean(axis=1).var(ddof=1))
    if w == 0.0:
        return math.nan
    return math.sqrt(((n - 1) / n * w + b / n) / w)


@dataclass(frozen=True)
class CoefficientSummary:
    name: str
    mean: float
    sd: float
    hdi_low: float
    hdi_high: float
    rhat: float


@dataclass(frozen=True)
class PosteriorSummary:
    rows: tuple[CoefficientSummary, ...]
    histograms: dict[str, tuple[np.ndarray, np.ndarray]]  # name -> (edges, counts)

    def row(self, name: str) -> CoefficientSummary:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def max_rhat(self) -> float:
        return max(r.rhat for r in self.rows)

    def converged(self, threshold: float = 1.05) -> bool:
        # NaN R-hat (zero-variance chains) counts as a failure.
        return all(r.rhat <= threshold for r in self.rows)


def _hdi(samples: np.ndarray, prob: float) -> tuple[float, float]:
    xs = np.sort(samples)
    n = len(xs)
    span = max(1, int(math.floor(prob * n)))
    if span >= n:
        return float(xs[0]), float(xs[-1])
    widths = xs[span:] - xs[: n - span]
    i = int(np.argmin(widths))
    return float(xs[i]), float(xs[i + span])


def summarize(
    draws: PosteriorDraws, hdi_prob: float = 0.94, bins: int = 40
) -> PosteriorSummary:
    """Posterior mean, sd, highest-density interval and R-hat per
    coefficient, plus histogram data suitable for plotting."""
    rows = []
    histograms: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for j, name in enumerate(draws.names):
        pooled = draws.draws[:, :, j].reshape(-1)
        low, high = _hdi(pooled, hdi_prob)
        counts, edges = np.histogram(pooled, bins=bins)
        histograms[name] = (edges, counts)
        rows.append(
            CoefficientSummary(
                name=name,
                mean=float(pooled.mean()),
                sd=float(pooled.std(ddof=1)),
                hdi_low=low,
                hdi_high=high,
                rhat=rhat(draws.draws[:, :, j]),
            )
        )
    return PosteriorSummary(rows=tuple(rows), histograms=histograms)


def draws_to_csv(draws: PosteriorDraws, path: str | Path, header_comment: str = "") -> None:
    """Persist draws as CSV with columns (chain, draw, coefficients..., lp)."""
    lines = []
    if header_comment:
        lines.append(header_comment.rstrip("\n"))
    lines.append(",".join(["chain", "draw", *draws.names, "lp"]))
    for c in range(draws.n_chains):
        for d in range(draws.n_draws):
            values = [repr(float(v)) for v in draws.draws[c, d]]
            lines.append(
                ",".join([str(c), str(d), *values, repr(float(draws.logp[c, d]))])
            )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
