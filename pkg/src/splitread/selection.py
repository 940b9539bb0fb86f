"""WAIC model scoring and the leave-one-predictor-out ablation.

WAIC is reported on the log-score scale (higher is better):
sum_i log E[p(y_i | theta)] minus the effective-parameter penalty
sum_i V[log p(y_i | theta)], with V the sample variance over posterior
draws (S - 1 denominator). Standard errors follow the usual pointwise
estimators, sqrt(n var(elpd_i)) and, for model differences, the variance
of the per-row elpd gaps against the best model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy.special import logsumexp

from .dataset import DesignMatrix
from .errors import ValidationError
from .inference import (
    ModelSpec,
    PosteriorDraws,
    SamplerConfig,
    sample_posterior,
    summarize,
)

RHAT_THRESHOLD = 1.05


def pointwise_loglik(draws: PosteriorDraws, matrix: DesignMatrix) -> np.ndarray:
    """Log Bernoulli likelihood of every row under every pooled draw,
    shape (samples, rows)."""
    if not draws.names or draws.names[0] != "intercept":
        raise ValidationError("draws must carry an intercept as first coefficient")
    predictors = draws.names[1:]
    X = matrix.predictor_matrix(predictors)
    beta = draws.pooled()
    if beta.shape[1] != X.shape[1] + 1:
        raise ValidationError("draw dimension does not match the design matrix")
    t = beta[:, :1] + beta[:, 1:] @ X.T  # (S, n)
    return matrix.y[None, :] * t - np.logaddexp(0.0, t)


@dataclass(frozen=True)
class WaicResult:
    waic: float
    p_waic: float
    se: float
    pointwise: np.ndarray  # per-row elpd contributions

    @property
    def n(self) -> int:
        return len(self.pointwise)


def waic(loglik: np.ndarray) -> WaicResult:
    """Score a pointwise log-likelihood array of shape (samples, rows)."""
    loglik = np.asarray(loglik, dtype=float)
    if loglik.ndim != 2:
        raise ValidationError("loglik must be a (samples, rows) array")
    n_samples, n_rows = loglik.shape
    if n_samples < 2:
        raise ValidationError("WAIC needs at least 2 posterior samples")
    lppd_i = logsumexp(loglik, axis=0) - math.log(n_samples)
    # Centering on the first draw keeps the variance of coincident draws
    # exactly zero (the mean of k identical floats can round).
    p_i = (loglik - loglik[0]).var(axis=0, ddof=1)
    elpd_i = lppd_i - p_i
    se = math.sqrt(n_rows * float(elpd_i.var())) if n_rows > 1 else 0.0
    return WaicResult(
        waic=float(elpd_i.sum()),
        p_waic=float(p_i.sum()),
        se=se,
        pointwise=elpd_i,
    )


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    rank: int
    waic: float
    p_waic: float
    d_waic: float
    se: float
    dse: float
    converged: bool = True


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]

    HEADER = ("predictor", "rank", "waic", "p_waic", "d_waic", "se", "dse", "flag")

    def row(self, name: str) -> ComparisonRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_csv_lines(self) -> list[str]:
        lines = [",".join(self.HEADER)]
        for r in self.rows:
            lines.append(
                ",".join(
                    [
                        r.name,
                        str(r.rank),
                        repr(r.waic),
                        repr(r.p_waic),
                        repr(r.d_waic),
                        repr(r.se),
                        repr(r.dse),
                        "" if r.converged else "rhat>1.05",
                    ]
                )
            )
        return lines

    def to_text_lines(self) -> list[str]:
        cells = [list(self.HEADER[:-1])]
        for r in self.rows:
            name = r.name if r.converged else r.name + " *"
            cells.append(
                [
                    name,
                    str(r.rank),
                    f"{r.waic:.3f}",
                    f"{r.p_waic:.3f}",
                    f"{r.d_waic:.3f}",
                    f"{r.se:.3f}",
                    f"{r.dse:.3f}",
                ]
            )
        widths = [max(len(row[j]) for row in cells) for j in range(len(cells[0]))]
        lines = []
        for row in cells:
            lines.append(
                "  ".join(
                    cell.ljust(w) if j == 0 else cell.rjust(w)
                    for j, (cell, w) in enumerate(zip(row, widths))
                ).rstrip()
            )
        if any(not r.converged for r in self.rows):
            lines.append("* convergence flagged (some R-hat above 1.05)")
        return lines


def compare(
    results: Mapping[str, WaicResult],
    converged: Mapping[str, bool] | None = None,
) -> ComparisonTable:
    """Rank models by WAIC (descending), with gaps and their standard
    errors against the top model. All models must be scored on the same
    rows."""
    if len(results) < 2:
        raise ValidationError("compare needs at least 2 models")
    sizes = {r.n for r in results.values()}
    if len(sizes) != 1:
        raise ValidationError("models were evaluated on different row sets")
    n = sizes.pop()
    order = sorted(results, key=lambda name: (-results[name].waic, name))
    top = results[order[0]]
    rows = []
    for rank, name in enumerate(order):
        res = results[name]
        if rank == 0:
            d_waic, dse = 0.0, 0.0
        else:
            diff = top.pointwise - res.pointwise
            d_waic = top.waic - res.waic
            dse = math.sqrt(n * float(diff.var())) if n > 1 else 0.0
        rows.append(
            ComparisonRow(
                name=name,
                rank=rank,
                waic=res.waic,
                p_waic=res.p_waic,
                d_waic=d_waic,
                se=res.se,
                dse=dse,
                converged=True if converged is None else converged.get(name, True),
            )
        )
    return ComparisonTable(rows=tuple(rows))


def ablate(
    matrix: DesignMatrix,
    full_spec: ModelSpec,
    config: SamplerConfig,
    sample_fn: Callable[[DesignMatrix, ModelSpec, SamplerConfig], PosteriorDraws] = sample_posterior,
) -> ComparisonTable:
    """Fit the full model plus one model per removed predictor and rank
    them by WAIC on identical rows. Fits whose R-hat exceeds 1.05 on any
    coefficient are flagged in the table rather than dropped."""
    if len(full_spec.predictors) < 2:
        raise ValidationError("ablation needs at least 2 predictors")
    specs: dict[str, ModelSpec] = {"base": full_spec}
    for predictor in full_spec.predictors:
        specs[predictor] = full_spec.without(predictor)
    results: dict[str, WaicResult] = {}
    converged: dict[str, bool] = {}
    for name, spec in specs.items():
        draws = sample_fn(matrix, spec, config)
        summary = summarize(draws)
        converged[name] = summary.converged(RHAT_THRESHOLD)
        results[name] = waic(pointwise_loglik(draws, matrix))
    return compare(results, converged)
