"""Mean and concentration estimation for colored Gaussian models.

The log-likelihood of n observations with mean mu and concentration K is,
up to the additive constant -n|V|/2 * log(2*pi) which is dropped from
every value reported here,

    l(mu, K) = (n/2) log det K - (1/2) sum_i (y_i - mu)' K (y_i - mu).

For fixed K the maximizer over a block-constant mean space is a weighted
projection of the sample average; when the mean space is invariant under
every K of the model the weights drop out and the maximizer is the plain
least-squares projection, independent of K.  ``fit_model`` dispatches on
that combinatorial condition: a closed-form branch when it holds, and a
blockwise ascent alternating between the mean and K otherwise.

Concentration fitting is Fisher scoring on the class coefficients theta
(the natural parameters of a linear exponential family):

    score_u  = (n/2) tr(T_u K^-1) - tr(T_u W) / 2
    info_uv  = (n/2) tr(T_u K^-1 T_v K^-1)

with step halving to keep K positive definite and the likelihood
nondecreasing.
"""

import warnings
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np
from scipy.stats import chi2

from .colored_graph import (
    ColoredGraph,
    Partition,
    all_generator_matrices,
    is_finer,
    mean_space_basis,
)
from .errors import (
    ColumnMismatch,
    DegenerateW,
    DimensionMismatch,
    GroundMismatch,
    InternalInconsistency,
    NonNestedModels,
    NotConverged,
    SingularProjection,
    ValidationError,
)
from .model_space import ConcentrationPoint, RconParameters, is_positive_definite

LOGLIK_NOTE = "log-likelihoods omit the -(n|V|/2) log(2 pi) constant"


@dataclass(frozen=True)
class Dataset:
    """n observation rows over named variables, in column order
    ``variable_names``."""

    variable_names: tuple[str, ...]
    rows: np.ndarray = field(compare=False)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(self.variable_names):
            raise ValidationError(
                f"rows shape {rows.shape} does not match {len(self.variable_names)} variables"
            )
        if rows.shape[0] < 2:
            raise ValidationError("need at least two observations")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise ValidationError("duplicate variable names")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    def mean(self) -> np.ndarray:
        return self.rows.mean(axis=0)

    def reordered(self, names: Iterable[str]) -> "Dataset":
        """Same data with columns rearranged to ``names``."""
        names = tuple(names)
        missing = set(names) - set(self.variable_names)
        if missing:
            raise ColumnMismatch(f"data is missing columns {sorted(missing)}")
        cols = [self.variable_names.index(v) for v in names]
        return Dataset(variable_names=names, rows=self.rows[:, cols])


@dataclass(frozen=True)
class SspMatrix:
    """Residual sum-of-squares-and-products matrix around a fixed mean."""

    w: np.ndarray = field(compare=False)
    n: int = 0
    mean_used: np.ndarray = field(compare=False, default=None)


@dataclass(frozen=True)
class FitOptions:
    grad_tol: float = 1e-8
    lik_tol: float = 1e-10
    max_iter: int = 200
    max_alternations: int = 500
    force_alternating: bool = False


@dataclass(frozen=True)
class ModelFit:
    """A fitted mean/concentration pair with its diagnostics."""

    mu_hat: np.ndarray = field(compare=False)
    k_hat: ConcentrationPoint
    theta_hat: RconParameters
    loglik: float
    mean_dim: int
    iterations: int
    converged: bool
    method_tag: str
    mean_partition: Partition
    graph: ColoredGraph
    n_obs: int


@dataclass(frozen=True)
class LrtResult:
    statistic: float
    df: int
    p_value: float


class ConcentrationFit(NamedTuple):
    params: RconParameters
    point: ConcentrationPoint
    loglik: float
    iterations: int
    converged: bool


def _column_indices(m: Partition, names: tuple[str, ...]) -> list[list[int]]:
    if frozenset(m.ground) != frozenset(names):
        raise GroundMismatch("partition does not cover the variable names")
    idx = {v: i for i, v in enumerate(names)}
    return [[idx[v] for v in block] for block in m.blocks]


def ls_mean(d: Dataset, m: Partition) -> np.ndarray:
    """Least-squares estimate of a block-constant mean: the orthogonal
    projection of the sample average, i.e. blockwise averaging."""
    ybar = d.mean()
    out = np.empty_like(ybar)
    for cols in _column_indices(m, d.variable_names):
        out[cols] = float(np.mean(ybar[cols]))
    return out


def gls_mean(k, d: Dataset, m: Partition) -> np.ndarray:
    """Likelihood-maximizing block-constant mean for a fixed concentration.

    Solves the weighted projection B (B'KB)^-1 B'K ybar with B the
    indicator basis of the mean space.
    """
    kmat = np.asarray(getattr(k, "matrix", k), dtype=float)
    p = len(d.variable_names)
    if kmat.shape != (p, p):
        raise DimensionMismatch(f"concentration shape {kmat.shape}, expected ({p}, {p})")
    b = mean_space_basis(m, order=d.variable_names).basis_matrix
    normal = b.T @ kmat @ b
    try:
        coef = np.linalg.solve(normal, b.T @ (kmat @ d.mean()))
    except np.linalg.LinAlgError as exc:
        raise SingularProjection("projection system is singular") from exc
    return b @ coef


def residual_ssp(d: Dataset, mu: np.ndarray) -> SspMatrix:
    """Sum of outer products of the residuals around ``mu``."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (len(d.variable_names),):
        raise DimensionMismatch(f"mean shape {mu.shape}, expected ({len(d.variable_names)},)")
    r = d.rows - mu
    w = r.T @ r
    return SspMatrix(w=(w + w.T) / 2, n=d.n, mean_used=mu.copy())


def profile_loglik(k, w: SspMatrix) -> float:
    """(n/2) log det K - tr(KW)/2; additive constants dropped."""
    kmat = _concentration_matrix(k, w.w.shape[0])
    sign, logdet = np.linalg.slogdet(kmat)
    if sign <= 0:
        raise ValidationError("log-likelihood needs a positive definite concentration")
    return float(w.n / 2 * logdet - np.sum(kmat * w.w) / 2)


def _concentration_matrix(k, p: int) -> np.ndarray:
    kmat = np.asarray(getattr(k, "matrix", k), dtype=float)
    if kmat.shape != (p, p):
        raise DimensionMismatch(f"concentration shape {kmat.shape}, expected ({p}, {p})")
    return kmat


def fit_rcon_concentration(
    w: SspMatrix, g: ColoredGraph, opts: FitOptions | None = None
) -> ConcentrationFit:
    """Maximize the profile likelihood over the class coefficients.

    Fisher scoring with step halving; stops when the score's infinity
    norm drops below ``grad_tol``.  Raises ``NotConverged`` after
    ``max_iter`` rounds and ``DegenerateW`` when W is not usable.
    """
    opts = opts or FitOptions()
    p = len(g.graph.vertices)
    if w.w.shape != (p, p):
        raise DimensionMismatch(f"W shape {w.w.shape}, expected ({p}, {p})")
    if not is_positive_definite(w.w):
        raise DegenerateW("W is singular; concentration MLE does not exist")
    if w.n - 1 < p:
        warnings.warn(
            f"only {w.n} observations for {p} variables; W may be unstable",
            stacklevel=2,
        )

    tmats = [t.entries for t in all_generator_matrices(g)]
    n_vertex = len(g.vertex_classes)
    n = w.n

    diag_init = np.diag(n * np.linalg.inv(w.w))
    idx = {v: i for i, v in enumerate(g.graph.vertices)}
    theta = np.zeros(len(tmats))
    for ci, block in enumerate(g.vertex_classes):
        theta[ci] = float(np.mean(diag_init[[idx[v] for v in block]]))
    if np.min(theta[:n_vertex]) <= 0:
        theta[:n_vertex] += abs(np.min(theta[:n_vertex])) + 1.0

    def k_of(th: np.ndarray) -> np.ndarray:
        out = np.zeros((p, p))
        for coef, t in zip(th, tmats):
            out += coef * t
        return out

    def loglik_of(kmat: np.ndarray) -> float:
        sign, logdet = np.linalg.slogdet(kmat)
        if sign <= 0:
            return -np.inf
        return float(n / 2 * logdet - np.sum(kmat * w.w) / 2)

    k = k_of(theta)
    ll = loglik_of(k)
    for iteration in range(1, opts.max_iter + 1):
        kinv = np.linalg.inv(k)
        score = np.array([n / 2 * np.sum(t * kinv) - np.sum(t * w.w) / 2 for t in tmats])
        if float(np.max(np.abs(score))) <= opts.grad_tol:
            params = RconParameters(tuple(theta[:n_vertex]), tuple(theta[n_vertex:]))
            point = ConcentrationPoint(matrix=k, space_tag="rcon", source_params=params)
            return ConcentrationFit(params, point, ll, iteration - 1, True)

        prods = [t @ kinv for t in tmats]
        info = np.array(
            [[n / 2 * np.sum(mi * mj.T) for mj in prods] for mi in prods]
        )
        try:
            step = np.linalg.solve(info, score)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(info, score, rcond=None)[0]

        lam = 1.0
        for _ in range(60):
            cand = theta + lam * step
            k_cand = k_of(cand)
            ll_cand = loglik_of(k_cand) if is_positive_definite(k_cand) else -np.inf
            if ll_cand >= ll - 1e-12:
                theta, k, ll = cand, k_cand, ll_cand
                break
            lam /= 2
        else:
            raise NotConverged("step halving stalled away from a stationary point")

    raise NotConverged(f"score above {opts.grad_tol} after {opts.max_iter} iterations")


def fit_model(
    d: Dataset, g: ColoredGraph, m: Partition, opts: FitOptions | None = None
) -> ModelFit:
    """Joint MLE of a block-constant mean and a colored concentration.

    Uses the closed-form mean (blockwise average, then one concentration
    fit) when the estimability condition holds, and otherwise alternates
    weighted mean updates with concentration fits until the joint
    log-likelihood gain falls below ``lik_tol``.
    """
    from .regularity import mean_mle_equals_ls

    opts = opts or FitOptions()
    d = d.reordered(g.graph.vertices)
    verdict = mean_mle_equals_ls(g, m)

    if verdict.holds and not opts.force_alternating:
        mu = ls_mean(d, m)
        cfit = fit_rcon_concentration(residual_ssp(d, mu), g, opts)
        return ModelFit(
            mu_hat=mu,
            k_hat=cfit.point,
            theta_hat=cfit.params,
            loglik=cfit.loglik,
            mean_dim=len(m.blocks),
            iterations=cfit.iterations,
            converged=cfit.converged,
            method_tag="closed_form_mean",
            mean_partition=m,
            graph=g,
            n_obs=d.n,
        )

    mu = ls_mean(d, m)
    prev_ll = -np.inf
    cfit = None
    converged = False
    alternations = 0
    for alternations in range(1, opts.max_alternations + 1):
        cfit = fit_rcon_concentration(residual_ssp(d, mu), g, opts)
        if cfit.loglik - prev_ll < opts.lik_tol:
            converged = True
            break
        prev_ll = cfit.loglik
        mu = gls_mean(cfit.point, d, m)
    return ModelFit(
        mu_hat=mu,
        k_hat=cfit.point,
        theta_hat=cfit.params,
        loglik=cfit.loglik,
        mean_dim=len(m.blocks),
        iterations=alternations,
        converged=converged,
        method_tag="alternating",
        mean_partition=m,
        graph=g,
        n_obs=d.n,
    )


def lr_test(null_fit: ModelFit, alt_fit: ModelFit) -> LrtResult:
    """Likelihood ratio test of a coarser mean partition against a finer
    one, over the same data and colored concentration model.

    The statistic 2(l_alt - l_null) is referred to the chi-square
    distribution with df equal to the difference in mean dimensions
    (asymptotic approximation).
    """
    if null_fit.graph != alt_fit.graph:
        raise NonNestedModels("fits use different concentration models")
    if null_fit.n_obs != alt_fit.n_obs:
        raise NonNestedModels("fits use different numbers of observations")
    if not is_finer(alt_fit.mean_partition, null_fit.mean_partition):
        raise NonNestedModels("null mean partition must be coarser than the alternative")

    statistic = 2 * (alt_fit.loglik - null_fit.loglik)
    if statistic < -1e-8:
        raise InternalInconsistency(
            f"nested maximum smaller than restricted maximum (statistic {statistic})"
        )
    df = alt_fit.mean_dim - null_fit.mean_dim
    if df == 0:
        p_value = 1.0
    else:
        p_value = float(chi2.sf(max(statistic, 0.0), df))
    return LrtResult(statistic=float(statistic), df=df, p_value=p_value)
