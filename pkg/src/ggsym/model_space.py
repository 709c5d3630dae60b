"""Concentration-matrix spaces of colored graphs: assembly, membership,
random sampling, and the mean-space invariance oracle.

Two spaces per coloring.  The first constrains entries of K directly:
equal diagonal within a vertex class, equal off-diagonal within an edge
class, zero off the graph.  The second constrains the diagonal the same
way but equates partial correlations -k_ab / sqrt(k_aa k_bb) within edge
classes instead of the raw entries.

All parameter records are aligned with the canonical class order of the
coloring: ``vertex_classes`` first, then ``edge_classes``, each in
canonical block order.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .colored_graph import (
    ColoredGraph,
    Partition,
    all_generator_matrices,
    mean_space_basis,
)
from .errors import (
    DimensionMismatch,
    GroundMismatch,
    MissingParameter,
    NotPositiveDefinite,
    SamplingExhausted,
)

PD_TOLERANCE = 1e-10
MEMBERSHIP_TOL = 1e-8
RNG_ALGORITHM = "numpy-pcg64"


def _cholesky_pivots(k: np.ndarray) -> np.ndarray | None:
    """Diagonal pivots of the Cholesky factorization, or None if it fails."""
    try:
        chol = np.linalg.cholesky(k)
    except np.linalg.LinAlgError:
        return None
    return np.diag(chol) ** 2


def is_positive_definite(k: np.ndarray, pd_tol: float = PD_TOLERANCE) -> bool:
    pivots = _cholesky_pivots(np.asarray(k, dtype=float))
    return pivots is not None and bool(np.min(pivots) > pd_tol)


@dataclass(frozen=True)
class RconParameters:
    """One coefficient per color class.

    ``vertex[i]`` belongs to ``g.vertex_classes[i]`` (inverse variances),
    ``edge[j]`` to ``g.edge_classes[j]`` (inverse covariances).
    """

    vertex: tuple[float, ...]
    edge: tuple[float, ...]


@dataclass(frozen=True)
class RcorParameters:
    """Inverse partial standard deviations per vertex class (``a``, all
    positive) and negative partial correlations per edge class (``c``,
    each in (-1, 1))."""

    a: tuple[float, ...]
    c: tuple[float, ...]


@dataclass(frozen=True)
class ConcentrationPoint:
    """A positive definite concentration matrix, tagged with the space
    it was built in, indexed by the coloring's vertex order."""

    matrix: np.ndarray = field(compare=False)
    space_tag: str
    source_params: RconParameters | RcorParameters | None = None

    def __post_init__(self):
        if self.space_tag not in ("rcon", "rcor"):
            raise ValueError(f"unknown space tag {self.space_tag!r}")
        if not is_positive_definite(self.matrix):
            raise NotPositiveDefinite("concentration matrix is not positive definite")


def _as_matrix(k) -> np.ndarray:
    return np.asarray(getattr(k, "matrix", k), dtype=float)


def _rcon_matrix(g: ColoredGraph, p: RconParameters) -> np.ndarray:
    tmats = all_generator_matrices(g)
    coeffs = tuple(p.vertex) + tuple(p.edge)
    if len(p.vertex) != len(g.vertex_classes) or len(p.edge) != len(g.edge_classes):
        raise MissingParameter(
            f"expected {len(g.vertex_classes)} vertex and {len(g.edge_classes)} edge "
            f"coefficients, got {len(p.vertex)} and {len(p.edge)}"
        )
    n = len(g.graph.vertices)
    k = np.zeros((n, n))
    for coef, t in zip(coeffs, tmats):
        k += coef * t.entries
    return k


def assemble_rcon(g: ColoredGraph, p: RconParameters) -> ConcentrationPoint:
    """K as the class-indicator combination sum_u theta_u T_u."""
    return ConcentrationPoint(matrix=_rcon_matrix(g, p), space_tag="rcon", source_params=p)


def _rcor_matrix(g: ColoredGraph, p: RcorParameters) -> np.ndarray:
    if len(p.a) != len(g.vertex_classes) or len(p.c) != len(g.edge_classes):
        raise MissingParameter(
            f"expected {len(g.vertex_classes)} a-values and {len(g.edge_classes)} "
            f"c-values, got {len(p.a)} and {len(p.c)}"
        )
    if any(av <= 0 for av in p.a):
        raise MissingParameter("a-values must be positive")
    n = len(g.graph.vertices)
    idx = {v: i for i, v in enumerate(g.graph.vertices)}
    a_diag = np.zeros(n)
    for av, block in zip(p.a, g.vertex_classes):
        for v in block:
            a_diag[idx[v]] = av
    c = np.eye(n)
    for cu, block in zip(p.c, g.edge_classes):
        for x, y in block:
            c[idx[x], idx[y]] = c[idx[y], idx[x]] = cu
    return (a_diag[:, None] * c) * a_diag[None, :]


def assemble_rcor(g: ColoredGraph, p: RcorParameters) -> ConcentrationPoint:
    """K = A C A with A the diagonal of a-values and C the unit-diagonal
    matrix of c-values placed on the graph's edges."""
    return ConcentrationPoint(matrix=_rcor_matrix(g, p), space_tag="rcor", source_params=p)


def _check_square(k: np.ndarray, n: int):
    if k.shape != (n, n):
        raise DimensionMismatch(f"matrix shape {k.shape}, expected ({n}, {n})")


def _spread(values: Sequence[float]) -> float:
    return float(np.max(values) - np.min(values))


def _offgraph_ok(k: np.ndarray, g: ColoredGraph, tol: float) -> bool:
    n = len(g.graph.vertices)
    mask = np.ones((n, n), dtype=bool)
    np.fill_diagonal(mask, False)
    for t in all_generator_matrices(g):
        if t.class_kind == "edge":
            mask &= t.entries == 0
    return bool(np.max(np.abs(k[mask]), initial=0.0) <= tol)


def is_member_rcon(k, g: ColoredGraph, tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership in the entry-equality space: class equalities and
    off-graph zeros within ``tol``, plus positive definiteness."""
    k = _as_matrix(k)
    n = len(g.graph.vertices)
    _check_square(k, n)
    idx = {v: i for i, v in enumerate(g.graph.vertices)}
    for block in g.vertex_classes:
        if _spread([k[idx[v], idx[v]] for v in block]) > tol:
            return False
    for block in g.edge_classes:
        if _spread([k[idx[x], idx[y]] for x, y in block]) > tol:
            return False
    if not _offgraph_ok(k, g, tol):
        return False
    return is_positive_definite(k)


def is_member_rcor(k, g: ColoredGraph, tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership in the partial-correlation space.  Requires a positive
    definite input, since partial correlations are undefined otherwise."""
    k = _as_matrix(k)
    n = len(g.graph.vertices)
    _check_square(k, n)
    if not is_positive_definite(k):
        raise NotPositiveDefinite("partial correlations need a positive definite matrix")
    idx = {v: i for i, v in enumerate(g.graph.vertices)}
    for block in g.vertex_classes:
        if _spread([k[idx[v], idx[v]] for v in block]) > tol:
            return False
    d = np.sqrt(np.diag(k))
    for block in g.edge_classes:
        rhos = [-k[idx[x], idx[y]] / (d[idx[x]] * d[idx[y]]) for x, y in block]
        if _spread(rhos) > tol:
            return False
    return _offgraph_ok(k, g, tol)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def sample_rcon(g: ColoredGraph, seed=0) -> ConcentrationPoint:
    """Random point of the entry-equality space, deterministic under seed.

    Coefficients are uniform on [-1, 1] (vertex classes first, canonical
    order), then the diagonal is shifted by |lambda_min| + 1.  The shift
    is a multiple of the identity, which is itself a vertex-class
    indicator sum, so the result stays inside the space.
    """
    rng = _rng(seed)
    vertex = rng.uniform(-1.0, 1.0, size=len(g.vertex_classes))
    edge = rng.uniform(-1.0, 1.0, size=len(g.edge_classes))
    k0 = _rcon_matrix(g, RconParameters(tuple(vertex), tuple(edge)))
    delta = abs(float(np.min(np.linalg.eigvalsh(k0)))) + 1.0
    params = RconParameters(tuple(vertex + delta), tuple(edge))
    return ConcentrationPoint(
        matrix=k0 + delta * np.eye(len(g.graph.vertices)),
        space_tag="rcon",
        source_params=params,
    )


def sample_rcor(g: ColoredGraph, seed=0, max_tries: int = 1000) -> ConcentrationPoint:
    """Random point of the partial-correlation space: a uniform on
    [0.5, 2], c uniform on (-1, 1), rejection-resampled until positive
    definite."""
    rng = _rng(seed)
    for _ in range(max_tries):
        a = rng.uniform(0.5, 2.0, size=len(g.vertex_classes))
        c = rng.uniform(-1.0, 1.0, size=len(g.edge_classes))
        params = RcorParameters(tuple(a), tuple(c))
        k = _rcor_matrix(g, params)
        if is_positive_definite(k):
            return ConcentrationPoint(matrix=k, space_tag="rcor", source_params=params)
    raise SamplingExhausted(f"no positive definite sample in {max_tries} tries")


def _constant_on_blocks(x: np.ndarray, m: Partition, order: tuple, tol: float) -> bool:
    idx = {v: i for i, v in enumerate(order)}
    for block in m.blocks:
        vals = x[[idx[v] for v in block]]
        if float(np.max(vals) - np.min(vals)) > tol:
            return False
    return True


def _space_invariant_under(k: np.ndarray, m: Partition, order: tuple, tol: float) -> bool:
    basis = mean_space_basis(m, order=order)
    return all(
        _constant_on_blocks(k @ vec, m, order, tol) for vec in basis.vectors
    )


def tu_invariance_holds(g: ColoredGraph, m: Partition, tol: float = MEMBERSHIP_TOL) -> bool:
    """Exact check: the mean space of ``m`` is mapped into itself by every
    class indicator matrix.  This characterizes invariance under the whole
    concentration space."""
    if frozenset(m.ground) != frozenset(g.graph.vertices):
        raise GroundMismatch("mean partition does not partition the vertex set")
    order = g.graph.vertices
    return all(
        _space_invariant_under(t.entries, m, order, tol)
        for t in all_generator_matrices(g)
    )


def sampled_invariance_holds(
    g: ColoredGraph,
    m: Partition,
    n_samples: int = 20,
    seed=0,
    tol: float = MEMBERSHIP_TOL,
) -> bool:
    """Numerical check: random concentration matrices from both spaces
    map the mean space of ``m`` into itself."""
    if frozenset(m.ground) != frozenset(g.graph.vertices):
        raise GroundMismatch("mean partition does not partition the vertex set")
    order = g.graph.vertices
    children = np.random.SeedSequence(seed).spawn(2 * n_samples)
    for i in range(n_samples):
        k = sample_rcon(g, seed=children[i]).matrix
        if not _space_invariant_under(k, m, order, tol):
            return False
    for i in range(n_samples):
        k = sample_rcor(g, seed=children[n_samples + i]).matrix
        if not _space_invariant_under(k, m, order, tol):
            return False
    return True


def kruskal_invariance_oracle(
    g: ColoredGraph,
    m: Partition,
    n_samples: int = 20,
    seed=0,
    tol: float = MEMBERSHIP_TOL,
) -> bool:
    """True iff the mean space of ``m`` passes both the exact indicator
    check and the sampled concentration check."""
    return tu_invariance_holds(g, m, tol) and sampled_invariance_holds(
        g, m, n_samples, seed, tol
    )
