"""Combinatorial decision procedures on colored graphs.

The central question: for which partitions M of the vertices does the
maximum likelihood estimator of a mean restricted to be constant on the
blocks of M coincide with the least-squares estimator, for every
concentration matrix allowed by the coloring?  The answer is purely
combinatorial: M must be finer than the vertex coloring, and M must be
equitable within every edge color class.
"""

from dataclasses import dataclass
from typing import Iterable

from .colored_graph import ColoredGraph, Edge, Partition, is_finer, make_partition
from .errors import GroundMismatch, TooLarge


@dataclass(frozen=True)
class EdgeRegularityWitness:
    """Two same-class edges whose endpoint vertex classes differ."""

    edge_class: tuple
    edge_a: Edge
    edge_b: Edge
    endpoint_classes_a: tuple
    endpoint_classes_b: tuple


@dataclass(frozen=True)
class EquitabilityWitness:
    """Two same-block vertices with different neighbor counts into a block."""

    edge_class: tuple | None
    block: tuple
    vertex_a: str
    vertex_b: str
    target_block: tuple
    count_a: int
    count_b: int


@dataclass(frozen=True)
class FinerWitness:
    """A mean block that straddles two vertex color classes."""

    block: tuple
    vertex_a: str
    vertex_b: str


@dataclass(frozen=True)
class RegularityReport:
    """Verdicts of the edge- and vertex-regularity checks.

    A field is None when the corresponding check was not run.  A False
    verdict carries the first witness found in canonical order.
    """

    edge_regular: bool | None
    vertex_regular: bool | None
    witnesses: tuple


@dataclass(frozen=True)
class EstimabilityVerdict:
    """Outcome of the two-part mean-estimability condition."""

    holds: bool
    finer_ok: bool
    vertex_regular_ok: bool
    witnesses: tuple


def _endpoint_classes(vc: Partition, edge: Edge) -> tuple:
    a, b = edge
    return tuple(sorted((vc.block_of(a), vc.block_of(b))))


def is_edge_regular(g: ColoredGraph) -> RegularityReport:
    """Check that every edge class connects one fixed pair of vertex classes."""
    vc = g.vertex_coloring
    for block in g.edge_classes:
        first = block[0]
        classes_first = _endpoint_classes(vc, first)
        for other in block[1:]:
            classes_other = _endpoint_classes(vc, other)
            if classes_other != classes_first:
                w = EdgeRegularityWitness(
                    edge_class=block,
                    edge_a=first,
                    edge_b=other,
                    endpoint_classes_a=classes_first,
                    endpoint_classes_b=classes_other,
                )
                return RegularityReport(edge_regular=False, vertex_regular=None, witnesses=(w,))
    return RegularityReport(edge_regular=True, vertex_regular=None, witnesses=())


def _neighbor_map(ground: Iterable[str], edges: Iterable[Edge]) -> dict[str, set]:
    ne: dict[str, set] = {x: set() for x in ground}
    for a, b in edges:
        ne[a].add(b)
        ne[b].add(a)
    return ne


def _first_equitable_violation(
    m: Partition, edges: Iterable[Edge], edge_class: tuple | None
) -> EquitabilityWitness | None:
    """First (canonical order) pair of same-block vertices with unequal
    neighbor counts into some block, or None if the partition is equitable."""
    ne = _neighbor_map(m.ground, edges)
    for block in m.blocks:
        anchor = block[0]
        for other in block[1:]:
            for target in m.blocks:
                ca = len(ne[anchor] & set(target))
                cb = len(ne[other] & set(target))
                if ca != cb:
                    return EquitabilityWitness(
                        edge_class=edge_class,
                        block=block,
                        vertex_a=anchor,
                        vertex_b=other,
                        target_block=target,
                        count_a=ca,
                        count_b=cb,
                    )
    return None


def is_equitable(m: Partition, edge_set: Iterable[Iterable[str]]) -> bool:
    """True iff any two same-block vertices have equal neighbor counts
    into every block, for the given edge set."""
    gset = frozenset(m.ground)
    edges = []
    for pair in edge_set:
        a, b = tuple(pair)
        if a not in gset or b not in gset:
            raise GroundMismatch(f"edge ({a!r}, {b!r}) has an endpoint outside the ground set")
        edges.append((a, b))
    return _first_equitable_violation(m, edges, None) is None


def _vertex_regularity_violation(
    m: Partition, g: ColoredGraph
) -> EquitabilityWitness | None:
    for block in g.edge_classes:
        w = _first_equitable_violation(m, block, block)
        if w is not None:
            return w
    return None


def is_vertex_regular(g: ColoredGraph) -> RegularityReport:
    """Check that the vertex coloring is equitable within every edge class."""
    w = _vertex_regularity_violation(g.vertex_coloring, g)
    if w is not None:
        return RegularityReport(edge_regular=None, vertex_regular=False, witnesses=(w,))
    return RegularityReport(edge_regular=None, vertex_regular=True, witnesses=())


def mean_mle_equals_ls(g: ColoredGraph, m: Partition) -> EstimabilityVerdict:
    """Decide whether the restricted-mean MLE equals least squares.

    Both sub-conditions are always evaluated: M finer than the vertex
    coloring, and M equitable within every edge class.
    """
    if frozenset(m.ground) != frozenset(g.graph.vertices):
        raise GroundMismatch("mean partition does not partition the vertex set")

    witnesses: list = []

    finer_ok = True
    lookup = {x: i for i, b in enumerate(g.vertex_classes) for x in b}
    for block in m.blocks:
        if len({lookup[x] for x in block}) != 1:
            finer_ok = False
            a = block[0]
            b = next(x for x in block[1:] if lookup[x] != lookup[a])
            witnesses.append(FinerWitness(block=block, vertex_a=a, vertex_b=b))
            break

    w = _vertex_regularity_violation(m, g)
    vertex_regular_ok = w is None
    if w is not None:
        witnesses.append(w)

    return EstimabilityVerdict(
        holds=finer_ok and vertex_regular_ok,
        finer_ok=finer_ok,
        vertex_regular_ok=vertex_regular_ok,
        witnesses=tuple(witnesses),
    )


def coarsest_regular_refinement(g: ColoredGraph) -> Partition:
    """Coarsest partition finer than the vertex coloring that is equitable
    within every edge class.

    Iterated splitting: starting from the vertex coloring, each block is
    split by the full signature of per-(edge class, current block)
    neighbor counts until nothing changes.  The fixpoint does not depend
    on the vertex input order.
    """
    ne_per_class = [
        _neighbor_map(g.graph.vertices, block) for block in g.edge_classes
    ]
    blocks = [tuple(sorted(b)) for b in g.vertex_classes]
    while True:
        blocks = sorted(blocks)
        new_blocks: list[tuple] = []
        changed = False
        for block in blocks:
            sigs: dict[tuple, list] = {}
            for x in block:
                sig = tuple(
                    tuple(len(ne[x] & set(b)) for b in blocks) for ne in ne_per_class
                )
                sigs.setdefault(sig, []).append(x)
            if len(sigs) > 1:
                changed = True
            for sig in sorted(sigs):
                new_blocks.append(tuple(sorted(sigs[sig])))
        blocks = new_blocks
        if not changed:
            break
    return make_partition(g.graph.vertices, blocks)


def _restricted_growth_strings(n: int):
    """All restricted-growth strings of length n in lexicographic order."""
    a = [0] * n

    def rec(i: int, m: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(m + 2):
            a[i] = v
            yield from rec(i + 1, max(m, v))

    if n == 0:
        yield ()
    else:
        a[0] = 0
        yield from rec(1, 0)


def all_partitions(ground: Iterable) -> list[Partition]:
    """Every set partition of ``ground``, in restricted-growth-string
    lexicographic order."""
    ground = tuple(ground)
    out = []
    for rgs in _restricted_growth_strings(len(ground)):
        blocks: dict[int, list] = {}
        for x, c in zip(ground, rgs):
            blocks.setdefault(c, []).append(x)
        out.append(make_partition(ground, list(blocks.values())))
    return out


def enumerate_valid_partitions(g: ColoredGraph, max_ground_size: int = 8) -> list[Partition]:
    """Brute-force list of all mean partitions with a simple MLE.

    Exhaustively enumerates set partitions of the vertex set and keeps
    those for which ``mean_mle_equals_ls`` holds.  Intended as a test
    oracle; refuses ground sets larger than ``max_ground_size``.
    """
    n = len(g.graph.vertices)
    if n > max_ground_size:
        raise TooLarge(f"{n} vertices exceeds the enumeration limit {max_ground_size}")
    return [m for m in all_partitions(g.graph.vertices) if mean_mle_equals_ls(g, m).holds]
