"""Graphs, partitions, colorings, and the per-class indicator matrices.

Conventions used throughout the package:

- Vertex labels are strings.  Every matrix or vector is indexed by the
  graph's vertex order (the order vertices were listed at construction).
- An edge is an unordered pair, represented canonically as a sorted
  2-tuple of labels.
- A partition is canonicalized at construction: elements inside a block
  are sorted, and blocks are sorted by their smallest element.  Two
  partitions with the same ground set and the same blocks compare equal
  regardless of the order anything was supplied in.
"""

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    EmptyBlock,
    GroundMismatch,
    OverlappingBlocks,
    UncoveredElement,
    UnknownClass,
    UnknownVertex,
    ValidationError,
)

Edge = tuple[str, str]


def normalize_edge(pair: Iterable[str]) -> Edge:
    """Canonical form of an unordered vertex pair."""
    a, b = pair
    if a == b:
        raise ValidationError(f"self-loop {a!r} is not a valid edge")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    """Undirected graph with an explicit vertex order.

    ``vertices`` keeps its input order; it defines the row/column order
    of every matrix built from this graph.  ``edges`` is stored sorted.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __init__(self, vertices: Iterable[str], edges: Iterable[Iterable[str]] = ()):
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise ValidationError("duplicate vertex labels")
        vset = set(vertices)
        norm = []
        for pair in edges:
            e = normalize_edge(pair)
            if e[0] not in vset or e[1] not in vset:
                raise ValidationError(f"edge {e} has an endpoint outside the vertex set")
            norm.append(e)
        if len(set(norm)) != len(norm):
            raise ValidationError("duplicate edges")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def index(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise UnknownVertex(f"unknown vertex {vertex!r}") from None

    def adjacency(self) -> np.ndarray:
        n = len(self.vertices)
        a = np.zeros((n, n))
        for u, v in self.edges:
            i, j = self.index(u), self.index(v)
            a[i, j] = a[j, i] = 1.0
        return a


@dataclass(frozen=True, eq=False)
class Partition:
    """A set of disjoint nonempty blocks covering ``ground``.

    Equality ignores the order of ``ground``: two partitions are equal
    when they cover the same elements with the same blocks.
    """

    ground: tuple
    blocks: tuple[tuple, ...]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return frozenset(self.ground) == frozenset(other.ground) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash((frozenset(self.ground), self.blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, element) -> tuple:
        for b in self.blocks:
            if element in b:
                return b
        raise UnknownVertex(f"{element!r} is not in the ground set")

    def block_index(self, element) -> int:
        for i, b in enumerate(self.blocks):
            if element in b:
                return i
        raise UnknownVertex(f"{element!r} is not in the ground set")

    def is_singleton(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)


def make_partition(ground: Iterable, blocks: Iterable[Iterable]) -> Partition:
    """Validate and canonicalize a partition of ``ground``.

    Raises ``EmptyBlock``, ``OverlappingBlocks`` or ``UncoveredElement``
    when the blocks are not a partition.
    """
    ground = tuple(ground)
    if len(set(ground)) != len(ground):
        raise ValidationError("ground set contains duplicates")
    gset = set(ground)
    seen: set = set()
    canon = []
    for b in blocks:
        b = tuple(sorted(b))
        if not b:
            raise EmptyBlock("empty block")
        for x in b:
            if x not in gset:
                raise GroundMismatch(f"block element {x!r} is not in the ground set")
            if x in seen:
                raise OverlappingBlocks(f"element {x!r} appears in two blocks")
            seen.add(x)
        canon.append(b)
    missing = gset - seen
    if missing:
        raise UncoveredElement(f"elements not covered by any block: {sorted(missing)}")
    return Partition(ground=ground, blocks=tuple(sorted(canon)))


def singleton_partition(ground: Iterable) -> Partition:
    return make_partition(ground, [[x] for x in ground])


def one_block_partition(ground: Iterable) -> Partition:
    ground = tuple(ground)
    return make_partition(ground, [ground])


def is_finer(m1: Partition, m2: Partition) -> bool:
    """True iff every block of ``m1`` is contained in some block of ``m2``."""
    if frozenset(m1.ground) != frozenset(m2.ground):
        raise GroundMismatch("partitions have different ground sets")
    lookup = {x: i for i, b in enumerate(m2.blocks) for x in b}
    for block in m1.blocks:
        targets = {lookup[x] for x in block}
        if len(targets) != 1:
            return False
    return True


@dataclass(frozen=True)
class ColoredGraph:
    """A graph together with a vertex coloring and an edge coloring."""

    graph: Graph
    vertex_coloring: Partition
    edge_coloring: Partition

    def __post_init__(self):
        if frozenset(self.vertex_coloring.ground) != frozenset(self.graph.vertices):
            raise GroundMismatch("vertex coloring does not partition the vertex set")
        if frozenset(self.edge_coloring.ground) != frozenset(self.graph.edges):
            raise GroundMismatch("edge coloring does not partition the edge set")

    @property
    def vertex_classes(self) -> tuple[tuple, ...]:
        return self.vertex_coloring.blocks

    @property
    def edge_classes(self) -> tuple[tuple, ...]:
        return self.edge_coloring.blocks

    def find_class(self, class_kind: str, class_id) -> tuple:
        """Resolve a class given by content to its canonical block."""
        if class_kind == "vertex":
            blocks = self.vertex_classes
            wanted = frozenset(class_id)
        elif class_kind == "edge":
            blocks = self.edge_classes
            wanted = frozenset(normalize_edge(e) for e in class_id)
        else:
            raise UnknownClass(f"class_kind must be 'vertex' or 'edge', got {class_kind!r}")
        for b in blocks:
            if frozenset(b) == wanted:
                return b
        raise UnknownClass(f"no {class_kind} class {sorted(wanted)}")


def colored_graph(
    graph: Graph,
    vertex_blocks: Iterable[Iterable[str]],
    edge_blocks: Iterable[Iterable],
) -> ColoredGraph:
    """Convenience constructor taking raw block lists."""
    vc = make_partition(graph.vertices, vertex_blocks)
    ec = make_partition(
        graph.edges, [[normalize_edge(e) for e in b] for b in edge_blocks]
    )
    return ColoredGraph(graph, vc, ec)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Indicator matrix of one color class, indexed by vertex order.

    For a vertex class this is the 0/1 diagonal indicator; for an edge
    class the symmetric 0/1 adjacency of the edges in the class.
    """

    entries: np.ndarray = field(compare=False)
    class_kind: str
    class_id: tuple


def generator_matrix(g: ColoredGraph, class_kind: str, class_id) -> GeneratorMatrix:
    block = g.find_class(class_kind, class_id)
    n = len(g.graph.vertices)
    t = np.zeros((n, n))
    if class_kind == "vertex":
        for v in block:
            i = g.graph.index(v)
            t[i, i] = 1.0
    else:
        for u, v in block:
            i, j = g.graph.index(u), g.graph.index(v)
            t[i, j] = t[j, i] = 1.0
    return GeneratorMatrix(entries=t, class_kind=class_kind, class_id=block)


def all_generator_matrices(g: ColoredGraph) -> list[GeneratorMatrix]:
    """All T matrices, vertex classes first, in canonical block order."""
    out = [generator_matrix(g, "vertex", b) for b in g.vertex_classes]
    out += [generator_matrix(g, "edge", b) for b in g.edge_classes]
    return out


@dataclass(frozen=True)
class MeanSpaceBasis:
    """Indicator basis of the space of vectors constant on each block.

    ``vectors[i]`` is the 0/1 indicator of ``partition.blocks[i]`` in the
    index order ``order``.
    """

    partition: Partition
    order: tuple[str, ...]
    vectors: np.ndarray = field(compare=False)

    @property
    def basis_matrix(self) -> np.ndarray:
        """Indicators as columns: shape (len(order), number of blocks)."""
        return self.vectors.T


def mean_space_basis(m: Partition, order: Iterable[str] | None = None) -> MeanSpaceBasis:
    """One indicator vector per block of ``m``.

    ``order`` fixes the coordinate order; it defaults to the partition's
    ground order.
    """
    order = tuple(order) if order is not None else tuple(m.ground)
    if frozenset(order) != frozenset(m.ground):
        raise GroundMismatch("order does not match the partition's ground set")
    idx = {x: i for i, x in enumerate(order)}
    vecs = np.zeros((len(m.blocks), len(order)))
    for bi, block in enumerate(m.blocks):
        for x in block:
            vecs[bi, idx[x]] = 1.0
    return MeanSpaceBasis(partition=m, order=order, vectors=vecs)


def neighbors_in_class(g: ColoredGraph, edge_class_id, vertex: str) -> frozenset:
    """Vertices joined to ``vertex`` by an edge of the given edge class."""
    block = g.find_class("edge", edge_class_id)
    if vertex not in g.graph.vertices:
        raise UnknownVertex(f"unknown vertex {vertex!r}")
    out = set()
    for u, v in block:
        if u == vertex:
            out.add(v)
        elif v == vertex:
            out.add(u)
    return frozenset(out)
