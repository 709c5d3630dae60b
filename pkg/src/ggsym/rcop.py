"""Permutation symmetry: automorphisms, orbits, and the colorings they induce.

A list of automorphisms generates a group; the orbits of that group on
vertices and on edges define a coloring whose concentration model is
exactly the set of matrices invariant under every generator.  Orbits are
computed with union-find over generator images, so the group itself is
never materialized.
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .colored_graph import (
    ColoredGraph,
    Edge,
    Graph,
    Partition,
    make_partition,
    normalize_edge,
)
from .errors import DimensionMismatch, GroundMismatch, NotAutomorphism, ValidationError


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection of an ordered ground set.

    ``mapping`` may omit fixed points; it is completed at construction.
    Equality compares the ground as a set and the completed mapping.
    """

    ground: tuple[str, ...]
    mapping: dict

    def __init__(self, ground: Iterable[str], mapping: dict):
        ground = tuple(ground)
        gset = set(ground)
        full = {x: x for x in ground}
        for a, b in mapping.items():
            if a not in gset or b not in gset:
                raise ValidationError(f"permutation maps {a!r} -> {b!r} outside the ground set")
            full[a] = b
        if set(full.values()) != gset:
            raise ValidationError("mapping is not a bijection of the ground set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "mapping", full)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return set(self.ground) == set(other.ground) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash((frozenset(self.ground), tuple(sorted(self.mapping.items()))))

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def apply_edge(self, e: Edge) -> Edge:
        a, b = e
        return normalize_edge((self.mapping[a], self.mapping[b]))

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.mapping.items())

    def cycles(self) -> tuple[tuple[str, ...], ...]:
        """Nontrivial cycles, each rotated to start at its smallest element."""
        seen: set = set()
        out = []
        for start in sorted(self.ground):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.mapping[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.mapping[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def matrix(self) -> np.ndarray:
        """Permutation matrix P with P[i, j] = 1 iff this maps ground[j]
        to ground[i], in ground order."""
        n = len(self.ground)
        idx = {x: i for i, x in enumerate(self.ground)}
        p = np.zeros((n, n))
        for b in self.ground:
            p[idx[self.mapping[b]], idx[b]] = 1.0
        return p


def permutation_from_cycles(ground: Iterable[str], cycles: Iterable[Iterable[str]]) -> Permutation:
    mapping = {}
    for cyc in cycles:
        cyc = list(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if a in mapping:
                raise ValidationError(f"element {a!r} appears in two cycles")
            mapping[a] = b
    return Permutation(ground, mapping)


def is_automorphism(g: Graph, sigma: Permutation) -> bool:
    """True iff the permutation maps the edge set onto itself."""
    if frozenset(sigma.ground) != frozenset(g.vertices):
        raise GroundMismatch("permutation ground does not match the vertex set")
    edge_set = g.edge_set
    return all(sigma.apply_edge(e) in edge_set for e in edge_set)


def _check_generators(g: Graph, generators: Iterable[Permutation]) -> list[Permutation]:
    gens = list(generators)
    for k, sigma in enumerate(gens):
        if frozenset(sigma.ground) != frozenset(g.vertices):
            raise GroundMismatch(f"generator {k} has a different ground set")
        for e in g.edges:
            if sigma.apply_edge(e) not in g.edge_set:
                raise NotAutomorphism(
                    f"generator {k} maps edge {e} to {sigma.apply_edge(e)}, "
                    "which is not an edge"
                )
    return gens


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def _orbits(items, images) -> list[tuple]:
    uf = _UnionFind(items)
    for x, y in images:
        uf.union(x, y)
    groups: dict = {}
    for x in items:
        groups.setdefault(uf.find(x), []).append(x)
    return [tuple(sorted(b)) for b in groups.values()]


def vertex_orbits(g: Graph, generators: Iterable[Permutation]) -> Partition:
    """Orbits of the generated group on vertices."""
    gens = _check_generators(g, generators)
    images = [(v, sigma(v)) for sigma in gens for v in g.vertices]
    return make_partition(g.vertices, _orbits(g.vertices, images))


def edge_orbits(g: Graph, generators: Iterable[Permutation]) -> Partition:
    """Orbits of the induced action on unordered edges."""
    gens = _check_generators(g, generators)
    images = [(e, sigma.apply_edge(e)) for sigma in gens for e in g.edges]
    return make_partition(g.edges, _orbits(g.edges, images))


def rcop_coloring(g: Graph, generators: Iterable[Permutation]) -> ColoredGraph:
    """Coloring whose classes are the vertex and edge orbits of the
    group generated by ``generators``."""
    return ColoredGraph(g, vertex_orbits(g, generators), edge_orbits(g, generators))


def is_group_invariant(k: np.ndarray, sigma: Permutation, tol: float = 1e-8) -> bool:
    """True iff conjugating ``k`` by the permutation matrix leaves it
    unchanged up to ``tol`` (max absolute entry difference)."""
    k = np.asarray(getattr(k, "matrix", k), dtype=float)
    n = len(sigma.ground)
    if k.shape != (n, n):
        raise DimensionMismatch(f"matrix shape {k.shape} does not match ground size {n}")
    p = sigma.matrix()
    return bool(np.max(np.abs(p @ k @ p.T - k)) <= tol)
