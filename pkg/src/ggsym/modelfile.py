"""Text format for model specifications.

A model file is a sequence of named sections::

    vertices: B1 B2 L1 L2
    edges:
      B1 -- L1
      B1 -- B2
    vertex_classes:
      {B1, B2}
      {L1, L2}
    edge_classes:
      {B1 -- L1, B2 -- L2}
    mean_partition:
      {B1, B2}
      {L1, L2}

'#' starts a comment.  A model carries either an explicit coloring
(vertex_classes + edge_classes) or a ``generators`` section holding
permutations, one per line, in mapping form ``B1 -> B2, B2 -> B1`` or
cycle form ``(B1 B2)(L1 L2)``; the coloring is then derived from the
orbits.  Serialization always writes mapping form.
"""

import re
from dataclasses import dataclass

from .colored_graph import ColoredGraph, Graph, Partition, make_partition, normalize_edge
from .errors import InputError, ParseError, ValidationError
from .rcop import Permutation, permutation_from_cycles, rcop_coloring

_SECTIONS = ("vertices", "edges", "vertex_classes", "edge_classes", "generators", "mean_partition")
_SECTION_RE = re.compile(r"^(\w+)\s*:\s*(.*)$")
_BRACE_RE = re.compile(r"\{([^{}]*)\}")
_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class ModelSpec:
    """Parsed model file: a graph plus either an explicit coloring or a
    generator list, and an optional mean partition."""

    graph: Graph
    vertex_classes: Partition | None
    edge_classes: Partition | None
    generators: tuple[Permutation, ...] | None
    mean_partition: Partition | None

    def __post_init__(self):
        explicit = self.vertex_classes is not None or self.edge_classes is not None
        if explicit and (self.vertex_classes is None or self.edge_classes is None):
            raise ValidationError("vertex_classes and edge_classes must be given together")
        if explicit == (self.generators is not None):
            raise ValidationError(
                "provide exactly one of an explicit coloring or a generators section"
            )

    def colored_graph(self) -> ColoredGraph:
        if self.generators is not None:
            return rcop_coloring(self.graph, self.generators)
        return ColoredGraph(self.graph, self.vertex_classes, self.edge_classes)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _tokens(text: str) -> list[str]:
    return [t for t in re.split(r"[\s,]+", text) if t]


def _parse_edge_expr(expr: str, lineno: int) -> tuple[str, str]:
    parts = [p.strip() for p in expr.split("--")]
    if len(parts) != 2 or not all(parts):
        raise ParseError(f"line {lineno}: expected 'A -- B', got {expr.strip()!r}")
    return (parts[0], parts[1])


def _parse_blocks(lines: list[tuple[int, str]], edge_elements: bool) -> list[list]:
    blocks = []
    for lineno, text in lines:
        found = _BRACE_RE.findall(text)
        leftover = _BRACE_RE.sub("", text).strip().strip(",")
        if leftover:
            raise ParseError(f"line {lineno}: unexpected text {leftover!r} outside braces")
        for body in found:
            if edge_elements:
                blocks.append(
                    [_parse_edge_expr(e, lineno) for e in body.split(",") if e.strip()]
                )
            else:
                blocks.append(_tokens(body))
    return blocks


def _parse_permutation(text: str, ground: tuple[str, ...], lineno: int) -> Permutation:
    text = text.strip()
    try:
        if text.startswith("("):
            cycles = _CYCLE_RE.findall(text)
            rest = _CYCLE_RE.sub("", text).strip()
            if rest:
                raise ParseError(f"line {lineno}: bad cycle notation {text!r}")
            return permutation_from_cycles(ground, [_tokens(c) for c in cycles])
        mapping = {}
        for piece in text.split(","):
            if not piece.strip():
                continue
            if "->" not in piece:
                raise ParseError(f"line {lineno}: expected 'a -> b' pairs, got {piece.strip()!r}")
            src, dst = (p.strip() for p in piece.split("->", 1))
            mapping[src] = dst
        return Permutation(ground, mapping)
    except InputError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ValidationError(f"line {lineno}: {exc}") from exc


def parse_model(text: str) -> ModelSpec:
    """Parse model-file text; raises ParseError or ValidationError with
    line context."""
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        match = _SECTION_RE.match(line) if not raw[:1].isspace() else None
        if match and match.group(1) in _SECTIONS:
            current = match.group(1)
            if current in sections:
                raise ParseError(f"line {lineno}: duplicate section {current!r}")
            sections[current] = []
            if match.group(2).strip():
                sections[current].append((lineno, match.group(2)))
        elif match and not raw[:1].isspace():
            raise ParseError(f"line {lineno}: unknown section {match.group(1)!r}")
        else:
            if current is None:
                raise ParseError(f"line {lineno}: content before any section")
            sections[current].append((lineno, line.strip()))

    if "vertices" not in sections:
        raise ParseError("missing 'vertices' section")
    vertices = tuple(t for _, text in sections["vertices"] for t in _tokens(text))
    edges = [
        _parse_edge_expr(expr, lineno)
        for lineno, text in sections.get("edges", [])
        for expr in text.split(",")
        if expr.strip()
    ]

    try:
        graph = Graph(vertices, edges)
        vc = ec = None
        if "vertex_classes" in sections:
            vc = make_partition(vertices, _parse_blocks(sections["vertex_classes"], False))
        if "edge_classes" in sections:
            blocks = _parse_blocks(sections["edge_classes"], True)
            ec = make_partition(
                graph.edges, [[normalize_edge(e) for e in b] for b in blocks]
            )
        gens = None
        if "generators" in sections:
            gens = tuple(
                _parse_permutation(text, vertices, lineno)
                for lineno, text in sections["generators"]
            )
        mp = None
        if "mean_partition" in sections:
            mp = make_partition(vertices, _parse_blocks(sections["mean_partition"], False))
        return ModelSpec(
            graph=graph,
            vertex_classes=vc,
            edge_classes=ec,
            generators=gens,
            mean_partition=mp,
        )
    except (ParseError, ValidationError):
        raise
    except InputError as exc:
        raise ValidationError(str(exc)) from exc


def load_model(path) -> ModelSpec:
    with open(path, encoding="utf-8") as handle:
        return parse_model(handle.read())


def partition_to_string(p: Partition) -> str:
    return "".join("{" + ",".join(str(x) for x in block) + "}" for block in p.blocks)


def edge_partition_to_string(p: Partition) -> str:
    return "".join(
        "{" + ", ".join(f"{a} -- {b}" for a, b in block) + "}" for block in p.blocks
    )


def parse_partition_string(text: str, ground) -> Partition:
    """Partition of ``ground`` from a string like '{B1,B2}{L1,L2}'.

    The word 'singletons' denotes the all-singleton partition.
    """
    ground = tuple(ground)
    if text.strip() == "singletons":
        return make_partition(ground, [[x] for x in ground])
    found = _BRACE_RE.findall(text)
    leftover = _BRACE_RE.sub("", text).strip()
    if leftover or not found:
        raise ParseError(f"bad partition string {text!r}; expected brace groups")
    try:
        return make_partition(ground, [_tokens(body) for body in found])
    except InputError as exc:
        raise ValidationError(f"bad partition {text!r}: {exc}") from exc


def format_model(spec: ModelSpec) -> str:
    """Serialize back to model-file text (mapping form for generators)."""
    out = ["vertices: " + " ".join(spec.graph.vertices)]
    if spec.graph.edges:
        out.append("edges:")
        out.extend(f"  {a} -- {b}" for a, b in spec.graph.edges)
    if spec.vertex_classes is not None:
        out.append("vertex_classes:")
        out.extend("  {" + ", ".join(b) + "}" for b in spec.vertex_classes.blocks)
        out.append("edge_classes:")
        out.extend(
            "  {" + ", ".join(f"{a} -- {x}" for a, x in b) + "}"
            for b in spec.edge_classes.blocks
        )
    if spec.generators is not None:
        out.append("generators:")
        for sigma in spec.generators:
            pairs = ", ".join(f"{a} -> {b}" for a, b in sorted(sigma.mapping.items()))
            out.append(f"  {pairs}")
    if spec.mean_partition is not None:
        out.append("mean_partition:")
        out.extend("  {" + ", ".join(b) + "}" for b in spec.mean_partition.blocks)
    return "\n".join(out) + "\n"
