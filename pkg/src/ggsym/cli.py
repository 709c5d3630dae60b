"""Command-line front end.

Subcommands:

- ``check``   estimability verdict for a mean partition
- ``refine``  coarsest mean partition with a simple MLE
- ``orbits``  coloring induced by the generators of a model file
- ``fit``     restricted-mean / colored-concentration MLE on a dataset
- ``lrt``     likelihood ratio test between two nested mean partitions
- ``oracle``  combinatorial verdict cross-checked against exact and
  sampled mean-space invariance

Reports are emitted as a human-readable table (default) or as a
deterministic JSON document (``--format structured``); the JSON bytes
are identical across runs for fixed inputs and seed.

Exit codes: 0 success, 2 invalid input, 3 convergence or sampling
failure, 4 internal inconsistency.
"""

import argparse
import csv
import dataclasses
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .colored_graph import Partition
from .errors import (
    ColumnMismatch,
    InputError,
    InternalInconsistency,
    NotConverged,
    ParseError,
    SamplingExhausted,
    ValidationError,
)
from .estimation import Dataset, FitOptions, ModelFit, fit_model, lr_test
from .model_space import (
    RNG_ALGORITHM,
    sampled_invariance_holds,
    tu_invariance_holds,
)
from .modelfile import (
    ModelSpec,
    edge_partition_to_string,
    load_model,
    parse_partition_string,
    partition_to_string,
)
from .regularity import (
    coarsest_regular_refinement,
    enumerate_valid_partitions,
    is_edge_regular,
    is_vertex_regular,
    mean_mle_equals_ls,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3
EXIT_INTERNAL = 4


def load_dataset(path) -> Dataset:
    """Read a CSV dataset: header row of variable names, then numeric rows."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise ParseError(f"{path}: need a header row and at least one data row")
    names = tuple(cell.strip() for cell in rows[0])
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(names):
            raise ParseError(f"{path}:{lineno}: expected {len(names)} fields, got {len(row)}")
        try:
            data.append([float(cell) for cell in row])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
    try:
        return Dataset(variable_names=names, rows=np.array(data))
    except InputError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        digest.update(handle.read())
    return digest.hexdigest()


def _witnesses_json(witnesses) -> list:
    out = []
    for w in witnesses:
        record = {"kind": type(w).__name__}
        for key, value in dataclasses.asdict(w).items():
            record[key] = _jsonable(value)
        out.append(record)
    return out


def _jsonable(value):
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    return value


def _mean_partition(spec: ModelSpec, flag: str | None, required: bool = True) -> Partition | None:
    if flag is not None:
        return parse_partition_string(flag, spec.graph.vertices)
    if spec.mean_partition is not None:
        return spec.mean_partition
    if required:
        raise ValidationError(
            "no mean partition: add a mean_partition section or pass --mean"
        )
    return None


def _fit_results(fit: ModelFit) -> dict:
    cg = fit.graph
    return {
        "vertex_order": list(cg.graph.vertices),
        "mean_partition": partition_to_string(fit.mean_partition),
        "mu_hat": _jsonable(fit.mu_hat),
        "theta_hat": {
            "vertex_classes": [
                {"class": list(b), "theta": float(v)}
                for b, v in zip(cg.vertex_classes, fit.theta_hat.vertex)
            ],
            "edge_classes": [
                {"class": [f"{a} -- {x}" for a, x in b], "theta": float(v)}
                for b, v in zip(cg.edge_classes, fit.theta_hat.edge)
            ],
        },
        "k_hat": _jsonable(fit.k_hat.matrix),
        "loglik": float(fit.loglik),
        "mean_dim": fit.mean_dim,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "method_tag": fit.method_tag,
        "n_obs": fit.n_obs,
    }


def _coloring_results(spec: ModelSpec) -> dict:
    cg = spec.colored_graph()
    return {
        "vertex_order": list(cg.graph.vertices),
        "vertex_classes": partition_to_string(cg.vertex_coloring),
        "edge_classes": edge_partition_to_string(cg.edge_coloring),
    }


def cmd_check(args) -> dict:
    spec = load_model(args.model)
    cg = spec.colored_graph()
    m = _mean_partition(spec, args.mean)
    edge_report = is_edge_regular(cg)
    vertex_report = is_vertex_regular(cg)
    verdict = mean_mle_equals_ls(cg, m)
    return {
        "coloring": _coloring_results(spec),
        "mean_partition": partition_to_string(m),
        "coloring_edge_regular": edge_report.edge_regular,
        "coloring_vertex_regular": vertex_report.vertex_regular,
        "mean_finer_than_vertex_coloring": verdict.finer_ok,
        "mean_partition_vertex_regular": verdict.vertex_regular_ok,
        "mle_equals_least_squares": verdict.holds,
        "witnesses": _witnesses_json(
            edge_report.witnesses + vertex_report.witnesses + verdict.witnesses
        ),
    }


def cmd_refine(args) -> dict:
    spec = load_model(args.model)
    cg = spec.colored_graph()
    refinement = coarsest_regular_refinement(cg)
    results = {
        "coloring": _coloring_results(spec),
        "coarsest_valid_mean_partition": partition_to_string(refinement),
        "valid_partition_count": None,
    }
    if len(cg.graph.vertices) <= 8:
        results["valid_partition_count"] = len(enumerate_valid_partitions(cg))
    return results


def cmd_orbits(args) -> dict:
    spec = load_model(args.model)
    if spec.generators is None:
        raise ValidationError("model file has no generators section")
    cg = spec.colored_graph()
    return {
        "generators": [
            ", ".join(f"{a} -> {b}" for a, b in sorted(s.mapping.items()))
            for s in spec.generators
        ],
        "coloring": _coloring_results(spec),
        "edge_regular": is_edge_regular(cg).edge_regular,
        "vertex_regular": is_vertex_regular(cg).vertex_regular,
    }


def cmd_fit(args) -> dict:
    spec = load_model(args.model)
    cg = spec.colored_graph()
    m = _mean_partition(spec, args.mean)
    data = load_dataset(args.data)
    if set(data.variable_names) != set(cg.graph.vertices):
        extra = sorted(set(data.variable_names) - set(cg.graph.vertices))
        missing = sorted(set(cg.graph.vertices) - set(data.variable_names))
        raise ColumnMismatch(
            f"data columns do not match model vertices (missing {missing}, extra {extra})"
        )
    fit = fit_model(data, cg, m, FitOptions(force_alternating=args.force_alternating))
    return _fit_results(fit)


def cmd_lrt(args) -> dict:
    spec = load_model(args.model)
    cg = spec.colored_graph()
    null_m = _mean_partition(spec, args.null)
    alt_m = parse_partition_string(args.alt, cg.graph.vertices)
    data = load_dataset(args.data)
    if set(data.variable_names) != set(cg.graph.vertices):
        raise ColumnMismatch("data columns do not match model vertices")
    null_fit = fit_model(data, cg, null_m)
    alt_fit = fit_model(data, cg, alt_m)
    result = lr_test(null_fit, alt_fit)
    return {
        "null": _fit_results(null_fit),
        "alternative": _fit_results(alt_fit),
        "statistic": result.statistic,
        "df": result.df,
        "p_value": result.p_value,
    }


def cmd_oracle(args) -> dict:
    spec = load_model(args.model)
    cg = spec.colored_graph()
    m = _mean_partition(spec, args.mean)
    combinatorial = mean_mle_equals_ls(cg, m).holds
    exact = tu_invariance_holds(cg, m)
    sampled = sampled_invariance_holds(cg, m, n_samples=args.samples, seed=args.seed)
    results = {
        "mean_partition": partition_to_string(m),
        "samples_per_space": args.samples,
        "combinatorial_verdict": combinatorial,
        "exact_indicator_verdict": exact,
        "sampled_verdict": sampled,
    }
    if not (combinatorial == exact == sampled):
        raise InternalInconsistency(
            f"verdicts disagree: combinatorial={combinatorial} "
            f"exact={exact} sampled={sampled}"
        )
    return results


def _needs_block(value) -> bool:
    if isinstance(value, dict):
        return bool(value)
    if isinstance(value, list) and not _is_matrix(value):
        return any(isinstance(x, (dict, list)) for x in value)
    return False


def _human_lines(value, indent: str = "") -> list[str]:
    lines = []
    if isinstance(value, dict):
        for key, sub in value.items():
            if _needs_block(sub):
                lines.append(f"{indent}{key}:")
                lines.extend(_human_lines(sub, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {_human_scalar(sub)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                sub = _human_lines(item, indent + "  ")
                if sub:
                    sub[0] = indent + "- " + sub[0].lstrip()
                lines.extend(sub)
            else:
                lines.append(f"{indent}- {_human_scalar(item)}")
    else:
        lines.append(f"{indent}{_human_scalar(value)}")
    return lines


def _is_matrix(value) -> bool:
    return (
        isinstance(value, list)
        and value
        and all(isinstance(row, list) for row in value)
        and all(all(isinstance(x, (int, float)) for x in row) for row in value)
    )


def _human_scalar(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if _is_matrix(value):
        return "\n" + "\n".join(
            "    [" + "  ".join(f"{x: .6g}" for x in row) + "]" for row in value
        )
    if isinstance(value, list):
        return "[" + ", ".join(_human_scalar(v) for v in value) + "]"
    return str(value)


def render_report(report: dict, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(report, indent=2, sort_keys=True)
    return "\n".join(_human_lines(report))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ggsym",
        description="Colored graphical Gaussian models: mean estimability, fitting, tests.",
    )
    parser.add_argument("--version", action="version", version=f"ggsym {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, data=False, mean=False, oracle=False, lrt=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", required=True, help="model file")
        if data:
            p.add_argument("--data", required=True, help="CSV data file")
        if mean:
            p.add_argument(
                "--mean",
                default=None,
                help="mean partition, e.g. '{B1,B2}{L1,L2}' or 'singletons' "
                "(default: the model file's mean_partition)",
            )
        if lrt:
            p.add_argument("--null", default=None, help="null mean partition (default: model file)")
            p.add_argument("--alt", default="singletons", help="alternative mean partition")
        if oracle:
            p.add_argument("--samples", type=int, default=20, help="samples per space")
            p.add_argument("--seed", type=int, default=0, help="rng seed")
        p.add_argument(
            "--format", choices=("human", "structured"), default="human", dest="fmt"
        )
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "estimability verdict for a mean partition", mean=True)
    add("refine", cmd_refine, "coarsest valid mean partition")
    add("orbits", cmd_orbits, "coloring induced by the generators")
    fit_p = add("fit", cmd_fit, "fit the model on data", data=True, mean=True)
    fit_p.add_argument(
        "--force-alternating",
        action="store_true",
        help="use the alternating maximizer even when the closed form applies",
    )
    add("lrt", cmd_lrt, "likelihood ratio test of nested mean partitions", data=True, lrt=True)
    add("oracle", cmd_oracle, "cross-check the three invariance verdicts", mean=True, oracle=True)
    return parser


def _envelope(args, results: dict) -> dict:
    report = {
        "tool": {"name": "ggsym", "version": __version__},
        "command": args.command,
        "inputs": {"model": {"path": args.model, "sha256": _sha256(args.model)}},
        "results": results,
    }
    if getattr(args, "data", None):
        report["inputs"]["data"] = {"path": args.data, "sha256": _sha256(args.data)}
    if hasattr(args, "seed"):
        report["seed"] = args.seed
        report["rng"] = RNG_ALGORITHM
    return report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        results = args.func(args)
        report = _envelope(args, results)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NotConverged, SamplingExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except InternalInconsistency as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(render_report(report, args.fmt))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
