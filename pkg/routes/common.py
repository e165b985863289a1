"""
Argument helpers shared by every route module.

Each route module exposes register(subparsers); parsers set `handler` to a
function taking the parsed namespace and returning a Report.
"""

import argparse
import json
from typing import Any, Dict, List

from models.config import RunConfig, run_config
from modules.errors import ParameterError

# namespace attribute -> RunConfig field
_FIELDS = {
    "input": "input_path",
    "format": "format",
    "doc": "document_path",
    "terminals": "terminals_path",
    "save": "save_path",
    "eps": "eps",
    "r": "r",
    "delta": "delta",
    "seed": "seed",
    "q": "q",
    "solver": "solver",
    "matching": "matching",
    "builder": "builder",
    "hs_strategy": "hs_strategy",
    "trials": "trials",
    "gamma": "gamma",
    "lam": "lam",
    "threads": "threads",
    "base": "base",
    "ratio": "ratio",
    "kind": "kind",
    "queries": "queries",
    "pair": "pair",
    "strict_induced": "strict_induced",
    "out": "output_path",
}


def add_graph_args(parser: argparse.ArgumentParser, out: bool = True) -> None:
    parser.add_argument("--in", dest="input", required=True, help="input graph (DIMACS .gr or edge list)")
    parser.add_argument("--format", choices=["dimacs", "edge-list"], help="input format (default: from the extension)")
    if out:
        parser.add_argument("--out", help="write the output document here")


def add_builder_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--builder", default="local-search", choices=["local-search", "greedy", "epsnet"], help="shortest-path cover builder")
    parser.add_argument(
        "--hs-strategy", dest="hs_strategy", default="greedy", choices=["greedy", "exact-small"], help="hitting-set strategy for local search"
    )


def add_seed_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="random seed (default: HWD_DEFAULT_SEED)")


def parse_params(items: List[str] | None) -> Dict[str, Any]:
    """key=value pairs; values are read as JSON when they parse, else kept as strings."""
    params: Dict[str, Any] = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ParameterError(f"parameter '{item}' is not of the form key=value")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def config_from(args: argparse.Namespace, command: str, **extra: Any) -> RunConfig:
    values: Dict[str, Any] = {"command": command}
    for attr, name in _FIELDS.items():
        value = getattr(args, attr, None)
        if value is not None:
            values[name] = value
    values["verbosity"] = getattr(args, "verbose", 0) - int(getattr(args, "quiet", False))
    values.update(extra)
    return run_config(**values)
