from routes.common import add_builder_args, add_graph_args, config_from
from services.tsp_service import TspService


def run_solve(args):
    service = TspService()
    return service.cmd_tsp(config_from(args, "tsp"))


def register(subparsers) -> None:
    tsp = subparsers.add_parser("tsp", help="Subset TSP over a terminal set")
    actions = tsp.add_subparsers(dest="action", required=True)

    parser = actions.add_parser("solve", help="divide-and-conquer tour (graph is rescaled)")
    add_graph_args(parser)
    parser.add_argument("--terminals", required=True, help="file of 0-based terminal ids")
    parser.add_argument("--eps", type=float, default=1 / 6, help="eps in (0, 1/6]")
    parser.add_argument("--q", type=int, help="town threshold (default: from eps and observed sparsity)")
    parser.add_argument("--solver", default="exact", choices=["exact", "heuristic"])
    parser.add_argument("--matching", default="exact", choices=["exact", "greedy"])
    add_builder_args(parser)
    parser.set_defaults(handler=run_solve)
