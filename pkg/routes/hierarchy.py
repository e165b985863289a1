from routes.common import add_builder_args, add_graph_args, config_from
from services.hierarchy_service import HierarchyService


def run_hierarchy(args):
    service = HierarchyService()
    return service.cmd_hierarchy(config_from(args, "hierarchy"))


def register(subparsers) -> None:
    parser = subparsers.add_parser("hierarchy", help="hub hierarchy over all scales (graph is rescaled)")
    add_graph_args(parser)
    parser.add_argument("--eps", type=float, default=1 / 6, help="eps in (0, 1/6]")
    add_builder_args(parser)
    parser.set_defaults(handler=run_hierarchy)
