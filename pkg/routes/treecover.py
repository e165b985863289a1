from routes.common import add_builder_args, add_graph_args, config_from
from services.treecover_service import TreeCoverService


def run_treecover(args):
    service = TreeCoverService()
    return service.cmd_treecover(config_from(args, "treecover"))


def register(subparsers) -> None:
    parser = subparsers.add_parser("treecover", help="(1+2eps) tree cover (graph is rescaled)")
    add_graph_args(parser)
    parser.add_argument("--eps", type=float, default=0.5, help="eps in (0, 1]")
    parser.add_argument("--save", help="also write the tree cover as a binary file")
    add_builder_args(parser)
    parser.set_defaults(handler=run_treecover)
