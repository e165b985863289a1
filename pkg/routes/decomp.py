from routes.common import add_builder_args, add_graph_args, add_seed_arg, config_from
from services.decomp_service import DecompService


def run_decompose(args):
    service = DecompService()
    return service.cmd_decompose(config_from(args, "decompose"))


def register(subparsers) -> None:
    parser = subparsers.add_parser("decompose", help="strong padded decomposition at diameter Delta")
    add_graph_args(parser)
    parser.add_argument("--delta", type=float, required=True, help="diameter bound Delta > 0")
    parser.add_argument("--eps", type=float, default=0.125, help="eps in [0, 1/4]")
    parser.add_argument("--trials", type=int, default=1, help="number of sampled partitions")
    parser.add_argument("--gamma", type=float, help="also estimate padding of B(v, gamma r), gamma in [0, 1/8]")
    parser.add_argument("--lambda", dest="lam", type=float, help="override the truncated-exponential rate")
    add_seed_arg(parser)
    add_builder_args(parser)
    parser.set_defaults(handler=run_decompose)
