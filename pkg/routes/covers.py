from routes.common import add_builder_args, add_graph_args, config_from
from services.cover_service import CoverService


def run_cover(args):
    service = CoverService()
    return service.cmd_cover(config_from(args, "cover"))


def run_partition_cover(args):
    service = CoverService()
    return service.cmd_partition_cover(config_from(args, "partition-cover"))


def register(subparsers) -> None:
    for name, handler, default_eps, help_text in (
        ("cover", run_cover, 0.1, "sparse cover at diameter Delta, eps in (0, 1/10]"),
        ("partition-cover", run_partition_cover, 0.5, "sparse partition cover at diameter Delta, eps in (0, 1]"),
    ):
        parser = subparsers.add_parser(name, help=help_text)
        add_graph_args(parser)
        parser.add_argument("--delta", type=float, required=True, help="diameter bound Delta > 0")
        parser.add_argument("--eps", type=float, default=default_eps)
        parser.add_argument(
            "--strict-induced", dest="strict_induced", action="store_true",
            help="also report clusters whose induced strong diameter exceeds Delta",
        )
        add_builder_args(parser)
        parser.set_defaults(handler=handler)
