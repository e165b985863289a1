from routes.common import add_builder_args, add_graph_args, config_from
from services.spc_service import SpcService


def run_spc(args):
    """Build and verify an (r, eps) shortest-path cover with its towns."""
    service = SpcService()
    return service.cmd_spc(config_from(args, "spc"))


def run_towns(args):
    service = SpcService()
    return service.cmd_towns(config_from(args, "towns"))


def run_profile(args):
    service = SpcService()
    return service.cmd_profile(config_from(args, "profile"))


def run_nets(args):
    service = SpcService()
    return service.cmd_nets(config_from(args, "nets"))


def register(subparsers) -> None:
    for name, handler, help_text in (
        ("spc", run_spc, "shortest-path cover at one scale"),
        ("towns", run_towns, "town/sprawl decomposition of a minimal cover"),
    ):
        parser = subparsers.add_parser(name, help=help_text)
        add_graph_args(parser)
        parser.add_argument("--r", type=float, required=True, help="scale r > 0")
        parser.add_argument("--eps", type=float, default=0.0, help="slack eps >= 0")
        add_builder_args(parser)
        parser.set_defaults(handler=handler)

    parser = subparsers.add_parser("profile", help="observed local sparsity over all scales (1+sigma)^i")
    add_graph_args(parser)
    parser.add_argument("--eps", type=float, default=1 / 6, help="eps in (0, 1/6]")
    add_builder_args(parser)
    parser.set_defaults(handler=run_profile)

    parser = subparsers.add_parser("nets", help="Gonzales net hierarchy")
    add_graph_args(parser)
    parser.add_argument("--base", type=float, required=True, help="radius of net level 0")
    parser.add_argument("--ratio", type=float, required=True, help="radius ratio between levels, > 1")
    parser.set_defaults(handler=run_nets)
