from routes.common import add_graph_args, config_from
from services.verify_service import VerifyService


def run_verify(args):
    service = VerifyService()
    return service.cmd_verify(config_from(args, "verify"))


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="re-verify a stored document or tree-cover/oracle file")
    add_graph_args(parser, out=False)
    parser.add_argument("--doc", required=True, help="JSON document, tree-cover or oracle file")
    parser.add_argument("--strict-induced", dest="strict_induced", action="store_true")
    parser.set_defaults(handler=run_verify)
