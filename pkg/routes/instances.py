from modules.synthetic import INSTANCE_KINDS
from routes.common import add_seed_arg, config_from, parse_params
from services.instance_service import InstanceService


def run_generate(args):
    service = InstanceService()
    return service.cmd_generate(config_from(args, "generate", params=parse_params(args.param)))


def run_schemas(args):
    service = InstanceService()
    return service.cmd_schemas(config_from(args, "schemas"))


def register(subparsers) -> None:
    kinds = "; ".join(f"{k}: {v['description']}" for k, v in INSTANCE_KINDS.items())
    parser = subparsers.add_parser("generate", help="write a synthetic instance", description=kinds)
    parser.add_argument("--kind", required=True, choices=list(INSTANCE_KINDS))
    parser.add_argument("--param", action="append", metavar="KEY=VALUE", help="generator parameter (repeatable)")
    parser.add_argument("--out", dest="save", required=True, help="edge-list file to write")
    parser.add_argument("--terminals", help="terminal file to write (default: <out>.terminals)")
    add_seed_arg(parser)
    parser.set_defaults(handler=run_generate)

    parser = subparsers.add_parser("schemas", help="write JSON schemas of every document")
    parser.add_argument("--out", dest="save", help="directory (default: docs/schemas)")
    parser.set_defaults(handler=run_schemas)
