from routes.common import add_builder_args, add_graph_args, add_seed_arg, config_from
from services.oracle_service import OracleService


def run_build(args):
    service = OracleService()
    return service.cmd_oracle_build(config_from(args, "oracle-build"))


def run_query(args):
    service = OracleService()
    return service.cmd_oracle_query(config_from(args, "oracle-query", pair=[args.u, args.v]))


def run_bench(args):
    service = OracleService()
    return service.cmd_oracle_bench(config_from(args, "oracle-bench"))


def register(subparsers) -> None:
    oracle = subparsers.add_parser("oracle", help="distance oracle over a tree cover")
    actions = oracle.add_subparsers(dest="action", required=True)

    parser = actions.add_parser("build", help="build an oracle and write it as a binary file")
    add_graph_args(parser, out=False)
    parser.add_argument("--out", dest="save", required=True, help="oracle file to write")
    parser.add_argument("--eps", type=float, default=0.5, help="eps in (0, 1]")
    add_seed_arg(parser)
    add_builder_args(parser)
    parser.set_defaults(handler=run_build)

    parser = actions.add_parser("query", help="estimate d(u, v)")
    parser.add_argument("--in", dest="input", required=True, help="oracle file")
    parser.add_argument("--out", help="write the query document here")
    parser.add_argument("u", type=int)
    parser.add_argument("v", type=int)
    parser.set_defaults(handler=run_query)

    parser = actions.add_parser("bench", help="time random queries")
    parser.add_argument("--in", dest="input", required=True, help="oracle file")
    parser.add_argument("--out", help="write the benchmark document here")
    parser.add_argument("--queries", type=int, default=10000)
    add_seed_arg(parser)
    parser.set_defaults(handler=run_bench)
