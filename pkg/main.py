"""
main.py

Command line front end of the contraction-order toolkit. Every command reads
JSON fixtures, prints a JSON payload on stdout and reports problems as a
single red line on stderr.

Commands:
- eval NETWORK SEQUENCE     per-step and aggregate costs of a sequence.
- solve NETWORK             optimal sequence (dp, twins or brute).
- reduce KIND SOURCE        reduction certificate of a network or instance.
- decide KIND INSTANCE      answer and witness through the gadget chain containing KIND.
- check SUITE               property-check suites, "all" for every suite.
- gen KIND                  random, complete, star or tree network.

Exit codes: 0 ok, 1 check failure, 2 parse or configuration error,
3 invalid sequence or network, 4 size limit, 5 infeasible parameters.
"""

import argparse
import logging
import sys

from basics.config import RunConfig
from basics.errors import (ConfigError, InfeasibleParametersError, InstanceError, NetworkError, ObjectiveError,
                           ParseError, SequenceError, SizeLimitError)
from basics.logger import color_text, get_logger
from experiments.checks import SUITE_ALIASES, SUITES, run_suite
from experiments.save_results import save_report
from ordering.solver import METHODS, solve
from reduction.gadgets import KINDS, NETWORK_KINDS, make_certificate, sppf_to_oms_star
from reduction.pipeline import CHAINS, run_pipeline
from reduction.problems import Instance, sppf
from TN.costmodel import Objective, evaluate_sequence
from TN.generators import complete_network, make_rng, random_network, tree_network
from TN.netcore import Representation
from TN.serialization import (load_network, load_sequence, network_from_dict, network_to_dict, read_json,
                              report_to_dict, solve_result_to_dict, write_json)

log = get_logger("cli")

EXIT_CODES = (
    (ParseError, 2),
    (ConfigError, 2),
    (ObjectiveError, 2),
    (InstanceError, 2),
    (SequenceError, 3),
    (NetworkError, 3),
    (SizeLimitError, 4),
    (InfeasibleParametersError, 5),
)
GEN_KINDS = ("random", "complete", "star", "tree")


def _objective(args, net):
    if args.objective:
        return Objective(args.objective)
    return Objective.OPN if net.representation is Representation.MULTIPLICATIVE else Objective.PT


def _emit(payload, out=None):
    text = write_json(payload)
    print(text)
    if out:
        write_json(payload, out)
    return 0


def cmd_eval(args, config):
    net = load_network(args.network)
    seq = load_sequence(args.sequence)
    report = evaluate_sequence(net, seq, _objective(args, net))
    return _emit(report_to_dict(report), config.out)


def cmd_solve(args, config):
    net = load_network(args.network)
    result = solve(net, _objective(args, net), args.method, config)
    log.info(f"{result.method}: optimum {result.optimum}")
    return _emit(solve_result_to_dict(result), config.out)


def cmd_reduce(args, config):
    payload = read_json(args.source)
    source = network_from_dict(payload) if args.kind in NETWORK_KINDS else Instance.from_dict(payload)
    cert = make_certificate(args.kind, source, config, general=args.general)
    return _emit(cert.to_dict(), config.out)


def cmd_decide(args, config):
    if args.kind in NETWORK_KINDS:
        raise InfeasibleParametersError(f"{args.kind} is an optimization reduction with no decision; use solve")
    instance = Instance.from_dict(read_json(args.instance))
    if args.kind not in CHAINS[instance.problem]:
        raise InfeasibleParametersError(
            f"{args.kind} is not on the chain of {instance.problem.value} instances {CHAINS[instance.problem]}")
    result = run_pipeline(instance, config)
    return _emit({"kind": args.kind, **result.to_dict()}, config.out)


def cmd_check(args, config):
    report = run_suite(args.suite, config)
    print(write_json(report))
    if config.out or args.save:
        save_report(report, config.out)
    if not report["passed"]:
        failed = [r["suite"] for r in report["suites"] if not r["passed"]]
        print(color_text(f"failed suites: {', '.join(failed)}", 'red'), file=sys.stderr)
        return 1
    return 0


def cmd_gen(args, config):
    rng = make_rng(config.seed)
    if args.kind == "random":
        net = random_network(args.n, rng, args.edge_prob, args.max_weight, args.representation, args.zero_vertices)
    elif args.kind == "complete":
        identity = "1" if args.representation == "multiplicative" else "0"
        vertex_weight = identity if args.zero_vertices or args.vertex_weight is None else args.vertex_weight
        net = complete_network(args.n, args.edge_weight, vertex_weight, args.representation)
    elif args.kind == "tree":
        net = tree_network(args.n, rng, args.max_weight, args.representation, args.zero_vertices)
    else:
        if not args.items:
            raise ConfigError("gen star needs --items, the strict product-partition values b'")
        cert = sppf_to_oms_star(sppf(args.items), config.max_weight_bits)
        if cert.target is None:
            raise InfeasibleParametersError(f"No star gadget: {cert.shortcut.reason}")
        net = cert.target
    return _emit(network_to_dict(net), config.out)


COMMANDS = {
    "eval": cmd_eval,
    "solve": cmd_solve,
    "reduce": cmd_reduce,
    "decide": cmd_decide,
    "check": cmd_check,
    "gen": cmd_gen,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="seed of every randomized step")
    common.add_argument("--cases", type=int, help="random cases per check suite")
    common.add_argument("--dp-max", type=int, dest="dp_max_vertices", help="largest network solve_dp accepts")
    common.add_argument("--brute-max", type=int, dest="brute_max_vertices", help="largest network brute_force accepts")
    common.add_argument("--out", help="also write the JSON payload to this file")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")

    parser = argparse.ArgumentParser(prog="tn-order", description="Exact contraction ordering of tensor networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="cost of a contraction sequence")
    p.add_argument("network")
    p.add_argument("sequence")
    p.add_argument("--objective", choices=[o.value for o in Objective])

    p = sub.add_parser("solve", parents=[common], help="optimal contraction sequence")
    p.add_argument("network")
    p.add_argument("--objective", choices=[o.value for o in Objective])
    p.add_argument("--method", choices=METHODS, default="dp")

    p = sub.add_parser("reduce", parents=[common], help="build a reduction certificate")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("source", help="network JSON for cms-to-*, instance JSON otherwise")
    p.add_argument("--general", action="store_true", help="cms-to-oms for rational weights via the subset-sum gap")

    p = sub.add_parser("decide", parents=[common], help="decide an instance through its gadget chain")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("instance")
    p.add_argument("--method", choices=("dp", "twins"), dest="decide_method", help="exact solver of the gadget")

    p = sub.add_parser("check", parents=[common], help="run property-check suites")
    p.add_argument("suite", choices=["all", *SUITES, *SUITE_ALIASES])
    p.add_argument("--save", action="store_true", help="save the report under experiments/results/")

    p = sub.add_parser("gen", parents=[common], help="generate a network")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--n", type=int, default=5, help="number of vertices")
    p.add_argument("--edge-prob", type=float, default=0.6)
    p.add_argument("--max-weight", type=int, default=4)
    p.add_argument("--edge-weight", default="1", help="edge weight of a complete network")
    p.add_argument("--vertex-weight", help="vertex weight of a complete network, default the identity")
    p.add_argument("--representation", choices=[r.value for r in Representation], default="additive")
    p.add_argument("--zero-vertices", action="store_true", help="all vertex weights zero (CMS-0)")
    p.add_argument("--items", type=int, nargs="+", help="b' values of a star gadget")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        get_logger(level=logging.DEBUG if args.verbose > 1 else logging.INFO)

    try:
        config = RunConfig.from_env(seed=args.seed, cases=args.cases, dp_max_vertices=args.dp_max_vertices,
                                    brute_max_vertices=args.brute_max_vertices, out=args.out,
                                    decide_method=getattr(args, "decide_method", None))
        return COMMANDS[args.command](args, config)
    except tuple(cls for cls, _ in EXIT_CODES) as e:
        code = next(code for cls, code in EXIT_CODES if isinstance(e, cls))
        print(color_text(f"{type(e).__name__}: {e}", 'red'), file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
