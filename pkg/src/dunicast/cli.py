"""Command-line front end.

Networks and codes are stored as JSON laid out one edge per line, so the
files diff cleanly.  A network file looks like::

    {
      "nodes": ["s1", "s2", "m", "n", "t1", "t2"],
      "edges": [
        {"id": 0, "tail": "s1", "head": "m"},
        ...
      ],
      "s1": "s1", "s2": "s2", "t1": "t1", "t2": "t2"
    }

and a code file maps edge ids to coefficient pairs ``[a, b]``::

    {
      "code": {
        "0": [1, 0],
        ...
      }
    }

Edges missing from a code file carry nothing.  Exit status is 0 for
success or a positive verdict, 2 for a negative verdict and 1 for errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .codec import Gf2Vec2, NetworkCode, simulate, verify
from .errors import DoubleUnicastError, FormatError, Infeasible, PairDisconnected
from .feasibility import (ContainsUnitPair, Degenerate, SumRateOne, blocking_edges,
                          capacity_region, pair_connectivity, symmetric_capacity,
                          time_share_schedule)
from .graph import Dag, DoubleUnicastNet, Edge
from .instances import NAMES, GeneratorParams, canned, random_net
from .oracle import OracleConfig, exhaustive_scalar_codes
from .synthesis import synthesize_trace

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2

TERMINALS = ("s1", "s2", "t1", "t2")


# ----- file formats -----

def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what} is not valid JSON: {exc}") from None


def network_to_text(net: DoubleUnicastNet) -> str:
    dag = net.dag
    lines = ["{", f'  "nodes": {json.dumps([dag.name(v) for v in dag.nodes])},', '  "edges": [']
    rows = [json.dumps({"id": e.id, "tail": dag.name(e.tail), "head": dag.name(e.head)})
            for e in dag.edges]
    lines.extend(f"    {row}," for row in rows[:-1])
    if rows:
        lines.append(f"    {rows[-1]}")
    ends = ", ".join(f'"{k}": {json.dumps(dag.name(getattr(net, k)))}' for k in TERMINALS)
    lines += ["  ],", f"  {ends}", "}"]
    return "\n".join(lines) + "\n"


def network_from_text(text: str) -> DoubleUnicastNet:
    doc = _load_json(text, "network file")
    if not isinstance(doc, dict):
        raise FormatError("network file must hold a JSON object")
    missing = [k for k in ("nodes", "edges") + TERMINALS if k not in doc]
    if missing:
        raise FormatError(f"network file lacks {', '.join(missing)}")
    names = doc["nodes"]
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise FormatError("nodes must be a list of strings")
    if len(set(names)) != len(names):
        raise FormatError("node names must be unique")
    index = {name: i for i, name in enumerate(names)}

    def lookup(name, where: str) -> int:
        if name not in index:
            raise FormatError(f"{where} names undeclared node {name!r}")
        return index[name]

    edges = []
    seen = set()
    for row in doc["edges"]:
        try:
            eid, tail, head = row["id"], row["tail"], row["head"]
        except (TypeError, KeyError):
            raise FormatError(f"edge entry {row!r} needs id, tail and head") from None
        if not isinstance(eid, int) or isinstance(eid, bool) or eid < 0:
            raise FormatError(f"edge id {eid!r} must be a nonnegative integer")
        if eid in seen:
            raise FormatError(f"duplicate edge id {eid}")
        seen.add(eid)
        edges.append(Edge(eid, lookup(tail, f"edge {eid}"), lookup(head, f"edge {eid}")))
    dag = Dag(tuple(range(len(names))), tuple(edges), tuple(enumerate(names)))
    ends = [lookup(doc[k], k) for k in TERMINALS]
    try:
        return DoubleUnicastNet(dag, *ends)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def code_to_text(code: NetworkCode) -> str:
    rows = [f'    "{eid}": [{v.a}, {v.b}]' for eid, v in code.vectors]
    body = ",\n".join(rows)
    return "{\n  \"code\": {\n" + (body + "\n" if rows else "") + "  }\n}\n"


def code_from_text(net: DoubleUnicastNet, text: str) -> NetworkCode:
    doc = _load_json(text, "code file")
    if not isinstance(doc, dict) or not isinstance(doc.get("code"), dict):
        raise FormatError('code file must hold an object with a "code" member')
    mapping = {}
    for key, pair in doc["code"].items():
        try:
            eid = int(key)
        except ValueError:
            raise FormatError(f"code key {key!r} is not an edge id") from None
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"code entry for edge {eid} must be [a, b]")
        mapping[eid] = Gf2Vec2.from_pair(*pair)
    return NetworkCode.from_mapping(net, mapping)


def code_to_dot(net: DoubleUnicastNet, code: NetworkCode) -> str:
    """Graphviz source with every coding edge labeled by its symbol."""
    dag = net.dag
    lines = ["digraph code {", "  rankdir=LR;"]
    special = {getattr(net, k) for k in TERMINALS}
    for v in dag.nodes:
        shape = "doublecircle" if v in special else "circle"
        lines.append(f"  {json.dumps(dag.name(v))} [shape={shape}];")
    vec = code.as_dict()
    for e in dag.edges:
        arc = f"  {json.dumps(dag.name(e.tail))} -> {json.dumps(dag.name(e.head))}"
        if vec[e.id]:
            lines.append(f'{arc} [label="{vec[e.id].label}"];')
        else:
            lines.append(f"{arc} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----- reports -----

def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def _edge_rows(net: DoubleUnicastNet, code: NetworkCode) -> list[dict]:
    dag = net.dag
    return [{"id": e.id, "tail": dag.name(e.tail), "head": dag.name(e.head),
             "label": code[e.id].label} for e in dag.edges]


def _region_doc(region) -> dict:
    doc = {"kind": type(region).__name__, "describe": region.describe()}
    if isinstance(region, Degenerate):
        doc.update(max_r1=region.max_r1, max_r2=region.max_r2)
    return doc


def check_report(net: DoubleUnicastNet) -> dict:
    conn = pair_connectivity(net)
    reports = blocking_edges(net) if conn.unicast_connected else []
    feasible = conn.unicast_connected and not any(r.blocking for r in reports)
    dag = net.dag
    return {
        "connectivity": {"s1-t1": conn.s1_t1, "s2-t2": conn.s2_t2,
                         "s1-t2": conn.s1_t2, "s2-t1": conn.s2_t1},
        "candidate_edges": [
            {"id": r.edge, "tail": dag.name(dag.edge(r.edge).tail),
             "head": dag.name(dag.edge(r.edge).head),
             "cuts": {"s1-t1": r.disconnects_11, "s2-t2": r.disconnects_22,
                      "s1-t2": r.disconnects_12, "s2-t1": r.disconnects_21},
             "blocking": r.blocking}
            for r in reports],
        "feasible_11": feasible,
        "region": _region_doc(capacity_region(net)),
        "symmetric_capacity": symmetric_capacity(net).value,
    }


# ----- commands -----

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _oracle_config(args) -> OracleConfig:
    return OracleConfig(max_search_space=args.max_oracle)


def cmd_check(args) -> int:
    report = check_report(network_from_text(_read(args.network)))
    _emit(report)
    return EXIT_OK if report["feasible_11"] else EXIT_NEGATIVE


def cmd_synthesize(args) -> int:
    net = network_from_text(_read(args.network))
    try:
        trace = synthesize_trace(net, _oracle_config(args))
    except (Infeasible, PairDisconnected) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    if not verify(net, trace.code).valid:
        raise DoubleUnicastError("synthesized code failed verification")
    if args.out:
        _write(args.out, code_to_text(trace.code))
    if args.emit == "dot":
        sys.stdout.write(code_to_dot(net, trace.code))
    else:
        _emit({"case": trace.case, "fallback": trace.fallback,
               "edges": _edge_rows(net, trace.code)})
    return EXIT_OK


def cmd_verify(args) -> int:
    net = network_from_text(_read(args.network))
    report = verify(net, code_from_text(net, _read(args.code)))
    _emit({"valid": report.valid, "t1_decodable": report.t1_decodable,
           "t2_decodable": report.t2_decodable, "bad_edges": report.bad_edges})
    return EXIT_OK if report.valid else EXIT_NEGATIVE


def cmd_simulate(args) -> int:
    net = network_from_text(_read(args.network))
    code = code_from_text(net, _read(args.code))
    sim = simulate(net, code, args.x1, args.x2, check=False)
    dag = net.dag
    _emit({"inputs": [args.x1, args.x2], "decoded": list(sim.decoded),
           "consistent": sim.consistent,
           "edges": [{"id": eid, "tail": dag.name(dag.edge(eid).tail),
                      "head": dag.name(dag.edge(eid).head), "value": val}
                     for eid, val in sim.edge_values]})
    ok = sim.consistent and sim.decoded == (args.x1, args.x2)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_oracle(args) -> int:
    net = network_from_text(_read(args.network))
    code = exhaustive_scalar_codes(net, _oracle_config(args))
    if code is None:
        _emit({"found": False, "verdict": "no scalar code exists"})
        return EXIT_NEGATIVE
    _emit({"found": True, "verdict": "scalar code found", "edges": _edge_rows(net, code)})
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.canned:
        net = canned(args.canned)
    else:
        net = random_net(GeneratorParams(node_count=tuple(args.nodes),
                                         edge_count=tuple(args.edges), seed=args.seed,
                                         overlap_bias=args.overlap_bias))
    text = network_to_text(net)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_region(args) -> int:
    net = network_from_text(_read(args.network))
    r1, r2 = Fraction(args.r1), Fraction(args.r2)
    region = capacity_region(net)
    member = region.contains(r1, r2)
    doc = {"region": _region_doc(region), "rates": [str(r1), str(r2)], "member": member}
    if member and isinstance(region, SumRateOne):
        sched = time_share_schedule(net, r1, r2)
        dag = net.dag
        doc["schedule"] = {
            "n": sched.n,
            "slots": [{"source": s.source,
                       "path": [dag.name(v) for v in s.path.nodes] if s.path else None}
                      for s in sched.slots],
        }
    elif member and isinstance(region, ContainsUnitPair):
        doc["note"] = "achieved by a scalar XOR code"
    _emit(doc)
    return EXIT_OK if member else EXIT_NEGATIVE


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError("must be 0 or 1")
    return int(text)


def _rate(text: str) -> str:
    try:
        Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dunicast",
        description="Rate-(1,1) feasibility and XOR code synthesis for double-unicast DAGs.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_network(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("network", help="network file ('-' for stdin)")
        return p

    p = with_network("check", "decide whether rate (1,1) is achievable")
    p.set_defaults(func=cmd_check)

    p = with_network("synthesize", "build a scalar XOR code")
    p.add_argument("--emit", choices=("report", "dot"), default="report")
    p.add_argument("--out", help="also write the code file here")
    p.add_argument("--max-oracle", type=int, default=OracleConfig.max_search_space,
                   help="search budget for the fallback oracle")
    p.set_defaults(func=cmd_synthesize)

    p = with_network("verify", "check a code file against a network")
    p.add_argument("code", help="code file")
    p.set_defaults(func=cmd_verify)

    p = with_network("simulate", "push two bits through a coded network")
    p.add_argument("code", help="code file")
    p.add_argument("x1", type=_bit)
    p.add_argument("x2", type=_bit)
    p.set_defaults(func=cmd_simulate)

    p = with_network("oracle", "search all scalar GF(2) codes")
    p.add_argument("--max-oracle", type=int, default=OracleConfig.max_search_space,
                   help="maximum number of partial assignments to visit")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a random or canned network file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, nargs=2, default=(4, 8), metavar=("MIN", "MAX"))
    p.add_argument("--edges", type=int, nargs=2, default=(4, 14), metavar=("MIN", "MAX"))
    p.add_argument("--overlap-bias", type=float, default=0.6)
    p.add_argument("--canned", type=str.upper, choices=NAMES, help="export a canned instance")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = with_network("region", "test a rate pair against the capacity region")
    p.add_argument("r1", type=_rate)
    p.add_argument("r2", type=_rate)
    p.set_defaults(func=cmd_region)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse signals usage errors with status 2, which here means "no"
        return EXIT_ERROR if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DoubleUnicastError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
