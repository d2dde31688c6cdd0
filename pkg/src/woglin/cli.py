"""Command-line batch interface.

Exit status: 0 = Yes, 1 = No, 2 = Unknown, 3 = usage, parse or input error.
For ``certify``, 0 means the certificate checks out and 1 that it was rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from multiprocessing import Pool
from typing import Any, Sequence

from . import __version__
from .certify import verdict_to_dict, verify_verdict
from .census import CLASS_FILTERS, enumerate_graphs, passes_criterion4
from .graphs import (
    GraphError,
    WeightedOrientedGraph,
    complete_multipartite,
    find_forbidden,
    graph_from_dict,
    h_graph,
    is_chordal,
    is_cochordal,
    is_house_free,
    underlying,
    v_plus,
)
from .ideals import IdealError, MonomialIdeal, edge_ideal, ideal_from_dict, power
from .linearity import (
    NO,
    UNKNOWN,
    YES,
    DecideOptions,
    LQ_CAP,
    SPLIT_CAP,
    LinearQuotientOrder,
    SplitLeaf,
    SplitNode,
    Verdict,
    decide_power,
)
from .oracle import BettiEvidence, OracleError, betti_table, is_componentwise_linear_oracle

FORMAT_VERSION = 1
EXIT = {YES: 0, NO: 1, UNKNOWN: 2}
EXIT_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 2 is reserved for Unknown
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _characteristic(text: str) -> int:
    value = int(text)
    if value != 0 and (value < 2 or any(value % p == 0 for p in range(2, int(value**0.5) + 1))):
        raise argparse.ArgumentTypeError("characteristic must be 0 or a prime")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="woglin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, decide: bool = True):
        p.add_argument("--char", type=_characteristic, default=2, help="field characteristic (0 or prime)")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--paranoid", action="store_true", help="check two degrees past the top generator degree")
        if decide:
            p.add_argument("--lq-cap", type=_positive, default=LQ_CAP)
            p.add_argument("--split-cap", type=_positive, default=SPLIT_CAP)
            p.add_argument("--no-oracle", action="store_true", help="never fall back to Betti computations")

    p = sub.add_parser("analyze", help="is I(D) componentwise linear?")
    p.add_argument("graph")
    common(p)
    p = sub.add_parser("power", help="is I(D)^k componentwise linear?")
    p.add_argument("graph")
    p.add_argument("--k", type=_positive, required=True)
    common(p)
    p = sub.add_parser("oracle", help="Betti-number verdict for a graph or ideal file")
    p.add_argument("input")
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--betti", action="store_true", help="include the full Betti table")
    common(p, decide=False)
    p = sub.add_parser("certify", help="re-verify a report produced by analyze or power")
    p.add_argument("graph")
    p.add_argument("report")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p = sub.add_parser("census", help="enumerate graphs and tabulate verdicts")
    p.add_argument("--n", type=_positive, required=True, help="maximum number of vertices")
    p.add_argument("--n-min", type=_positive, default=1)
    p.add_argument("--w", type=_positive, required=True, help="maximum weight")
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--class", dest="graph_class", choices=sorted(CLASS_FILTERS), default="all")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--criterion4-only", action="store_true", help="keep only graphs passing criterion (4)")
    p.add_argument("--list", action="store_true", help="include one row per graph")
    p.add_argument("--jobs", type=_positive, default=1)
    common(p)
    return parser


# ---------------------------------------------------------------------------


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        token = exc.doc[exc.pos:exc.pos + 12].split("\n")[0]
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg} near {token!r}") from None


def _load_graph(path: str) -> WeightedOrientedGraph:
    try:
        return graph_from_dict(_read_json(path))
    except GraphError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _options(args) -> DecideOptions:
    return DecideOptions(
        use_oracle=not getattr(args, "no_oracle", False),
        characteristic=args.char,
        lq_cap=getattr(args, "lq_cap", LQ_CAP),
        split_cap=getattr(args, "split_cap", SPLIT_CAP),
        paranoid=args.paranoid,
    )


def graph_summary(d: WeightedOrientedGraph) -> dict:
    return {
        "n": d.n,
        "arcs": len(d.arcs),
        "v_plus": sorted(v_plus(d)),
        "weights": dict(zip(d.vertices, d.weights)),
        "normalized_sources": sorted(d.normalized),
    }


def criteria_summary(d: WeightedOrientedGraph) -> dict:
    g = underlying(d)
    pattern = find_forbidden(d)
    multi = complete_multipartite(g)
    g_co = is_cochordal(g).chordal
    h_co = is_cochordal(h_graph(d)).chordal
    return {
        "forbidden_pattern": None if pattern is None else {"pattern": pattern.pattern, "witness": list(pattern.witness)},
        "underlying_cochordal": g_co,
        "h_graph_cochordal": h_co,
        "criterion4": pattern is None and g_co and h_co,
        "chordal": is_chordal(g).chordal,
        "house_free": is_house_free(g) is None,
        "complete_multipartite": multi is not None and multi.r >= 2,
    }


def _request(args, path: str | None) -> dict:
    req = {"command": args.command, "input": path, "k": getattr(args, "k", 1), "characteristic": args.char,
           "paranoid": args.paranoid}
    if hasattr(args, "lq_cap"):
        req.update(lq_cap=args.lq_cap, split_cap=args.split_cap, oracle=not args.no_oracle)
    return req


def _emit(report: dict, fmt: str, text: str) -> None:
    if fmt == "structured":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _describe_certificate(v: Verdict) -> list[str]:
    cert = v.certificate
    if cert is None:
        return []
    if isinstance(cert, (SplitLeaf, SplitNode)):
        lines = ["certificate: split tree"]

        def walk(node, depth):
            pad = "  " * (depth + 1)
            if isinstance(node, SplitLeaf):
                lines.append(f"{pad}{node.kind} {node.ideal}")
            else:
                lines.append(f"{pad}split at {node.variable}: {node.ideal}")
                walk(node.left, depth + 1)
                walk(node.right, depth + 1)

        walk(cert, 0)
        return lines
    if isinstance(cert, LinearQuotientOrder):
        lines = ["certificate: linear-quotient order"]
        for u, w in zip(cert.order, cert.colon_witnesses):
            lines.append(f"  {cert.ideal.fmt(u)}" + (f"  colon ({', '.join(w)})" if w else ""))
        return lines
    if isinstance(cert, BettiEvidence):
        lines = [f"certificate: Betti evidence (characteristic {cert.characteristic}, method {cert.method})"]
        for d, r in cert.per_degree:
            lines.append(f"  reg(I_<{d}>) = {r}" + ("" if r == d else "  FAILS"))
        if cert.regularity is not None:
            lines.append(f"  reg(I) = {cert.regularity}")
        return lines
    doc = verdict_to_dict(v)["certificate"]
    return ["certificate: " + json.dumps(doc)]


def _verdict_text(v: Verdict) -> list[str]:
    lines = [f"answer: {v.answer}", f"rule: {v.rule}"]
    lines += _describe_certificate(v)
    lines += [f"note: {n}" for n in v.notes]
    return lines


def cmd_decide(args) -> int:
    d = _load_graph(args.graph)
    k = getattr(args, "k", 1)
    start = time.perf_counter()
    verdict = decide_power(d, k, _options(args))
    elapsed = time.perf_counter() - start
    report = {
        "format_version": FORMAT_VERSION,
        "request": _request(args, args.graph),
        "graph": graph_summary(d),
        "criteria": criteria_summary(d),
        "verdict": verdict_to_dict(verdict),
        "timing": {"seconds": round(elapsed, 6)},
    }
    summary = report["graph"]
    text = [
        f"graph: n={summary['n']} arcs={summary['arcs']} V+={summary['v_plus']}",
        f"question: is I(D){'' if k == 1 else '^' + str(k)} componentwise linear?",
    ]
    text += [f"criterion {name}: {value}" for name, value in report["criteria"].items()]
    text += _verdict_text(verdict)
    text.append(f"time: {elapsed:.3f}s")
    _emit(report, args.format, "\n".join(text) + "\n")
    return EXIT[verdict.answer]


def _load_ideal_or_graph(path: str) -> tuple[MonomialIdeal, dict | None]:
    doc = _read_json(path)
    try:
        if isinstance(doc, dict) and "variables" in doc:
            return ideal_from_dict(doc), None
        d = graph_from_dict(doc)
        return edge_ideal(d), graph_summary(d)
    except (GraphError, IdealError, OverflowError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_oracle(args) -> int:
    ideal, summary = _load_ideal_or_graph(args.input)
    if args.k > 1:
        ideal = power(ideal, args.k)
    start = time.perf_counter()
    try:
        if ideal.is_zero():
            raise OracleError("the zero ideal has no regularity")
        ev = is_componentwise_linear_oracle(ideal, args.char, paranoid=args.paranoid, with_regularity=True)
        table = betti_table(ideal, args.char) if args.betti else None
    except OracleError as exc:
        report = {"format_version": FORMAT_VERSION, "request": _request(args, args.input),
                  "answer": UNKNOWN, "reason": str(exc)}
        _emit(report, args.format, f"answer: Unknown\nreason: {exc}\n")
        return EXIT[UNKNOWN]
    elapsed = time.perf_counter() - start
    verdict = Verdict(YES if ev.componentwise_linear else NO, "oracle", ev, k=args.k)
    report = {
        "format_version": FORMAT_VERSION,
        "request": _request(args, args.input),
        "graph": summary,
        "ideal": {"generators": len(ideal.generators), "degrees": ideal.degrees()},
        "verdict": verdict_to_dict(verdict),
        "betti": None if table is None else table.to_dict(),
        "timing": {"seconds": round(elapsed, 6)},
    }
    text = [f"ideal: {len(ideal.generators)} generators in degrees {ideal.degrees()}"]
    text += _verdict_text(verdict)
    if table is not None:
        text += ["betti table:", table.to_text()]
    text.append(f"time: {elapsed:.3f}s")
    _emit(report, args.format, "\n".join(text) + "\n")
    return EXIT[verdict.answer]


def cmd_certify(args) -> int:
    d = _load_graph(args.graph)
    doc = _read_json(args.report)
    if not isinstance(doc, dict):
        raise UsageError(f"{args.report}: report must be an object")
    request = doc.get("request", {})
    verdict_doc = doc.get("verdict", doc)
    try:
        options = DecideOptions(
            use_oracle=request.get("oracle", True),
            characteristic=request.get("characteristic", 2),
            lq_cap=request.get("lq_cap", LQ_CAP),
            split_cap=request.get("split_cap", SPLIT_CAP),
            paranoid=request.get("paranoid", False),
        )
    except AttributeError:
        raise UsageError(f"{args.report}: malformed request block") from None
    requested_k = request.get("k") if isinstance(request.get("k"), int) else None
    problems = verify_verdict(d, verdict_doc, options, k=requested_k)
    report = {"format_version": FORMAT_VERSION, "valid": not problems, "violations": problems}
    text = "certificate OK\n" if not problems else "".join(f"violation: {p}\n" for p in problems)
    _emit(report, args.format, text)
    return 0 if not problems else 1


def _census_row(job) -> tuple[dict, str, str]:
    d, k, options = job
    v = decide_power(d, k, options)
    return {"graph": {"vertices": list(d.vertices), "weights": list(d.weights),
                      "arcs": [list(a) for a in d.sorted_arcs()]},
            "answer": v.answer, "rule": v.rule}, v.answer, v.rule


def cmd_census(args) -> int:
    if args.n > 7:
        raise UsageError("census supports at most 7 vertices")
    options = _options(args)
    keep = passes_criterion4 if args.criterion4_only else None
    graphs = enumerate_graphs(args.n, args.w, n_min=args.n_min, graph_class=args.graph_class,
                              connected=args.connected, keep=keep)
    jobs = ((d, args.k, options) for d in graphs)
    start = time.perf_counter()
    rows, tally = [], Counter()
    if args.jobs > 1:
        with Pool(args.jobs) as pool:
            results = list(pool.imap(_census_row, jobs, chunksize=16))
    else:
        results = map(_census_row, jobs)
    for row, answer, rule in results:
        tally[(answer, rule)] += 1
        if args.list:
            rows.append(row)
    elapsed = time.perf_counter() - start
    table = [{"answer": a, "rule": r, "count": c} for (a, r), c in sorted(tally.items())]
    report = {
        "format_version": FORMAT_VERSION,
        "request": {**_request(args, None), "n": args.n, "n_min": args.n_min, "w": args.w,
                    "class": args.graph_class, "connected": args.connected,
                    "criterion4_only": args.criterion4_only},
        "count": sum(tally.values()),
        "tally": table,
        "graphs": rows if args.list else None,
        "timing": {"seconds": round(elapsed, 6)},
    }
    text = [f"graphs: {report['count']}"]
    text += [f"  {t['answer']:<8} {t['rule']:<34} {t['count']}" for t in table]
    text.append(f"time: {elapsed:.3f}s")
    _emit(report, args.format, "\n".join(text) + "\n")
    return 0


COMMANDS = {"analyze": cmd_decide, "power": cmd_decide, "oracle": cmd_oracle,
            "certify": cmd_certify, "census": cmd_census}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"woglin: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
