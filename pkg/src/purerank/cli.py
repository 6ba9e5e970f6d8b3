"""Command-line entry point: ``purerank <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 input parse error, 4 validation
error, 5 convergence failure, 6 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

import numpy as np

from purerank.classification import KIND_NAMES, classify
from purerank.core import compute
from purerank.errors import ConvergenceError, InsufficientDataError, ParseError, PureRankError, ValidationError
from purerank.graph import load_edge_list
from purerank.local import SolverOptions
from purerank.metrics import compare
from purerank.multi import load_multi_edge_list, multi_purerank, net_score
from purerank.pagerank import pagerank
from purerank.surfer import build_extended_chain, simulate, sojourn_check

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_CONVERGENCE = 5
EXIT_IO = 6


def _workers(value: int) -> int:
    if value < 0:
        raise ValidationError("--workers must be >= 0")
    env = os.environ.get("PURERANK_WORKERS")
    if value == 0 and env:
        return int(env)
    return value


def _options(args) -> SolverOptions:
    return SolverOptions(tolerance=args.tol, max_iterations=args.max_iter, lazy_factor=args.lazy)


def _load(args):
    weighted = {"auto": None, "yes": True, "no": False}[args.weighted]
    return load_edge_list(args.input, weighted=weighted, delimiter=args.delimiter)


def _emit(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _score_output(args, g, c, scores, meta) -> str:
    labels = [c.label_of(i) for i in range(g.n_nodes)]
    if args.format == "json":
        doc = {
            "nodes": [
                {"node": g.labels[i], "score": float(scores[i]), "class": labels[i]} for i in range(g.n_nodes)
            ],
            "metadata": meta,
        }
        return json.dumps(doc, indent=2) + "\n"
    return _csv(((g.labels[i], repr(float(scores[i])), labels[i]) for i in range(g.n_nodes)), ["node", "score", "class"])


# -- subcommands -------------------------------------------------------------------


def cmd_classify(args) -> int:
    g = _load(args)
    c = classify(g)
    rows = []
    for i in range(g.n_nodes):
        rows.append((g.labels[i], KIND_NAMES[int(c.kind[i])], int(c.rclass[i])))
    _emit(args, _csv(rows, ["node", "label", "class_index"]))
    summary = c.summary(g)
    lines = [f"{key}: {value}" for key, value in summary.items() if key != "Recurrent class sizes"]
    lines.append("Recurrent class size histogram (size: count):")
    lines.extend(f"  {size}: {count}" for size, count in summary["Recurrent class sizes"].items())
    text = "\n".join(lines) + "\n"
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stderr.write(text)
    return EXIT_OK


def cmd_rank(args) -> int:
    g = _load(args)
    t0 = time.perf_counter()
    res = compute(g, _options(args), workers=_workers(args.workers))
    meta = {
        "measure": "purerank",
        "theta_T": res.theta_T,
        "classes": res.class_stats(),
        "total_sum": res.total_sum,
        "wall_time_s": time.perf_counter() - t0,
    }
    _emit(args, _score_output(args, g, res.classification, res.pi, meta))
    return EXIT_OK


def cmd_pagerank(args) -> int:
    g = _load(args)
    t0 = time.perf_counter()
    res = pagerank(g, args.damping, _options(args))
    meta = {
        "measure": "pagerank",
        "damping": args.damping,
        "iterations": res.iterations,
        "residual": res.residual,
        "wall_time_s": time.perf_counter() - t0,
    }
    _emit(args, _score_output(args, g, classify(g), res.gamma, meta))
    return EXIT_OK


def _read_scores(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "node" not in rows[0] or "score" not in rows[0]:
        raise ParseError(f"{path}: expected a CSV with node and score columns")
    try:
        return {r["node"]: float(r["score"]) for r in rows}
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _read_classes(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "node" not in rows[0] or "label" not in rows[0]:
        raise ParseError(f"{path}: expected a CSV with node and label columns")
    return {r["node"]: r["label"] for r in rows}


def cmd_compare(args) -> int:
    a = _read_scores(args.a)
    b = _read_scores(args.b)
    if set(a) != set(b):
        raise ValidationError("the two score files cover different node sets")
    nodes = list(a)
    va = np.array([a[n] for n in nodes])
    vb = np.array([b[n] for n in nodes])
    kind = None
    if args.classes:
        cls = _read_classes(args.classes)
        missing = set(nodes) - set(cls)
        if missing:
            raise ValidationError(f"{len(missing)} nodes have no class label")
        kind = [cls[n] for n in nodes]
    report = compare(va, vb, kind, k=args.top_k, labels=(args.a, args.b), graph_id=args.graph_id)
    _emit(args, json.dumps(report.to_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = _load(args)
    res = compute(g, _options(args), workers=_workers(args.workers))
    chain = build_extended_chain(g, res.classification)
    stats = simulate(chain, args.surfers, args.steps, args.seed, start=args.start)
    try:
        sojourn = sojourn_check(stats, res.theta_T)
    except InsufficientDataError as exc:
        sojourn = {"insufficient_data": str(exc)}
    doc = {
        "nodes": list(g.labels),
        "folded_frequencies": stats.frequencies.tolist(),
        "purerank": res.pi.tolist(),
        "l1_distance": float(np.abs(stats.frequencies - res.pi).sum()),
        "sojourn": sojourn,
        "surfers": args.surfers,
        "steps": args.steps,
        "seed": args.seed,
        "start": args.start,
    }
    _emit(args, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_split_rank(args) -> int:
    mg = load_multi_edge_list(args.input, delimiter=args.delimiter)
    res = multi_purerank(mg, _options(args), workers=_workers(args.workers))
    rows = []
    for j, lab in enumerate(mg.labels):
        for a, name in enumerate(mg.attributes):
            rows.append((lab, name, repr(float(res.scores[j, a]))))
    _emit(args, _csv(rows, ["node", "attribute", "score"]))
    if args.net:
        pos, neg = args.net
        net = net_score(res, pos, neg)
        text = _csv(((lab, repr(float(v))) for lab, v in zip(mg.labels, net)), ["node", "net_score"])
        if args.net_output:
            with open(args.net_output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def _solver_flags(p):
    p.add_argument("--tol", type=float, default=1e-10, help="L1 step tolerance (default 1e-10)")
    p.add_argument("--max-iter", type=int, default=50_000, help="iteration cap (default 50000)")
    p.add_argument("--lazy", type=float, default=0.5, help="lazy factor for recurrent classes, in (0, 0.5]")
    p.add_argument("--workers", type=int, default=1, help="class-solver threads; 0 = auto / $PURERANK_WORKERS")


def _input_flags(p):
    p.add_argument("--input", "-i", required=True, help="edge-list file (.gz ok)")
    p.add_argument("--weighted", choices=("auto", "yes", "no"), default="auto")
    p.add_argument("--delimiter", default=None, help="field separator (default: whitespace)")


def _output_flags(p, formats=True):
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    if formats:
        p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="purerank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="node classes as CSV plus a summary")
    _input_flags(p)
    _output_flags(p, formats=False)
    p.add_argument("--summary", default=None, help="write the summary here instead of stderr")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("rank", help="PureRank scores")
    _input_flags(p)
    _solver_flags(p)
    _output_flags(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("pagerank", help="PageRank scores")
    _input_flags(p)
    _solver_flags(p)
    _output_flags(p)
    p.add_argument("--damping", "-d", type=float, default=0.85)
    p.set_defaults(func=cmd_pagerank)

    p = sub.add_parser("compare", help="compare two score CSVs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--classes", default=None, help="classification CSV from `classify`")
    p.add_argument("--top-k", type=int, default=100)
    p.add_argument("--graph-id", default=None)
    _output_flags(p, formats=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="Monte Carlo random-surfer check")
    _input_flags(p)
    _solver_flags(p)
    _output_flags(p, formats=False)
    p.add_argument("--surfers", type=int, default=100)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", choices=("independent", "stratified"), default="independent")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("split-rank", help="multi-attribute PureRank")
    p.add_argument("--input", "-i", required=True, help="'src dst attribute weight' file")
    p.add_argument("--delimiter", default=None)
    _solver_flags(p)
    _output_flags(p, formats=False)
    p.add_argument("--net", nargs=2, metavar=("POS", "NEG"), default=None, help="also emit net scores")
    p.add_argument("--net-output", default=None)
    p.set_defaults(func=cmd_split_rank)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "damping", None) is not None and not 0 < args.damping < 1:
            raise ValidationError(f"--damping must lie in (0, 1), got {args.damping}")
        if getattr(args, "tol", 1.0) <= 0:
            raise ValidationError("--tol must be > 0")
        return args.func(args)
    except ParseError as exc:
        return _fail("parse_error", exc, EXIT_PARSE)
    except ValidationError as exc:
        return _fail("validation_error", exc, EXIT_VALIDATION)
    except ConvergenceError as exc:
        return _fail("convergence_failure", exc, EXIT_CONVERGENCE)
    except OSError as exc:
        return _fail("io_error", exc, EXIT_IO)
    except PureRankError as exc:
        return _fail("error", exc, EXIT_VALIDATION)


def _fail(kind: str, exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc)}) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
