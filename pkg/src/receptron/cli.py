"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 spec parse error,
3 I/O or argument error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from receptron.boolexpr import (
    TruthTable,
    binary_patterns,
    build_expr_receptron,
    census,
    eval_expr,
    on_any_boundary,
    predicates,
    synthesize_digital,
)
from receptron.core import ArityError, LookupMiss
from receptron.domains import (
    EquivalenceReport,
    HyperRectDomain,
    UniformSampler,
    boundary_rows,
    build_selective_receptron,
    chunked_apply,
    compare_batches,
    domain_contains_many,
    draw_off_boundary,
)
from receptron.dsl import ParseError, SpecDocument, build_network, build_unit, load
from receptron.network import (
    eval_network_many,
    fan_out,
    union_contains_many,
)

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- artifacts -------------------------------------------------------------------


@dataclass
class Artifact:
    """What ``main`` names, reduced to an evaluator plus its reference checks."""

    name: str
    arity: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    domains: list[HyperRectDomain]
    expr: object = None
    table: TruthTable | None = None


def resolve(doc: SpecDocument, name: str) -> Artifact:
    kind = doc.kind_of(name)
    n = doc.arity_of(name)
    if kind == "domain":
        d = doc.domains[name]
        unit = build_selective_receptron(d)
        return Artifact(name, n, unit.activate_many, [d])
    if kind == "expr":
        e = doc.exprs[name]
        return Artifact(name, n, build_expr_receptron(e).activate_many, [], expr=e)
    if kind == "network":
        net = build_network(doc, name)
        domains = [doc.domains[r] for r in doc.networks[name].refs]
        return Artifact(name, n, lambda X: eval_network_many(net, X)[:, 0], domains)
    decl = doc.units[name]
    unit = build_unit(doc, name)
    if decl.kind == "multidomain":
        m = len(decl.refs)
        domains = [doc.domains[r] for r in decl.refs]
        return Artifact(name, n, lambda X: unit.activate_many(fan_out(X, m)), domains)
    if decl.kind == "selective":
        return Artifact(name, n, unit.activate_many, [doc.domains[decl.refs[0]]])
    if decl.kind == "expr":
        return Artifact(name, n, unit.activate_many, [], expr=doc.exprs[decl.refs[0]])
    return Artifact(name, n, unit.activate_many, [], table=TruthTable.from_string(decl.table))


def _evaluate(art: Artifact, X: np.ndarray, workers: int) -> np.ndarray:
    if len(X) == 0:
        return np.zeros(0, dtype=np.int8)
    parts = chunked_apply(art.evaluate, X, workers=workers)
    return np.concatenate([np.asarray(p, dtype=np.int8) for p in parts])


# -- argument helpers ----------------------------------------------------------------


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad {what} {text!r}") from None


def _slice(text: str | None) -> dict[int, float]:
    out: dict[int, float] = {}
    if not text:
        return out
    for part in text.split(","):
        key, sep, value = part.partition("=")
        try:
            if not sep:
                raise ValueError
            out[int(key)] = float(value)
        except ValueError:
            raise UsageError(f"bad --slice entry {part!r}, expected K=V") from None
    return out


def _range(text: str) -> list[tuple[float, float]]:
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        try:
            if not sep:
                raise ValueError
            pair = (float(lo), float(hi))
        except ValueError:
            raise UsageError(f"bad --range entry {part!r}, expected lo:hi") from None
        if not pair[0] < pair[1]:
            raise UsageError(f"empty --range interval {part!r}")
        out.append(pair)
    if len(out) != 2:
        raise UsageError("--range needs exactly two intervals")
    return out


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -- subcommands ---------------------------------------------------------------------


def cmd_classify(args) -> int:
    doc = load(args.spec)
    art = resolve(doc, doc.main)
    with open(args.points, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    header = None
    if args.header and rows:
        header, rows = rows[0], rows[1:]
    for i, r in enumerate(rows):
        if len(r) != art.arity:
            raise UsageError(
                f"row {i + 1} has {len(r)} columns, {art.name} expects {art.arity} inputs"
            )
    try:
        X = np.array([[float(v) for v in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise UsageError(f"non-numeric value in points: {exc}") from None
    X = X.reshape(len(rows), art.arity)
    if not np.all(np.isfinite(X)):
        raise UsageError("points must be finite")
    bits = _evaluate(art, X, args.workers)

    if header is None or len(header) != art.arity:
        header = [f"x{j}" for j in range(art.arity)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header + ["output"])
    for r, b in zip(rows, bits):
        writer.writerow([v.strip() for v in r] + [int(b)])
    _write(args.out, buf.getvalue())
    return EXIT_OK


def render_grid(art: Artifact, axes, fixed, ranges, res, workers=1):
    """Active mask on a ``res x res`` grid of cell centres.

    Row 0 is the top (largest second-axis value); column 0 the smallest
    first-axis value.
    """
    (lo1, hi1), (lo2, hi2) = ranges
    a = lo1 + (np.arange(res) + 0.5) * (hi1 - lo1) / res
    b = hi2 - (np.arange(res) + 0.5) * (hi2 - lo2) / res
    X = np.zeros((res * res, art.arity))
    for k, v in fixed.items():
        X[:, k] = v
    X[:, axes[0]] = np.tile(a, res)
    X[:, axes[1]] = np.repeat(b, res)
    return X, _evaluate(art, X, workers).reshape(res, res)


def format_pgm(mask: np.ndarray) -> str:
    rows, cols = mask.shape
    lines = ["P2", f"{cols} {rows}", "255"]
    for row in mask:
        vals = ["255" if v else "0" for v in row]
        for i in range(0, cols, 17):
            lines.append(" ".join(vals[i:i + 17]))
    return "\n".join(lines) + "\n"


def cmd_render(args) -> int:
    doc = load(args.spec)
    art = resolve(doc, doc.main)
    if args.res < 2:
        raise UsageError("--res must be at least 2")
    axes = _int_list(args.axes, "--axes")
    if len(axes) != 2 or axes[0] == axes[1]:
        raise UsageError("--axes needs two distinct axis indices")
    fixed = _slice(args.slice)
    for k in list(axes) + list(fixed):
        if not 0 <= k < art.arity:
            raise UsageError(f"axis {k} out of range for arity {art.arity}")
    if set(axes) & set(fixed):
        raise UsageError("--slice may not fix a free axis")
    missing = [k for k in range(art.arity) if k not in axes and k not in fixed]
    if missing:
        raise UsageError(f"--slice must fix axes {missing}")
    ranges = _range(args.range)
    X, mask = render_grid(art, axes, fixed, ranges, args.res, args.workers)
    _write(args.out, format_pgm(mask))
    if args.grid_csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", f"x{axes[0]}", f"x{axes[1]}", "output"])
        for idx, bit in enumerate(mask.ravel()):
            r, c = divmod(idx, args.res)
            w.writerow([r, c, repr(float(X[idx, axes[0]])), repr(float(X[idx, axes[1]])), int(bit)])
        _write(args.grid_csv, buf.getvalue())
    return EXIT_OK


def _sampling_box(art: Artifact):
    if art.domains:
        lows, highs = zip(*(d.bounds(pad=0.5) for d in art.domains))
        return np.min(lows, axis=0), np.max(highs, axis=0)
    lo = np.full(art.arity, np.inf)
    hi = np.full(art.arity, -np.inf)
    for p in predicates(art.expr):
        lo[p.axis] = min(lo[p.axis], p.pred.center - p.pred.width)
        hi[p.axis] = max(hi[p.axis], p.pred.center + p.pred.width)
    unused = ~np.isfinite(lo)
    lo[unused], hi[unused] = -1.0, 1.0
    return lo, hi


def verification_reports(art: Artifact, samples: int, seed: int, workers: int = 1):
    if art.table is not None:
        P = binary_patterns(art.table.arity)
        return [compare_batches("truth unit vs table", P, art.evaluate,
                                lambda B: np.array(art.table.bits)[: len(B)])]
    lo, hi = _sampling_box(art)
    sampler = UniformSampler(lo, hi, seed)
    if art.expr is not None:
        X = draw_off_boundary(sampler, samples, lambda P: on_any_boundary(art.expr, P))
        oracle = lambda B: np.array([eval_expr(art.expr, row) for row in B])  # noqa: E731
        return [compare_batches("expr unit vs expression oracle", X, art.evaluate, oracle,
                                workers=workers)]

    def on_edge(P):
        hit = np.zeros(len(P), dtype=bool)
        for d in art.domains:
            hit |= boundary_rows(d, P)
        return hit

    X = draw_off_boundary(sampler, samples, on_edge)
    if len(art.domains) == 1:
        d = art.domains[0]
        return [compare_batches(f"{art.name} vs rect-product oracle", X, art.evaluate,
                                lambda B: domain_contains_many(d, B), workers=workers)]
    # union of several domains: check main against the oracle, and the other
    # realization (network or multidomain unit) against both
    from receptron.network import build_disjunction_network, build_multidomain_unit

    net = build_disjunction_network(art.domains)
    multi = build_multidomain_unit(art.domains)
    m = len(art.domains)
    oracle = lambda B: union_contains_many(art.domains, B)  # noqa: E731
    return [
        compare_batches(f"{art.name} vs union oracle", X, art.evaluate, oracle, workers=workers),
        compare_batches("network vs union oracle", X,
                        lambda B: eval_network_many(net, B)[:, 0], oracle, workers=workers),
        compare_batches("multidomain unit vs union oracle", X,
                        lambda B: multi.activate_many(fan_out(B, m)), oracle, workers=workers),
    ]


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    doc = load(args.spec)
    art = resolve(doc, doc.main)
    reports: list[EquivalenceReport] = verification_reports(art, args.samples, args.seed,
                                                            args.workers)
    lines = [f"main: {art.name}", f"seed: {args.seed}", f"samples: {args.samples}"]
    for r in reports:
        lines.extend(r.lines())
    failed = sum(r.mismatches for r in reports)
    lines.append(f"total mismatches: {failed}")
    lines.append("result: " + ("PASS" if failed == 0 else "FAIL"))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if failed == 0 else EXIT_MISMATCH


def cmd_census(args) -> int:
    if not 1 <= args.n <= 4:
        raise UsageError(f"--n must be between 1 and 4, got {args.n}")
    sep, total = census(args.n)
    _write(args.out, f"n,separable,total,ratio\n{args.n},{sep},{total},{sep / total:.6f}\n")
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        table = TruthTable.from_string(args.table)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    unit = synthesize_digital(table)
    P = binary_patterns(table.arity)
    good = sum(unit.activate(p) == table[k] for k, p in enumerate(P))
    text = (f'unit T = truth("{table.to_string()}");\n'
            f"verified {good}/{len(P)} patterns\n")
    _write(args.out, text)
    return EXIT_OK if good == len(P) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="receptron", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, spec=True):
        if spec:
            p.add_argument("--spec", required=True, help=".rcp spec file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("classify", help="classify CSV points against the spec's main entry")
    common(p)
    p.add_argument("--points", required=True)
    p.add_argument("--header", action="store_true", help="points file has a header row")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("render", help="write a PGM decision-region slice")
    common(p)
    p.add_argument("--axes", required=True, help="two free axes, e.g. 0,1")
    p.add_argument("--slice", help='fixed axes, e.g. "2=10"')
    p.add_argument("--range", required=True, help='"lo1:hi1,lo2:hi2"')
    p.add_argument("--res", type=int, default=64)
    p.add_argument("--grid-csv", help="also write the grid as CSV")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="check the spec's main entry against its oracle")
    common(p)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="count linearly separable n-input functions")
    common(p, spec=False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("synth", help="synthesize a digital unit from a truth table")
    common(p, spec=False)
    p.add_argument("--table", required=True, help='bitstring, pattern 0 first, e.g. "0110"')
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"{args.spec}:{exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, OSError, ArityError, LookupMiss) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
