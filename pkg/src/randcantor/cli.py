"""Command-line interface: ``randcantor <command> ...``.

Exit codes: 0 on success, 2 on usage errors, 1 when a verification is not
certified true everywhere or an estimate lands outside its reference.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from contextlib import contextmanager

from . import exact_qn, mc_harness
from .closed_sets import decode_tree3, decode_tree4
from .codings import CodeWord, DigitStream, index_of, words_of_length
from .errors import RandCantorError
from .rand_functions import StreamFunction, gw_code
from .rand_measures import random_measure_code

SEED_ENV = "RANDCANTOR_SEED"
DEFAULT_TRIALS = 10_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _natural(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _positive(text):
    v = _natural(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _seed(text):
    v = _natural(text)
    if v >= 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw in (None, ""):
        return 0
    try:
        return _seed(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}")


def _common(p, depth=True, depth_default=None):
    p.add_argument("--seed", type=_seed, default=None,
                   help=f"master seed (default 0, or ${SEED_ENV})")
    if depth:
        p.add_argument("--depth", type=_natural, default=depth_default)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="randcantor",
                     description="Random closed sets, functions and measures on Cantor space.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="sample a random object and print its code")
    p.add_argument("kind", choices=("closed-set", "gw-tree", "function", "measure"))
    p.add_argument("--stream-id", type=_seed, default=0)
    p.add_argument("--bits", type=_positive, default=16,
                   help="bits per column for measures")
    _common(p, depth_default=4)

    p = sub.add_parser("decode", help="decode a tree code")
    p.add_argument("kind", choices=("tree3", "tree4"))
    p.add_argument("--code", required=True)
    p.add_argument("--depth", type=_natural, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None)

    p = sub.add_parser("table", help="certified tables")
    p.add_argument("kind", choices=("qn",))
    p.add_argument("--n", type=_positive, default=10)
    p.add_argument("--precision", type=_positive, default=256)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--output", default=None)

    p = sub.add_parser("verify", help="certified bound checks and exact checks")
    p.add_argument("kind", choices=("qn-bounds", "ratio", "power", "f-values", "u-measure",
                                    "support", "third-support", "zeros-pushforward",
                                    "path-pushforward"))
    p.add_argument("--n", type=_positive, default=10)
    p.add_argument("--precision", type=_positive, default=256)
    p.add_argument("--power-n", type=_positive, default=None,
                   help="largest n for the power bound (default: --n)")
    p.add_argument("--seeds", type=_positive, default=100)
    p.add_argument("--k-bits", type=_positive, default=32)
    _common(p)

    p = sub.add_parser("estimate", help="run a Monte Carlo experiment")
    p.add_argument("experiment", choices=sorted(mc_harness.CATALOG))
    p.add_argument("--trials", type=_positive, default=DEFAULT_TRIALS)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--target", default=None)
    p.add_argument("--y", default=None)
    p.add_argument("--n", type=_natural, default=None)
    p.add_argument("--mode", choices=("sampled", "exhaustive"), default=None)
    p.add_argument("--k-bits", type=_positive, default=None)
    p.add_argument("--levels", type=_natural, default=None)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="experiment parameter (repeatable)")
    _common(p)
    return parser


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_rows(rows, fmt, path, columns=None):
    """Write dict rows as JSON lines or CSV."""
    with _sink(path) as out:
        if fmt == "json":
            for row in rows:
                out.write(json.dumps(row, sort_keys=True) + "\n")
        else:
            if columns is None:
                columns = list(rows[0]) if rows else []
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n",
                               extrasaction="ignore")
            w.writeheader()
            for row in rows:
                w.writerow({k: _csv_cell(v) for k, v in row.items()})
            out.write(buf.getvalue())


def _csv_cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, bool):
        return str(v).lower()
    return v


def _flatten(obj, prefix=""):
    out = {}
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


# -- commands --------------------------------------------------------------

def _cmd_sample(args):
    seed = args.seed
    depth = args.depth
    if args.kind == "closed-set":
        stream = DigitStream(seed, args.stream_id, 3)
        r = decode_tree3(stream, depth)
        obj = {"kind": "closed-set", "seed": seed, "stream_id": args.stream_id,
               "code": str(stream.word(r.digits_consumed)), "tree": r.tree.to_json()}
    elif args.kind == "gw-tree":
        stream = DigitStream(seed, args.stream_id, 3)
        length = 64
        while True:
            code = gw_code(stream, length)
            try:
                r = decode_tree4(code, depth)
                break
            except RandCantorError:
                length *= 2
        obj = {"kind": "gw-tree", "seed": seed, "stream_id": args.stream_id,
               "code": str(code[:r.digits_consumed]), "tree": r.tree.to_json()}
    elif args.kind == "function":
        if depth > 16:
            raise UsageError("function samples are materialized; use --depth <= 16")
        f = StreamFunction(DigitStream(seed, args.stream_id, 3)).materialize(depth)
        obj = {"kind": "function", "seed": seed, "stream_id": args.stream_id, **f.to_json()}
    else:
        if depth > 16:
            raise UsageError("measure samples are materialized; use --depth <= 16")
        m = random_measure_code(DigitStream(seed, args.stream_id, 2))
        nodes = [index_of(w) for n in range(depth) for w in words_of_length(n)]
        m = m.extended(nodes, args.bits)
        obj = {"kind": "measure", "seed": seed, "stream_id": args.stream_id,
               "depth": depth, "bits": args.bits, **m.to_json()}
    _emit_rows([obj] if args.format == "json" else [_flatten(obj)], args.format, args.output)
    return 0


def _cmd_decode(args):
    alphabet = 3 if args.kind == "tree3" else 4
    try:
        code = CodeWord.parse(args.code, alphabet)
    except ValueError as exc:
        raise UsageError(str(exc))
    decode = decode_tree3 if alphabet == 3 else decode_tree4
    r = decode(code, args.depth)
    obj = {"kind": args.kind, "code": args.code, "digits_consumed": r.digits_consumed,
           "extendible_order": list(r.extendible_order), **r.tree.to_json()}
    _emit_rows([obj] if args.format == "json" else [_flatten(obj)], args.format, args.output)
    return 0


def _cmd_table(args):
    t = exact_qn.q_table(args.n, args.precision)
    rows = exact_qn.table_rows(t)
    _emit_rows(rows, args.format, args.output, list(exact_qn.TABLE_COLUMNS))
    return 0


def _verdict_rows(kind, args):
    t = exact_qn.q_table(args.n, args.precision)
    V = exact_qn.Verdict
    if kind == "qn-bounds":
        eps = dict(exact_qn.verify_epsilon_bounds(t))
        ratio = dict(exact_qn.verify_ratio_bound(t))
        power = dict(exact_qn.verify_power_bound(t, args.power_n))
        rows = []
        for n in range(1, args.n + 1):
            row = {"n": n, **{f"bound_{k}": str(v) for k, v in eps[n].items()},
                   "ratio": str(ratio[n])}
            if n in power:
                row["power"] = str(power[n])
            rows.append(row)
        return rows, [r for row in rows for k, r in row.items() if k != "n"]
    if kind == "ratio":
        rows = [{"n": n, "ratio": str(v)} for n, v in exact_qn.verify_ratio_bound(t)]
        return rows, [r["ratio"] for r in rows]
    if kind == "power":
        rows = [{"n": n, "power": str(v)}
                for n, v in exact_qn.verify_power_bound(t, args.power_n)]
        return rows, [r["power"] for r in rows]
    if kind == "f-values":
        rows = [{"n": n, "f": f} for n, f in enumerate(exact_qn.compute_f_values(args.n), 1)]
        return rows, []
    # u-measure
    rows = []
    for n, verdicts in exact_qn.verify_u_measure(t):
        u = exact_qn.u_measure(n, t)
        rows.append({"n": n, "u_lo": u.lo.decimal(), "u_hi": u.hi.decimal(),
                     **{k: str(v) for k, v in verdicts.items()}})
    return rows, [v for row in rows for k, v in row.items()
                  if k in ("exp_bound", "decreasing")]


def _cmd_verify(args):
    kind = args.kind
    if kind in ("qn-bounds", "ratio", "power", "f-values", "u-measure"):
        rows, verdicts = _verdict_rows(kind, args)
        _emit_rows(rows, args.format, args.output)
        ok = all(v == str(exact_qn.Verdict.CERTIFIED_TRUE) for v in verdicts)
        return 0 if ok else 1
    depth = args.depth
    if kind == "support":
        depth = 12 if depth is None else depth
        if depth > 16:
            raise UsageError("support checks need --depth <= 16")
        summary = mc_harness.check_support_equality(args.seeds, depth, args.seed)
    elif kind == "third-support":
        depth = 8 if depth is None else depth
        summary = mc_harness.check_third_support(args.seeds, depth, args.seed, args.k_bits)
    elif kind == "zeros-pushforward":
        depth = 6 if depth is None else depth
        if depth > 12:
            raise UsageError("zeros-pushforward needs --depth <= 12")
        summary = mc_harness.check_zeros_pushforward(args.seeds, depth, args.seed)
    else:
        depth = 3 if depth is None else depth
        if depth > 4:
            raise UsageError("path-pushforward enumerates exhaustively; use --depth <= 4")
        summary = mc_harness.check_path_pushforward(depth)
        with _sink(args.output) as out:
            out.write(summary["summary"] + "\n")
        return 0 if summary["ok"] else 1
    rows = [summary] if args.format == "json" else [_flatten(summary)]
    _emit_rows(rows, args.format, args.output)
    return 0 if summary["ok"] else 1


def _estimate_params(args):
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        params[key.replace("-", "_")] = value
    for key in ("target", "y", "n", "mode", "k_bits", "levels"):
        v = getattr(args, key)
        if v is not None:
            params[key] = v
    return params


def _cmd_estimate(args):
    spec = mc_harness.ExperimentSpec(
        name=args.experiment, trials=args.trials, depth=args.depth,
        params=_estimate_params(args), master_seed=args.seed,
        confidence=args.confidence)
    try:
        record = mc_harness.run_experiment(spec, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        with _sink(args.output) as out:
            out.write(record.to_json() + "\n")
    else:
        _emit_rows([_flatten(record.to_dict())], "csv", args.output)
    return 1 if record.verdict == mc_harness.OUTSIDE else 0


COMMANDS = {"sample": _cmd_sample, "decode": _cmd_decode, "table": _cmd_table,
            "verify": _cmd_verify, "estimate": _cmd_estimate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except RandCantorError as exc:
        print(f"randcantor: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
