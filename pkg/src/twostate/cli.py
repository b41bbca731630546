"""Command-line front end: list scenarios, run one, or sweep a parameter.

Exit codes: 0 on success, 1 when a scenario's numerical self-checks fail,
2 on usage errors (unknown scenario, malformed or unknown parameters).
Identical requests (including the seed) produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import TwoStateError, ValidationError
from .reporting import csv_table, stable_json, write_text_atomic
from .scenarios import REGISTRY, ScenarioResult, get_scenario

OUT_DIR_ENV = "TWOSTATE_OUT_DIR"

USAGE_ERROR = 2
CHECK_FAILURE = 1


def _parse_param_overrides(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValidationError(f"parameter override {pair!r} must look like key=value")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _default_out_dir() -> str:
    return os.environ.get(OUT_DIR_ENV, os.path.join(os.getcwd(), "twostate-out"))


def cmd_list(args) -> int:
    names = sorted(REGISTRY)
    if args.filter:
        names = [n for n in names if args.filter in n]
    rows = []
    for name in names:
        spec = REGISTRY[name]
        schema = ", ".join(f"{p.name}:{p.kind}={p.default}" for p in spec.params) or "-"
        rows.append((name, schema, spec.summary))
    if not rows:
        return 0
    width = max(len(r[0]) for r in rows)
    pwidth = max(len(r[1]) for r in rows)
    for name, schema, summary in rows:
        print(f"{name:<{width}}  {schema:<{pwidth}}  {summary}")
    return 0


def _write_outputs(result: ScenarioResult, out_dir: str, fmt: str) -> list[str]:
    written = []
    base = os.path.join(out_dir, result.name)
    if fmt in ("json", "both"):
        path = os.path.join(base, "results.json")
        write_text_atomic(path, stable_json(result.to_dict()))
        written.append(path)
    if fmt in ("csv", "both"):
        for filename, text in sorted(result.tables.items()):
            path = os.path.join(base, filename)
            write_text_atomic(path, text)
            written.append(path)
    return written


def cmd_run(args) -> int:
    try:
        spec = get_scenario(args.scenario)
        overrides = _parse_param_overrides(args.param or [])
        if args.config:
            with open(args.config, "r", encoding="utf-8") as handle:
                file_request = json.load(handle)
            file_params = file_request.get("params", {})
            overrides = {**file_params, **overrides}  # flags win over the file
            if args.seed is None and "seed" in file_request:
                args.seed = int(file_request["seed"])
        seed = 0 if args.seed is None else args.seed
        result = spec.run(overrides, seed=seed)
    except (TwoStateError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    out_dir = args.out or _default_out_dir()
    written = _write_outputs(result, out_dir, args.format)
    print(result.summary_line)
    for path in written:
        print(f"  wrote {path}")
    if not result.passed:
        failing = [name for name, ok in result.checks if not ok]
        print(f"numerical checks failed: {', '.join(failing)}", file=sys.stderr)
        return CHECK_FAILURE
    return 0


def _scalar_summaries(result: ScenarioResult) -> dict:
    flat = {}

    def walk(prefix: str, node) -> None:
        if isinstance(node, dict):
            for key in sorted(node):
                walk(f"{prefix}.{key}" if prefix else key, node[key])
        elif isinstance(node, bool) or node is None:
            pass
        elif isinstance(node, (int, float)):
            flat[prefix] = node

    walk("", result.results)
    return flat


def cmd_sweep(args) -> int:
    try:
        spec = get_scenario(args.scenario)
        schema = {p.name: p for p in spec.params}
        if args.param_name not in schema:
            raise ValidationError(f"scenario {args.scenario!r} has no parameter {args.param_name!r}")
        if schema[args.param_name].kind not in ("int", "float"):
            raise ValidationError(f"parameter {args.param_name!r} is not numeric")
        values = [v.strip() for v in args.values.split(",") if v.strip()]
        if not values:
            raise ValidationError("no sweep values supplied")
        fixed = _parse_param_overrides(args.param or [])
        seed = 0 if args.seed is None else args.seed
        rows = []
        header: list[str] = []
        all_passed = True
        for raw in values:
            overrides = dict(fixed)
            overrides[args.param_name] = raw
            result = spec.run(overrides, seed=seed)
            all_passed = all_passed and result.passed
            flat = _scalar_summaries(result)
            flat.pop(args.param_name, None)  # already the leading column
            if not header:
                header = [args.param_name] + sorted(flat)
            rows.append([schema[args.param_name].coerce(raw)] + [flat.get(k) for k in header[1:]])
            print(result.summary_line)
    except TwoStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    out_dir = args.out or _default_out_dir()
    path = os.path.join(out_dir, spec.name, f"sweep_{args.param_name}.csv")
    write_text_atomic(path, csv_table(header, rows))
    print(f"  wrote {path}")
    return 0 if all_passed else CHECK_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twostate",
        description="Pre- and post-selected quantum scenarios: conditional probabilities, "
        "weak values, pointer simulations, and superposed time evolutions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="list registered scenarios and their parameters")
    p_list.add_argument("--filter", default=None, help="substring filter on scenario names")
    p_list.set_defaults(func=cmd_list)

    p_run = sub.add_parser("run", help="run one scenario and write results")
    p_run.add_argument("scenario")
    p_run.add_argument("--param", action="append", metavar="KEY=VALUE", help="override a parameter")
    p_run.add_argument("--config", default=None, help="JSON file with {params: {...}, seed: ...}")
    p_run.add_argument("--out", default=None, help=f"output directory (default ${OUT_DIR_ENV} or ./twostate-out)")
    p_run.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a scenario across several values of one parameter")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--param-name", required=True, dest="param_name", help="numeric parameter to sweep")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--param", action="append", metavar="KEY=VALUE", help="fixed overrides")
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
