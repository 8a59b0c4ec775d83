"""Command-line entry point.

Subcommands:
  validate <schema> <dataset> <bundles...>   exit 0 iff everything is valid
  summarize <schema> <dataset>               summary document to stdout
  render <bundle> --schema S --dataset D [--format svg|text|blocks]
         [--filter all|rule] [--sort abs|schema] [-o OUT]
  serve [--data-dir DIR] [--host H] [--port P] [--ui-dir DIR]
  score-study <truth> <responses> [--baseline COND] [--json]

Documents go to stdout, diagnostics to stderr. FIPER_DATA_DIR provides
the default for --data-dir.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .documents import load_dataset, parse_bundle, parse_schema
from .errors import BundleValidationError, FiperError
from .modalities import blocks_to_dict, render_block_modality, render_text_modality
from .stats import summarize_dataset
from .study import parse_responses_document, parse_truths_document, score_study
from .svg import DEFAULT_GEOMETRY, render_svg
from .view import (
    RowFilter,
    RowSort,
    ViewOptions,
    build_fiper_view,
    serialize_view,
    summary_to_dict,
)
from .wire import encode_json

_FILTERS = {"all": RowFilter.ALL_FEATURES, "rule": RowFilter.RULE_ONLY}
_SORTS = {"abs": RowSort.ABS_IMPORTANCE, "schema": RowSort.SCHEMA_ORDER}


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FiperError(f"cannot read {path}: {exc}", path=path) from None


def _load_pair(schema_path: str, dataset_path: str):
    schema = parse_schema(_read(schema_path))
    dataset = load_dataset(_read(dataset_path), schema, source=dataset_path)
    return schema, dataset


def _cmd_validate(args) -> int:
    schema, dataset = _load_pair(args.schema, args.dataset)
    failures = 0
    for bundle_path in args.bundles:
        try:
            parse_bundle(_read(bundle_path), schema)
        except BundleValidationError as exc:
            failures += 1
            for v in exc.violations:
                print(f"{bundle_path}: {v.path}: {v.code}: {v.message}",
                      file=sys.stderr)
        except FiperError as exc:
            failures += 1
            print(f"{bundle_path}: {exc.code}: {exc.message}", file=sys.stderr)
    if failures:
        print(f"{failures} of {len(args.bundles)} bundle(s) invalid", file=sys.stderr)
        return 1
    print(f"OK: {len(args.bundles)} bundle(s), {len(dataset)} dataset row(s)",
          file=sys.stderr)
    return 0


def _cmd_summarize(args) -> int:
    schema, dataset = _load_pair(args.schema, args.dataset)
    summaries = summarize_dataset(dataset)
    doc = {
        "dataset": schema.id or Path(args.dataset).stem,
        "rows": len(dataset),
        "features": [
            {"feature": name, "summary": summary_to_dict(summary)}
            for name, summary in summaries.items()
        ],
    }
    print(json.dumps(doc, indent=2, ensure_ascii=False))
    return 0


def _cmd_render(args) -> int:
    schema, dataset = _load_pair(args.schema, args.dataset)
    bundle = parse_bundle(_read(args.bundle), schema)
    if args.format == "text":
        payload = render_text_modality(bundle, schema).encode("utf-8")
    elif args.format == "blocks":
        payload = encode_json(blocks_to_dict(render_block_modality(bundle)))
    else:
        options = ViewOptions(filter=_FILTERS[args.filter], sort=_SORTS[args.sort])
        view = build_fiper_view(bundle, summarize_dataset(dataset), options)
        if args.format == "svg":
            payload = render_svg(view, DEFAULT_GEOMETRY)
        else:  # view document
            payload = encode_json(serialize_view(view))
    if args.output:
        Path(args.output).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    data_dir = args.data_dir or os.environ.get("FIPER_DATA_DIR")
    if not data_dir:
        print("serve: no data directory (use --data-dir or FIPER_DATA_DIR)",
              file=sys.stderr)
        return 2
    serve(data_dir, host=args.host, port=args.port, ui_dir=args.ui_dir)
    return 0


def _format_study_report(report: dict) -> str:
    lines = []
    design = report["design"]
    lines.append(
        f"participants={len(design['participants'])} "
        f"conditions={len(design['conditions'])} "
        f"instances={len(design['instances'])} "
        f"questions={len(design['questions'])} "
        f"scored={design['scored_cells']} missing={len(report['missing'])}")
    for condition, totals in report["totals"].items():
        lines.append(f"  {condition}: E1={totals['e1']} E2={totals['e2']} "
                     f"total={totals['total']}")
    for row in report["median_times"]:
        lines.append(f"  median time {row['condition']}/instance {row['instance']}: "
                     f"{row['median']:.1f}s")
    if "deltas" in report:
        by_condition: dict[str, int] = {}
        for d in report["deltas"]:
            by_condition[d["condition"]] = by_condition.get(d["condition"], 0) \
                + d["d_total"]
        for condition, total in sorted(by_condition.items()):
            lines.append(f"  delta vs {report['baseline']}: {condition}: "
                         f"{total:+d} errors")
    return "\n".join(lines)


def _cmd_score_study(args) -> int:
    truths = parse_truths_document(_read(args.truth))
    responses = parse_responses_document(_read(args.responses))
    report = score_study(truths, responses, args.baseline)
    if args.json:
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(_format_study_report(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fiper", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a schema, dataset and bundles")
    p.add_argument("schema")
    p.add_argument("dataset")
    p.add_argument("bundles", nargs="+")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("summarize", help="per-feature distribution summaries")
    p.add_argument("schema")
    p.add_argument("dataset")
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("render", help="render one explanation bundle")
    p.add_argument("bundle")
    p.add_argument("--schema", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--format", choices=["svg", "text", "blocks", "view"],
                   default="svg")
    p.add_argument("--filter", choices=sorted(_FILTERS), default="all")
    p.add_argument("--sort", choices=sorted(_SORTS), default="abs")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--data-dir", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui-dir", default=None)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("score-study", help="score study responses against truths")
    p.add_argument("truth")
    p.add_argument("responses")
    p.add_argument("--baseline", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_score_study)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BundleValidationError as exc:
        for v in exc.violations:
            print(f"{v.path}: {v.code}: {v.message}", file=sys.stderr)
        return 1
    except FiperError as exc:
        print(f"fiper: {exc.code}: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
