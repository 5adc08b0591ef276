"""Command line for the minisocle analyzer.

    python cli.py analyze "symmetric 4" --construct-rep --json out.json
    python cli.py analyze group.txt --g-autos autos.txt
    python cli.py batch --catalog corpus.txt --json-dir reports --parallel 4

Exit codes: 0 success, 1 input error or failed expectation, 2 disagreement or internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from app.core.exceptions import INPUT_ERRORS, GroupAnalysisError
from app.core.logging import get_logger, setup_logging
from app.services.analysis_service import AnalysisReport, AnalysisService
from app.services.catalog import load_catalog

logger = get_logger("cli")


def _read_spec(arg: str) -> str:
    path = Path(arg)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    return arg


def _render(report: AnalysisReport) -> str:
    lines = [
        f"group      {report.name} ({report.group.spec})",
        f"order      {report.group.order}, {report.group.class_count} classes",
        f"feet       {', '.join(str(f['order']) + (' abelian' if f['kind'] == 'abelian' else ' nonabelian') for f in report.socle.feet) or '-'}",
        f"minisocle  |MA|={report.socle.ma_order} |MH|={report.socle.mh_order} |MS|={report.socle.ms_order}",
        f"conditions {report.criterion['conditions']}",
        f"verdict    {report.verdict}",
        f"oracle     {report.oracle.verdict} (degrees {report.oracle.degrees})",
    ]
    if report.g_variant is not None:
        lines.append(f"g-verdict  {report.g_verdict} (|A|={report.g_variant['auto_order']}, conditions {report.g_variant['conditions']})")
    if report.representation is not None:
        lines.append(f"irrep      degree {report.representation['degree']}, faithful={report.representation['faithful']}")
    lines.append(f"agreement  {report.agreement}")
    return "\n".join(lines)


def cmd_analyze(args: argparse.Namespace) -> int:
    service = AnalysisService(max_order=args.max_order, tolerance=args.tolerance)
    try:
        autos = Path(args.g_autos).read_text(encoding="utf-8") if args.g_autos else None
        report = service.analyze(_read_spec(args.spec), autos_text=autos, construct_rep=args.construct_rep)
    except OSError as exc:
        logger.error(f"Cannot read input: {exc}")
        return 1
    except GroupAnalysisError as exc:
        logger.error(f"{type(exc).__name__}: {exc.message} {exc.details}")
        return 1 if isinstance(exc, INPUT_ERRORS) else 2
    if args.json:
        Path(args.json).write_text(report.to_json(indent=2), encoding="utf-8")
        logger.info(f"Report written to {args.json}.")
    print(_render(report))
    return 0 if report.agreement else 2


def cmd_batch(args: argparse.Namespace) -> int:
    service = AnalysisService(max_order=args.max_order, tolerance=args.tolerance)
    try:
        entries = load_catalog(args.catalog)
    except GroupAnalysisError as exc:
        logger.error(exc.message)
        return 1
    summary, _ = service.batch_run(entries, parallel=args.parallel, json_dir=args.json_dir)
    print(summary.table())
    return summary.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minisocle", description="Faithful irreducible representation analysis of finite groups.")
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL.")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Analyze one group spec (inline text or a file).")
    analyze.add_argument("spec", help="Group spec or path to a file holding one.")
    analyze.add_argument("--g-autos", default=None, help="File with automorphism lines.")
    analyze.add_argument("--construct-rep", action="store_true", help="Construct explicit faithful irreducible matrices.")
    analyze.add_argument("--json", default=None, help="Write the JSON report here.")
    analyze.set_defaults(func=cmd_analyze)

    batch = sub.add_parser("batch", help="Run a catalog of groups.")
    batch.add_argument("--catalog", default=None, help="Catalog file; the built-in corpus when omitted.")
    batch.add_argument("--json-dir", default=None, help="Directory for per-entry reports and summary.json.")
    batch.add_argument("--parallel", type=int, default=None, help="Worker processes.")
    batch.set_defaults(func=cmd_batch)

    for p in (analyze, batch):
        p.add_argument("--max-order", type=int, default=None, help="Override MAX_ORDER.")
        p.add_argument("--tolerance", type=float, default=None, help="Override TOLERANCE.")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
