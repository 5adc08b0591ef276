from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.core.exceptions import INPUT_ERRORS, GroupAnalysisError
from app.core.logging import get_logger, log_timing
from app.services.catalog import CatalogEntry
from app.services.char_oracle import character_table, construct_irreducible_rep, has_faithful_irreducible
from app.services.criterion import decide_irreducibly_represented
from app.services.g_variant import close_auto_group, decide_g_faithful
from app.services.group_core import build_group
from app.services.group_spec import format_spec, parse_analysis_input
from app.services.socle import minisocle_decomposition, socle

logger = get_logger(__name__)

SCHEMA_VERSION = 1


def _plain(obj: Any) -> Any:
    """JSON-native copy: numpy scalars unwrapped, tuples as lists."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


class GroupSection(BaseModel):
    model_config = ConfigDict(extra="ignore")

    name: str
    spec: str
    order: int
    class_count: int
    generator_count: int
    abelian: bool


class SocleSection(BaseModel):
    model_config = ConfigDict(extra="ignore")

    feet: List[Dict[str, Any]]
    ma_summands: List[int]
    mh_feet: List[int]
    ma_order: int
    mh_order: int
    ms_order: int
    socle_order: int


class OracleSection(BaseModel):
    model_config = ConfigDict(extra="ignore")

    degrees: List[int]
    class_sizes: List[int]
    faithful_row: Optional[int] = None
    faithful_degree: Optional[int] = None
    verdict: bool
    row_orthogonality_error: float
    column_orthogonality_error: float


class AnalysisReport(BaseModel):
    model_config = ConfigDict(extra="ignore", populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    report_id: Optional[str] = None
    name: str
    group: GroupSection
    socle: SocleSection
    criterion: Dict[str, Any]
    oracle: OracleSection
    g_variant: Optional[Dict[str, Any]] = None
    representation: Optional[Dict[str, Any]] = None
    agreement: bool
    timings: Dict[str, float]

    @property
    def verdict(self) -> bool:
        return bool(self.criterion["verdict"])

    @property
    def g_verdict(self) -> Optional[bool]:
        return None if self.g_variant is None else bool(self.g_variant["verdict"])

    def to_json(self, **kwargs) -> str:
        return self.model_dump_json(by_alias=True, **kwargs)


class BatchEntryResult(BaseModel):
    model_config = ConfigDict(extra="ignore")

    name: str
    order: Optional[int] = None
    verdict: Optional[bool] = None
    g_verdict: Optional[bool] = None
    expected: Optional[bool] = None
    expected_g: Optional[bool] = None
    agreement: bool = False
    passed: bool = False
    error: Optional[str] = None
    error_kind: Optional[str] = None


class BatchSummary(BaseModel):
    model_config = ConfigDict(extra="ignore", populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    entries: List[BatchEntryResult]
    total: int
    passed: int
    failed: int
    disagreements: int

    @property
    def exit_code(self) -> int:
        if self.disagreements or any(e.error_kind == "internal" for e in self.entries):
            return 2
        return 1 if self.failed else 0

    def table(self) -> str:
        fmt = "{:<24} {:>6} {:>8} {:>8} {:>8} {:>6}  {}"
        lines = [fmt.format("name", "order", "verdict", "g", "agree", "pass", "error")]
        for e in self.entries:
            lines.append(
                fmt.format(
                    e.name,
                    "-" if e.order is None else e.order,
                    str(e.verdict),
                    "-" if e.g_verdict is None else str(e.g_verdict),
                    str(e.agreement),
                    "ok" if e.passed else "FAIL",
                    e.error or "",
                )
            )
        lines.append(f"{self.passed}/{self.total} passed, {self.disagreements} disagreements")
        return "\n".join(lines)


class AnalysisService:
    def __init__(
        self,
        max_order: Optional[int] = None,
        tolerance: Optional[float] = None,
        rep_max_order: Optional[int] = None,
    ):
        self.max_order = max_order or settings.MAX_ORDER
        self.tolerance = tolerance if tolerance is not None else settings.TOLERANCE
        self.rep_max_order = rep_max_order or settings.REP_MAX_ORDER

    def analyze(
        self,
        spec_text: str,
        name: Optional[str] = None,
        autos_text: Optional[str] = None,
        construct_rep: bool = False,
    ) -> AnalysisReport:
        """Run parse, build, socle, criterion, oracle, optional automorphism and representation stages."""
        timings: Dict[str, float] = {}
        stage = "parse"
        try:
            with log_timing(logger, stage, timings):
                spec, autos = parse_analysis_input(spec_text, autos_text)
            stage = "build"
            with log_timing(logger, stage, timings):
                G = build_group(spec, self.max_order)
            stage = "socle"
            with log_timing(logger, stage, timings):
                deco = minisocle_decomposition(G)
                soc = socle(G)
            stage = "criterion"
            with log_timing(logger, stage, timings):
                criterion = decide_irreducibly_represented(G, deco)
            stage = "oracle"
            with log_timing(logger, stage, timings):
                table = character_table(G, self.tolerance)
                row = has_faithful_irreducible(G, table=table)
            g_section = None
            if autos:
                stage = "g_variant"
                with log_timing(logger, stage, timings):
                    A = close_auto_group(G, autos)
                    g_section = _plain(decide_g_faithful(G, A, table, deco).to_dict(G))
            rep_section = None
            if construct_rep and row is not None and G.order <= self.rep_max_order:
                stage = "representation"
                with log_timing(logger, stage, timings):
                    rep = construct_irreducible_rep(G, row, table, self.tolerance, self.rep_max_order)
                    rep_section = _plain(rep.to_dict())
        except GroupAnalysisError as exc:
            exc.details.setdefault("stage", stage)
            raise

        oracle_verdict = row is not None
        agreement = criterion.verdict == oracle_verdict and criterion.agree
        if g_section is not None:
            agreement = agreement and g_section["agree"]
        if not agreement:
            logger.error(f"Criterion and oracle disagree on '{G.name}': criterion={criterion.verdict}, oracle={oracle_verdict}.")
        return AnalysisReport(
            name=name or G.name,
            group=GroupSection(
                name=G.name,
                spec=format_spec(spec),
                order=G.order,
                class_count=len(G.conjugacy_classes),
                generator_count=len(G.generators),
                abelian=G.is_abelian,
            ),
            socle=SocleSection(**_plain(deco.to_dict()), socle_order=soc.order),
            criterion=_plain(criterion.to_dict(G)),
            oracle=OracleSection(
                degrees=[int(d) for d in table.degrees],
                class_sizes=[int(s) for s in table.classes.sizes],
                faithful_row=row,
                faithful_degree=None if row is None else int(table.degrees[row]),
                verdict=oracle_verdict,
                row_orthogonality_error=float(table.row_orthogonality_error()),
                column_orthogonality_error=float(table.column_orthogonality_error()),
            ),
            g_variant=g_section,
            representation=rep_section,
            agreement=agreement,
            timings=timings,
        )

    def run_entry(self, entry: CatalogEntry, construct_rep: bool = True) -> tuple[BatchEntryResult, Optional[AnalysisReport]]:
        try:
            report = self.analyze(entry.spec_text, name=entry.name, construct_rep=construct_rep)
        except GroupAnalysisError as exc:
            kind = "input" if isinstance(exc, INPUT_ERRORS) else "internal"
            logger.error(f"Entry '{entry.name}' failed ({kind}): {exc.message}")
            return self._failed(entry, exc.message, kind), None
        except Exception as exc:
            logger.exception(f"Entry '{entry.name}' failed unexpectedly: {exc!r}")
            return self._failed(entry, f"{type(exc).__name__}: {exc}", "internal"), None
        passed = (
            report.agreement
            and (entry.expected is None or entry.expected == report.verdict)
            and (entry.expected_g is None or entry.expected_g == report.g_verdict)
        )
        result = BatchEntryResult(
            name=entry.name,
            order=report.group.order,
            verdict=report.verdict,
            g_verdict=report.g_verdict,
            expected=entry.expected,
            expected_g=entry.expected_g,
            agreement=report.agreement,
            passed=passed,
        )
        return result, report

    @staticmethod
    def _failed(entry: CatalogEntry, message: str, kind: str) -> BatchEntryResult:
        return BatchEntryResult(
            name=entry.name, expected=entry.expected, expected_g=entry.expected_g, error=message, error_kind=kind
        )

    def batch_run(
        self,
        entries: Sequence[CatalogEntry],
        parallel: Optional[int] = None,
        json_dir: Optional[str] = None,
        construct_rep: bool = True,
    ) -> tuple[BatchSummary, List[AnalysisReport]]:
        """Analyze every entry; failures are collected per entry, results sorted by name."""
        parallel = parallel or settings.BATCH_PARALLEL
        logger.info(f"Batch run over {len(entries)} entries with {parallel} worker(s).")
        if parallel > 1 and len(entries) > 1:
            with ProcessPoolExecutor(max_workers=parallel) as pool:
                outcomes = list(
                    pool.map(_run_entry, [(self.max_order, self.tolerance, e, construct_rep) for e in entries])
                )
        else:
            batch_service = AnalysisService(self.max_order, self.tolerance, settings.BATCH_REP_MAX_ORDER)
            outcomes = [batch_service.run_entry(e, construct_rep) for e in entries]

        outcomes.sort(key=lambda pair: pair[0].name)
        results = [r for r, _ in outcomes]
        reports = [rep for _, rep in outcomes if rep is not None]
        summary = BatchSummary(
            entries=results,
            total=len(results),
            passed=sum(r.passed for r in results),
            failed=sum(not r.passed for r in results),
            disagreements=sum(r.error is None and not r.agreement for r in results),
        )
        if json_dir:
            out = Path(json_dir)
            out.mkdir(parents=True, exist_ok=True)
            for report in reports:
                (out / f"{report.name}.json").write_text(report.to_json(indent=2), encoding="utf-8")
            (out / "summary.json").write_text(summary.model_dump_json(by_alias=True, indent=2), encoding="utf-8")
            logger.info(f"Wrote {len(reports)} reports and summary to {out}.")
        logger.info(f"Batch finished: {summary.passed}/{summary.total} passed, {summary.disagreements} disagreements.")
        return summary, reports


def _run_entry(args) -> tuple[BatchEntryResult, Optional[AnalysisReport]]:
    max_order, tolerance, entry, construct_rep = args
    return AnalysisService(max_order, tolerance, settings.BATCH_REP_MAX_ORDER).run_entry(entry, construct_rep)


def read_summary(text: str) -> BatchSummary:
    """Parse a stored summary; unknown fields are ignored."""
    return BatchSummary.model_validate(json.loads(text))
