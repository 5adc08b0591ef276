from typing import Any, Dict, List
import uuid
from datetime import datetime, timezone

from app.core.logging import get_logger
from app.core.exceptions import ReportNotFoundError
from app.services.analysis_service import AnalysisReport, BatchSummary

logger = get_logger(__name__)


class ReportStore:
    """In-memory reports and batch summaries keyed by id, oldest evicted first."""

    def __init__(self, max_reports: int = 256):
        self.reports: Dict[str, Dict[str, Any]] = {}
        self.summaries: Dict[str, BatchSummary] = {}
        self.max_reports = max_reports

    def _evict(self, store: Dict[str, Any], kind: str):
        while len(store) > self.max_reports:
            oldest = next(iter(store))
            del store[oldest]
            logger.debug(f"{kind} {oldest} evicted.")

    async def register_report(self, report: AnalysisReport) -> str:
        report_id = report.report_id or uuid.uuid4().hex
        report.report_id = report_id
        self.reports[report_id] = {
            "id": report_id,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "report": report,
        }
        self._evict(self.reports, "Report")
        logger.info(f"Report {report_id} registered for '{report.name}'.")
        return report_id

    async def register_summary(self, summary: BatchSummary) -> str:
        summary_id = uuid.uuid4().hex
        self.summaries[summary_id] = summary
        self._evict(self.summaries, "Batch summary")
        logger.info(f"Batch summary {summary_id} registered ({summary.total} entries).")
        return summary_id

    async def get_report(self, report_id: str) -> AnalysisReport:
        entry = self.reports.get(report_id)
        if entry is None:
            raise ReportNotFoundError(report_id)
        return entry["report"]

    async def get_summary(self, summary_id: str) -> BatchSummary:
        summary = self.summaries.get(summary_id)
        if summary is None:
            raise ReportNotFoundError(summary_id, "Batch summary")
        return summary

    async def unregister_report(self, report_id: str):
        if report_id not in self.reports:
            raise ReportNotFoundError(report_id)
        del self.reports[report_id]
        logger.info(f"Report {report_id} unregistered.")

    async def list_reports(self) -> List[Dict[str, Any]]:
        return [
            {
                "id": entry["id"],
                "created_at": entry["created_at"],
                "name": entry["report"].name,
                "order": entry["report"].group.order,
                "verdict": entry["report"].verdict,
                "agreement": entry["report"].agreement,
            }
            for entry in self.reports.values()
        ]

    async def clear(self):
        self.reports.clear()
        self.summaries.clear()
        logger.info("All reports cleared.")
