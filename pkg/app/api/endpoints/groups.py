from typing import Any, Dict, List, Optional

from fastapi import APIRouter, Depends, Request
from fastapi.concurrency import run_in_threadpool
from pydantic import BaseModel, Field

from app.core.logging import get_logger
from app.services.analysis_service import AnalysisService
from app.services.catalog import build_catalog, parse_catalog
from app.services.report_store import ReportStore

router = APIRouter()
logger = get_logger(__name__)


class AnalyzeRequest(BaseModel):
    spec: str = Field(..., description="Group spec, optionally followed by an autos: block.")
    autos: Optional[str] = Field(None, description="Automorphism lines, one per line or separated by '|'.")
    name: Optional[str] = None
    construct_rep: bool = False


class BatchRequest(BaseModel):
    catalog: Optional[str] = Field(None, description="Catalog file contents; the built-in corpus when omitted.")
    names: Optional[List[str]] = Field(None, description="Restrict the run to these entry names.")
    construct_rep: bool = False
    parallel: Optional[int] = Field(None, ge=1)


def get_analysis_service(request: Request) -> AnalysisService:
    return request.app.analysis_service


def get_report_store(request: Request) -> ReportStore:
    return request.app.report_store


@router.get("/catalog", summary="List the built-in catalog", response_model=Dict[str, Any])
async def list_catalog():
    entries = [e.to_dict() for e in build_catalog()]
    return {"entries": entries, "count": len(entries)}


@router.post("/analyze", summary="Analyze one group", response_model=Dict[str, Any])
async def analyze_group(
    body: AnalyzeRequest,
    analysis_service: AnalysisService = Depends(get_analysis_service),
    report_store: ReportStore = Depends(get_report_store),
):
    report = await run_in_threadpool(
        analysis_service.analyze, body.spec, body.name, body.autos, body.construct_rep
    )
    report_id = await report_store.register_report(report)
    logger.info(f"API: Analyzed '{report.name}' (order {report.group.order}) as report {report_id}.")
    return report.model_dump(by_alias=True)


@router.post("/batch", summary="Run a catalog", response_model=Dict[str, Any])
async def run_batch(
    body: BatchRequest,
    analysis_service: AnalysisService = Depends(get_analysis_service),
    report_store: ReportStore = Depends(get_report_store),
):
    entries = parse_catalog(body.catalog) if body.catalog is not None else build_catalog()
    if body.names:
        wanted = set(body.names)
        entries = [e for e in entries if e.name in wanted]
    summary, reports = await run_in_threadpool(
        analysis_service.batch_run, entries, body.parallel, None, body.construct_rep
    )
    report_ids = {r.name: await report_store.register_report(r) for r in reports}
    summary_id = await report_store.register_summary(summary)
    logger.info(f"API: Batch {summary_id} finished with exit code {summary.exit_code}.")
    return {
        "summary_id": summary_id,
        "exit_code": summary.exit_code,
        "summary": summary.model_dump(by_alias=True),
        "report_ids": report_ids,
    }


@router.get("/reports", summary="List stored reports", response_model=Dict[str, Any])
async def list_reports(report_store: ReportStore = Depends(get_report_store)):
    reports = await report_store.list_reports()
    return {"reports": reports, "count": len(reports)}


@router.get("/reports/{report_id}", summary="Fetch a stored report", response_model=Dict[str, Any])
async def get_report(report_id: str, report_store: ReportStore = Depends(get_report_store)):
    report = await report_store.get_report(report_id)
    return report.model_dump(by_alias=True)


@router.delete("/reports/{report_id}", summary="Delete a stored report", response_model=Dict[str, Any])
async def delete_report(report_id: str, report_store: ReportStore = Depends(get_report_store)):
    await report_store.unregister_report(report_id)
    return {"status": "deleted", "report_id": report_id}


@router.get("/summaries/{summary_id}", summary="Fetch a stored batch summary", response_model=Dict[str, Any])
async def get_summary(summary_id: str, report_store: ReportStore = Depends(get_report_store)):
    summary = await report_store.get_summary(summary_id)
    return {"summary_id": summary_id, "exit_code": summary.exit_code, "summary": summary.model_dump(by_alias=True)}
