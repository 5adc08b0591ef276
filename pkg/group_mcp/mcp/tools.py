from __future__ import annotations

from typing import Any, Dict, List, Optional

from mcp.server.fastmcp import Context
from mcp.server.session import ServerSession

from app.core.exceptions import GroupAnalysisError, MCPError
from app.services.catalog import build_catalog, parse_catalog

from .app import logger, mcp
from .context import AppContext, require_app_context


@mcp.tool(description="Analyzes one finite group: minisocle, criterion conditions, character-table cross-check.")
async def analyze_group(
    spec: str,
    autos: Optional[str] = None,
    name: Optional[str] = None,
    construct_rep: bool = False,
    *,
    ctx: Context[ServerSession, AppContext],
) -> Dict[str, Any]:
    app_ctx = require_app_context(ctx)
    try:
        report = app_ctx.analysis_service.analyze(spec, name=name, autos_text=autos, construct_rep=construct_rep)
    except GroupAnalysisError as e:
        logger.error(f"Analysis of '{spec}' failed: {e.message}")
        raise MCPError(f"Analysis failed: {e.message}", details=e.to_dict())
    report_id = await app_ctx.report_store.register_report(report)
    logger.info(f"Report {report_id}: '{report.name}' verdict={report.verdict} agreement={report.agreement}.")
    return {
        "report_id": report_id,
        "verdict": report.verdict,
        "g_verdict": report.g_verdict,
        "agreement": report.agreement,
        "report": report.model_dump(by_alias=True),
    }


@mcp.tool(description="Runs the built-in catalog (or supplied catalog text) and returns the batch summary.")
async def run_catalog(
    catalog: Optional[str] = None,
    names: Optional[List[str]] = None,
    construct_rep: bool = False,
    *,
    ctx: Context[ServerSession, AppContext],
) -> Dict[str, Any]:
    app_ctx = require_app_context(ctx)
    try:
        entries = parse_catalog(catalog) if catalog is not None else build_catalog()
    except GroupAnalysisError as e:
        raise MCPError(f"Invalid catalog: {e.message}", details=e.to_dict())
    if names:
        wanted = set(names)
        entries = [e for e in entries if e.name in wanted]
    summary, reports = app_ctx.analysis_service.batch_run(entries, parallel=1, construct_rep=construct_rep)
    report_ids = {r.name: await app_ctx.report_store.register_report(r) for r in reports}
    return {
        "exit_code": summary.exit_code,
        "summary": summary.model_dump(by_alias=True),
        "table": summary.table(),
        "report_ids": report_ids,
    }


@mcp.tool(description="Lists the built-in catalog entries with their expected verdicts.")
async def list_catalog() -> Dict[str, Any]:
    entries = [e.to_dict() for e in build_catalog()]
    return {"entries": entries, "count": len(entries)}
