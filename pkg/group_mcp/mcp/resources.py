from __future__ import annotations

from typing import Any

from app.core.exceptions import MCPError, ReportNotFoundError
from app.services.catalog import build_catalog

from .app import mcp
from .context import require_app_context


@mcp.resource(
    "resource://catalog",
    description="The built-in catalog of named groups.",
    mime_type="application/json",
)
async def catalog_resource() -> dict[str, Any]:
    return {"entries": [e.to_dict() for e in build_catalog()]}


@mcp.resource(
    "resource://reports",
    description="Lists the analysis reports produced in this server session.",
    mime_type="application/json",
)
async def reports_resource() -> dict[str, Any]:
    app_ctx = require_app_context()
    reports = await app_ctx.report_store.list_reports()
    return {"reports": reports, "message": "Reports listed."}


@mcp.resource(
    "resource://report/{report_id}",
    description="A stored analysis report.",
    mime_type="application/json",
)
async def report_resource(report_id: str) -> dict[str, Any]:
    app_ctx = require_app_context()
    try:
        report = await app_ctx.report_store.get_report(report_id)
    except ReportNotFoundError as e:
        raise MCPError(e.message, details=e.details)
    return report.model_dump(by_alias=True)
