from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, cast

from mcp.server.fastmcp import Context
from mcp.server.session import ServerSession

from app.core.config import settings
from app.core.exceptions import MCPError
from app.core.logging import get_logger
from app.services.analysis_service import AnalysisService
from app.services.report_store import ReportStore

logger = get_logger(__name__)


@dataclass(slots=True)
class AppContext:
    """Analysis service and report store shared by every tool and resource."""

    analysis_service: AnalysisService
    report_store: ReportStore

    @classmethod
    def from_settings(cls) -> "AppContext":
        service = AnalysisService(settings.MAX_ORDER, settings.TOLERANCE, settings.REP_MAX_ORDER)
        logger.info(
            f"Analysis context ready: max order {service.max_order}, tolerance {service.tolerance}, "
            f"explicit representations up to order {service.rep_max_order}."
        )
        return cls(analysis_service=service, report_store=ReportStore())


_current_app_context: Optional[AppContext] = None


def require_app_context(ctx: Optional[Context[ServerSession, AppContext]] = None) -> AppContext:
    """Lifespan context of the request when there is one, else the context installed by the lifespan."""

    if ctx is not None:
        try:
            lifespan_context = ctx.request_context.lifespan_context
        except ValueError:
            logger.debug("No active request; using the installed analysis context.")
        else:
            if lifespan_context is not None:
                return cast(AppContext, lifespan_context)

    if _current_app_context is None:
        logger.error("Analysis context requested before the server lifespan started.")
        raise MCPError("Analysis context not available.", {"hint": "start the server through mcp_server.py"})
    return _current_app_context


def set_current_app_context(app_ctx: AppContext) -> None:
    global _current_app_context
    _current_app_context = app_ctx


def clear_current_app_context() -> None:
    global _current_app_context
    _current_app_context = None
