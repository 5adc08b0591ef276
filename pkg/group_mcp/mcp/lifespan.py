from __future__ import annotations

from collections.abc import AsyncIterator
from contextlib import asynccontextmanager

from mcp.server.fastmcp import FastMCP

from .context import AppContext, clear_current_app_context, set_current_app_context


@asynccontextmanager
async def app_lifespan(_: FastMCP[AppContext]) -> AsyncIterator[AppContext]:
    """Own the analysis service and report store for the server's lifetime."""

    app_context = AppContext.from_settings()
    set_current_app_context(app_context)

    try:
        yield app_context
    finally:
        clear_current_app_context()
        await app_context.report_store.clear()
