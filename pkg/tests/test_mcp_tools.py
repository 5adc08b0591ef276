import asyncio

import pytest

from app.core.exceptions import MCPError, ReportNotFoundError
from app.services.analysis_service import AnalysisService
from app.services.report_store import ReportStore
from group_mcp.mcp import resources, tools
from group_mcp.mcp.context import AppContext, clear_current_app_context, set_current_app_context


@pytest.fixture
def app_ctx():
    ctx = AppContext(analysis_service=AnalysisService(), report_store=ReportStore())
    set_current_app_context(ctx)
    yield ctx
    clear_current_app_context()


def test_analyze_group_registers_report(app_ctx):
    result = asyncio.run(tools.analyze_group("alternating 4", ctx=None))
    assert result["verdict"] is True
    assert result["agreement"] is True
    stored = asyncio.run(resources.report_resource(result["report_id"]))
    assert stored["group"]["order"] == 12
    listing = asyncio.run(resources.reports_resource())
    assert [r["id"] for r in listing["reports"]] == [result["report_id"]]


def test_analyze_group_wraps_input_errors(app_ctx):
    with pytest.raises(MCPError) as info:
        asyncio.run(tools.analyze_group("quaternion 6", ctx=None))
    assert "multiple of 4" in info.value.message


def test_run_catalog_subset(app_ctx):
    result = asyncio.run(tools.run_catalog(names=["cyclic4", "z2xz4"], ctx=None))
    assert result["exit_code"] == 0
    assert result["summary"]["total"] == 2
    assert "z2xz4" in result["table"]


def test_list_catalog_and_resource():
    listed = asyncio.run(tools.list_catalog())
    assert listed["count"] == len(asyncio.run(resources.catalog_resource())["entries"])


def test_missing_report_resource(app_ctx):
    with pytest.raises(MCPError):
        asyncio.run(resources.report_resource("nope"))


def test_context_required():
    clear_current_app_context()
    with pytest.raises(MCPError):
        asyncio.run(resources.reports_resource())


def test_report_store_evicts_oldest_summaries():
    store = ReportStore(max_reports=2)
    summary, _ = AnalysisService().batch_run([], parallel=1)
    ids = [asyncio.run(store.register_summary(summary)) for _ in range(3)]
    assert list(store.summaries) == ids[1:]
    assert asyncio.run(store.get_summary(ids[2])) == summary
    with pytest.raises(ReportNotFoundError):
        asyncio.run(store.get_summary(ids[0]))
