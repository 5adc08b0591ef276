"""Run the minisocle analyzer as an MCP server over stdio.

    python mcp_server.py [--log-level DEBUG]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

PROJECT_ROOT = Path(__file__).resolve().parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from app.core.config import settings  # noqa: E402
from app.core.logging import get_logger, setup_logging  # noqa: E402
from group_mcp import configure_app  # noqa: E402

logger = get_logger(__name__)


def main(argv: Optional[List[str]] = None) -> None:
    parser = argparse.ArgumentParser(prog="minisocle-mcp", description="Minisocle analyzer MCP server (stdio).")
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL.")
    args = parser.parse_args(argv)

    setup_logging(args.log_level)
    fastmcp = configure_app()
    logger.info(f"Starting {settings.APP_NAME} {settings.APP_VERSION} MCP server over stdio.")
    fastmcp.run("stdio")


if __name__ == "__main__":
    main()
