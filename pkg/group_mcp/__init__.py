"""MCP server components for the minisocle analyzer."""

from .mcp.app import configure_app

__all__ = ["configure_app"]
