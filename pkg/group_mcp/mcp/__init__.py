"""FastMCP application, tools and resources for group analysis."""

from .app import configure_app

__all__ = ["configure_app"]
