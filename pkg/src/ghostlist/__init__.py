"""Desk-scale simulator of OSINT friend-list recovery strategies."""

__version__ = "0.1.0"
